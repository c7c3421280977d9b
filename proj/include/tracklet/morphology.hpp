#pragma once

#include "tracklet/background.hpp"

namespace tracklet {

// Square structuring element of half-width `radius`; windows are clipped at
// the frame border rather than padded.

/// output(x) = 1 iff every pixel in the clipped (2r+1)^2 window is 1.
ForegroundMask erode(const ForegroundMask& mask, int radius);

/// output(x) = 1 iff any pixel in the clipped window is 1.
ForegroundMask dilate(const ForegroundMask& mask, int radius);

/// Opening (erode, dilate) followed by closing (dilate, erode):
/// removes speckle and fills small holes. Idempotent.
ForegroundMask open_close(const ForegroundMask& mask, int radius);

}  // namespace tracklet
