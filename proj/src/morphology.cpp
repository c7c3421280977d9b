#include "tracklet/morphology.hpp"

#include <algorithm>
#include <stdexcept>

namespace tracklet {

ForegroundMask erode(const ForegroundMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    ForegroundMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const int x0 = std::max(0, x - radius), x1 = std::min(mask.width - 1, x + radius);
            const int y0 = std::max(0, y - radius), y1 = std::min(mask.height - 1, y + radius);
            std::uint8_t v = 1;
            for (int yy = y0; v && yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    if (!mask.at(xx, yy)) {
                        v = 0;
                        break;
                    }
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

ForegroundMask dilate(const ForegroundMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    ForegroundMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const int x0 = std::max(0, x - radius), x1 = std::min(mask.width - 1, x + radius);
            const int y0 = std::max(0, y - radius), y1 = std::min(mask.height - 1, y + radius);
            std::uint8_t v = 0;
            for (int yy = y0; !v && yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    if (mask.at(xx, yy)) {
                        v = 1;
                        break;
                    }
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

ForegroundMask open_close(const ForegroundMask& mask, int radius) {
    ForegroundMask opened = dilate(erode(mask, radius), radius);
    return erode(dilate(opened, radius), radius);
}

}  // namespace tracklet
