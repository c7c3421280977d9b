#pragma once

#include <stdexcept>
#include <vector>

#include "tracklet/background.hpp"
#include "tracklet/frame.hpp"

namespace tracklet {

struct EmptyComponent : std::runtime_error {
    explicit EmptyComponent(const std::string& what) : std::runtime_error(what) {}
};
struct LengthMismatch : std::runtime_error {
    explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct IndivisibleBins : std::runtime_error {
    explicit IndivisibleBins(const std::string& what) : std::runtime_error(what) {}
};

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Inclusive pixel bounds.
struct BoundingBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    int width() const { return x_max - x_min + 1; }
    int height() const { return y_max - y_min + 1; }
    bool intersects(const BoundingBox& o) const {
        return x_min <= o.x_max && o.x_min <= x_max && y_min <= o.y_max && o.y_min <= y_max;
    }
};

/// Unit-sum color histogram; flattened per-channel quantization of [0,255].
/// RGB layout: bin = r_bin*c^2 + g_bin*c + b_bin with c bins per channel.
struct ColorHistogram {
    std::vector<double> bins;
};

/// Number of histogram bins for a frame layout: c^3 for RGB, c for gray.
int histogram_size(int channels, int bins_per_channel);

/// Flattened bin index of pixel (x,y).
int color_bin(const Frame& frame, int x, int y, int bins_per_channel);

struct RegionFeatures {
    int label = 0;
    BoundingBox bbox;
    int area = 0;
    Point centroid;
    ColorHistogram hist_upper;
    ColorHistogram hist_lower;
};

/// Partition of all 1-pixels into maximal 8-connected components.
/// Components ordered by the raster position of their first pixel;
/// pixels within each component are in raster order.
std::vector<std::vector<Pixel>> label_components(const ForegroundMask& mask);

/// Area, centroid, bounding box and the upper/lower-half color histograms
/// of one component. The split is at the bounding box's vertical midpoint;
/// an empty half yields an all-zero histogram.
RegionFeatures extract_features(const std::vector<Pixel>& component, const Frame& frame,
                                int bins_per_channel);

/// Sum of absolute bin differences; in [0,2] for unit-sum inputs.
double l1_distance(const ColorHistogram& a, const ColorHistogram& b);

/// Upper-half distance plus lower-half distance; in [0,4].
double d_total(const RegionFeatures& a, const RegionFeatures& b);

/// Strided resampling to C bins (out[i] = h[(i+1)*N/C - 1], 1-based sampling
/// law), renormalized to unit sum. C must divide N.
ColorHistogram downsample_histogram(const ColorHistogram& h, int target_bins);

/// Block-sum pooling alternative to the strided law, selectable via config.
ColorHistogram pool_histogram(const ColorHistogram& h, int target_bins);

}  // namespace tracklet
