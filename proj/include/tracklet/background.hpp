#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tracklet/frame.hpp"

namespace tracklet {

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Binary foreground map: 1 = foreground, 0 = background.
struct ForegroundMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    ForegroundMask() = default;
    ForegroundMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Model A: per-pixel running mean with an adaptive per-pixel threshold.
// A pixel is foreground when |I(x) - B(x)| > T(x). Only pixels classified
// as background feed the B/T update, so detected objects stay detected.
// ---------------------------------------------------------------------------

struct AdaptiveParams {
    double alpha_bg = 0.05;  // learning rate, in (0,1)
    double t_floor = 10.0;   // minimum threshold
    double t_gain = 5.0;     // threshold sensitivity multiplier
};

struct AdaptiveModel {
    int width = 0;
    int height = 0;
    std::vector<double> background;  // B, in [0,255]
    std::vector<double> threshold;   // T, in [t_floor,255]
    AdaptiveParams params;

    /// B initialized from the given grayscale frame, T from t_floor.
    static AdaptiveModel init_from(const Frame& gray, const AdaptiveParams& params);
};

/// Pure classification: mask(x) = 1 iff |I(x) - B(x)| > T(x).
ForegroundMask classify_adaptive(const AdaptiveModel& model, const Frame& gray);

/// In-place update. Background pixels (mask == 0):
///   B <- (1-a) B + a I,  T <- clamp((1-a) T + a (gain * |I - B_old|), t_floor, 255).
/// Foreground pixels are left untouched.
void update_adaptive(AdaptiveModel& model, const Frame& gray, const ForegroundMask& mask);

// ---------------------------------------------------------------------------
// Model B: per-pixel mixture of Gaussians (scalar variance shared across
// channels), components kept sorted by weight/sigma. The leading components
// whose cumulative weight first exceeds background_threshold explain the
// background; a pixel matching outside that prefix (or matching nothing)
// is foreground.
// ---------------------------------------------------------------------------

struct GmmParams {
    double alpha = 0.02;
    double rho = 0.01;
    double deviation_sq_threshold = 49.0;  // multiplier on sigma^2
    double init_variance = 3.0;
    double init_mixprop = 1e-5;
    double background_threshold = 0.9;
    int component_threshold = 10;  // max components per pixel
};

inline constexpr double kGmmVarianceFloor = 0.75;

struct GmmComponent {
    double weight = 0.0;
    double mean[3] = {0.0, 0.0, 0.0};
    double variance = 0.0;
};

class GmmModel {
public:
    GmmModel(int width, int height, int channels, const GmmParams& params);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    const GmmParams& params() const { return params_; }

    int component_count(int x, int y) const { return counts_[pixel(x, y)]; }
    const GmmComponent& component(int x, int y, int k) const {
        return comps_[pixel(x, y) * static_cast<std::size_t>(params_.component_threshold) + k];
    }

    friend ForegroundMask classify_and_update_gmm(GmmModel& model, const Frame& frame);

private:
    std::size_t pixel(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_;
    int height_;
    int channels_;
    GmmParams params_;
    std::vector<GmmComponent> comps_;  // width * height * component_threshold, ranked slices
    std::vector<std::uint8_t> counts_;
};

/// One frame step: match, update or seed, renormalize, re-rank, classify.
ForegroundMask classify_and_update_gmm(GmmModel& model, const Frame& frame);

}  // namespace tracklet
