#include "tracklet/background.hpp"

#include <algorithm>
#include <cmath>

namespace tracklet {

namespace {

void require_gray_match(const AdaptiveModel& model, const Frame& frame) {
    if (frame.channels != 1) throw DimensionMismatch("adaptive model needs a 1-channel frame");
    if (frame.width != model.width || frame.height != model.height) {
        throw DimensionMismatch("frame size does not match adaptive model");
    }
}

}  // namespace

AdaptiveModel AdaptiveModel::init_from(const Frame& gray, const AdaptiveParams& params) {
    if (gray.channels != 1) throw DimensionMismatch("adaptive model needs a 1-channel frame");
    AdaptiveModel m;
    m.width = gray.width;
    m.height = gray.height;
    m.params = params;
    const std::size_t n = static_cast<std::size_t>(gray.width) * gray.height;
    m.background.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.background[i] = gray.data[i];
    m.threshold.assign(n, params.t_floor);
    return m;
}

ForegroundMask classify_adaptive(const AdaptiveModel& model, const Frame& gray) {
    require_gray_match(model, gray);
    ForegroundMask mask(model.width, model.height);
    const std::size_t n = model.background.size();
    for (std::size_t i = 0; i < n; ++i) {
        double diff = std::abs(static_cast<double>(gray.data[i]) - model.background[i]);
        mask.bits[i] = diff > model.threshold[i] ? 1 : 0;
    }
    return mask;
}

void update_adaptive(AdaptiveModel& model, const Frame& gray, const ForegroundMask& mask) {
    require_gray_match(model, gray);
    if (mask.width != model.width || mask.height != model.height) {
        throw DimensionMismatch("mask size does not match adaptive model");
    }
    const double a = model.params.alpha_bg;
    const std::size_t n = model.background.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (mask.bits[i]) continue;
        double intensity = gray.data[i];
        double diff_old = std::abs(intensity - model.background[i]);
        model.background[i] = (1.0 - a) * model.background[i] + a * intensity;
        double t = (1.0 - a) * model.threshold[i] + a * (model.params.t_gain * diff_old);
        model.threshold[i] = std::clamp(t, model.params.t_floor, 255.0);
    }
}

GmmModel::GmmModel(int width, int height, int channels, const GmmParams& params)
    : width_(width),
      height_(height),
      channels_(channels),
      params_(params),
      comps_(static_cast<std::size_t>(width) * height * params.component_threshold),
      counts_(static_cast<std::size_t>(width) * height, 0) {
    if (channels != 1 && channels != 3) throw DimensionMismatch("mixture model supports 1 or 3 channels");
    if (params.component_threshold < 1 || params.component_threshold > 16) {
        throw DimensionMismatch("component_threshold must be in [1,16]");
    }
}

ForegroundMask classify_and_update_gmm(GmmModel& model, const Frame& frame) {
    if (frame.width != model.width_ || frame.height != model.height_ ||
        frame.channels != model.channels_) {
        throw DimensionMismatch("frame does not match mixture model layout");
    }
    const GmmParams& p = model.params_;
    const int K = p.component_threshold;
    const int ch = model.channels_;
    ForegroundMask mask(model.width_, model.height_);

    for (int y = 0; y < model.height_; ++y) {
        for (int x = 0; x < model.width_; ++x) {
            const std::size_t pi = model.pixel(x, y);
            GmmComponent* comps = &model.comps_[pi * K];
            int cnt = model.counts_[pi];

            double intensity[3] = {0, 0, 0};
            for (int c = 0; c < ch; ++c) intensity[c] = frame.at(x, y, c);

            // match = first ranked component within the deviation gate
            int matched = -1;
            for (int k = 0; k < cnt; ++k) {
                double sqdev = 0.0;
                for (int c = 0; c < ch; ++c) {
                    double d = intensity[c] - comps[k].mean[c];
                    sqdev += d * d;
                }
                if (sqdev <= p.deviation_sq_threshold * comps[k].variance) {
                    matched = k;
                    break;
                }
            }

            if (matched >= 0) {
                for (int k = 0; k < cnt; ++k) comps[k].weight *= (1.0 - p.alpha);
                comps[matched].weight += p.alpha;
                GmmComponent& m = comps[matched];
                double sqdev = 0.0;
                for (int c = 0; c < ch; ++c) {
                    m.mean[c] = (1.0 - p.rho) * m.mean[c] + p.rho * intensity[c];
                    double d = intensity[c] - m.mean[c];
                    sqdev += d * d;
                }
                m.variance = std::max(kGmmVarianceFloor, (1.0 - p.rho) * m.variance + p.rho * sqdev);
            } else {
                // seed a fresh component, replacing the lowest-ranked when full
                int slot = cnt < K ? cnt : K - 1;
                if (cnt < K) ++cnt;
                comps[slot].weight = p.init_mixprop;
                for (int c = 0; c < ch; ++c) comps[slot].mean[c] = intensity[c];
                comps[slot].variance = p.init_variance;
            }
            model.counts_[pi] = static_cast<std::uint8_t>(cnt);

            double sum = 0.0;
            for (int k = 0; k < cnt; ++k) sum += comps[k].weight;
            for (int k = 0; k < cnt; ++k) comps[k].weight /= sum;

            // re-rank by weight/sigma, remembering where the match lands
            int order[16];
            for (int k = 0; k < cnt; ++k) order[k] = k;
            std::stable_sort(order, order + cnt, [&](int a, int b) {
                return comps[a].weight / std::sqrt(comps[a].variance) >
                       comps[b].weight / std::sqrt(comps[b].variance);
            });
            GmmComponent sorted[16];
            int matched_rank = -1;
            for (int k = 0; k < cnt; ++k) {
                sorted[k] = comps[order[k]];
                if (order[k] == matched) matched_rank = k;
            }
            for (int k = 0; k < cnt; ++k) comps[k] = sorted[k];

            if (matched < 0) {
                mask.at(x, y) = 1;
                continue;
            }
            // background prefix: smallest leading run with cumulative weight
            // above the threshold
            double cum = 0.0;
            int prefix_end = cnt - 1;
            for (int k = 0; k < cnt; ++k) {
                cum += comps[k].weight;
                if (cum > p.background_threshold) {
                    prefix_end = k;
                    break;
                }
            }
            mask.at(x, y) = matched_rank <= prefix_end ? 0 : 1;
        }
    }
    return mask;
}

}  // namespace tracklet
