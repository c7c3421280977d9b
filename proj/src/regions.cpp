#include "tracklet/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tracklet {

int histogram_size(int channels, int bins_per_channel) {
    return channels == 1 ? bins_per_channel : bins_per_channel * bins_per_channel * bins_per_channel;
}

int color_bin(const Frame& frame, int x, int y, int bins_per_channel) {
    const int c = bins_per_channel;
    if (frame.channels == 1) return frame.at(x, y) * c / 256;
    int r = frame.at(x, y, 0) * c / 256;
    int g = frame.at(x, y, 1) * c / 256;
    int b = frame.at(x, y, 2) * c / 256;
    return (r * c + g) * c + b;
}

std::vector<std::vector<Pixel>> label_components(const ForegroundMask& mask) {
    const int w = mask.width, h = mask.height;
    // two-pass union-find over provisional labels
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<int> parent;
    auto find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            int best = -1;
            // 8-connectivity: west, north-west, north, north-east
            const int nx[4] = {x - 1, x - 1, x, x + 1};
            const int ny[4] = {y, y - 1, y - 1, y - 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0) continue;
                int nl = label[static_cast<std::size_t>(ny[k]) * w + nx[k]];
                if (nl < 0) continue;
                if (best < 0) {
                    best = nl;
                } else {
                    unite(best, nl);
                }
            }
            if (best < 0) {
                best = static_cast<int>(parent.size());
                parent.push_back(best);
            }
            label[i] = best;
        }
    }

    // second pass: gather pixels per root in raster order
    std::vector<int> root_to_out(parent.size(), -1);
    std::vector<std::vector<Pixel>> out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int l = label[static_cast<std::size_t>(y) * w + x];
            if (l < 0) continue;
            int r = find(l);
            if (root_to_out[r] < 0) {
                root_to_out[r] = static_cast<int>(out.size());
                out.emplace_back();
            }
            out[root_to_out[r]].push_back({x, y});
        }
    }
    return out;
}

namespace {

void normalize(std::vector<double>& bins) {
    double s = std::accumulate(bins.begin(), bins.end(), 0.0);
    if (s > 0.0) {
        for (double& b : bins) b /= s;
    }
}

}  // namespace

RegionFeatures extract_features(const std::vector<Pixel>& component, const Frame& frame,
                                int bins_per_channel) {
    if (component.empty()) throw EmptyComponent("cannot extract features of an empty component");
    RegionFeatures f;
    f.area = static_cast<int>(component.size());
    f.bbox = {component[0].x, component[0].y, component[0].x, component[0].y};
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : component) {
        f.bbox.x_min = std::min(f.bbox.x_min, p.x);
        f.bbox.x_max = std::max(f.bbox.x_max, p.x);
        f.bbox.y_min = std::min(f.bbox.y_min, p.y);
        f.bbox.y_max = std::max(f.bbox.y_max, p.y);
        sx += p.x;
        sy += p.y;
    }
    f.centroid = {sx / f.area, sy / f.area};

    const int nbins = histogram_size(frame.channels, bins_per_channel);
    f.hist_upper.bins.assign(nbins, 0.0);
    f.hist_lower.bins.assign(nbins, 0.0);
    const double split_y = f.bbox.y_min + f.bbox.height() / 2.0;
    for (const Pixel& p : component) {
        auto& half = p.y < split_y ? f.hist_upper.bins : f.hist_lower.bins;
        half[color_bin(frame, p.x, p.y, bins_per_channel)] += 1.0;
    }
    normalize(f.hist_upper.bins);
    normalize(f.hist_lower.bins);
    return f;
}

double l1_distance(const ColorHistogram& a, const ColorHistogram& b) {
    if (a.bins.size() != b.bins.size()) throw LengthMismatch("histogram bin counts differ");
    double d = 0.0;
    for (std::size_t i = 0; i < a.bins.size(); ++i) d += std::abs(a.bins[i] - b.bins[i]);
    return d;
}

double d_total(const RegionFeatures& a, const RegionFeatures& b) {
    return l1_distance(a.hist_upper, b.hist_upper) + l1_distance(a.hist_lower, b.hist_lower);
}

ColorHistogram downsample_histogram(const ColorHistogram& h, int target_bins) {
    const int n = static_cast<int>(h.bins.size());
    if (target_bins < 1 || n % target_bins != 0) {
        throw IndivisibleBins("target bin count must divide source bin count");
    }
    const int stride = n / target_bins;
    ColorHistogram out;
    out.bins.resize(target_bins);
    for (int i = 0; i < target_bins; ++i) out.bins[i] = h.bins[(i + 1) * stride - 1];
    normalize(out.bins);
    return out;
}

ColorHistogram pool_histogram(const ColorHistogram& h, int target_bins) {
    const int n = static_cast<int>(h.bins.size());
    if (target_bins < 1 || n % target_bins != 0) {
        throw IndivisibleBins("target bin count must divide source bin count");
    }
    const int stride = n / target_bins;
    ColorHistogram out;
    out.bins.assign(target_bins, 0.0);
    for (int i = 0; i < n; ++i) out.bins[i / stride] += h.bins[i];
    normalize(out.bins);
    return out;
}

}  // namespace tracklet
