#include "tracklet/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tracklet {

namespace {

// Visits every frame pixel inside the kernel support ellipse at `center`,
// passing the Epanechnikov profile value 1 - r^2 (positive by construction).
template <typename Fn>
void for_each_support_pixel(const Frame& frame, Point center, double hx, double hy, Fn&& fn) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(center.x - hx)));
    const int x1 = std::min(frame.width - 1, static_cast<int>(std::floor(center.x + hx)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(center.y - hy)));
    const int y1 = std::min(frame.height - 1, static_cast<int>(std::floor(center.y + hy)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double rx = (x - center.x) / hx;
            const double ry = (y - center.y) / hy;
            const double r2 = rx * rx + ry * ry;
            if (r2 < 1.0) fn(x, y, 1.0 - r2);
        }
    }
}

}  // namespace

std::vector<double> candidate_histogram(const Frame& frame, Point center, double hx, double hy,
                                        int bins_per_channel) {
    std::vector<double> h(histogram_size(frame.channels, bins_per_channel), 0.0);
    double total = 0.0;
    for_each_support_pixel(frame, center, hx, hy, [&](int x, int y, double k) {
        h[color_bin(frame, x, y, bins_per_channel)] += k;
        total += k;
    });
    if (total <= 0.0) throw EmptyWindow("kernel window has no support pixels");
    for (double& v : h) v /= total;
    return h;
}

TargetModel build_target_model(const Frame& frame, Point center, double hx, double hy,
                               int bins_per_channel) {
    TargetModel m;
    m.hx = hx;
    m.hy = hy;
    m.bins_per_channel = bins_per_channel;
    m.q = candidate_histogram(frame, center, hx, hy, bins_per_channel);
    return m;
}

Point track_step(const Frame& frame, const TargetModel& model, Point y0) {
    const std::vector<double> p = candidate_histogram(frame, y0, model.hx, model.hy,
                                                      model.bins_per_channel);
    double wsum = 0.0, sx = 0.0, sy = 0.0;
    for_each_support_pixel(frame, y0, model.hx, model.hy, [&](int x, int y, double) {
        const int b = color_bin(frame, x, y, model.bins_per_channel);
        if (p[b] <= 0.0 || model.q[b] <= 0.0) return;
        const double w = std::sqrt(model.q[b] / p[b]);
        wsum += w;
        sx += w * x;
        sy += w * y;
    });
    if (wsum <= 0.0) throw ZeroWeightField("target appearance absent from candidate window");
    return {sx / wsum, sy / wsum};
}

TrackOutcome track(const Frame& frame, const TargetModel& model, Point y_init, double epsilon,
                   int max_iter) {
    TrackOutcome out;
    Point y0 = y_init;
    for (int k = 1; k <= max_iter; ++k) {
        Point y1 = track_step(frame, model, y0);
        const double d = std::hypot(y1.x - y0.x, y1.y - y0.y);
        y0 = y1;
        out.iterations = k;
        out.last_step = d;
        if (d < epsilon) {
            out.converged = true;
            break;
        }
    }
    out.position = y0;
    return out;
}

Geometry estimate_geometry(const Frame& frame, const TargetModel& model, Point y) {
    const std::vector<double> p = candidate_histogram(frame, y, model.hx, model.hy,
                                                      model.bins_per_channel);
    double wsum = 0.0, mx = 0.0, my = 0.0;
    std::vector<std::pair<Pixel, double>> weights;
    for_each_support_pixel(frame, y, model.hx, model.hy, [&](int x, int yy, double) {
        const int b = color_bin(frame, x, yy, model.bins_per_channel);
        if (p[b] <= 0.0 || model.q[b] <= 0.0) return;
        const double w = std::sqrt(model.q[b] / p[b]);
        weights.push_back({{x, yy}, w});
        wsum += w;
        mx += w * x;
        my += w * yy;
    });
    if (wsum <= 0.0) throw ZeroWeightField("weight field is identically zero");
    mx /= wsum;
    my /= wsum;

    double cxx = 0.0, cyy = 0.0, cxy = 0.0;
    for (const auto& [px, w] : weights) {
        const double dx = px.x - mx;
        const double dy = px.y - my;
        cxx += w * dx * dx;
        cyy += w * dy * dy;
        cxy += w * dx * dy;
    }
    cxx /= wsum;
    cyy /= wsum;
    cxy /= wsum;

    const double tr = cxx + cyy;
    const double det = cxx * cyy - cxy * cxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double l_major = tr / 2.0 + disc;
    const double l_minor = std::max(0.0, tr / 2.0 - disc);

    Geometry g;
    g.width = 4.0 * std::sqrt(l_major);
    g.height = 4.0 * std::sqrt(l_minor);
    double deg = 0.5 * std::atan2(2.0 * cxy, cxx - cyy) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    g.orientation_deg = deg;
    return g;
}

TargetModel reseed(const TargetModel& model, Point /*y_final*/, const Geometry& geometry,
                   double gamma) {
    TargetModel next = model;
    next.hx = std::max(1.0, (1.0 - gamma) * model.hx + gamma * (geometry.width / 2.0));
    next.hy = std::max(1.0, (1.0 - gamma) * model.hy + gamma * (geometry.height / 2.0));
    return next;
}

}  // namespace tracklet
