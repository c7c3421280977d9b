#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tracklet/meanshift.hpp"

using namespace tracklet;

namespace {

Frame solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Frame f;
    f.width = w;
    f.height = h;
    f.channels = 3;
    f.data.resize(f.expected_size());
    for (int i = 0; i < w * h; ++i) {
        f.data[i * 3] = r;
        f.data[i * 3 + 1] = g;
        f.data[i * 3 + 2] = b;
    }
    return f;
}

void paint_ellipse(Frame& f, double cx, double cy, double a, double b, std::uint8_t r,
                   std::uint8_t g, std::uint8_t bl) {
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const double rx = (x - cx) / a, ry = (y - cy) / b;
            if (rx * rx + ry * ry <= 1.0) {
                f.at(x, y, 0) = r;
                f.at(x, y, 1) = g;
                f.at(x, y, 2) = bl;
            }
        }
    }
}

// independent kernel-weighted histogram for the oracle below; written from
// the definition, separate from the library routine
std::vector<double> oracle_hist(const Frame& f, double cx, double cy, double hx, double hy,
                                int c) {
    std::vector<double> h(c * c * c, 0.0);
    double total = 0.0;
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const double rx = (x - cx) / hx, ry = (y - cy) / hy;
            const double r2 = rx * rx + ry * ry;
            if (r2 >= 1.0) continue;
            const int bin = ((f.at(x, y, 0) * c / 256) * c + f.at(x, y, 1) * c / 256) * c +
                            f.at(x, y, 2) * c / 256;
            h[bin] += 1.0 - r2;
            total += 1.0 - r2;
        }
    }
    if (total > 0) {
        for (double& v : h) v /= total;
    }
    return h;
}

double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(p[i] * q[i]);
    return s;
}

}  // namespace

TEST_CASE("a solid single-color window concentrates q in one bin") {
    Frame f = solid(20, 20, 200, 40, 40);
    TargetModel m = build_target_model(f, {10, 10}, 4, 4, 8);
    double mass = 0.0;
    int nonzero = 0;
    for (double v : m.q) {
        mass += v;
        if (v > 0) ++nonzero;
    }
    CHECK(nonzero == 1);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("q sums to 1 for random windows") {
    std::mt19937 gen(42);
    Frame f = solid(64, 48, 0, 0, 0);
    for (auto& b : f.data) b = static_cast<std::uint8_t>(gen() % 256);
    std::uniform_real_distribution<double> ux(4.0, 60.0), uy(4.0, 44.0), uh(2.0, 10.0);
    for (int it = 0; it < 100; ++it) {
        TargetModel m = build_target_model(f, {ux(gen), uy(gen)}, uh(gen), uh(gen), 4);
        double mass = 0.0;
        for (double v : m.q) mass += v;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("3x3 window matches the hand-computed kernel weights") {
    // center (200,0,0) -> bin 4; edges (0,0,0) -> bin 0; corners (0,200,0) -> bin 2
    Frame f = solid(3, 3, 0, 0, 0);
    f.at(1, 1, 0) = 200;
    f.at(0, 0, 1) = 200;
    f.at(2, 0, 1) = 200;
    f.at(0, 2, 1) = 200;
    f.at(2, 2, 1) = 200;
    // hx = hy = 2 at (1,1): kernel 1 - r^2 gives 1 center, 0.75 per edge, 0.5 per corner
    TargetModel m = build_target_model(f, {1, 1}, 2, 2, 2);
    CHECK(m.q[4] == doctest::Approx(1.0 / 6.0));
    CHECK(m.q[0] == doctest::Approx(3.0 / 6.0));
    CHECK(m.q[2] == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("an off-frame window is rejected") {
    Frame f = solid(10, 10, 5, 5, 5);
    CHECK_THROWS_AS(build_target_model(f, {-50, -50}, 3, 3, 8), EmptyWindow);
}

TEST_CASE("a centered identical candidate is a fixed point") {
    Frame f = solid(41, 41, 90, 120, 200);
    TargetModel m = build_target_model(f, {20, 20}, 5, 5, 8);
    Point y1 = track_step(f, m, {20, 20});
    CHECK(y1.x == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(y1.y == doctest::Approx(20.0).epsilon(1e-12));

    TrackOutcome out = track(f, m, {20, 20}, 0.1, 20);
    CHECK(out.converged);
    CHECK(out.iterations == 1);
    CHECK(out.position.x == doctest::Approx(20.0));
}

TEST_CASE("a step from an offset start moves strictly toward the blob") {
    Frame f = solid(64, 64, 0, 0, 0);
    paint_ellipse(f, 30, 30, 8, 8, 220, 60, 60);
    TargetModel m = build_target_model(f, {30, 30}, 8, 8, 8);
    Point y1 = track_step(f, m, {32, 30});
    CHECK(std::abs(y1.x - 30.0) < 2.0);
    CHECK(std::hypot(y1.x - 30, y1.y - 30) < std::hypot(32 - 30, 0));
}

TEST_CASE("a scene mirrored about the start column keeps y1 on it") {
    Frame f = solid(49, 31, 0, 0, 0);
    paint_ellipse(f, 16, 15, 4, 4, 200, 200, 40);
    paint_ellipse(f, 32, 15, 4, 4, 200, 200, 40);
    TargetModel m = build_target_model(f, {24, 15}, 14, 9, 8);
    Point y1 = track_step(f, m, {24, 15});
    CHECK(y1.x == doctest::Approx(24.0).epsilon(1e-9));
}

TEST_CASE("tracking a shifted blob lands on the exhaustive similarity argmax") {
    Frame f = solid(64, 64, 10, 10, 10);
    const double cx = 31, cy = 29;
    paint_ellipse(f, cx, cy, 8, 8, 220, 70, 50);
    TargetModel m = build_target_model(f, {cx, cy}, 8, 8, 8);

    TrackOutcome out = track(f, m, {cx + 3, cy}, 0.1, 20);
    CHECK(out.converged);
    CHECK(out.last_step < 0.1);
    CHECK(out.iterations <= 20);

    // exhaustive Bhattacharyya search over the +/- 8 px integer grid
    double best = -1.0;
    Point best_y{0, 0};
    for (int dy = -8; dy <= 8; ++dy) {
        for (int dx = -8; dx <= 8; ++dx) {
            const double gx = cx + 3 + dx, gy = cy + dy;
            const std::vector<double> p = oracle_hist(f, gx, gy, 8, 8, 8);
            const double s = bhattacharyya(p, m.q);
            if (s > best) {
                best = s;
                best_y = {gx, gy};
            }
        }
    }
    CHECK(std::hypot(out.position.x - best_y.x, out.position.y - best_y.y) <= 1.0);
}

TEST_CASE("a huge epsilon stops after the first step") {
    Frame f = solid(64, 64, 0, 0, 0);
    paint_ellipse(f, 30, 30, 8, 8, 220, 60, 60);
    TargetModel m = build_target_model(f, {30, 30}, 8, 8, 8);
    TrackOutcome out = track(f, m, {33, 30}, 1000.0, 20);
    CHECK(out.converged);
    CHECK(out.iterations == 1);
}

TEST_CASE("geometry of an isotropic blob is near-isotropic") {
    Frame f = solid(64, 64, 0, 0, 0);
    paint_ellipse(f, 32, 32, 10, 10, 180, 60, 200);
    TargetModel m = build_target_model(f, {32, 32}, 10, 10, 8);
    Geometry g = estimate_geometry(f, m, {32, 32});
    CHECK(g.width / g.height == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("geometry of a 2:1 ellipse: orientation and axis ratio; rotation swaps axes") {
    Frame f = solid(96, 64, 0, 0, 0);
    paint_ellipse(f, 48, 32, 16, 8, 220, 200, 60);
    TargetModel m = build_target_model(f, {48, 32}, 16, 8, 8);
    Geometry g = estimate_geometry(f, m, {48, 32});
    const double ratio = g.width / g.height;
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
    CHECK((g.orientation_deg <= 5.0 || g.orientation_deg >= 175.0));

    Frame fr = solid(64, 96, 0, 0, 0);
    paint_ellipse(fr, 32, 48, 8, 16, 220, 200, 60);
    TargetModel mr = build_target_model(fr, {32, 48}, 8, 16, 8);
    Geometry gr = estimate_geometry(fr, mr, {32, 48});
    CHECK(gr.width == doctest::Approx(g.width).epsilon(0.1));   // major stays major
    CHECK(gr.height == doctest::Approx(g.height).epsilon(0.1));
    CHECK(std::abs(gr.orientation_deg - 90.0) <= 5.0);
}

TEST_CASE("reseed blending endpoints") {
    TargetModel m;
    m.hx = 6;
    m.hy = 6;
    m.q = {1.0};
    Geometry g{16.0, 12.0, 0.0};
    TargetModel unchanged = reseed(m, {0, 0}, g, 0.0);
    CHECK(unchanged.hx == 6.0);
    CHECK(unchanged.hy == 6.0);
    TargetModel full = reseed(m, {0, 0}, g, 1.0);
    CHECK(full.hx == doctest::Approx(8.0));
    CHECK(full.hy == doctest::Approx(6.0));
}

TEST_CASE("window size settles over a static blob") {
    Frame f = solid(64, 64, 0, 0, 0);
    paint_ellipse(f, 32, 32, 10, 10, 220, 60, 60);
    TargetModel m = build_target_model(f, {32, 32}, 10, 10, 8);
    m.hx = m.hy = 15.0;  // start oversized
    double prev_hx = m.hx, prev_hy = m.hy;
    double dx = 1e9, dy = 1e9;
    for (int i = 0; i < 50; ++i) {
        Geometry g = estimate_geometry(f, m, {32, 32});
        m = reseed(m, {32, 32}, g, 0.1);
        dx = std::abs(m.hx - prev_hx);
        dy = std::abs(m.hy - prev_hy);
        prev_hx = m.hx;
        prev_hy = m.hy;
    }
    CHECK(dx < 0.05);
    CHECK(dy < 0.05);
}
