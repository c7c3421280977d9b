#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tracklet/background.hpp"

using namespace tracklet;

namespace {

Frame gray_frame(int w, int h, std::uint8_t v) {
    Frame f;
    f.width = w;
    f.height = h;
    f.channels = 1;
    f.data.assign(static_cast<std::size_t>(w) * h, v);
    return f;
}

Frame rgb_frame(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
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

void check_gmm_invariants(const GmmModel& m) {
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            const int cnt = m.component_count(x, y);
            double sum = 0.0;
            double prev_rank = 1e300;
            for (int k = 0; k < cnt; ++k) {
                const GmmComponent& c = m.component(x, y, k);
                REQUIRE(c.weight >= 0.0);
                REQUIRE(c.variance >= kGmmVarianceFloor);
                sum += c.weight;
                const double rank = c.weight / std::sqrt(c.variance);
                REQUIRE(rank <= prev_rank + 1e-12);
                prev_rank = rank;
            }
            if (cnt > 0) REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

}  // namespace

TEST_CASE("adaptive classification rule") {
    Frame init = gray_frame(3, 1, 100);
    AdaptiveModel m = AdaptiveModel::init_from(init, {0.05, 10.0, 5.0});
    m.threshold.assign(m.threshold.size(), 20.0);

    Frame same = gray_frame(3, 1, 100);
    CHECK(classify_adaptive(m, same).count() == 0);

    Frame moved = gray_frame(3, 1, 130);
    CHECK(classify_adaptive(m, moved).count() == 3);  // 30 > 20

    Frame boundary = gray_frame(3, 1, 120);
    CHECK(classify_adaptive(m, boundary).count() == 0);  // 20 > 20 is false
}

TEST_CASE("adaptive classification matches a per-pixel brute-force oracle") {
    const int w = 20, h = 20;
    Frame init = gray_frame(w, h, 50);
    AdaptiveModel m = AdaptiveModel::init_from(init, {0.05, 10.0, 5.0});
    m.threshold.assign(m.threshold.size(), 49.0);

    Frame f = gray_frame(w, h, 50);
    for (int y = 8; y < 11; ++y) {
        for (int x = 4; x < 7; ++x) f.at(x, y) = 200;
    }
    ForegroundMask mask = classify_adaptive(m, f);
    std::size_t ones = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool want = std::abs(f.at(x, y) - 50.0) > 49.0;
            CHECK(mask.at(x, y) == (want ? 1 : 0));
            ones += mask.at(x, y);
        }
    }
    CHECK(ones == 9);

    // classification twice on the same state is identical and mutates nothing
    ForegroundMask again = classify_adaptive(m, f);
    CHECK(again.bits == mask.bits);

    Frame wrong = gray_frame(w + 1, h, 0);
    CHECK_THROWS_AS(classify_adaptive(m, wrong), DimensionMismatch);
}

TEST_CASE("adaptive update moves background pixels and freezes foreground ones") {
    Frame init = gray_frame(2, 1, 100);
    AdaptiveModel m = AdaptiveModel::init_from(init, {0.5, 10.0, 5.0});

    Frame f = gray_frame(2, 1, 120);
    ForegroundMask mask(2, 1);
    mask.at(1, 0) = 1;
    update_adaptive(m, f, mask);
    CHECK(m.background[0] == doctest::Approx(110.0));  // midpoint
    CHECK(m.background[1] == doctest::Approx(100.0));  // frozen

    // alpha 0.05, constant input is a fixed point
    AdaptiveModel m2 = AdaptiveModel::init_from(init, {0.05, 10.0, 5.0});
    ForegroundMask zeros(2, 1);
    update_adaptive(m2, init, zeros);
    CHECK(m2.background[0] == doctest::Approx(100.0));
}

TEST_CASE("adaptive background converges geometrically to a constant input") {
    const double alpha = 0.05, b0 = 30.0, target = 200.0;
    Frame init = gray_frame(1, 1, static_cast<std::uint8_t>(b0));
    AdaptiveModel m = AdaptiveModel::init_from(init, {alpha, 10.0, 5.0});
    Frame f = gray_frame(1, 1, static_cast<std::uint8_t>(target));
    ForegroundMask zeros(1, 1);
    for (int i = 0; i < 200; ++i) update_adaptive(m, f, zeros);
    const double bound = std::pow(1.0 - alpha, 200) * std::abs(b0 - target);
    CHECK(std::abs(m.background[0] - target) <= bound + 1e-9);
    CHECK(std::abs(m.background[0] - target) < 0.1);
    CHECK(m.threshold[0] >= 10.0);
}

TEST_CASE("noiseless static sequence has zero foreground from frame 2 on") {
    Frame f = gray_frame(16, 16, 77);
    AdaptiveModel m = AdaptiveModel::init_from(f, {0.05, 10.0, 5.0});
    for (int n = 0; n < 20; ++n) {
        ForegroundMask mask = classify_adaptive(m, f);
        CHECK(mask.count() == 0);
        update_adaptive(m, f, mask);
    }
}

TEST_CASE("fresh mixture model seeds a component and flags foreground") {
    GmmParams p;
    GmmModel m(1, 1, 3, p);
    Frame f = rgb_frame(1, 1, 100, 100, 100);
    ForegroundMask mask = classify_and_update_gmm(m, f);
    CHECK(mask.at(0, 0) == 1);
    REQUIRE(m.component_count(0, 0) == 1);
    const GmmComponent& c = m.component(0, 0, 0);
    CHECK(c.weight == doctest::Approx(1.0));  // renormalized
    CHECK(c.mean[0] == doctest::Approx(100.0));
    CHECK(c.variance == doctest::Approx(p.init_variance));
}

// single-pixel simulation of the update recurrences, written directly from
// the update laws rather than through GmmModel
namespace {
struct ScalarComp {
    double w, mean, var;
};
}  // namespace

TEST_CASE("static pixel matches a scalar simulation oracle after 300 frames") {
    GmmParams p;
    GmmModel m(1, 1, 1, p);
    Frame f = gray_frame(1, 1, 100);

    std::vector<ScalarComp> sim;
    for (int n = 0; n < 300; ++n) {
        ForegroundMask mask = classify_and_update_gmm(m, f);

        // oracle step
        int matched = -1;
        for (std::size_t k = 0; k < sim.size(); ++k) {
            const double d = 100.0 - sim[k].mean;
            if (d * d <= p.deviation_sq_threshold * sim[k].var) {
                matched = static_cast<int>(k);
                break;
            }
        }
        if (matched >= 0) {
            for (auto& c : sim) c.w *= (1 - p.alpha);
            sim[matched].w += p.alpha;
            auto& c = sim[matched];
            c.mean = (1 - p.rho) * c.mean + p.rho * 100.0;
            const double d = 100.0 - c.mean;
            c.var = std::max(kGmmVarianceFloor, (1 - p.rho) * c.var + p.rho * d * d);
        } else {
            sim.push_back({p.init_mixprop, 100.0, p.init_variance});
        }
        double s = 0;
        for (auto& c : sim) s += c.w;
        for (auto& c : sim) c.w /= s;
        std::stable_sort(sim.begin(), sim.end(), [](const ScalarComp& a, const ScalarComp& b) {
            return a.w / std::sqrt(a.var) > b.w / std::sqrt(b.var);
        });

        if (n >= 1) CHECK(mask.at(0, 0) == 0);  // background from frame 2 on
        REQUIRE(m.component_count(0, 0) == static_cast<int>(sim.size()));
        for (std::size_t k = 0; k < sim.size(); ++k) {
            const GmmComponent& c = m.component(0, 0, static_cast<int>(k));
            REQUIRE(c.weight == doctest::Approx(sim[k].w).epsilon(1e-12));
            REQUIRE(c.mean[0] == doctest::Approx(sim[k].mean).epsilon(1e-12));
            REQUIRE(c.variance == doctest::Approx(sim[k].var).epsilon(1e-12));
        }
    }
    const GmmComponent& dom = m.component(0, 0, 0);
    CHECK(std::abs(dom.mean[0] - 100.0) <= 1.0);
    CHECK(dom.weight > 0.9);
}

TEST_CASE("mixture weights stay on the simplex and ranked through regime changes") {
    std::mt19937 gen(404);
    GmmParams p;
    GmmModel m(4, 4, 3, p);
    for (int n = 0; n < 120; ++n) {
        // alternate between two scene colors with occasional outliers
        std::uint8_t base = (n / 17) % 2 ? 200 : 60;
        Frame f = rgb_frame(4, 4, base, base, base);
        if (n % 11 == 0) {
            f.at(1, 2, 0) = static_cast<std::uint8_t>(gen() % 256);
            f.at(1, 2, 1) = static_cast<std::uint8_t>(gen() % 256);
        }
        classify_and_update_gmm(m, f);
        check_gmm_invariants(m);
    }
}

TEST_CASE("mixture model absorbs a noisy static scene") {
    GmmParams p;
    const int w = 24, h = 24;
    GmmModel m(w, h, 3, p);
    std::mt19937 gen(11);
    std::normal_distribution<double> noise(0.0, 2.0);
    double fg_late = 0.0;
    int late_frames = 0;
    for (int n = 0; n < 200; ++n) {
        Frame f = rgb_frame(w, h, 90, 120, 150);
        for (auto& b : f.data) {
            b = static_cast<std::uint8_t>(std::clamp(std::lround(b + noise(gen)), 0l, 255l));
        }
        ForegroundMask mask = classify_and_update_gmm(m, f);
        if (n >= 100) {
            fg_late += static_cast<double>(mask.count()) / (w * h);
            ++late_frames;
        }
    }
    CHECK(fg_late / late_frames < 0.01);
}

TEST_CASE("mixture model rejects mismatched frames") {
    GmmParams p;
    GmmModel m(4, 4, 3, p);
    Frame f = gray_frame(4, 4, 10);
    CHECK_THROWS_AS(classify_and_update_gmm(m, f), DimensionMismatch);
}
