#pragma once

#include <stdexcept>
#include <vector>

#include "tracklet/frame.hpp"
#include "tracklet/regions.hpp"

namespace tracklet {

struct EmptyWindow : std::runtime_error {
    explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};
struct ZeroWeightField : std::runtime_error {
    explicit ZeroWeightField(const std::string& what) : std::runtime_error(what) {}
};

/// Kernel-weighted appearance model of the tracked patch.
struct TargetModel {
    std::vector<double> q;  // unit-sum histogram
    double hx = 1.0;        // window half-width
    double hy = 1.0;        // window half-height
    int bins_per_channel = 8;
};

struct TrackOutcome {
    Point position;
    int iterations = 0;
    bool converged = false;
    double last_step = 0.0;  // ||y1 - y0|| of the final iteration
};

struct Geometry {
    double width = 0.0;
    double height = 0.0;
    double orientation_deg = 0.0;  // principal axis, in [0,180)
};

/// Epanechnikov-weighted color histogram of the window at `center`, unit-sum.
/// Support is the ellipse ((x-cx)/hx)^2 + ((y-cy)/hy)^2 < 1, clipped to the
/// frame. Throws EmptyWindow when no pixel carries weight.
std::vector<double> candidate_histogram(const Frame& frame, Point center, double hx, double hy,
                                        int bins_per_channel);

TargetModel build_target_model(const Frame& frame, Point center, double hx, double hy,
                               int bins_per_channel);

/// One shift: pixel weights sqrt(q_b / p_b(y0)), new position is their
/// weighted mean. Throws ZeroWeightField when every weight vanishes.
Point track_step(const Frame& frame, const TargetModel& model, Point y0);

/// Iterate track_step until the step length drops below epsilon or max_iter
/// is reached.
TrackOutcome track(const Frame& frame, const TargetModel& model, Point y_init,
                   double epsilon = 0.1, int max_iter = 20);

/// Axis lengths (4 sigma) and principal-axis angle from the second-order
/// central moments of the weight field at `y`.
Geometry estimate_geometry(const Frame& frame, const TargetModel& model, Point y);

/// Model for the next frame: same appearance, window blended toward the
/// estimated half-extents with rate gamma.
TargetModel reseed(const TargetModel& model, Point y_final, const Geometry& geometry,
                   double gamma = 0.1);

}  // namespace tracklet
