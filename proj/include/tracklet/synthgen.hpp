#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracklet/frame.hpp"
#include "tracklet/regions.hpp"

namespace tracklet {

struct ObjectOutOfBounds : std::runtime_error {
    explicit ObjectOutOfBounds(const std::string& what) : std::runtime_error(what) {}
};
struct ScriptError : std::runtime_error {
    explicit ScriptError(const std::string& what) : std::runtime_error(what) {}
};

enum class ObjectShape { Rectangle, Ellipse };

struct PathKeyframe {
    int frame = 0;
    Point center;  // continuous object center
};

struct SceneObject {
    int id = 0;
    ObjectShape shape = ObjectShape::Rectangle;
    int size_w = 8;
    int size_h = 8;
    std::array<std::uint8_t, 3> color = {255, 255, 255};
    std::vector<PathKeyframe> path;  // piecewise-linear; held outside the key range
};

struct SceneScript {
    int width = 64;
    int height = 64;
    int frame_count = 1;
    std::array<std::uint8_t, 3> background = {0, 0, 0};
    double noise_sigma = 0.0;
    std::uint32_t seed = 0;
    std::vector<SceneObject> objects;  // composited back-to-front in this order
};

struct TruthObject {
    int id = 0;
    Point centroid;  // centroid of the rasterized footprint, derived analytically
    BoundingBox bbox;
    bool visible = true;
    std::optional<std::vector<int>> occluding_group;  // ids with overlapping bboxes
};

struct GroundTruth {
    std::vector<std::vector<TruthObject>> frames;
};

struct RenderedScene {
    std::vector<Frame> frames;
    GroundTruth truth;
};

/// Interpolated center at `frame` (clamped to the first/last keyframe).
Point object_center(const SceneObject& obj, int frame);

/// Rasterized footprint bounds of the object at `frame`.
BoundingBox object_bbox(const SceneObject& obj, int frame);

/// Deterministic rendering: background, objects back-to-front, then additive
/// Gaussian noise (mt19937 seeded with seed ^ frame index, Box-Muller),
/// rounded and clamped. Ground truth comes from the script geometry alone.
RenderedScene render(const SceneScript& script);

struct CrossingParams {
    int height = 64;
    int frame_count = 120;
    int size = 10;
    double speed_a = 1.0;  // px/frame, rightward
    double speed_b = 1.0;  // px/frame, leftward
    std::array<std::uint8_t, 3> color_a = {220, 60, 60};
    std::array<std::uint8_t, 3> color_b = {60, 200, 60};
    std::array<std::uint8_t, 3> background = {40, 40, 40};
    double noise_sigma = 0.0;
    std::uint32_t seed = 0;
};

/// Two rectangles traversing horizontally in opposite directions, fully
/// overlapping at the middle frame. Frame width is derived so both fit
/// for the whole run.
SceneScript crossing_script(const CrossingParams& params);

/// Plain-text script file: top-level key=value lines plus [object] sections.
SceneScript parse_scene_script(const std::string& text);
SceneScript load_scene_script(const std::string& path);

/// JSON line (one frame of ground truth) for truth.jsonl.
std::string truth_json_line(int frame, const std::vector<TruthObject>& objects);

}  // namespace tracklet
