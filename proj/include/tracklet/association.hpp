#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "tracklet/regions.hpp"

namespace tracklet {

struct GraphMismatch : std::runtime_error {
    explicit GraphMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct InsufficientHistory : std::runtime_error {
    explicit InsufficientHistory(const std::string& what) : std::runtime_error(what) {}
};

/// Bipartite gating graph between m previous objects and n detections.
struct MatchGraph {
    int m = 0;
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // (track slot, detection index)
};

enum class TrackState { Active, Occluded, Lost };

struct Track {
    int id = 0;
    TrackState state = TrackState::Active;
    RegionFeatures features;      // latest sighting (the merged blob while occluded)
    ColorHistogram ref_upper;     // appearance captured at the last unoccluded sighting
    ColorHistogram ref_lower;
    std::vector<std::pair<int, Point>> trajectory;  // (frame index, centroid)
    int missed_frames = 0;
    int group = -1;  // occlusion group id, -1 when not merged
};

struct TrackSet {
    std::vector<Track> tracks;
    int next_id = 1;
    int next_group = 1;
};

struct MergeEvent {
    int detection = 0;
    std::vector<int> track_ids;
};
struct SplitEvent {
    std::vector<int> track_ids;                    // former group members
    std::vector<std::pair<int, int>> assignments;  // (track id, detection index)
};
struct OcclusionGroup {
    std::vector<int> track_ids;
    int detection = 0;
    BoundingBox bbox;
};

struct AssociationReport {
    std::vector<std::pair<int, int>> matches;  // (track id, detection index)
    std::vector<int> births;                   // new track ids
    std::vector<int> deaths;                   // removed track ids
    std::vector<MergeEvent> merges;
    std::vector<SplitEvent> splits;
    std::vector<OcclusionGroup> groups;        // every merge group live this frame
};

struct AssocParams {
    double lambda_px = 50.0;  // gating radius
    int max_missed = 5;       // frames before an unmatched track is dropped
    int speed_window = 5;
};

/// Euclidean distance between two centroids.
double gate_distance(const Point& cp, const Point& ci);

/// Edges exactly where gate_distance(prev, detection centroid) < lambda.
MatchGraph build_graph(const std::vector<Point>& prev, const std::vector<RegionFeatures>& curr,
                       double lambda);

/// Frame-to-frame correspondence. Case analysis on the gating graph:
/// occluded groups continue or split (split assignment greedily by
/// ascending appearance distance against the pre-merge references), tracks
/// whose whole gate set is one shared detection merge into an occlusion
/// group, residual edges match greedily by (distance, track id, detection),
/// unmatched detections found new tracks, unmatched tracks age out after
/// max_missed frames.
AssociationReport resolve(const MatchGraph& graph, TrackSet& tracks,
                          const std::vector<RegionFeatures>& detections, int frame_index,
                          const AssocParams& params);

/// Mean velocity over the last `window` frames of trajectory (clamped to the
/// oldest point). Direction in degrees, 0 = +x, 90 = up; y grows downward.
std::pair<double, double> speed_and_direction(const Track& track, int window);

}  // namespace tracklet
