#pragma once

#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracklet/association.hpp"
#include "tracklet/background.hpp"
#include "tracklet/config.hpp"
#include "tracklet/frame.hpp"
#include "tracklet/meanshift.hpp"

namespace tracklet {

struct TrackRecord {
    int id = 0;
    BoundingBox bbox;
    Point centroid;
    TrackState state = TrackState::Active;
    double speed = 0.0;      // px/frame; 0 until the trajectory has 2 points
    double direction = 0.0;  // degrees in [0,360)
};

struct GroupRecord {
    std::vector<int> members;
    BoundingBox bbox;
};

struct FrameEvents {
    std::vector<int> births;
    std::vector<int> deaths;
    std::vector<std::vector<int>> merges;  // member ids per merge
    std::vector<std::vector<int>> splits;  // member ids per split
};

struct FrameResult {
    int frame = 0;
    bool warmup = false;
    std::vector<TrackRecord> tracks;
    FrameEvents events;
    std::vector<GroupRecord> groups;  // live occlusion groups (merged blobs)
};

/// Sequential engine: detection -> cleanup -> features -> association
/// (-> optional mean-shift refinement) -> analytics, one frame at a time.
class Pipeline {
public:
    explicit Pipeline(const PipelineConfig& config);

    /// Process the next frame; frames must arrive in sequence order.
    FrameResult process(const Frame& frame);

    const TrackSet& tracks() const { return tracks_; }

private:
    ForegroundMask detect(const Frame& frame, bool warmup);
    void refine_positions(const Frame& frame);

    PipelineConfig config_;
    int frames_seen_ = 0;
    std::optional<AdaptiveModel> adaptive_;
    std::unique_ptr<GmmModel> gmm_;
    TrackSet tracks_;
    std::optional<Frame> prev_frame_;  // kept only when refine=meanshift
};

/// Run the whole in-memory sequence, collecting one result per frame.
std::vector<FrameResult> run_pipeline(const PipelineConfig& config, const std::vector<Frame>& frames);

/// Figure-style overlay: one active track -> yellow box; several -> by
/// ascending id green, red, blue, magenta, cyan (repeating dashed after
/// that); each live occlusion group -> one yellow box around the merged
/// blob. Returns an RGB copy; only stroke pixels change.
Frame annotate_frame(const Frame& frame, const FrameResult& result);

/// Streaming writer for tracks.jsonl / trajectories.csv / ann_%06d.ppm.
class ResultWriter {
public:
    ResultWriter(const std::string& out_dir, bool annotate);
    void write(const FrameResult& result, const Frame& frame);
    void close();

private:
    std::string out_dir_;
    bool annotate_;
    std::ofstream jsonl_;
    std::ofstream csv_;
};

/// One JSON object per frame; field names: frame, warmup, tracks, events, groups.
std::string result_json_line(const FrameResult& result);

/// Batch convenience over ResultWriter.
void emit_results(const std::vector<FrameResult>& results, const std::vector<Frame>& frames,
                  const std::string& out_dir, bool annotate);

}  // namespace tracklet
