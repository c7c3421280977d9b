#include "tracklet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "json.hpp"

#include "tracklet/morphology.hpp"
#include "tracklet/regions.hpp"

namespace tracklet {

Pipeline::Pipeline(const PipelineConfig& config) : config_(config) {}

ForegroundMask Pipeline::detect(const Frame& frame, bool warmup) {
    if (config_.bg_model == BgModelKind::Gmm) {
        if (!gmm_) {
            gmm_ = std::make_unique<GmmModel>(frame.width, frame.height, frame.channels,
                                              config_.gmm);
        }
        return classify_and_update_gmm(*gmm_, frame);
    }
    const Frame gray = frame.channels == 3 ? to_grayscale(frame) : frame;
    if (!adaptive_) {
        adaptive_ = AdaptiveModel::init_from(gray, config_.adaptive);
    }
    if (warmup) {
        // burn-in: learn the whole scene as background
        ForegroundMask zeros(gray.width, gray.height);
        update_adaptive(*adaptive_, gray, zeros);
        return zeros;
    }
    ForegroundMask mask = classify_adaptive(*adaptive_, gray);
    update_adaptive(*adaptive_, gray, mask);
    return mask;
}

void Pipeline::refine_positions(const Frame& frame) {
    if (!prev_frame_) return;
    for (Track& t : tracks_.tracks) {
        if (t.state != TrackState::Active || t.trajectory.empty()) continue;
        if (t.trajectory.size() < 2) continue;  // needs a previous sighting
        const auto& [pf, ppos] = t.trajectory[t.trajectory.size() - 2];
        if (pf != frame.index - 1) continue;
        const double hx = std::max(2.0, t.features.bbox.width() / 2.0);
        const double hy = std::max(2.0, t.features.bbox.height() / 2.0);
        try {
            TargetModel model = build_target_model(*prev_frame_, ppos, hx, hy,
                                                   config_.bins_per_channel);
            TrackOutcome out = track(frame, model, t.trajectory.back().second,
                                     config_.ms_epsilon, config_.ms_max_iter);
            t.trajectory.back().second = out.position;
            t.features.centroid = out.position;
        } catch (const EmptyWindow&) {
        } catch (const ZeroWeightField&) {
        }
    }
}

FrameResult Pipeline::process(const Frame& frame) {
    const bool warmup = frames_seen_ < config_.warmup;
    ++frames_seen_;

    ForegroundMask mask = detect(frame, warmup);

    FrameResult result;
    result.frame = frame.index;
    result.warmup = warmup;
    if (warmup) {
        if (config_.refine == RefineKind::Meanshift) prev_frame_ = frame;
        return result;
    }

    if (config_.morph_radius >= 1) mask = open_close(mask, config_.morph_radius);

    std::vector<RegionFeatures> detections;
    int label = 0;
    for (const auto& comp : label_components(mask)) {
        if (static_cast<int>(comp.size()) < config_.min_area) continue;
        RegionFeatures f = extract_features(comp, frame, config_.bins_per_channel);
        f.label = label++;
        detections.push_back(std::move(f));
    }

    std::vector<Point> prev;
    for (const Track& t : tracks_.tracks) prev.push_back(t.features.centroid);
    MatchGraph graph = build_graph(prev, detections, config_.assoc.lambda_px);
    AssociationReport report = resolve(graph, tracks_, detections, frame.index, config_.assoc);

    if (config_.refine == RefineKind::Meanshift) {
        refine_positions(frame);
        prev_frame_ = frame;
    }

    for (const Track& t : tracks_.tracks) {
        TrackRecord rec;
        rec.id = t.id;
        rec.bbox = t.features.bbox;
        rec.centroid = t.features.centroid;
        rec.state = t.state;
        if (t.trajectory.size() >= 2) {
            auto [speed, dir] = speed_and_direction(t, config_.assoc.speed_window);
            rec.speed = speed;
            rec.direction = dir;
        }
        result.tracks.push_back(rec);
    }
    result.events.births = report.births;
    result.events.deaths = report.deaths;
    for (const MergeEvent& m : report.merges) result.events.merges.push_back(m.track_ids);
    for (const SplitEvent& s : report.splits) result.events.splits.push_back(s.track_ids);
    for (const OcclusionGroup& g : report.groups) {
        result.groups.push_back({g.track_ids, g.bbox});
    }
    return result;
}

std::vector<FrameResult> run_pipeline(const PipelineConfig& config,
                                      const std::vector<Frame>& frames) {
    Pipeline pipeline(config);
    std::vector<FrameResult> results;
    results.reserve(frames.size());
    for (const Frame& f : frames) results.push_back(pipeline.process(f));
    return results;
}

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

constexpr Rgb kYellow{255, 255, 0};
constexpr Rgb kPalette[] = {
    {0, 255, 0},    // green
    {255, 0, 0},    // red
    {0, 0, 255},    // blue
    {255, 0, 255},  // magenta
    {0, 255, 255},  // cyan
};
constexpr int kPaletteSize = 5;

void stroke_rect(Frame& frame, const BoundingBox& bb, Rgb color, bool dashed) {
    auto put = [&](int x, int y, int step) {
        if (!frame.in_bounds(x, y)) return;
        if (dashed && step % 2) return;
        frame.at(x, y, 0) = color.r;
        frame.at(x, y, 1) = color.g;
        frame.at(x, y, 2) = color.b;
    };
    for (int x = bb.x_min; x <= bb.x_max; ++x) {
        put(x, bb.y_min, x - bb.x_min);
        put(x, bb.y_max, x - bb.x_min);
    }
    for (int y = bb.y_min + 1; y < bb.y_max; ++y) {
        put(bb.x_min, y, y - bb.y_min);
        put(bb.x_max, y, y - bb.y_min);
    }
}

}  // namespace

Frame annotate_frame(const Frame& frame, const FrameResult& result) {
    Frame out = frame.channels == 3 ? frame : [&] {
        Frame rgb;
        rgb.width = frame.width;
        rgb.height = frame.height;
        rgb.channels = 3;
        rgb.index = frame.index;
        rgb.data.resize(rgb.expected_size());
        for (int i = 0; i < frame.width * frame.height; ++i) {
            rgb.data[i * 3] = rgb.data[i * 3 + 1] = rgb.data[i * 3 + 2] = frame.data[i];
        }
        return rgb;
    }();

    std::vector<const TrackRecord*> active;
    for (const TrackRecord& t : result.tracks) {
        if (t.state == TrackState::Active) active.push_back(&t);
    }
    std::sort(active.begin(), active.end(),
              [](const TrackRecord* a, const TrackRecord* b) { return a->id < b->id; });

    if (active.size() == 1) {
        stroke_rect(out, active[0]->bbox, kYellow, false);
    } else {
        for (std::size_t i = 0; i < active.size(); ++i) {
            const Rgb color = kPalette[i % kPaletteSize];
            const bool dashed = i >= kPaletteSize;
            stroke_rect(out, active[i]->bbox, color, dashed);
        }
    }
    for (const GroupRecord& g : result.groups) stroke_rect(out, g.bbox, kYellow, false);
    return out;
}

std::string result_json_line(const FrameResult& r) {
    nlohmann::json j;
    j["frame"] = r.frame;
    j["warmup"] = r.warmup;
    j["tracks"] = nlohmann::json::array();
    for (const TrackRecord& t : r.tracks) {
        nlohmann::json o;
        o["id"] = t.id;
        o["bbox"] = {t.bbox.x_min, t.bbox.y_min, t.bbox.x_max, t.bbox.y_max};
        o["centroid"] = {t.centroid.x, t.centroid.y};
        o["state"] = t.state == TrackState::Active ? "active" : "occluded";
        o["speed"] = t.speed;
        o["direction"] = t.direction;
        j["tracks"].push_back(std::move(o));
    }
    j["events"]["births"] = r.events.births;
    j["events"]["deaths"] = r.events.deaths;
    j["events"]["merges"] = r.events.merges;
    j["events"]["splits"] = r.events.splits;
    j["groups"] = nlohmann::json::array();
    for (const GroupRecord& g : r.groups) {
        nlohmann::json o;
        o["members"] = g.members;
        o["bbox"] = {g.bbox.x_min, g.bbox.y_min, g.bbox.x_max, g.bbox.y_max};
        j["groups"].push_back(std::move(o));
    }
    return j.dump();
}

ResultWriter::ResultWriter(const std::string& out_dir, bool annotate)
    : out_dir_(out_dir), annotate_(annotate) {
    std::filesystem::create_directories(out_dir);
    jsonl_.open(std::filesystem::path(out_dir) / "tracks.jsonl", std::ios::trunc);
    csv_.open(std::filesystem::path(out_dir) / "trajectories.csv", std::ios::trunc);
    if (!jsonl_ || !csv_) throw IoFailure("cannot open outputs in " + out_dir);
    csv_ << "track_id,frame,x,y,speed,direction\n";
}

void ResultWriter::write(const FrameResult& result, const Frame& frame) {
    jsonl_ << result_json_line(result) << "\n";
    if (!result.warmup) {
        for (const TrackRecord& t : result.tracks) {
            if (t.state != TrackState::Active) continue;
            char row[160];
            std::snprintf(row, sizeof(row), "%d,%d,%.6f,%.6f,%.6f,%.6f\n", t.id, result.frame,
                          t.centroid.x, t.centroid.y, t.speed, t.direction);
            csv_ << row;
        }
    }
    if (annotate_) {
        char name[64];
        std::snprintf(name, sizeof(name), "ann_%06d.ppm", result.frame);
        write_frame(annotate_frame(frame, result),
                    (std::filesystem::path(out_dir_) / name).string());
    }
    if (!jsonl_ || !csv_) throw IoFailure("write failed in " + out_dir_);
}

void ResultWriter::close() {
    jsonl_.close();
    csv_.close();
}

void emit_results(const std::vector<FrameResult>& results, const std::vector<Frame>& frames,
                  const std::string& out_dir, bool annotate) {
    if (results.size() != frames.size()) throw IoFailure("results/frames length mismatch");
    ResultWriter writer(out_dir, annotate);
    for (std::size_t i = 0; i < results.size(); ++i) writer.write(results[i], frames[i]);
    writer.close();
}

}  // namespace tracklet
