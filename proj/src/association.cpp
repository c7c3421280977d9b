#include "tracklet/association.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace tracklet {

double gate_distance(const Point& cp, const Point& ci) {
    return std::hypot(cp.x - ci.x, cp.y - ci.y);
}

MatchGraph build_graph(const std::vector<Point>& prev, const std::vector<RegionFeatures>& curr,
                       double lambda) {
    MatchGraph g;
    g.m = static_cast<int>(prev.size());
    g.n = static_cast<int>(curr.size());
    for (int p = 0; p < g.m; ++p) {
        for (int i = 0; i < g.n; ++i) {
            if (gate_distance(prev[p], curr[i].centroid) < lambda) g.edges.emplace_back(p, i);
        }
    }
    return g;
}

namespace {

void match_track(Track& t, const RegionFeatures& det, int frame_index) {
    t.state = TrackState::Active;
    t.features = det;
    t.ref_upper = det.hist_upper;
    t.ref_lower = det.hist_lower;
    t.trajectory.emplace_back(frame_index, det.centroid);
    t.missed_frames = 0;
    t.group = -1;
}

}  // namespace

AssociationReport resolve(const MatchGraph& graph, TrackSet& tracks,
                          const std::vector<RegionFeatures>& detections, int frame_index,
                          const AssocParams& params) {
    const int m = static_cast<int>(tracks.tracks.size());
    const int n = static_cast<int>(detections.size());
    if (graph.m != m || graph.n != n) {
        throw GraphMismatch("graph built for " + std::to_string(graph.m) + "x" +
                            std::to_string(graph.n) + ", got " + std::to_string(m) + " tracks and " +
                            std::to_string(n) + " detections");
    }

    AssociationReport report;
    std::vector<std::vector<int>> dets_of(m);   // gated detections per track slot
    std::vector<std::vector<int>> tracks_of(n); // gated track slots per detection
    for (auto [p, i] : graph.edges) {
        dets_of[p].push_back(i);
        tracks_of[i].push_back(p);
    }

    std::vector<bool> settled(m, false);       // track handled this frame
    std::vector<bool> consumed(n, false);      // detection claimed this frame
    std::vector<int> group_of_det(n, -1);      // detection hosting a continuing group

    // --- occlusion groups: continue on one blob, or split across several ---
    std::map<int, std::vector<int>> groups;    // group id -> track slots
    for (int p = 0; p < m; ++p) {
        if (tracks.tracks[p].state == TrackState::Occluded && tracks.tracks[p].group >= 0) {
            groups[tracks.tracks[p].group].push_back(p);
        }
    }
    for (auto& [gid, members] : groups) {
        std::vector<int> gated;  // detections reachable from any member
        for (int p : members) {
            for (int i : dets_of[p]) {
                if (!consumed[i]) gated.push_back(i);
            }
        }
        std::sort(gated.begin(), gated.end());
        gated.erase(std::unique(gated.begin(), gated.end()), gated.end());

        if (gated.size() == 1) {
            // still one blob: keep following it, identities stay frozen
            const int u = gated[0];
            consumed[u] = true;
            group_of_det[u] = gid;
            for (int p : members) {
                Track& t = tracks.tracks[p];
                t.features = detections[u];
                t.missed_frames = 0;
                settled[p] = true;
            }
        } else if (gated.size() >= 2) {
            // blob split: hand each emerging detection to the member whose
            // pre-merge appearance is closest, each side used at most once
            struct Cand {
                double dist;
                int id;
                int slot;
                int det;
            };
            std::vector<Cand> cands;
            for (int p : members) {
                const Track& t = tracks.tracks[p];
                for (int i : dets_of[p]) {
                    if (consumed[i]) continue;
                    double d = l1_distance(t.ref_upper, detections[i].hist_upper) +
                               l1_distance(t.ref_lower, detections[i].hist_lower);
                    cands.push_back({d, t.id, p, i});
                }
            }
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.dist != b.dist) return a.dist < b.dist;
                if (a.id != b.id) return a.id < b.id;
                return a.det < b.det;
            });
            SplitEvent ev;
            for (int p : members) ev.track_ids.push_back(tracks.tracks[p].id);
            std::sort(ev.track_ids.begin(), ev.track_ids.end());
            for (const Cand& c : cands) {
                if (settled[c.slot] || consumed[c.det]) continue;
                match_track(tracks.tracks[c.slot], detections[c.det], frame_index);
                settled[c.slot] = true;
                consumed[c.det] = true;
                ev.assignments.emplace_back(tracks.tracks[c.slot].id, c.det);
                report.matches.emplace_back(tracks.tracks[c.slot].id, c.det);
            }
            if (!ev.assignments.empty()) report.splits.push_back(std::move(ev));
            // members left without a detection fall through to the miss phase
        }
        // gated empty: members fall through to the miss phase
    }

    // --- merges: several unsettled tracks whose only gated detection is the
    //     same one collapse into an occlusion group ---
    auto residual_dets = [&](int p) {
        std::vector<int> r;
        for (int i : dets_of[p]) {
            if (!consumed[i] || group_of_det[i] >= 0) r.push_back(i);
        }
        return r;
    };
    for (int i = 0; i < n; ++i) {
        if (consumed[i] && group_of_det[i] < 0) continue;
        std::vector<int> exclusive;
        for (int p : tracks_of[i]) {
            if (settled[p]) continue;
            std::vector<int> r = residual_dets(p);
            if (r.size() == 1 && r[0] == i) exclusive.push_back(p);
        }
        const bool joins_group = group_of_det[i] >= 0 && !exclusive.empty();
        if (static_cast<int>(exclusive.size()) < 2 && !joins_group) continue;

        int gid = group_of_det[i] >= 0 ? group_of_det[i] : tracks.next_group++;
        MergeEvent ev;
        ev.detection = i;
        for (int p : exclusive) {
            Track& t = tracks.tracks[p];
            t.state = TrackState::Occluded;
            t.group = gid;
            t.features = detections[i];  // follow the blob; references stay frozen
            t.missed_frames = 0;
            settled[p] = true;
            ev.track_ids.push_back(t.id);
        }
        std::sort(ev.track_ids.begin(), ev.track_ids.end());
        report.merges.push_back(std::move(ev));
        consumed[i] = true;
        group_of_det[i] = gid;
    }

    // --- residual one-to-one matching, greedy by (distance, id, detection) ---
    struct Edge {
        double dist;
        int id;
        int slot;
        int det;
    };
    std::vector<Edge> residual;
    for (auto [p, i] : graph.edges) {
        if (settled[p] || consumed[i]) continue;
        residual.push_back({gate_distance(tracks.tracks[p].features.centroid,
                                          detections[i].centroid),
                            tracks.tracks[p].id, p, i});
    }
    std::sort(residual.begin(), residual.end(), [](const Edge& a, const Edge& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.id != b.id) return a.id < b.id;
        return a.det < b.det;
    });
    for (const Edge& e : residual) {
        if (settled[e.slot] || consumed[e.det]) continue;
        match_track(tracks.tracks[e.slot], detections[e.det], frame_index);
        settled[e.slot] = true;
        consumed[e.det] = true;
        report.matches.emplace_back(tracks.tracks[e.slot].id, e.det);
    }

    // --- births ---
    for (int i = 0; i < n; ++i) {
        if (consumed[i]) continue;
        Track t;
        t.id = tracks.next_id++;
        match_track(t, detections[i], frame_index);
        report.births.push_back(t.id);
        report.matches.emplace_back(t.id, i);
        tracks.tracks.push_back(std::move(t));
    }

    // --- misses and deaths (new births above are already settled) ---
    for (int p = 0; p < m; ++p) {
        if (settled[p]) continue;
        Track& t = tracks.tracks[p];
        ++t.missed_frames;
        if (t.missed_frames > params.max_missed) {
            t.state = TrackState::Lost;
            report.deaths.push_back(t.id);
        }
    }
    std::erase_if(tracks.tracks, [](const Track& t) { return t.state == TrackState::Lost; });

    // --- surviving groups, for reporting and annotation ---
    for (int i = 0; i < n; ++i) {
        if (group_of_det[i] < 0) continue;
        OcclusionGroup g;
        g.detection = i;
        g.bbox = detections[i].bbox;
        for (const Track& t : tracks.tracks) {
            if (t.group == group_of_det[i]) g.track_ids.push_back(t.id);
        }
        std::sort(g.track_ids.begin(), g.track_ids.end());
        if (g.track_ids.size() >= 2) report.groups.push_back(std::move(g));
    }
    return report;
}

std::pair<double, double> speed_and_direction(const Track& track, int window) {
    if (track.trajectory.size() < 2) {
        throw InsufficientHistory("track " + std::to_string(track.id) +
                                  " has fewer than 2 trajectory points");
    }
    const auto& [f1, p1] = track.trajectory.back();
    // latest entry at least `window` frames older, else the oldest
    std::size_t j = 0;
    for (std::size_t k = track.trajectory.size() - 1; k-- > 0;) {
        if (track.trajectory[k].first <= f1 - window) {
            j = k;
            break;
        }
    }
    const auto& [f0, p0] = track.trajectory[j];
    const double gap = f1 - f0;
    const double dx = p1.x - p0.x;
    const double dy = p1.y - p0.y;
    double speed = std::hypot(dx, dy) / gap;
    // atan2 is in (-180,180]; shift into [0,360) (this also drops -0.0)
    double deg = std::fmod(std::atan2(-dy, dx) * 180.0 / std::numbers::pi + 360.0, 360.0);
    return {speed, deg};
}

}  // namespace tracklet
