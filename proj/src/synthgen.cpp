#include "tracklet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace tracklet {

namespace {

// Gaussian deviates via Box-Muller over mt19937 uniforms. Hand-rolled so the
// byte stream does not depend on the standard library's distribution choices.
class GaussianStream {
public:
    explicit GaussianStream(std::uint32_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(gen_()) + 1.0) / 4294967296.0;  // (0,1]
        const double u2 = static_cast<double>(gen_()) / 4294967296.0;          // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Horizontal pixel span [x0,x1] of the shape on row y, or nullopt.
std::optional<std::pair<int, int>> row_span(const SceneObject& obj, Point c, int y) {
    if (obj.shape == ObjectShape::Rectangle) {
        const int x0 = static_cast<int>(std::lround(c.x - (obj.size_w - 1) / 2.0));
        const int y0 = static_cast<int>(std::lround(c.y - (obj.size_h - 1) / 2.0));
        if (y < y0 || y > y0 + obj.size_h - 1) return std::nullopt;
        return std::make_pair(x0, x0 + obj.size_w - 1);
    }
    // ellipse: ((x-cx)/a)^2 + ((y-cy)/b)^2 <= 1 with a = w/2, b = h/2
    const double a = obj.size_w / 2.0;
    const double b = obj.size_h / 2.0;
    const double ry = (y - c.y) / b;
    const double rem = 1.0 - ry * ry;
    if (rem < 0.0) return std::nullopt;
    const double half = a * std::sqrt(rem);
    const int x0 = static_cast<int>(std::ceil(c.x - half));
    const int x1 = static_cast<int>(std::floor(c.x + half));
    if (x0 > x1) return std::nullopt;
    return std::make_pair(x0, x1);
}

int row_range(const SceneObject& obj, Point c, int& y0, int& y1) {
    if (obj.shape == ObjectShape::Rectangle) {
        y0 = static_cast<int>(std::lround(c.y - (obj.size_h - 1) / 2.0));
        y1 = y0 + obj.size_h - 1;
    } else {
        const double b = obj.size_h / 2.0;
        y0 = static_cast<int>(std::ceil(c.y - b));
        y1 = static_cast<int>(std::floor(c.y + b));
    }
    return y1 - y0 + 1;
}

}  // namespace

Point object_center(const SceneObject& obj, int frame) {
    if (obj.path.empty()) throw ScriptError("object " + std::to_string(obj.id) + " has no path");
    if (frame <= obj.path.front().frame) return obj.path.front().center;
    if (frame >= obj.path.back().frame) return obj.path.back().center;
    for (std::size_t k = 1; k < obj.path.size(); ++k) {
        const PathKeyframe& a = obj.path[k - 1];
        const PathKeyframe& b = obj.path[k];
        if (frame > b.frame) continue;
        const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
        return {a.center.x + t * (b.center.x - a.center.x),
                a.center.y + t * (b.center.y - a.center.y)};
    }
    return obj.path.back().center;
}

BoundingBox object_bbox(const SceneObject& obj, int frame) {
    const Point c = object_center(obj, frame);
    int y0 = 0, y1 = 0;
    row_range(obj, c, y0, y1);
    int x_min = 0, x_max = -1;
    bool any = false;
    for (int y = y0; y <= y1; ++y) {
        auto span = row_span(obj, c, y);
        if (!span) continue;
        if (!any) {
            x_min = span->first;
            x_max = span->second;
            any = true;
        } else {
            x_min = std::min(x_min, span->first);
            x_max = std::max(x_max, span->second);
        }
    }
    if (!any) throw ScriptError("object " + std::to_string(obj.id) + " rasterizes to nothing");
    // trim empty edge rows (ellipses can have spanless boundary rows)
    int ry0 = y0, ry1 = y1;
    while (!row_span(obj, c, ry0)) ++ry0;
    while (!row_span(obj, c, ry1)) --ry1;
    return {x_min, ry0, x_max, ry1};
}

RenderedScene render(const SceneScript& script) {
    RenderedScene out;
    out.frames.reserve(script.frame_count);
    out.truth.frames.resize(script.frame_count);

    for (int f = 0; f < script.frame_count; ++f) {
        // bounds check before touching pixels
        for (const SceneObject& obj : script.objects) {
            const BoundingBox bb = object_bbox(obj, f);
            if (bb.x_min < 0 || bb.y_min < 0 || bb.x_max >= script.width ||
                bb.y_max >= script.height) {
                throw ObjectOutOfBounds("object " + std::to_string(obj.id) + " leaves the frame at " +
                                        std::to_string(f));
            }
        }

        Frame frame;
        frame.width = script.width;
        frame.height = script.height;
        frame.channels = 3;
        frame.index = f;
        frame.data.resize(frame.expected_size());
        for (int y = 0; y < script.height; ++y) {
            for (int x = 0; x < script.width; ++x) {
                for (int c = 0; c < 3; ++c) frame.at(x, y, c) = script.background[c];
            }
        }
        for (const SceneObject& obj : script.objects) {
            const Point ctr = object_center(obj, f);
            int y0 = 0, y1 = 0;
            row_range(obj, ctr, y0, y1);
            for (int y = y0; y <= y1; ++y) {
                auto span = row_span(obj, ctr, y);
                if (!span) continue;
                for (int x = span->first; x <= span->second; ++x) {
                    for (int c = 0; c < 3; ++c) frame.at(x, y, c) = obj.color[c];
                }
            }
        }
        if (script.noise_sigma > 0.0) {
            GaussianStream noise(script.seed ^ static_cast<std::uint32_t>(f));
            for (std::size_t i = 0; i < frame.data.size(); ++i) {
                const double v = frame.data[i] + noise.next() * script.noise_sigma;
                frame.data[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
            }
        }
        out.frames.push_back(std::move(frame));

        // analytic ground truth
        std::vector<TruthObject>& truth = out.truth.frames[f];
        std::vector<BoundingBox> boxes;
        for (const SceneObject& obj : script.objects) boxes.push_back(object_bbox(obj, f));
        for (std::size_t oi = 0; oi < script.objects.size(); ++oi) {
            const SceneObject& obj = script.objects[oi];
            const Point ctr = object_center(obj, f);
            TruthObject t;
            t.id = obj.id;
            t.bbox = boxes[oi];

            // centroid of the rasterized footprint, from row spans
            double area = 0.0, sx = 0.0, sy = 0.0;
            std::size_t covered = 0, total = 0;
            for (int y = t.bbox.y_min; y <= t.bbox.y_max; ++y) {
                auto span = row_span(obj, ctr, y);
                if (!span) continue;
                const double w = span->second - span->first + 1;
                area += w;
                sx += w * (span->first + span->second) / 2.0;
                sy += w * y;
                // visibility: count pixels hidden by objects drawn later
                for (int x = span->first; x <= span->second; ++x) {
                    ++total;
                    for (std::size_t oj = oi + 1; oj < script.objects.size(); ++oj) {
                        auto cover = row_span(script.objects[oj], object_center(script.objects[oj], f), y);
                        if (cover && x >= cover->first && x <= cover->second) {
                            ++covered;
                            break;
                        }
                    }
                }
            }
            t.centroid = {sx / area, sy / area};
            t.visible = covered < total;

            std::vector<int> overlapping;
            for (std::size_t oj = 0; oj < script.objects.size(); ++oj) {
                if (boxes[oi].intersects(boxes[oj])) overlapping.push_back(script.objects[oj].id);
            }
            if (overlapping.size() >= 2) {
                std::sort(overlapping.begin(), overlapping.end());
                t.occluding_group = overlapping;
            }
            truth.push_back(std::move(t));
        }
    }
    return out;
}

SceneScript crossing_script(const CrossingParams& p) {
    SceneScript s;
    s.height = p.height;
    s.frame_count = p.frame_count;
    s.background = p.background;
    s.noise_sigma = p.noise_sigma;
    s.seed = p.seed;

    const int last = p.frame_count - 1;
    const int mid = p.frame_count / 2;
    const double margin = 2.0 + (p.size - 1) / 2.0;
    // both centers coincide at the middle frame
    const double ax0 = margin;
    const double cross_x = ax0 + p.speed_a * mid;
    const double bx0 = cross_x + p.speed_b * mid;
    const double ax1 = ax0 + p.speed_a * last;
    const double bx1 = bx0 - p.speed_b * last;
    const double cy = p.height / 2.0 - 0.5;
    s.width = static_cast<int>(std::ceil(std::max({ax1, bx0, cross_x}) + margin)) + 1;

    SceneObject a;
    a.id = 1;
    a.size_w = a.size_h = p.size;
    a.color = p.color_a;
    a.path = {{0, {ax0, cy}}, {last, {ax1, cy}}};
    SceneObject b;
    b.id = 2;
    b.size_w = b.size_h = p.size;
    b.color = p.color_b;
    b.path = {{0, {bx0, cy}}, {last, {bx1, cy}}};
    s.objects = {a, b};

    if (bx1 - margin < 0.0) {
        // keep object B inside the frame for the whole run
        const double shift = margin - bx1;
        for (auto& kf : s.objects[0].path) kf.center.x += shift;
        for (auto& kf : s.objects[1].path) kf.center.x += shift;
        s.width += static_cast<int>(std::ceil(shift));
    }
    return s;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(v);
    double d;
    while (in >> d) out.push_back(d);
    if (out.empty()) throw ScriptError("expected numbers for '" + key + "'");
    return out;
}

std::array<std::uint8_t, 3> parse_color(const std::string& v, const std::string& key) {
    std::vector<double> nums = parse_numbers(v, key);
    if (nums.size() == 1) nums = {nums[0], nums[0], nums[0]};
    if (nums.size() != 3) throw ScriptError("'" + key + "' needs 1 or 3 values");
    std::array<std::uint8_t, 3> c{};
    for (int i = 0; i < 3; ++i) {
        if (nums[i] < 0 || nums[i] > 255) throw ScriptError("'" + key + "' out of [0,255]");
        c[i] = static_cast<std::uint8_t>(std::lround(nums[i]));
    }
    return c;
}

std::vector<PathKeyframe> parse_path(const std::string& v) {
    // "f:x,y; f:x,y; ..."
    std::vector<PathKeyframe> path;
    std::istringstream in(v);
    std::string part;
    while (std::getline(in, part, ';')) {
        part = trim(part);
        if (part.empty()) continue;
        PathKeyframe kf;
        char colon = 0, comma = 0;
        std::istringstream pin(part);
        if (!(pin >> kf.frame >> colon >> kf.center.x >> comma >> kf.center.y) || colon != ':' ||
            comma != ',') {
            throw ScriptError("bad path keyframe '" + part + "' (want frame:x,y)");
        }
        path.push_back(kf);
    }
    if (path.empty()) throw ScriptError("empty path");
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (path[k].frame <= path[k - 1].frame) throw ScriptError("path keyframes must be increasing");
    }
    return path;
}

}  // namespace

SceneScript parse_scene_script(const std::string& text) {
    SceneScript s;
    SceneObject* cur = nullptr;
    int auto_id = 1;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line == "[object]") {
            s.objects.emplace_back();
            cur = &s.objects.back();
            cur->id = auto_id++;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ScriptError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!cur) {
            if (key == "width") s.width = static_cast<int>(parse_numbers(val, key)[0]);
            else if (key == "height") s.height = static_cast<int>(parse_numbers(val, key)[0]);
            else if (key == "frames") s.frame_count = static_cast<int>(parse_numbers(val, key)[0]);
            else if (key == "background") s.background = parse_color(val, key);
            else if (key == "noise_sigma") s.noise_sigma = parse_numbers(val, key)[0];
            else if (key == "seed") s.seed = static_cast<std::uint32_t>(parse_numbers(val, key)[0]);
            else throw ScriptError("line " + std::to_string(lineno) + ": unknown scene key '" + key + "'");
        } else {
            if (key == "id") cur->id = static_cast<int>(parse_numbers(val, key)[0]);
            else if (key == "shape") {
                if (val == "rect" || val == "rectangle") cur->shape = ObjectShape::Rectangle;
                else if (val == "ellipse") cur->shape = ObjectShape::Ellipse;
                else throw ScriptError("unknown shape '" + val + "'");
            } else if (key == "size") {
                auto nums = parse_numbers(val, key);
                if (nums.size() == 1) nums = {nums[0], nums[0]};
                if (nums.size() != 2) throw ScriptError("'size' needs 1 or 2 values");
                cur->size_w = static_cast<int>(nums[0]);
                cur->size_h = static_cast<int>(nums[1]);
            } else if (key == "color") cur->color = parse_color(val, key);
            else if (key == "path") cur->path = parse_path(val);
            else throw ScriptError("line " + std::to_string(lineno) + ": unknown object key '" + key + "'");
        }
    }
    if (s.width < 1 || s.height < 1 || s.frame_count < 1) throw ScriptError("bad scene dimensions");
    for (const SceneObject& o : s.objects) {
        if (o.path.empty()) throw ScriptError("object " + std::to_string(o.id) + " has no path");
        if (o.size_w < 1 || o.size_h < 1) throw ScriptError("object size must be positive");
    }
    return s;
}

SceneScript load_scene_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open script " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_script(buf.str());
}

std::string truth_json_line(int frame, const std::vector<TruthObject>& objects) {
    nlohmann::json j;
    j["frame"] = frame;
    j["objects"] = nlohmann::json::array();
    for (const TruthObject& t : objects) {
        nlohmann::json o;
        o["id"] = t.id;
        o["centroid"] = {t.centroid.x, t.centroid.y};
        o["bbox"] = {t.bbox.x_min, t.bbox.y_min, t.bbox.x_max, t.bbox.y_max};
        o["visible"] = t.visible;
        if (t.occluding_group) o["occluding_group"] = *t.occluding_group;
        j["objects"].push_back(std::move(o));
    }
    return j.dump();
}

}  // namespace tracklet
