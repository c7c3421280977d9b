#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tracklet/synthgen.hpp"

using namespace tracklet;

TEST_CASE("an objectless noiseless scene renders the background exactly") {
    SceneScript s;
    s.width = 12;
    s.height = 9;
    s.frame_count = 4;
    s.background = {40, 50, 60};
    RenderedScene out = render(s);
    REQUIRE(out.frames.size() == 4);
    for (const Frame& f : out.frames) {
        for (int y = 0; y < f.height; ++y) {
            for (int x = 0; x < f.width; ++x) {
                CHECK(f.at(x, y, 0) == 40);
                CHECK(f.at(x, y, 1) == 50);
                CHECK(f.at(x, y, 2) == 60);
            }
        }
    }
}

TEST_CASE("a static 8x8 rectangle rasterizes and reports exactly") {
    SceneScript s;
    s.width = 64;
    s.height = 64;
    s.frame_count = 1;
    s.background = {0, 0, 0};
    SceneObject o;
    o.id = 7;
    o.size_w = o.size_h = 8;
    o.color = {200, 10, 10};
    o.path = {{0, {23.5, 23.5}}};  // top-left lands on (20,20)
    s.objects = {o};

    RenderedScene out = render(s);
    const Frame& f = out.frames[0];
    int non_bg = 0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool painted = f.at(x, y, 0) != 0;
            if (painted) {
                ++non_bg;
                CHECK(x >= 20);
                CHECK(x <= 27);
                CHECK(y >= 20);
                CHECK(y <= 27);
            }
        }
    }
    CHECK(non_bg == 64);
    const TruthObject& t = out.truth.frames[0][0];
    CHECK(t.id == 7);
    CHECK(t.centroid.x == doctest::Approx(23.5));
    CHECK(t.centroid.y == doctest::Approx(23.5));
    CHECK(t.bbox.x_min == 20);
    CHECK(t.bbox.x_max == 27);
    CHECK(t.visible);
    CHECK(!t.occluding_group);
}

TEST_CASE("rendering is bit-identical for the same script and seed") {
    SceneScript s;
    s.width = 32;
    s.height = 32;
    s.frame_count = 6;
    s.background = {100, 100, 100};
    s.noise_sigma = 3.0;
    s.seed = 99;
    SceneObject o;
    o.id = 1;
    o.size_w = o.size_h = 6;
    o.color = {220, 40, 40};
    o.path = {{0, {8.5, 8.5}}, {5, {20.5, 20.5}}};
    s.objects = {o};

    RenderedScene a = render(s);
    RenderedScene b = render(s);
    for (int f = 0; f < 6; ++f) REQUIRE(a.frames[f].data == b.frames[f].data);

    s.seed = 100;
    RenderedScene c = render(s);
    bool all_same = true;
    for (int f = 0; f < 6; ++f) all_same = all_same && (a.frames[f].data == c.frames[f].data);
    CHECK(!all_same);
}

TEST_CASE("out-of-bounds paths are rejected") {
    SceneScript s;
    s.width = 20;
    s.height = 20;
    s.frame_count = 3;
    SceneObject o;
    o.size_w = o.size_h = 8;
    o.path = {{0, {10, 10}}, {2, {19, 10}}};
    s.objects = {o};
    CHECK_THROWS_AS(render(s), ObjectOutOfBounds);
}

TEST_CASE("crossing script produces one contiguous centered occlusion interval") {
    CrossingParams p;
    RenderedScene out = render(crossing_script(p));
    int first = -1, last = -1;
    bool contiguous = true;
    for (int f = 0; f < p.frame_count; ++f) {
        const bool occluding = out.truth.frames[f][0].occluding_group.has_value();
        if (occluding) {
            if (first < 0) first = f;
            if (last >= 0 && f != last + 1) contiguous = false;
            last = f;
        }
        if (occluding) {
            CHECK(*out.truth.frames[f][0].occluding_group == std::vector<int>{1, 2});
        }
    }
    REQUIRE(first >= 0);
    CHECK(contiguous);
    const double mid = (first + last) / 2.0;
    CHECK(std::abs(mid - p.frame_count / 2.0) <= 1.0);
}

TEST_CASE("crossing ground truth moves at constant velocity outside keyframe ends") {
    CrossingParams p;
    p.speed_a = 1.5;
    p.speed_b = 1.0;
    SceneScript s = crossing_script(p);
    // continuous centers step uniformly
    for (int f = 1; f + 1 < p.frame_count; ++f) {
        Point a0 = object_center(s.objects[0], f - 1);
        Point a1 = object_center(s.objects[0], f);
        CHECK(a1.x - a0.x == doctest::Approx(p.speed_a).epsilon(1e-9));
        Point b0 = object_center(s.objects[1], f - 1);
        Point b1 = object_center(s.objects[1], f);
        CHECK(b1.x - b0.x == doctest::Approx(-p.speed_b).epsilon(1e-9));
    }
    // both objects stay inside the frame for the whole run
    RenderedScene out = render(s);
    CHECK(out.frames.size() == static_cast<std::size_t>(p.frame_count));
}

TEST_CASE("script files parse into scenes") {
    const std::string text = R"(
# small scene
width = 48
height = 32
frames = 10
background = 30 30 30
noise_sigma = 0
seed = 5

[object]
id = 3
shape = rect
size = 6 4
color = 210 50 50
path = 0:10.5,15.5; 9:30.5,15.5

[object]
shape = ellipse
size = 8
color = 50 210 50
path = 0:36,16
)";
    SceneScript s = parse_scene_script(text);
    CHECK(s.width == 48);
    CHECK(s.frame_count == 10);
    REQUIRE(s.objects.size() == 2);
    CHECK(s.objects[0].id == 3);
    CHECK(s.objects[0].size_h == 4);
    CHECK(s.objects[1].shape == ObjectShape::Ellipse);
    CHECK(s.objects[1].path[0].center.x == doctest::Approx(36.0));
    render(s);  // should be drawable

    CHECK_THROWS_AS(parse_scene_script("bogus_key = 1\n"), ScriptError);
    CHECK_THROWS_AS(parse_scene_script("width = 8\nheight = 8\nframes = 1\n[object]\nsize = 2\n"),
                    ScriptError);  // missing path
}

TEST_CASE("truth lines are valid single-line JSON") {
    SceneScript s;
    s.width = 32;
    s.height = 32;
    s.frame_count = 1;
    SceneObject o;
    o.id = 1;
    o.size_w = o.size_h = 4;
    o.path = {{0, {10, 10}}};
    s.objects = {o};
    RenderedScene out = render(s);
    std::string line = truth_json_line(0, out.truth.frames[0]);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"frame\":0") != std::string::npos);
    CHECK(line.find("\"objects\"") != std::string::npos);
}
