#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "tracklet/config.hpp"
#include "tracklet/pipeline.hpp"
#include "tracklet/synthgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitRuntime = 4;

int cmd_run(const std::string& config_path, const std::string& input_override,
            const std::string& out_override, bool annotate_flag, bool dump) {
    tracklet::PipelineConfig config;
    if (!config_path.empty()) config = tracklet::load_config(config_path);
    if (!input_override.empty()) config.input_dir = input_override;
    if (!out_override.empty()) config.out_dir = out_override;
    if (annotate_flag) config.annotate = true;

    if (dump) {
        std::fputs(tracklet::dump_config(config).c_str(), stdout);
        return kExitOk;
    }
    if (config.input_dir.empty()) throw tracklet::ConfigError("no input directory configured");

    tracklet::SequenceManifest manifest;
    try {
        manifest = tracklet::open_manifest(config.input_dir, config.input_pattern,
                                           config.input_first, config.input_count,
                                           config.input_channels);
    } catch (const tracklet::IoFailure& e) {
        throw tracklet::InputError(e.what());
    }

    tracklet::Pipeline pipeline(config);
    tracklet::ResultWriter writer(config.out_dir, config.annotate);
    for (int i = manifest.first; i < manifest.first + manifest.count; ++i) {
        tracklet::Frame frame;
        try {
            frame = tracklet::read_sequence_frame(manifest, i);
        } catch (const std::exception& e) {
            throw tracklet::InputError(e.what());
        }
        try {
            writer.write(pipeline.process(frame), frame);
        } catch (const std::exception& e) {
            throw std::runtime_error("frame " + std::to_string(i) + ": " + e.what());
        }
    }
    writer.close();
    std::fprintf(stderr, "processed %d frames -> %s\n", manifest.count, config.out_dir.c_str());
    return kExitOk;
}

int cmd_synth(const std::string& script_path, const std::string& out_dir) {
    tracklet::SceneScript script;
    try {
        script = tracklet::load_scene_script(script_path);
    } catch (const tracklet::IoFailure& e) {
        throw tracklet::InputError(e.what());
    }
    tracklet::RenderedScene scene = tracklet::render(script);

    std::filesystem::create_directories(out_dir);
    for (const tracklet::Frame& f : scene.frames) {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%06d.ppm", f.index);
        tracklet::write_frame(f, (std::filesystem::path(out_dir) / name).string());
    }
    std::ofstream truth(std::filesystem::path(out_dir) / "truth.jsonl", std::ios::trunc);
    if (!truth) throw tracklet::IoFailure("cannot open truth.jsonl in " + out_dir);
    for (int f = 0; f < script.frame_count; ++f) {
        truth << tracklet::truth_json_line(f, scene.truth.frames[f]) << "\n";
    }
    std::fprintf(stderr, "rendered %d frames -> %s\n", script.frame_count, out_dir.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch multi-object tracker over PGM/PPM frame sequences"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the tracking pipeline over a frame sequence");
    std::string config_path, input_dir, out_dir;
    bool annotate = false, dump = false;
    run->add_option("--config", config_path, "pipeline config file (key = value lines)");
    run->add_option("--input", input_dir, "input frame directory (overrides input_dir)");
    run->add_option("--out", out_dir, "output directory (overrides out_dir)");
    run->add_flag("--annotate", annotate, "write annotated frames");
    run->add_flag("--dump-config", dump, "print the resolved configuration and exit");

    auto* synth = app.add_subcommand("synth", "render a synthetic scene with ground truth");
    std::string script_path, synth_out;
    synth->add_option("--script", script_path, "scene script file")->required();
    synth->add_option("--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, input_dir, out_dir, annotate, dump);
        return cmd_synth(script_path, synth_out);
    } catch (const tracklet::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const tracklet::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const tracklet::ScriptError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
