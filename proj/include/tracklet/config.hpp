#pragma once

#include <stdexcept>
#include <string>

#include "tracklet/background.hpp"
#include "tracklet/association.hpp"

namespace tracklet {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

enum class BgModelKind { Gmm, Adaptive };
enum class RefineKind { None, Meanshift };
enum class HistDownsample { Sample, Pool };

/// Fully resolved pipeline configuration. Every key has a default; unknown
/// keys in a config file are rejected.
struct PipelineConfig {
    // pipeline
    BgModelKind bg_model = BgModelKind::Gmm;
    int warmup = 30;
    bool annotate = false;

    // input sequence
    std::string input_dir;
    std::string input_pattern = "frame_%06d.ppm";
    int input_first = 0;
    int input_count = 0;  // 0 = scan until the first missing file
    int input_channels = 3;
    std::string out_dir = "out";

    // background model A
    AdaptiveParams adaptive;

    // background model B (mixture)
    GmmParams gmm;

    // morphology
    int morph_radius = 1;  // 0 disables post-processing

    // regions
    int min_area = 15;
    int bins_per_channel = 8;
    HistDownsample hist_downsample = HistDownsample::Sample;

    // association
    AssocParams assoc;

    // mean-shift refinement
    RefineKind refine = RefineKind::None;
    double ms_epsilon = 0.1;
    int ms_max_iter = 20;
    double ms_gamma = 0.1;
};

/// Parse a flat `key = value` file ('#' comments). Missing keys keep their
/// defaults; unknown keys or malformed values throw ConfigError.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

/// Apply one key=value assignment (the config file grammar, one line).
void set_config_key(PipelineConfig& config, const std::string& key, const std::string& value);

/// Every key as KEY=VALUE lines, in a fixed order, numbers in their shortest
/// form (e.g. 0.02, 1e-5).
std::string dump_config(const PipelineConfig& config);

/// Shortest decimal form used by dump_config.
std::string format_number(double v);

}  // namespace tracklet
