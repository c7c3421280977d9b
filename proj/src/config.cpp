#include "tracklet/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tracklet {

std::string format_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    std::string s = buf;
    // normalize exponents: 1e-05 -> 1e-5
    auto e = s.find('e');
    if (e != std::string::npos) {
        std::size_t d = e + 1;
        if (d < s.size() && (s[d] == '-' || s[d] == '+')) ++d;
        std::size_t z = d;
        while (z + 1 < s.size() && s[z] == '0') ++z;
        s.erase(d, z - d);
        if (s[e + 1] == '+') s.erase(e + 1, 1);
    }
    return s;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    double d = parse_double(key, v);
    if (d != std::floor(d)) throw ConfigError(key + " must be an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + " must be true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void validate(const PipelineConfig& c) {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(c.adaptive.alpha_bg)) throw ConfigError("alpha_bg must be in (0,1)");
    if (c.adaptive.t_floor <= 0.0) throw ConfigError("t_floor must be > 0");
    if (c.adaptive.t_gain <= 0.0) throw ConfigError("t_gain must be > 0");
    if (!in_unit(c.gmm.alpha)) throw ConfigError("ALPHA must be in (0,1)");
    if (!in_unit(c.gmm.rho)) throw ConfigError("RHO must be in (0,1)");
    if (c.gmm.deviation_sq_threshold <= 0.0) throw ConfigError("DEVIATION_SQ_THRESHOLD must be > 0");
    if (c.gmm.init_variance <= 0.0) throw ConfigError("INIT_VARIANCE must be > 0");
    if (c.gmm.init_mixprop <= 0.0 || c.gmm.init_mixprop > 1.0) {
        throw ConfigError("INIT_MIXPROP must be in (0,1]");
    }
    if (!in_unit(c.gmm.background_threshold)) throw ConfigError("BACKGROUND_THRESHOLD must be in (0,1)");
    if (c.gmm.component_threshold < 1 || c.gmm.component_threshold > 16) {
        throw ConfigError("COMPONENT_THRESHOLD must be in [1,16]");
    }
    if (c.warmup < 0) throw ConfigError("warmup must be >= 0");
    if (c.morph_radius < 0) throw ConfigError("morph_radius must be >= 0");
    if (c.min_area < 1) throw ConfigError("min_area must be >= 1");
    if (c.bins_per_channel < 1 || c.bins_per_channel > 256) {
        throw ConfigError("bins_per_channel must be in [1,256]");
    }
    if (c.assoc.lambda_px <= 0.0) throw ConfigError("lambda_px must be > 0");
    if (c.assoc.max_missed < 0) throw ConfigError("max_missed must be >= 0");
    if (c.assoc.speed_window < 1) throw ConfigError("speed_window must be >= 1");
    if (c.ms_epsilon <= 0.0) throw ConfigError("ms_epsilon must be > 0");
    if (c.ms_max_iter < 1) throw ConfigError("ms_max_iter must be >= 1");
    if (c.ms_gamma < 0.0 || c.ms_gamma > 1.0) throw ConfigError("ms_gamma must be in [0,1]");
    if (c.input_first < 0) throw ConfigError("input_first must be >= 0");
    if (c.input_count < 0) throw ConfigError("input_count must be >= 0");
    if (c.input_channels != 1 && c.input_channels != 3) {
        throw ConfigError("input_channels must be 1 or 3");
    }
}

}  // namespace

void set_config_key(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "bg_model") {
        if (value == "gmm") c.bg_model = BgModelKind::Gmm;
        else if (value == "adaptive") c.bg_model = BgModelKind::Adaptive;
        else throw ConfigError("bg_model must be gmm or adaptive");
    } else if (key == "warmup") c.warmup = parse_int(key, value);
    else if (key == "annotate") c.annotate = parse_bool(key, value);
    else if (key == "input_dir") c.input_dir = value;
    else if (key == "input_pattern") c.input_pattern = value;
    else if (key == "input_first") c.input_first = parse_int(key, value);
    else if (key == "input_count") c.input_count = parse_int(key, value);
    else if (key == "input_channels") c.input_channels = parse_int(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "alpha_bg") c.adaptive.alpha_bg = parse_double(key, value);
    else if (key == "t_floor") c.adaptive.t_floor = parse_double(key, value);
    else if (key == "t_gain") c.adaptive.t_gain = parse_double(key, value);
    else if (key == "ALPHA") c.gmm.alpha = parse_double(key, value);
    else if (key == "RHO") c.gmm.rho = parse_double(key, value);
    else if (key == "DEVIATION_SQ_THRESHOLD") c.gmm.deviation_sq_threshold = parse_double(key, value);
    else if (key == "INIT_VARIANCE") c.gmm.init_variance = parse_double(key, value);
    else if (key == "INIT_MIXPROP") c.gmm.init_mixprop = parse_double(key, value);
    else if (key == "BACKGROUND_THRESHOLD") c.gmm.background_threshold = parse_double(key, value);
    else if (key == "COMPONENT_THRESHOLD") c.gmm.component_threshold = parse_int(key, value);
    else if (key == "morph_radius") c.morph_radius = parse_int(key, value);
    else if (key == "min_area") c.min_area = parse_int(key, value);
    else if (key == "bins_per_channel") c.bins_per_channel = parse_int(key, value);
    else if (key == "hist_downsample") {
        if (value == "sample") c.hist_downsample = HistDownsample::Sample;
        else if (value == "pool") c.hist_downsample = HistDownsample::Pool;
        else throw ConfigError("hist_downsample must be sample or pool");
    } else if (key == "lambda_px") c.assoc.lambda_px = parse_double(key, value);
    else if (key == "max_missed") c.assoc.max_missed = parse_int(key, value);
    else if (key == "speed_window") c.assoc.speed_window = parse_int(key, value);
    else if (key == "refine") {
        if (value == "none") c.refine = RefineKind::None;
        else if (value == "meanshift") c.refine = RefineKind::Meanshift;
        else throw ConfigError("refine must be none or meanshift");
    } else if (key == "ms_epsilon") c.ms_epsilon = parse_double(key, value);
    else if (key == "ms_max_iter") c.ms_max_iter = parse_int(key, value);
    else if (key == "ms_gamma") c.ms_gamma = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            set_config_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const PipelineConfig& c) {
    std::ostringstream out;
    out << "bg_model=" << (c.bg_model == BgModelKind::Gmm ? "gmm" : "adaptive") << "\n";
    out << "warmup=" << c.warmup << "\n";
    out << "annotate=" << (c.annotate ? "true" : "false") << "\n";
    out << "input_dir=" << c.input_dir << "\n";
    out << "input_pattern=" << c.input_pattern << "\n";
    out << "input_first=" << c.input_first << "\n";
    out << "input_count=" << c.input_count << "\n";
    out << "input_channels=" << c.input_channels << "\n";
    out << "out_dir=" << c.out_dir << "\n";
    out << "alpha_bg=" << format_number(c.adaptive.alpha_bg) << "\n";
    out << "t_floor=" << format_number(c.adaptive.t_floor) << "\n";
    out << "t_gain=" << format_number(c.adaptive.t_gain) << "\n";
    out << "ALPHA=" << format_number(c.gmm.alpha) << "\n";
    out << "RHO=" << format_number(c.gmm.rho) << "\n";
    out << "DEVIATION_SQ_THRESHOLD=" << format_number(c.gmm.deviation_sq_threshold) << "\n";
    out << "INIT_VARIANCE=" << format_number(c.gmm.init_variance) << "\n";
    out << "INIT_MIXPROP=" << format_number(c.gmm.init_mixprop) << "\n";
    out << "BACKGROUND_THRESHOLD=" << format_number(c.gmm.background_threshold) << "\n";
    out << "COMPONENT_THRESHOLD=" << c.gmm.component_threshold << "\n";
    out << "morph_radius=" << c.morph_radius << "\n";
    out << "min_area=" << c.min_area << "\n";
    out << "bins_per_channel=" << c.bins_per_channel << "\n";
    out << "hist_downsample=" << (c.hist_downsample == HistDownsample::Sample ? "sample" : "pool")
        << "\n";
    out << "lambda_px=" << format_number(c.assoc.lambda_px) << "\n";
    out << "max_missed=" << c.assoc.max_missed << "\n";
    out << "speed_window=" << c.assoc.speed_window << "\n";
    out << "refine=" << (c.refine == RefineKind::None ? "none" : "meanshift") << "\n";
    out << "ms_epsilon=" << format_number(c.ms_epsilon) << "\n";
    out << "ms_max_iter=" << c.ms_max_iter << "\n";
    out << "ms_gamma=" << format_number(c.ms_gamma) << "\n";
    return out.str();
}

}  // namespace tracklet
