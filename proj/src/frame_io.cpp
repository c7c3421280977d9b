#include "tracklet/frame.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace tracklet {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) continue;
        tok.push_back(static_cast<char>(c));
        while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
            tok.push_back(static_cast<char>(c));
        }
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        }
        return tok;
    }
    return tok;
}

int parse_header_int(std::istream& in, const std::string& field) {
    std::string tok = next_token(in);
    if (tok.empty()) throw MalformedHeader("missing " + field);
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw MalformedHeader("bad " + field + " '" + tok + "'");
    }
}

}  // namespace

Frame read_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);

    std::string magic = next_token(in);
    if (magic != "P5" && magic != "P6") throw MalformedHeader("bad magic '" + magic + "' in " + path);

    Frame f;
    f.channels = (magic == "P5") ? 1 : 3;
    f.width = parse_header_int(in, "width");
    f.height = parse_header_int(in, "height");
    if (f.width < 1 || f.height < 1) throw MalformedHeader("bad dimensions in " + path);
    int maxval = parse_header_int(in, "maxval");
    if (maxval != 255) throw UnsupportedMaxval("maxval " + std::to_string(maxval) + " in " + path);
    // the tokenizer consumed the single whitespace byte after the maxval;
    // the payload starts here
    f.data.resize(f.expected_size());
    in.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != f.data.size()) {
        throw TruncatedPayload(path + ": got " + std::to_string(in.gcount()) + " of " +
                               std::to_string(f.data.size()) + " payload bytes");
    }
    return f;
}

void write_frame(const Frame& frame, const std::string& path) {
    if (frame.channels != 1 && frame.channels != 3) {
        throw IoFailure("unsupported channel count " + std::to_string(frame.channels));
    }
    if (frame.data.size() != frame.expected_size()) {
        throw IoFailure("frame data size does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << (frame.channels == 1 ? "P5" : "P6") << "\n"
        << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.data.size()));
    if (!out) throw IoFailure("write failed for " + path);
}

Frame to_grayscale(const Frame& frame) {
    if (frame.channels == 1) throw AlreadyGray("frame is already single-channel");
    Frame g;
    g.width = frame.width;
    g.height = frame.height;
    g.channels = 1;
    g.index = frame.index;
    g.data.resize(g.expected_size());
    const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.299 * frame.data[i * 3] + 0.587 * frame.data[i * 3 + 1] +
                   0.114 * frame.data[i * 3 + 2];
        long v = std::lround(y);
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        g.data[i] = static_cast<std::uint8_t>(v);
    }
    return g;
}

std::string frame_path(const SequenceManifest& m, int index) {
    // allow exactly one integer conversion in the pattern
    int conversions = 0;
    for (std::size_t i = 0; i < m.pattern.size(); ++i) {
        if (m.pattern[i] != '%') continue;
        if (i + 1 < m.pattern.size() && m.pattern[i + 1] == '%') {
            ++i;
            continue;
        }
        ++conversions;
    }
    if (conversions != 1) throw IoFailure("pattern must contain exactly one %d conversion: " + m.pattern);
    char buf[512];
    std::snprintf(buf, sizeof(buf), m.pattern.c_str(), index);
    std::filesystem::path p(m.directory);
    p /= buf;
    return p.string();
}

SequenceManifest open_manifest(const std::string& directory, const std::string& pattern,
                               int first, int count, int channels) {
    SequenceManifest m;
    m.directory = directory;
    m.pattern = pattern;
    m.first = first;
    m.count = count;
    m.channels = channels;
    namespace fs = std::filesystem;
    if (count == 0) {
        int i = first;
        while (fs::exists(frame_path(m, i))) ++i;
        m.count = i - first;
    }
    if (m.count < 1) throw IoFailure("no frames found in " + directory);
    for (int i = m.first; i < m.first + m.count; ++i) {
        if (!fs::exists(frame_path(m, i))) throw IoFailure("missing frame file " + frame_path(m, i));
    }
    return m;
}

Frame read_sequence_frame(const SequenceManifest& m, int index) {
    Frame f = read_frame(frame_path(m, index));
    if (f.channels != m.channels) {
        throw IoFailure("frame " + std::to_string(index) + " has " + std::to_string(f.channels) +
                        " channels, manifest declares " + std::to_string(m.channels));
    }
    f.index = index;
    return f;
}

}  // namespace tracklet
