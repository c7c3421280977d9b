#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracklet {

/// Raster frame, row-major, top-left origin. Gray (1 channel) or RGB (3).
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
    int index = 0;

    std::uint8_t at(int x, int y, int c = 0) const {
        return data[static_cast<std::size_t>(y * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return data[static_cast<std::size_t>(y * width + x) * channels + c];
    }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::size_t expected_size() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
};

struct MalformedHeader : std::runtime_error {
    explicit MalformedHeader(const std::string& what) : std::runtime_error(what) {}
};
struct TruncatedPayload : std::runtime_error {
    explicit TruncatedPayload(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedMaxval : std::runtime_error {
    explicit UnsupportedMaxval(const std::string& what) : std::runtime_error(what) {}
};
struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};
struct AlreadyGray : std::runtime_error {
    explicit AlreadyGray(const std::string& what) : std::runtime_error(what) {}
};

/// Decode a binary PGM (P5) or PPM (P6) file with maxval 255.
Frame read_frame(const std::string& path);

/// Encode as P5 (1 channel) or P6 (3 channels). Round-trips bit-exactly.
void write_frame(const Frame& frame, const std::string& path);

/// Rec.601 luma: round(0.299 R + 0.587 G + 0.114 B). Throws AlreadyGray on 1-channel input.
Frame to_grayscale(const Frame& frame);

/// A numbered sequence of frame files on disk.
struct SequenceManifest {
    std::string directory;
    std::string pattern = "frame_%06d.ppm";  // exactly one %d-style conversion
    int first = 0;
    int count = 0;
    int channels = 3;
};

/// Path of the i-th file (i is an absolute index, not an offset).
std::string frame_path(const SequenceManifest& m, int index);

/// Validate the manifest: count >= 1 and every referenced file exists.
/// count == 0 scans forward from `first` until the first missing file.
SequenceManifest open_manifest(const std::string& directory, const std::string& pattern,
                               int first, int count, int channels);

/// Read frame `index` (absolute); sets Frame::index and checks declared channels.
Frame read_sequence_frame(const SequenceManifest& m, int index);

}  // namespace tracklet
