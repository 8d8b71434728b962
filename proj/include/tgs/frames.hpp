#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tgs {

inline constexpr int kThermalWidth = 32;
inline constexpr int kThermalHeight = 24;
inline constexpr int kRgbWidth = 956;
inline constexpr int kRgbHeight = 720;
inline constexpr std::int64_t kBasePeriodMs = 250;  // 4 FPS capture

// 16-bit PGM storage: temp = sample / 100 - 40.
inline constexpr double kThermalMinC = -40.0;
inline constexpr double kThermalMaxC = 615.35;

struct FrameDims {
    int width = 0;
    int height = 0;

    std::int64_t area() const { return std::int64_t{width} * height; }
    bool operator==(const FrameDims&) const = default;
};

struct ThermalFrame {
    std::int64_t timestamp_ms = 0;
    int width = kThermalWidth;
    int height = kThermalHeight;
    std::vector<double> temps;  // row-major, degrees Celsius

    double at(int x, int y) const { return temps[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return temps[static_cast<std::size_t>(y) * width + x]; }

    // Throws ValidationError when the size or any temperature is out of range.
    void validate() const;
};

struct RgbFrame {
    std::int64_t timestamp_ms = 0;
    int width = kRgbWidth;
    int height = kRgbHeight;
    std::vector<std::uint8_t> pixels;  // row-major RGB triplets

    void validate() const;
};

struct FrameRecord {
    std::int64_t frame_id = 0;
    std::int64_t timestamp_ms = 0;
    std::string thermal_path;
    std::string rgb_path;
    std::string participant_id;
    std::optional<std::string> activity_label;
    std::optional<std::int64_t> segment_id;

    bool operator==(const FrameRecord&) const = default;
};

struct ActivitySegment {
    std::int64_t segment_id = 0;
    std::string participant_id;
    std::string label;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;

    double duration_s() const { return static_cast<double>(end_ms - start_ms) / 1000.0; }
    bool contains(std::int64_t t_ms) const { return t_ms >= start_ms && t_ms < end_ms; }
    bool operator==(const ActivitySegment&) const = default;
};

// A manifest loaded into memory. Frame paths are relative to `root`.
struct Stream {
    std::vector<FrameRecord> records;
    std::vector<ActivitySegment> segments;
    std::filesystem::path root;

    std::filesystem::path thermal_path(const FrameRecord& r) const { return root / r.thermal_path; }
    std::filesystem::path rgb_path(const FrameRecord& r) const { return root / r.rgb_path; }
};

// --- netpbm codecs ---------------------------------------------------------

std::vector<std::uint8_t> encode_thermal(const ThermalFrame& frame);
ThermalFrame decode_thermal(std::span<const std::uint8_t> bytes, std::int64_t timestamp_ms = 0);

std::vector<std::uint8_t> encode_rgb(const RgbFrame& frame);
RgbFrame decode_rgb(std::span<const std::uint8_t> bytes, std::int64_t timestamp_ms = 0);

// Reads only the PPM header.
FrameDims probe_rgb_dims(const std::filesystem::path& path);

std::uint16_t temp_to_sample(double temp_c);
double sample_to_temp(std::uint16_t sample);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

ThermalFrame read_thermal(const std::filesystem::path& path, std::int64_t timestamp_ms = 0);
RgbFrame read_rgb(const std::filesystem::path& path, std::int64_t timestamp_ms = 0);

// --- manifests -------------------------------------------------------------

inline constexpr const char* kManifestName = "manifest.jsonl";
inline constexpr const char* kSegmentsName = "segments.jsonl";

// Checks frame_id strictly increasing and per-participant timestamps
// non-decreasing.
void validate_records(std::span<const FrameRecord> records);

// Coalesces consecutive identical labels of one participant into segments.
// A run breaks on a label change, an unlabeled frame, a participant change,
// or a timestamp gap larger than two frame periods. end = last t + period.
std::vector<ActivitySegment> derive_segments(std::span<const FrameRecord> records,
                                             std::int64_t period_ms = kBasePeriodMs);

std::string manifest_line(const FrameRecord& record);
FrameRecord parse_manifest_line(const std::string& line, std::size_t line_no);

// FNV-1a 64 over the manifest lines of `records`, as 16 hex digits. Traces
// carry it so reports can refuse a trace taken from a different stream.
std::string stream_digest(std::span<const FrameRecord> records);

std::string segment_line(const ActivitySegment& segment);
ActivitySegment parse_segment_line(const std::string& line, std::size_t line_no);

// Loads `manifest_path` (a manifest file or a directory containing one).
// A sibling segments.jsonl takes precedence over derived segments.
Stream load_stream(const std::filesystem::path& manifest_path, std::int64_t period_ms = kBasePeriodMs);

// Writes manifest.jsonl and segments.jsonl into out_dir; returns the manifest path.
std::filesystem::path store_stream(std::span<const FrameRecord> records,
                                   std::span<const ActivitySegment> segments,
                                   const std::filesystem::path& out_dir);

}  // namespace tgs
