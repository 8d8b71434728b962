#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgs/frames.hpp"
#include "tgs/temporal.hpp"

namespace tgs {

enum class LengthBin { short_, medium, long_ };
inline constexpr std::array<LengthBin, 3> kAllBins{LengthBin::short_, LengthBin::medium, LengthBin::long_};

const char* to_string(LengthBin bin);

// short: len < t1; medium: t1 <= len < t2; long: len >= t2 (seconds).
struct LengthThresholds {
    double t1_s = 60.0;
    double t2_s = 162.0;

    // Reported study thresholds: one minute and 2.7 minutes.
    static LengthThresholds study_defaults() { return {60.0, 162.0}; }
    LengthBin bin_of(double length_s) const;
};

// Head/tail breaks with two nested mean splits: t1 = mean of all lengths,
// t2 = mean of the lengths above t1. Throws DegenerateError for an empty or
// constant sample.
LengthThresholds head_tail_thresholds(std::span<const double> lengths_s);

struct SegmentBins {
    LengthThresholds thresholds;
    std::map<std::int64_t, LengthBin> bin_of;  // segment_id -> bin
};

SegmentBins bin_segments(std::span<const ActivitySegment> segments, const LengthThresholds& thresholds);

struct BinCoverage {
    std::int64_t covered = 0;
    std::int64_t total = 0;
    double fraction() const { return total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total); }
};

struct CoverageReport {
    int min_frames = 4;
    std::map<LengthBin, BinCoverage> per_bin;
    BinCoverage overall;
    std::map<std::int64_t, std::int64_t> sampled_frames;  // segment_id -> count

    nlohmann::ordered_json to_json() const;
};

// A sampled frame counts toward the segment of its participant whose
// [start, end) interval contains its timestamp. A segment is covered when it
// receives at least min_frames sampled frames. Throws ConsistencyError when
// the trace references a frame absent from `records`.
CoverageReport coverage(const SampleTrace& trace, std::span<const FrameRecord> records,
                        std::span<const ActivitySegment> segments, const SegmentBins& bins, int min_frames = 4);

struct PixelCount {
    std::int64_t sampled = 0;
    std::int64_t total = 0;
    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(sampled) / static_cast<double>(total); }
};

struct UsageReport {
    PixelCount overall;
    std::map<std::string, PixelCount> per_participant;

    double ratio() const { return overall.ratio(); }
    nlohmann::ordered_json to_json() const;
};

// Sampled pixels are crop areas (full frame when crop is null); the total is
// frame area times every frame in `records`.
UsageReport pixel_usage(const SampleTrace& trace, std::span<const FrameRecord> records, FrameDims rgb);

// One sampler's row in a coverage/usage comparison.
struct ComparisonRow {
    std::string sampler;
    CoverageReport coverage;
    UsageReport usage;
};

std::string coverage_table_csv(std::span<const ComparisonRow> rows);
// Rows = participants, columns = samplers, cells = percent of pixels used.
std::string participant_usage_csv(std::span<const ComparisonRow> rows);

}  // namespace tgs
