#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgs/box.hpp"
#include "tgs/frames.hpp"
#include "tgs/kvconfig.hpp"
#include "tgs/similarity.hpp"

namespace tgs {

// What update_fps does when every in-window rolling mean is equal (range
// below epsilon). A flat window means sustained activity, so the default
// drops to the minimum rate; max_rate keeps the literal arithmetic
// (r = 0, s = 1, f = fps_max).
enum class DegeneratePolicy { min_rate, max_rate };

struct SamplerConfig {
    std::size_t window = 32;  // T, frames
    double fps_min = 0.125;
    double fps_max = 4.0;
    double epsilon = 1e-8;
    DegeneratePolicy degenerate_policy = DegeneratePolicy::min_rate;
    double base_rate = 4.0;  // capture rate of the thermal stream, frames/s

    // Throws ConfigError unless 0 < fps_min <= fps_max <= base_rate, T >= 2, epsilon > 0.
    void validate() const;

    // Applies one `key=value` setting (keys: T, fps_min, fps_max, epsilon,
    // degenerate_policy, base_rate). Returns false for unknown keys.
    bool set(const std::string& key, const std::string& value);
    void apply(const KeyValues& kv);

    nlohmann::ordered_json to_json() const;
};

// Named presets: thor_high (T=32, fps 1/8..4), thor_mid (T=64, 1/16..1),
// thor_low (T=128, 1/32..0.5), all with epsilon kPresetEpsilon. '-' and '_'
// are interchangeable in names.
inline constexpr double kPresetEpsilon = 1e-3;
SamplerConfig variant_preset(const std::string& name);
std::string canonical_variant_name(const std::string& name);

// One dynamic-FPS update for the newest window entry i:
//   r = (w_i - min w) / (max w - min w + eps);  s = 1 - r;
//   f = fps_min + (fps_max - fps_min) * s
// A window whose rolling means span less than epsilon is resolved by the
// config's degenerate policy.
double update_fps(const SimilarityWindow& window, const SamplerConfig& config, std::int64_t i);

// The same update over explicit rolling means `w`, for an entry whose own
// mean is `wi`.
double fps_from_means(std::span<const double> w, double wi, const SamplerConfig& config);

enum class Decision { skip, sample };

// Token-bucket scheduler driven by the dynamic FPS. Credit starts at 1 so the
// first frame of a stream is always sampled; each step adds fps * dt (capped
// at 1) and a frame is sampled when credit reaches 1.
class TemporalSampler {
public:
    explicit TemporalSampler(SamplerConfig config);

    Decision step(const Embedding& embedding, std::int64_t timestamp_ms);

    const SamplerConfig& config() const { return config_; }
    const SimilarityWindow& window() const { return window_; }
    double current_fps() const { return current_fps_; }
    double credit() const { return credit_; }
    std::optional<std::int64_t> last_decision_ms() const { return last_decision_ms_; }

private:
    SamplerConfig config_;
    SimilarityWindow window_;
    double current_fps_;
    double credit_ = 1.0;
    std::optional<std::int64_t> last_timestamp_ms_;
    std::optional<std::int64_t> last_decision_ms_;
};

struct TraceEntry {
    std::int64_t frame_id = 0;
    std::int64_t timestamp_ms = 0;
    double fps = 0.0;
    std::optional<Box> crop;  // nullopt means the full frame

    bool operator==(const TraceEntry&) const = default;
};

struct SampleTrace {
    std::string sampler;                  // e.g. "thor-high" or "uniform-2"
    nlohmann::ordered_json config;        // settings in effect
    std::string stream_id;                // digest of the source manifest
    std::vector<TraceEntry> entries;      // strictly increasing frame_id
};

// Samples the first frame at or after each multiple of period_s from the
// start of each participant's stream. Crops are full-frame boxes of `dims`.
SampleTrace uniform_sampler(std::span<const FrameRecord> records, double period_s, FrameDims dims);

// Trace JSONL: a header line {"trace": {...}} followed by one
// {frame_id, t_ms, fps, crop} object per sampled frame.
void write_trace(const SampleTrace& trace, const std::filesystem::path& path);
std::string trace_to_string(const SampleTrace& trace);
SampleTrace read_trace(const std::filesystem::path& path);

}  // namespace tgs
