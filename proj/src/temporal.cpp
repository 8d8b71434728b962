#include "tgs/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tgs/error.hpp"

namespace tgs {

void SamplerConfig::validate() const {
    if (!(fps_min > 0.0)) throw ConfigError("fps_min must be > 0");
    if (!(fps_min <= fps_max)) throw ConfigError("fps_min must be <= fps_max");
    if (!(fps_max <= base_rate)) throw ConfigError("fps_max must be <= base_rate");
    if (window < 2) throw ConfigError("T must be >= 2");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

bool SamplerConfig::set(const std::string& key, const std::string& value) {
    if (key == "T" || key == "window") {
        auto v = parse_int(key, value);
        if (v < 0) throw ConfigError("T must be non-negative");
        window = static_cast<std::size_t>(v);
    } else if (key == "fps_min") {
        fps_min = parse_double(key, value);
    } else if (key == "fps_max") {
        fps_max = parse_double(key, value);
    } else if (key == "epsilon") {
        epsilon = parse_double(key, value);
    } else if (key == "base_rate") {
        base_rate = parse_double(key, value);
    } else if (key == "degenerate_policy") {
        if (value == "min_rate") degenerate_policy = DegeneratePolicy::min_rate;
        else if (value == "max_rate") degenerate_policy = DegeneratePolicy::max_rate;
        else throw ConfigError("degenerate_policy must be min_rate or max_rate");
    } else {
        return false;
    }
    return true;
}

void SamplerConfig::apply(const KeyValues& kv) {
    for (const auto& [k, v] : kv)
        if (!set(k, v)) throw ConfigError("unknown sampler setting '" + k + "'");
    validate();
}

nlohmann::ordered_json SamplerConfig::to_json() const {
    nlohmann::ordered_json j;
    j["T"] = window;
    j["fps_min"] = fps_min;
    j["fps_max"] = fps_max;
    j["epsilon"] = epsilon;
    j["degenerate_policy"] = degenerate_policy == DegeneratePolicy::min_rate ? "min_rate" : "max_rate";
    j["base_rate"] = base_rate;
    return j;
}

std::string canonical_variant_name(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '-', '_');
    return n;
}

SamplerConfig variant_preset(const std::string& name) {
    const std::string n = canonical_variant_name(name);
    SamplerConfig c;
    if (n == "thor_high") {
        c.window = 32;
        c.fps_max = 4.0;
        c.fps_min = 1.0 / 8;
    } else if (n == "thor_mid") {
        c.window = 64;
        c.fps_max = 1.0;
        c.fps_min = 1.0 / 16;
    } else if (n == "thor_low") {
        c.window = 128;
        c.fps_max = 0.5;
        c.fps_min = 1.0 / 32;
    } else {
        throw ConfigError("unknown variant '" + name + "' (expected thor-high, thor-mid or thor-low)");
    }
    // Sensor noise alone moves the window means by ~1e-4; a larger epsilon
    // keeps steady scenes at the floor rate instead of chasing that jitter.
    c.epsilon = kPresetEpsilon;
    return c;
}

double fps_from_means(std::span<const double> w, double wi, const SamplerConfig& config) {
    if (w.empty()) throw ArgumentError("update_fps: empty window");
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    const WindowStats stats{*lo, *hi};
    if (stats.range() < config.epsilon)
        return config.degenerate_policy == DegeneratePolicy::min_rate ? config.fps_min : config.fps_max;

    // epsilon only guards the denominator; the window maximum maps to r = 1.
    // Both extremes return the configured rate itself, since fmin + (fmax - fmin)
    // need not round back to fmax.
    if (wi <= stats.min) return config.fps_max;
    const double r = wi >= stats.max ? 1.0 : (wi - stats.min) / (stats.range() + config.epsilon);
    const double s = 1.0 - r;
    const double f = config.fps_min + (config.fps_max - config.fps_min) * s;
    return std::clamp(f, config.fps_min, config.fps_max);
}

double update_fps(const SimilarityWindow& window, const SamplerConfig& config, std::int64_t i) {
    return fps_from_means(window.rolling_means(), window.rolling_mean(i), config);
}

TemporalSampler::TemporalSampler(SamplerConfig config)
    : config_(config), window_((config.validate(), config.window)), current_fps_(config.fps_min) {}

Decision TemporalSampler::step(const Embedding& embedding, std::int64_t timestamp_ms) {
    if (last_timestamp_ms_ && timestamp_ms < *last_timestamp_ms_)
        throw SequencingError("timestamp " + std::to_string(timestamp_ms) + " precedes " +
                              std::to_string(*last_timestamp_ms_));

    window_.push(embedding);
    current_fps_ = update_fps(window_, config_, window_.last_index());

    if (last_timestamp_ms_) {
        const double dt_s = static_cast<double>(timestamp_ms - *last_timestamp_ms_) / 1000.0;
        credit_ = std::min(1.0, credit_ + current_fps_ * dt_s);
    }
    last_timestamp_ms_ = timestamp_ms;

    if (credit_ >= 1.0) {
        credit_ -= 1.0;
        last_decision_ms_ = timestamp_ms;
        return Decision::sample;
    }
    return Decision::skip;
}

SampleTrace uniform_sampler(std::span<const FrameRecord> records, double period_s, FrameDims dims) {
    if (!(period_s > 0.0)) throw ArgumentError("uniform period must be > 0");
    SampleTrace trace;
    std::ostringstream name;
    name << "uniform-" << period_s;
    trace.sampler = name.str();
    trace.config = nlohmann::ordered_json{{"period_s", period_s}};
    trace.stream_id = stream_digest(records);

    const double period_ms = period_s * 1000.0;
    struct Cursor {
        std::int64_t start_ms;
        double next_ms;
    };
    std::map<std::string, Cursor> cursors;
    for (const auto& r : records) {
        auto [it, fresh] = cursors.try_emplace(r.participant_id, Cursor{r.timestamp_ms, 0.0});
        Cursor& c = it->second;
        const double rel = static_cast<double>(r.timestamp_ms - c.start_ms);
        if (rel >= c.next_ms) {
            trace.entries.push_back({r.frame_id, r.timestamp_ms, 1000.0 / period_ms, Box{0, 0, dims.width, dims.height}});
            c.next_ms = (std::floor(rel / period_ms) + 1.0) * period_ms;
        }
    }
    return trace;
}

namespace {

nlohmann::ordered_json entry_json(const TraceEntry& e) {
    nlohmann::ordered_json j;
    j["frame_id"] = e.frame_id;
    j["t_ms"] = e.timestamp_ms;
    j["fps"] = e.fps;
    if (e.crop) j["crop"] = {e.crop->x, e.crop->y, e.crop->w, e.crop->h};
    else j["crop"] = nullptr;
    return j;
}

}  // namespace

std::string trace_to_string(const SampleTrace& trace) {
    std::string out;
    nlohmann::ordered_json header;
    header["trace"]["sampler"] = trace.sampler;
    header["trace"]["config"] = trace.config.is_null() ? nlohmann::ordered_json::object() : trace.config;
    header["trace"]["stream"] = trace.stream_id;
    header["trace"]["count"] = trace.entries.size();
    out += header.dump();
    out += '\n';
    for (const auto& e : trace.entries) {
        out += entry_json(e).dump();
        out += '\n';
    }
    return out;
}

void write_trace(const SampleTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << trace_to_string(trace);
    if (!out) throw IoError("write failed: " + path.string());
}

SampleTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    SampleTrace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            if (j.contains("trace")) {
                const auto& h = j["trace"];
                trace.sampler = h.value("sampler", "");
                trace.config = h.value("config", nlohmann::ordered_json::object());
                trace.stream_id = h.value("stream", "");
                continue;
            }
            TraceEntry e;
            e.frame_id = j.at("frame_id").get<std::int64_t>();
            e.timestamp_ms = j.at("t_ms").get<std::int64_t>();
            e.fps = j.at("fps").get<double>();
            const auto& crop = j.at("crop");
            if (!crop.is_null()) {
                if (!crop.is_array() || crop.size() != 4)
                    throw ParseError("trace line " + std::to_string(line_no) + ": crop must be [x,y,w,h] or null");
                e.crop = Box{crop[0].get<int>(), crop[1].get<int>(), crop[2].get<int>(), crop[3].get<int>()};
            }
            if (!trace.entries.empty() && e.frame_id <= trace.entries.back().frame_id)
                throw ValidationError("trace line " + std::to_string(line_no) + ": frame_id not strictly increasing");
            trace.entries.push_back(e);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace tgs
