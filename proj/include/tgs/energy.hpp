#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tgs/frames.hpp"
#include "tgs/kvconfig.hpp"
#include "tgs/temporal.hpp"

namespace tgs {

// Measured component draws in mWh per reference hour.
struct PowerProfile {
    // wearable device
    double thermal_only = 50.0;
    double rgb_only = 60.0;
    double rgb_thermal = 65.0;
    double rgb_network_stream = 80.0;
    double rgb_thermal_model = 69.0;
    // phone inference
    double patch_input = 31.0;
    double patch_io = 36.5;
    double full_input = 80.0;
    double full_io = 131.0;
    // Queries per reference hour behind the phone readings; one query per
    // sampled frame.
    double reference_queries_per_hour = 900.0;

    void validate() const;
    bool set(const std::string& key, const std::string& value);
    void apply(const KeyValues& kv);
    nlohmann::ordered_json to_json() const;
};

struct EnergyReport {
    std::string name;
    std::vector<std::pair<std::string, double>> components;  // mWh
    double total = 0.0;                                       // sum of components

    double component(const std::string& key) const;
    nlohmann::ordered_json to_json() const;
};

// Device pipelines:
//  continuous_stream: RGB sensor always on, frames streamed to the phone.
//    fixed = rgb_only * h; network = ratio * (rgb_network_stream - rgb_only) * h
//  adaptive: RGB + thermal sensing with the on-device sampling model.
//    fixed = rgb_thermal_model * h; network = ratio * (rgb_network_stream - rgb_only) * h
// where ratio is the trace's pixel-usage ratio against `records`.
enum class DevicePipeline { continuous_stream, adaptive };

EnergyReport device_energy(const SampleTrace& trace, std::span<const FrameRecord> records, FrameDims rgb,
                           const PowerProfile& profile, double hours, DevicePipeline pipeline);

enum class PhoneMode { patch, full };

// sampled frames * profile[mode, with_output] / reference_queries_per_hour
EnergyReport phone_energy(const SampleTrace& trace, const PowerProfile& profile, PhoneMode mode, bool with_output);
EnergyReport phone_energy(std::int64_t queries, const PowerProfile& profile, PhoneMode mode, bool with_output);

// (baseline.total - ours.total) / baseline.total, in percent.
double reduction_report(const EnergyReport& ours, const EnergyReport& baseline);
double reduction_percent(double ours, double baseline);

}  // namespace tgs
