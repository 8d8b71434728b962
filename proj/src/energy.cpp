#include "tgs/energy.hpp"

#include "tgs/error.hpp"
#include "tgs/segments.hpp"

namespace tgs {

namespace {

struct Field {
    const char* key;
    double PowerProfile::*member;
};

constexpr Field kFields[] = {
    {"thermal_only", &PowerProfile::thermal_only},
    {"rgb_only", &PowerProfile::rgb_only},
    {"rgb_thermal", &PowerProfile::rgb_thermal},
    {"rgb_network_stream", &PowerProfile::rgb_network_stream},
    {"rgb_thermal_model", &PowerProfile::rgb_thermal_model},
    {"patch_input", &PowerProfile::patch_input},
    {"patch_io", &PowerProfile::patch_io},
    {"full_input", &PowerProfile::full_input},
    {"full_io", &PowerProfile::full_io},
    {"reference_queries_per_hour", &PowerProfile::reference_queries_per_hour},
};

}  // namespace

void PowerProfile::validate() const {
    for (const auto& f : kFields)
        if (!(this->*f.member > 0.0)) throw ConfigError(std::string("power profile: ") + f.key + " must be > 0");
    if (rgb_network_stream < rgb_only) throw ConfigError("power profile: rgb_network_stream must be >= rgb_only");
}

bool PowerProfile::set(const std::string& key, const std::string& value) {
    for (const auto& f : kFields) {
        if (key == f.key) {
            this->*f.member = parse_double(key, value);
            return true;
        }
    }
    return false;
}

void PowerProfile::apply(const KeyValues& kv) {
    for (const auto& [k, v] : kv)
        if (!set(k, v)) throw ConfigError("unknown power profile key '" + k + "'");
    validate();
}

nlohmann::ordered_json PowerProfile::to_json() const {
    nlohmann::ordered_json j;
    for (const auto& f : kFields) j[f.key] = this->*f.member;
    return j;
}

double EnergyReport::component(const std::string& key) const {
    for (const auto& [k, v] : components)
        if (k == key) return v;
    throw ArgumentError("energy report has no component '" + key + "'");
}

nlohmann::ordered_json EnergyReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    for (const auto& [k, v] : components) j["components_mwh"][k] = v;
    j["total_mwh"] = total;
    return j;
}

EnergyReport device_energy(const SampleTrace& trace, std::span<const FrameRecord> records, FrameDims rgb,
                           const PowerProfile& profile, double hours, DevicePipeline pipeline) {
    if (!(hours > 0.0)) throw ArgumentError("device_energy: hours must be > 0");
    profile.validate();
    const double ratio = pixel_usage(trace, records, rgb).ratio();
    const double network = ratio * (profile.rgb_network_stream - profile.rgb_only) * hours;

    EnergyReport r;
    if (pipeline == DevicePipeline::continuous_stream) {
        r.name = "device:continuous_stream";
        r.components = {{"rgb_sensor", profile.rgb_only * hours}, {"network", network}};
    } else {
        r.name = "device:adaptive";
        r.components = {{"sensors_and_model", profile.rgb_thermal_model * hours}, {"network", network}};
    }
    for (const auto& [_, v] : r.components) r.total += v;
    return r;
}

EnergyReport phone_energy(std::int64_t queries, const PowerProfile& profile, PhoneMode mode, bool with_output) {
    profile.validate();
    if (queries < 0) throw ArgumentError("phone_energy: negative query count");
    double per_hour = 0.0;
    std::string key;
    if (mode == PhoneMode::patch) {
        per_hour = with_output ? profile.patch_io : profile.patch_input;
        key = with_output ? "patch_io" : "patch_input";
    } else {
        per_hour = with_output ? profile.full_io : profile.full_input;
        key = with_output ? "full_io" : "full_input";
    }
    EnergyReport r;
    r.name = "phone:" + key;
    r.components = {{"inference", static_cast<double>(queries) * per_hour / profile.reference_queries_per_hour}};
    r.total = r.components.front().second;
    return r;
}

EnergyReport phone_energy(const SampleTrace& trace, const PowerProfile& profile, PhoneMode mode, bool with_output) {
    return phone_energy(static_cast<std::int64_t>(trace.entries.size()), profile, mode, with_output);
}

double reduction_percent(double ours, double baseline) {
    if (!(baseline > 0.0)) throw ArgumentError("reduction: baseline total must be > 0");
    return 100.0 * (baseline - ours) / baseline;
}

double reduction_report(const EnergyReport& ours, const EnergyReport& baseline) {
    return reduction_percent(ours.total, baseline.total);
}

}  // namespace tgs
