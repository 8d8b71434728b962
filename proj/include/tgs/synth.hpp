#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgs/box.hpp"
#include "tgs/frames.hpp"
#include "tgs/recognition.hpp"

namespace tgs {

struct PlannedSegment {
    std::string label;
    double duration_s = 0.0;
    int template_id = 0;
};

struct ParticipantPlan {
    std::string id;
    std::vector<PlannedSegment> segments;
};

struct ScenarioSpec {
    std::vector<ParticipantPlan> participants;
    double transition_s = 2.0;
    double noise_sigma = 0.3;  // degrees Celsius
    double base_rate = 4.0;    // frames per second
    FrameDims rgb_dims{kRgbWidth, kRgbHeight};
    FrameDims thermal_dims{kThermalWidth, kThermalHeight};
    std::uint64_t seed = 42;

    // Throws ConfigError on non-positive durations or rates, negative noise,
    // or durations that are not whole frame periods.
    void validate() const;

    nlohmann::ordered_json to_json() const;
    static ScenarioSpec from_json(const nlohmann::json& j);
    static ScenarioSpec load(const std::filesystem::path& path);
};

// 3 participants, each with 6 short (20-50 s), 6 medium (70-150 s) and 4 long
// (180-400 s) segments in shuffled order, activities drawn from the bundled
// keyword map with no label repeated back to back.
ScenarioSpec reference_scenario(std::uint64_t seed = 42, double noise_sigma = 0.3);

struct Blob {
    double cx = 0.0;  // thermal pixels
    double cy = 0.0;
    double sigma = 2.0;
    double peak_c = 35.0;
};

// A stationary thermal pose: background plus one or two Gaussian hot blobs.
// Template kinds cycle left hand, right hand, both hands by id.
struct PoseTemplate {
    int id = 0;
    double background_c = 22.0;
    std::vector<Blob> blobs;
    std::array<std::uint8_t, 3> background_rgb{};
    std::array<std::uint8_t, 3> object_rgb{};

    // Thermal box (in grid pixels) covering each blob out to 2 sigma.
    std::vector<Box> blob_boxes(FrameDims thermal) const;
};

PoseTemplate make_template(int id, FrameDims thermal = {kThermalWidth, kThermalHeight});

// Noise-free temperature of a template at a thermal pixel center.
double template_temperature(const PoseTemplate& t, double x, double y);

// Frames of a scenario, rendered on demand. Per-frame noise is seeded from
// (seed, frame_id), so any frame can be reproduced in isolation.
class SyntheticCorpus {
public:
    explicit SyntheticCorpus(ScenarioSpec spec);

    const ScenarioSpec& spec() const { return spec_; }
    const std::vector<FrameRecord>& records() const { return records_; }
    const std::vector<ActivitySegment>& segments() const { return segments_; }
    FrameDims rgb_dims() const { return spec_.rgb_dims; }

    ThermalFrame thermal(std::size_t index) const;
    RgbFrame rgb(std::size_t index) const;
    RgbFrame rgb_for_template(int template_id) const;

    // Blend state of a frame: templates (from, to) and weight of `to`.
    struct Blend {
        int from = 0;
        int to = 0;
        double weight = 1.0;
    };
    Blend blend(std::size_t index) const;

    // Times (ms, per participant timeline) of blend midpoints, paired with the
    // index of the first frame of the incoming segment.
    struct Transition {
        std::string participant;
        std::size_t first_index = 0;
        std::int64_t midpoint_ms = 0;
    };
    std::vector<Transition> transitions() const;

private:
    ScenarioSpec spec_;
    std::vector<FrameRecord> records_;
    std::vector<ActivitySegment> segments_;
    std::vector<Blend> blends_;
};

// Writes manifest.jsonl, segments.jsonl, scenario.json, thermal/*.pgm and
// rgb/*.ppm under out_dir. RGB frames are rendered per template and shared by
// all frames showing it; blend frames use the dominant template.
std::filesystem::path generate_corpus(const ScenarioSpec& spec, const std::filesystem::path& out_dir);

// One caption per segment containing a keyword that matches only its label.
std::vector<CaptionRecord> oracle_captions(std::span<const ActivitySegment> segments, const KeywordMap& map);

}  // namespace tgs
