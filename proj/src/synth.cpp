#include "tgs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "tgs/error.hpp"
#include "tgs/spatial.hpp"

namespace tgs {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double frac(double v) { return v - std::floor(v); }

std::int64_t frames_in(double duration_s, double rate) { return std::llround(duration_s * rate); }

}  // namespace

void ScenarioSpec::validate() const {
    if (!(base_rate > 0.0)) throw ConfigError("scenario: base_rate must be > 0");
    if (!(noise_sigma >= 0.0)) throw ConfigError("scenario: noise_sigma must be >= 0");
    if (!(transition_s >= 0.0)) throw ConfigError("scenario: transition_s must be >= 0");
    if (thermal_dims.width <= 0 || thermal_dims.height <= 0 || rgb_dims.width <= 0 || rgb_dims.height <= 0)
        throw ConfigError("scenario: frame dimensions must be positive");
    const double period_ms = 1000.0 / base_rate;
    if (std::abs(period_ms - std::round(period_ms)) > 1e-9)
        throw ConfigError("scenario: base_rate must give a whole-millisecond frame period");
    std::set<std::string> ids;
    for (const auto& p : participants) {
        if (!ids.insert(p.id).second) throw ConfigError("scenario: duplicate participant '" + p.id + "'");
        for (const auto& s : p.segments) {
            if (!(s.duration_s > 0.0)) throw ConfigError("scenario: segment durations must be > 0");
            double frames = s.duration_s * base_rate;
            if (std::abs(frames - std::round(frames)) > 1e-9)
                throw ConfigError("scenario: segment duration " + std::to_string(s.duration_s) +
                                  " s is not a whole number of frames");
            if (s.label.empty()) throw ConfigError("scenario: segment label must not be empty");
        }
    }
}

nlohmann::ordered_json ScenarioSpec::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["base_rate"] = base_rate;
    j["transition_s"] = transition_s;
    j["noise_sigma"] = noise_sigma;
    j["thermal_dims"] = {thermal_dims.width, thermal_dims.height};
    j["rgb_dims"] = {rgb_dims.width, rgb_dims.height};
    j["participants"] = nlohmann::ordered_json::array();
    for (const auto& p : participants) {
        nlohmann::ordered_json pj;
        pj["id"] = p.id;
        pj["segments"] = nlohmann::ordered_json::array();
        for (const auto& s : p.segments)
            pj["segments"].push_back({{"label", s.label}, {"duration_s", s.duration_s}, {"template", s.template_id}});
        j["participants"].push_back(pj);
    }
    return j;
}

ScenarioSpec ScenarioSpec::from_json(const nlohmann::json& j) {
    ScenarioSpec spec;
    try {
        spec.seed = j.value("seed", spec.seed);
        spec.base_rate = j.value("base_rate", spec.base_rate);
        spec.transition_s = j.value("transition_s", spec.transition_s);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        if (j.contains("thermal_dims"))
            spec.thermal_dims = {j["thermal_dims"].at(0).get<int>(), j["thermal_dims"].at(1).get<int>()};
        if (j.contains("rgb_dims")) spec.rgb_dims = {j["rgb_dims"].at(0).get<int>(), j["rgb_dims"].at(1).get<int>()};
        for (const auto& pj : j.at("participants")) {
            ParticipantPlan p;
            p.id = pj.at("id").get<std::string>();
            for (const auto& sj : pj.at("segments"))
                p.segments.push_back(
                    {sj.at("label").get<std::string>(), sj.at("duration_s").get<double>(), sj.value("template", 0)});
            spec.participants.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    spec.validate();
    return spec;
}

ScenarioSpec ScenarioSpec::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("scenario " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

ScenarioSpec reference_scenario(std::uint64_t seed, double noise_sigma) {
    const KeywordMap keywords = KeywordMap::bundled_default();
    std::vector<std::string> labels;
    for (const auto& [label, _] : keywords.entries()) labels.push_back(label);

    ScenarioSpec spec;
    spec.seed = seed;
    spec.noise_sigma = noise_sigma;
    std::mt19937_64 rng(seed);

    for (int p = 0; p < 3; ++p) {
        ParticipantPlan plan;
        plan.id = "P" + std::to_string(p + 1);
        std::vector<double> durations;
        auto draw = [&](int n, int lo, int hi) {
            std::uniform_int_distribution<int> d(lo, hi);
            for (int i = 0; i < n; ++i) durations.push_back(d(rng));
        };
        draw(6, 20, 50);
        draw(6, 70, 150);
        draw(4, 180, 400);
        std::shuffle(durations.begin(), durations.end(), rng);

        std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
        std::size_t prev = labels.size();
        for (double d : durations) {
            std::size_t a = pick(rng);
            while (a == prev) a = pick(rng);
            prev = a;
            plan.segments.push_back({labels[a], d, static_cast<int>(a)});
        }
        spec.participants.push_back(std::move(plan));
    }
    spec.validate();
    return spec;
}

std::vector<Box> PoseTemplate::blob_boxes(FrameDims thermal) const {
    std::vector<Box> out;
    for (const auto& b : blobs) {
        int x0 = static_cast<int>(std::floor(b.cx - 2 * b.sigma));
        int y0 = static_cast<int>(std::floor(b.cy - 2 * b.sigma));
        int x1 = static_cast<int>(std::ceil(b.cx + 2 * b.sigma));
        int y1 = static_cast<int>(std::ceil(b.cy + 2 * b.sigma));
        out.push_back(Box::from_edges(x0, y0, x1, y1).clamped(thermal.width, thermal.height));
    }
    return out;
}

PoseTemplate make_template(int id, FrameDims thermal) {
    if (id < 0) throw ArgumentError("template id must be >= 0");
    // Blob centers sit on a lattice well clear of the vertical center line so
    // the single-hand kinds classify unambiguously.
    const double w = thermal.width, h = thermal.height;
    const double left_x[2] = {w * 5.0 / 32.0, w * 9.0 / 32.0};
    const double right_x[2] = {w * 23.0 / 32.0, w * 27.0 / 32.0};
    const double rows[5] = {h * 6.0 / 24.0, h * 9.5 / 24.0, h * 13.0 / 24.0, h * 16.5 / 24.0, h * 20.0 / 24.0};

    PoseTemplate t;
    t.id = id;
    t.background_c = 20.0 + 4.0 * frac(id * 0.382);
    const int kind = id % 3;
    const int slot = id / 3;
    const double sigma = 1.6 + 0.6 * frac(id * 0.7);
    const double peak = 33.0 + 4.0 * frac(id * 0.618);
    switch (kind) {
        case 0: t.blobs.push_back({left_x[slot % 2], rows[(slot / 2) % 5], sigma, peak}); break;
        case 1: t.blobs.push_back({right_x[slot % 2], rows[(slot / 2) % 5], sigma, peak}); break;
        default:
            t.blobs.push_back({left_x[slot % 2], rows[slot % 5], sigma, peak});
            t.blobs.push_back({right_x[(slot / 2) % 2], rows[(slot + 2) % 5], sigma, peak - 0.5});
            break;
    }
    auto channel = [](double v) { return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)); };
    t.background_rgb = {channel(70 + 60 * frac(id * 0.13)), channel(70 + 60 * frac(id * 0.29)),
                        channel(70 + 60 * frac(id * 0.47))};
    t.object_rgb = {channel(150 + 100 * frac(id * 0.71)), channel(40 + 100 * frac(id * 0.53)),
                    channel(60 + 150 * frac(id * 0.37))};
    return t;
}

double template_temperature(const PoseTemplate& t, double x, double y) {
    double v = t.background_c;
    for (const auto& b : t.blobs) {
        const double dx = x - b.cx, dy = y - b.cy;
        v += (b.peak_c - t.background_c) * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    return v;
}

SyntheticCorpus::SyntheticCorpus(ScenarioSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const double period_ms = 1000.0 / spec_.base_rate;
    const std::int64_t transition_frames = frames_in(spec_.transition_s, spec_.base_rate);
    std::int64_t frame_id = 0;
    std::int64_t segment_id = 0;

    for (const auto& p : spec_.participants) {
        std::int64_t k = 0;  // frame index within the participant timeline
        int prev_template = -1;
        for (const auto& s : p.segments) {
            const std::int64_t n = frames_in(s.duration_s, spec_.base_rate);
            const auto start_ms = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * period_ms));
            for (std::int64_t f = 0; f < n; ++f, ++k, ++frame_id) {
                FrameRecord r;
                r.frame_id = frame_id;
                r.timestamp_ms = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * period_ms));
                r.thermal_path = "thermal/" + std::to_string(frame_id) + ".pgm";
                r.participant_id = p.id;
                r.activity_label = s.label;
                r.segment_id = segment_id;

                Blend b{s.template_id, s.template_id, 1.0};
                if (prev_template >= 0 && prev_template != s.template_id && f < transition_frames) {
                    b.from = prev_template;
                    b.weight = (static_cast<double>(f) + 0.5) / static_cast<double>(transition_frames);
                }
                const int shown = b.weight >= 0.5 ? b.to : b.from;
                r.rgb_path = "rgb/template_" + std::to_string(shown) + ".ppm";
                records_.push_back(std::move(r));
                blends_.push_back(b);
            }
            const auto end_ms = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * period_ms));
            segments_.push_back({segment_id++, p.id, s.label, start_ms, end_ms});
            prev_template = s.template_id;
        }
    }
}

SyntheticCorpus::Blend SyntheticCorpus::blend(std::size_t index) const { return blends_.at(index); }

ThermalFrame SyntheticCorpus::thermal(std::size_t index) const {
    const FrameRecord& r = records_.at(index);
    const Blend& b = blends_[index];
    const PoseTemplate from = make_template(b.from, spec_.thermal_dims);
    const PoseTemplate to = make_template(b.to, spec_.thermal_dims);

    ThermalFrame f;
    f.timestamp_ms = r.timestamp_ms;
    f.width = spec_.thermal_dims.width;
    f.height = spec_.thermal_dims.height;
    f.temps.resize(static_cast<std::size_t>(f.width) * f.height);

    std::mt19937_64 rng(splitmix64(spec_.seed ^ splitmix64(static_cast<std::uint64_t>(r.frame_id))));
    std::normal_distribution<double> noise(0.0, spec_.noise_sigma > 0 ? spec_.noise_sigma : 1.0);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            double v = (1.0 - b.weight) * template_temperature(from, px, py) + b.weight * template_temperature(to, px, py);
            if (spec_.noise_sigma > 0) v += noise(rng);
            v = std::clamp(v, kThermalMinC, kThermalMaxC);
            // Quantize to the storage grid so in-memory and on-disk frames agree.
            f.at(x, y) = sample_to_temp(temp_to_sample(v));
        }
    }
    return f;
}

RgbFrame SyntheticCorpus::rgb_for_template(int template_id) const {
    const PoseTemplate t = make_template(template_id, spec_.thermal_dims);
    RgbFrame f;
    f.width = spec_.rgb_dims.width;
    f.height = spec_.rgb_dims.height;
    f.pixels.resize(3u * static_cast<std::size_t>(f.width) * f.height);
    for (std::size_t i = 0; i < f.pixels.size(); i += 3)
        std::copy(t.background_rgb.begin(), t.background_rgb.end(), f.pixels.begin() + static_cast<std::ptrdiff_t>(i));

    const Calibration cal = Calibration::full_frame(spec_.thermal_dims, spec_.rgb_dims);
    for (const Box& tb : t.blob_boxes(spec_.thermal_dims)) {
        auto rb = map_to_rgb(tb, cal, spec_.rgb_dims);
        if (!rb) continue;
        for (int y = rb->y; y < rb->bottom(); ++y)
            for (int x = rb->x; x < rb->right(); ++x)
                std::copy(t.object_rgb.begin(), t.object_rgb.end(),
                          f.pixels.begin() + 3 * (static_cast<std::ptrdiff_t>(y) * f.width + x));
    }
    return f;
}

RgbFrame SyntheticCorpus::rgb(std::size_t index) const {
    const Blend& b = blends_.at(index);
    RgbFrame f = rgb_for_template(b.weight >= 0.5 ? b.to : b.from);
    f.timestamp_ms = records_[index].timestamp_ms;
    return f;
}

std::vector<SyntheticCorpus::Transition> SyntheticCorpus::transitions() const {
    std::vector<Transition> out;
    const std::int64_t half_ms = std::llround(spec_.transition_s * 1000.0 / 2.0);
    for (std::size_t i = 1; i < records_.size(); ++i) {
        const auto& prev = records_[i - 1];
        const auto& cur = records_[i];
        if (cur.participant_id != prev.participant_id) continue;
        if (blends_[i].from != blends_[i].to && blends_[i - 1].from == blends_[i - 1].to)
            out.push_back({cur.participant_id, i, cur.timestamp_ms + half_ms});
    }
    return out;
}

fs::path generate_corpus(const ScenarioSpec& spec, const fs::path& out_dir) {
    SyntheticCorpus corpus(spec);
    std::error_code ec;
    fs::create_directories(out_dir / "thermal", ec);
    fs::create_directories(out_dir / "rgb", ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    for (std::size_t i = 0; i < corpus.records().size(); ++i)
        write_bytes(out_dir / corpus.records()[i].thermal_path, encode_thermal(corpus.thermal(i)));

    std::set<std::string> written;
    for (std::size_t i = 0; i < corpus.records().size(); ++i) {
        const auto& path = corpus.records()[i].rgb_path;
        if (written.insert(path).second) {
            RgbFrame f = corpus.rgb(i);
            f.timestamp_ms = 0;
            write_bytes(out_dir / path, encode_rgb(f));
        }
    }

    {
        std::ofstream out(out_dir / "scenario.json", std::ios::trunc);
        if (!out) throw IoError("cannot write scenario.json");
        out << corpus.spec().to_json().dump(2) << '\n';
    }
    return store_stream(corpus.records(), corpus.segments(), out_dir);
}

std::vector<CaptionRecord> oracle_captions(std::span<const ActivitySegment> segments, const KeywordMap& map) {
    std::vector<CaptionRecord> out;
    for (const auto& s : segments) {
        auto kw = distinctive_keyword(s.label, map);
        if (!kw) {
            auto it = map.entries().find(s.label);
            if (it == map.entries().end() || it->second.empty())
                throw ConfigError("no keyword for activity '" + s.label + "'");
            kw = it->second.front();
        }
        out.push_back({s.segment_id, s.participant_id, "a person " + *kw, s.label});
    }
    return out;
}

}  // namespace tgs
