// tgs: generate synthetic thermal/RGB corpora, run samplers, and write
// coverage / usage / recognition / energy reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgs/embeddings.hpp"
#include "tgs/energy.hpp"
#include "tgs/error.hpp"
#include "tgs/frames.hpp"
#include "tgs/kvconfig.hpp"
#include "tgs/pipeline.hpp"
#include "tgs/recognition.hpp"
#include "tgs/segments.hpp"
#include "tgs/spatial.hpp"
#include "tgs/synth.hpp"
#include "tgs/temporal.hpp"

namespace fs = std::filesystem;
using namespace tgs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Settings from --config and --set, routed to whichever component knows the key.
struct Settings {
    KeyValues kv;
    std::optional<std::uint64_t> seed;

    static bool is_scenario_key(const std::string& k) { return k == "noise_sigma" || k == "transition_s"; }
    static bool is_eval_key(const std::string& k) {
        return k == "min_frames" || k == "t1_s" || k == "t2_s" || k == "length_thresholds";
    }

    void check_keys() const {
        for (const auto& [k, v] : kv) {
            SamplerConfig s;
            SpatialConfig sp;
            PowerProfile p;
            if (s.set(k, v) || sp.set(k, v) || p.set(k, v) || is_scenario_key(k) || is_eval_key(k)) continue;
            throw ConfigError("unknown setting '" + k + "'");
        }
    }

    SamplerConfig sampler(SamplerConfig base) const {
        for (const auto& [k, v] : kv) base.set(k, v);
        base.validate();
        return base;
    }

    SpatialConfig spatial() const {
        SpatialConfig c;
        for (const auto& [k, v] : kv) c.set(k, v);
        return c;
    }

    PowerProfile profile() const {
        PowerProfile p;
        for (const auto& [k, v] : kv) p.set(k, v);
        p.validate();
        return p;
    }

    void apply_scenario(ScenarioSpec& spec) const {
        if (auto it = kv.find("noise_sigma"); it != kv.end()) spec.noise_sigma = parse_double(it->first, it->second);
        if (auto it = kv.find("transition_s"); it != kv.end()) spec.transition_s = parse_double(it->first, it->second);
        if (seed) spec.seed = *seed;
        spec.validate();
    }

    int min_frames() const {
        auto it = kv.find("min_frames");
        if (it == kv.end()) return 4;
        const auto v = parse_int(it->first, it->second);
        if (v < 1) throw ConfigError("min_frames must be >= 1");
        return static_cast<int>(v);
    }

    LengthThresholds thresholds(std::span<const ActivitySegment> segments) const {
        LengthThresholds t = LengthThresholds::study_defaults();
        if (auto it = kv.find("length_thresholds"); it != kv.end()) {
            if (it->second == "head_tail") {
                std::vector<double> lengths;
                for (const auto& s : segments) lengths.push_back(s.duration_s());
                t = head_tail_thresholds(lengths);
            } else if (it->second != "study") {
                throw ConfigError("length_thresholds must be study or head_tail");
            }
        }
        if (auto it = kv.find("t1_s"); it != kv.end()) t.t1_s = parse_double(it->first, it->second);
        if (auto it = kv.find("t2_s"); it != kv.end()) t.t2_s = parse_double(it->first, it->second);
        if (!(t.t1_s < t.t2_s)) throw ConfigError("length thresholds must satisfy t1_s < t2_s");
        return t;
    }
};

struct Corpus {
    Stream stream;
    FrameDims rgb{kRgbWidth, kRgbHeight};
    FrameDims thermal{kThermalWidth, kThermalHeight};
};

Corpus open_corpus(const fs::path& dir) {
    Corpus c;
    c.stream = load_stream(dir);
    if (!c.stream.records.empty()) {
        c.rgb = probe_rgb_dims(c.stream.rgb_path(c.stream.records.front()));
        const ThermalFrame t = read_thermal(c.stream.thermal_path(c.stream.records.front()));
        c.thermal = {t.width, t.height};
    }
    return c;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

double stream_hours(const Stream& s, double base_rate) {
    return static_cast<double>(s.records.size()) / base_rate / 3600.0;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    std::string spec;
    bool reference = false;
    std::string out;
};

int cmd_gen(const GenArgs& a, const Settings& settings) {
    ScenarioSpec spec = a.reference ? reference_scenario(settings.seed.value_or(42)) : ScenarioSpec::load(a.spec);
    settings.apply_scenario(spec);
    generate_corpus(spec, a.out);
    const SyntheticCorpus corpus(spec);
    store_captions(oracle_captions(corpus.segments(), KeywordMap::bundled_default()), fs::path(a.out) / "captions.jsonl");
    std::cerr << "generated " << corpus.records().size() << " frames, " << corpus.segments().size()
              << " segments in " << a.out << "\n";
    return kExitOk;
}

// --- sample ----------------------------------------------------------------

struct SampleArgs {
    std::string corpus;
    std::string variant;
    std::optional<double> uniform;
    std::string out;
    std::string patches;
    std::string embeddings;
    bool no_crop = false;
};

SampleTrace run_variant(const Corpus& c, const std::string& variant, const Settings& settings,
                        const EmbeddingTable* external, bool crop) {
    PipelineOptions o;
    o.name = variant;
    std::replace(o.name.begin(), o.name.end(), '_', '-');
    o.sampler = settings.sampler(variant_preset(variant));
    o.spatial = settings.spatial();
    o.crop = crop;
    const auto source = [&](std::size_t i) { return read_thermal(c.stream.thermal_path(c.stream.records[i])); };
    return run_adaptive(c.stream.records, source, c.rgb, c.thermal, o, external);
}

void write_patches(const Corpus& c, const SampleTrace& trace, const fs::path& dir) {
    ensure_dir(dir);
    std::map<std::int64_t, const FrameRecord*> by_id;
    for (const auto& r : c.stream.records) by_id[r.frame_id] = &r;
    for (const auto& e : trace.entries) {
        const FrameRecord& r = *by_id.at(e.frame_id);
        const RgbFrame rgb = read_rgb(c.stream.rgb_path(r), r.timestamp_ms);
        const Box box = e.crop.value_or(Box{0, 0, rgb.width, rgb.height});
        write_patch(Patch{e.frame_id, box, crop(rgb, box)}, dir);
    }
}

int cmd_sample(const SampleArgs& a, const Settings& settings) {
    const Corpus c = open_corpus(a.corpus);
    std::optional<EmbeddingTable> table;
    if (!a.embeddings.empty()) table = load_embeddings(a.embeddings);

    const SampleTrace trace = a.uniform ? uniform_sampler(c.stream.records, *a.uniform, c.rgb)
                                              : run_variant(c, a.variant, settings, table ? &*table : nullptr,
                                                            !a.no_crop);
    write_trace(trace, a.out);
    if (!a.patches.empty()) write_patches(c, trace, a.patches);

    const UsageReport usage = pixel_usage(trace, c.stream.records, c.rgb);
    std::fprintf(stderr, "%s: %zu of %zu frames sampled, pixel ratio %.6f\n", trace.sampler.c_str(),
                 trace.entries.size(), c.stream.records.size(), usage.ratio());
    return kExitOk;
}

// --- eval ------------------------------------------------------------------

bool is_uniform(const SampleTrace& t) { return t.config.is_object() && t.config.contains("period_s"); }

nlohmann::ordered_json energy_json(const Corpus& c, std::span<const SampleTrace> traces, const PowerProfile& profile,
                                   double base_rate) {
    const double hours = stream_hours(c.stream, base_rate);
    nlohmann::ordered_json j;
    j["hours"] = hours;
    j["profile_mwh_per_hour"] = profile.to_json();
    if (!(hours > 0.0)) return j;

    // Full-duty reference: every frame streamed at full resolution.
    SampleTrace full;
    for (const auto& r : c.stream.records) full.entries.push_back({r.frame_id, r.timestamp_ms, base_rate, std::nullopt});
    const EnergyReport baseline =
        device_energy(full, c.stream.records, c.rgb, profile, hours, DevicePipeline::continuous_stream);
    j["device_baseline"] = baseline.to_json();

    for (const auto& t : traces) {
        const DevicePipeline pipeline = is_uniform(t) ? DevicePipeline::continuous_stream : DevicePipeline::adaptive;
        const EnergyReport device = device_energy(t, c.stream.records, c.rgb, profile, hours, pipeline);
        const EnergyReport patch = phone_energy(t, profile, PhoneMode::patch, true);
        const EnergyReport whole = phone_energy(t, profile, PhoneMode::full, true);
        nlohmann::ordered_json row;
        row["device"] = device.to_json();
        row["device_reduction_percent"] = reduction_report(device, baseline);
        row["phone_patch"] = patch.to_json();
        row["phone_full"] = whole.to_json();
        row["phone_reduction_percent"] = whole.total > 0.0 ? reduction_report(patch, whole) : 0.0;
        j["traces"][t.sampler] = row;
    }
    return j;
}

struct EvalArgs {
    std::string corpus;
    std::vector<std::string> traces;
    std::string captions;
    std::string keywords;
    std::string report;
};

void write_reports(const Corpus& c, std::span<const SampleTrace> traces, const EvalArgs& a, const Settings& settings) {
    const fs::path dir = a.report;
    ensure_dir(dir);
    const std::string digest = stream_digest(c.stream.records);
    const SegmentBins bins = bin_segments(c.stream.segments, settings.thresholds(c.stream.segments));
    const int min_frames = settings.min_frames();

    std::vector<ComparisonRow> rows;
    nlohmann::ordered_json detail;
    detail["thresholds_s"] = {bins.thresholds.t1_s, bins.thresholds.t2_s};
    for (const auto& t : traces) {
        if (!t.stream_id.empty() && t.stream_id != digest)
            throw ConsistencyError("trace '" + t.sampler + "' was taken from a different stream");
        ComparisonRow row{t.sampler, coverage(t, c.stream.records, c.stream.segments, bins, min_frames),
                          pixel_usage(t, c.stream.records, c.rgb)};
        detail["traces"][t.sampler] = {{"sampled_frames", t.entries.size()},
                                       {"coverage", row.coverage.to_json()},
                                       {"usage", row.usage.to_json()}};
        rows.push_back(std::move(row));
    }
    write_text(dir / "coverage.csv", coverage_table_csv(rows));
    write_text(dir / "participant_usage.csv", participant_usage_csv(rows));
    write_text(dir / "summary.json", detail.dump(2) + "\n");

    const double base_rate = settings.sampler(SamplerConfig{}).base_rate;
    write_text(dir / "energy.json", energy_json(c, traces, settings.profile(), base_rate).dump(2) + "\n");

    if (!a.captions.empty()) {
        const KeywordMap map = a.keywords.empty() ? KeywordMap::bundled_default() : KeywordMap::load_csv(a.keywords);
        map.validate();
        const PrfReport prf = evaluate(load_captions(a.captions), map);
        write_text(dir / "recognition.json", prf.to_json().dump(2) + "\n");
        std::fprintf(stderr, "recognition: macro P %.3f R %.3f F1 %.3f, accuracy %.3f\n", prf.macro_classes.precision,
                     prf.macro_classes.recall, prf.macro_classes.f1, prf.micro_accuracy);
    }

    for (const auto& r : rows)
        std::fprintf(stderr, "%-12s coverage %.3f (short %.3f, medium %.3f, long %.3f), pixel ratio %.6f\n",
                     r.sampler.c_str(), r.coverage.overall.fraction(), r.coverage.per_bin.at(LengthBin::short_).fraction(),
                     r.coverage.per_bin.at(LengthBin::medium).fraction(),
                     r.coverage.per_bin.at(LengthBin::long_).fraction(), r.usage.ratio());
}

int cmd_eval(const EvalArgs& a, const Settings& settings) {
    const Corpus c = open_corpus(a.corpus);
    std::vector<SampleTrace> traces;
    for (const auto& p : a.traces) traces.push_back(read_trace(p));
    write_reports(c, traces, a, settings);
    return kExitOk;
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
    std::string corpus;
    std::string out;
    std::string captions;
    std::string keywords;
    int kmeans = 0;
};

void write_clusters(const Corpus& c, int k, std::uint64_t seed, const fs::path& dir) {
    std::vector<Embedding> points;
    std::map<std::int64_t, std::string> labels;
    for (const auto& r : c.stream.records) {
        if (!r.activity_label) continue;
        points.push_back(embed_blockmean(read_thermal(c.stream.thermal_path(r)), r.frame_id));
        labels[r.frame_id] = *r.activity_label;
    }
    if (points.empty()) throw ArgumentError("clustering needs labeled frames");
    const ClusterAssignment a = kmeans(points, k, seed);
    store_assignment(a, dir / "clusters.csv");
    nlohmann::ordered_json j;
    j["k"] = k;
    j["seed"] = seed;
    j["frames"] = points.size();
    j["objective"] = a.objective();
    j["iterations"] = a.objective_trace.size();
    j["nmi"] = nmi(a.cluster_of, labels);
    write_text(dir / "clusters.json", j.dump(2) + "\n");
    std::fprintf(stderr, "k-means k=%d: NMI %.4f over %zu frames\n", k, j["nmi"].get<double>(), points.size());
}

int cmd_report(const ReportArgs& a, const Settings& settings) {
    const Corpus c = open_corpus(a.corpus);
    const fs::path out = a.out;
    ensure_dir(out / "traces");

    std::vector<SampleTrace> traces;
    for (const char* v : {"thor-high", "thor-mid", "thor-low"}) traces.push_back(run_variant(c, v, settings, nullptr, true));
    for (double p : {2.0, 8.0, 17.0}) traces.push_back(uniform_sampler(c.stream.records, p, c.rgb));
    for (const auto& t : traces) write_trace(t, out / "traces" / (t.sampler + ".jsonl"));

    EvalArgs e;
    e.captions = a.captions;
    e.keywords = a.keywords;
    e.report = a.out;
    write_reports(c, traces, e, settings);
    if (a.kmeans > 0) write_clusters(c, a.kmeans, settings.seed.value_or(42), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal-guided adaptive frame sampling toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> assignments;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized steps");
    app.add_option("--set", assignments, "override one setting (key=value); repeatable");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic corpus");
    auto* spec_opt = gen_cmd->add_option("--spec", gen.spec, "scenario JSON file");
    auto* ref_opt = gen_cmd->add_flag("--reference", gen.reference, "use the built-in reference scenario");
    spec_opt->excludes(ref_opt);
    gen_cmd->add_option("--out", gen.out, "output directory")->required();

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "run one sampler over a corpus");
    sample_cmd->add_option("--corpus", sample.corpus, "corpus directory or manifest")->required();
    auto* variant_opt = sample_cmd->add_option("--variant", sample.variant, "thor-high, thor-mid or thor-low");
    auto* uniform_opt = sample_cmd->add_option("--uniform", sample.uniform, "uniform period in seconds");
    variant_opt->excludes(uniform_opt);
    sample_cmd->add_option("--out", sample.out, "trace JSONL to write")->required();
    sample_cmd->add_option("--patches", sample.patches, "directory for cropped RGB patches");
    sample_cmd->add_option("--embeddings", sample.embeddings, "CSV of precomputed frame embeddings");
    sample_cmd->add_flag("--no-crop", sample.no_crop, "keep full frames for sampled frames");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "score traces against a corpus");
    eval_cmd->add_option("--corpus", eval.corpus, "corpus directory or manifest")->required();
    eval_cmd->add_option("traces", eval.traces, "trace JSONL files")->required();
    eval_cmd->add_option("--captions", eval.captions, "captions JSONL for recognition scoring");
    eval_cmd->add_option("--keywords", eval.keywords, "activity,keyword CSV (default: bundled table)");
    eval_cmd->add_option("--report", eval.report, "output directory")->required();

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "run every sampler and write all reports");
    report_cmd->add_option("--corpus", report.corpus, "corpus directory or manifest")->required();
    report_cmd->add_option("--out", report.out, "output directory")->required();
    report_cmd->add_option("--captions", report.captions, "captions JSONL for recognition scoring");
    report_cmd->add_option("--keywords", report.keywords, "activity,keyword CSV (default: bundled table)");
    report_cmd->add_option("--kmeans", report.kmeans, "also cluster frame embeddings with k clusters")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Settings settings;
        if (!config_path.empty()) settings.kv = load_key_values(config_path);
        for (const auto& s : assignments) {
            auto [k, v] = parse_assignment(s);
            settings.kv[k] = v;
        }
        if (*seed_opt) settings.seed = seed;
        settings.check_keys();

        if (*gen_cmd) {
            if (gen.spec.empty() && !gen.reference) throw ArgumentError("gen needs --spec FILE or --reference");
            return cmd_gen(gen, settings);
        }
        if (*sample_cmd) {
            if (sample.variant.empty() == !sample.uniform) throw ArgumentError("sample needs --variant or --uniform");
            return cmd_sample(sample, settings);
        }
        if (*eval_cmd) return cmd_eval(eval, settings);
        if (*report_cmd) return cmd_report(report, settings);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool usage = e.kind() == Error::Kind::argument || e.kind() == Error::Kind::config;
        return usage ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
