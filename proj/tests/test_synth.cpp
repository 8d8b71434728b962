#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "tgs/error.hpp"
#include "tgs/segments.hpp"
#include "tgs/spatial.hpp"
#include "tgs/synth.hpp"

using namespace tgs;

namespace {

ScenarioSpec small_spec(double noise = 0.3) {
    ScenarioSpec s;
    s.noise_sigma = noise;
    s.rgb_dims = {64, 48};
    s.participants = {{"P1", {{"Reading", 6, 0}, {"Writing", 5, 1}}}, {"P2", {{"Reading", 4, 2}}}};
    return s;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("one activity gives one segment") {
    ScenarioSpec s;
    s.participants = {{"P1", {{"Reading", 60, 3}}}};
    const SyntheticCorpus c(s);
    CHECK(c.records().size() == 240);
    REQUIRE(c.segments().size() == 1);
    CHECK(c.segments()[0].start_ms == 0);
    CHECK(c.segments()[0].end_ms == 60000);
    CHECK(c.transitions().empty());
    CHECK(c.records()[239].timestamp_ms == 59750);
}

TEST_CASE("left and right templates classify by side") {
    ScenarioSpec s;
    s.noise_sigma = 0;
    s.participants = {{"P1", {{"Reading", 10, 0}, {"Writing", 10, 1}}}};
    const SyntheticCorpus c(s);
    CHECK(classify_mask(heat_mask(c.thermal(0), otsu_threshold(c.thermal(0)))) == MaskSide::left_of_center);
    const std::size_t last = c.records().size() - 1;
    CHECK(classify_mask(heat_mask(c.thermal(last), otsu_threshold(c.thermal(last)))) == MaskSide::right_of_center);
    const PoseTemplate dual = make_template(2);
    CHECK(dual.blobs.size() == 2);
}

TEST_CASE("blends sit at the start of the incoming segment") {
    const SyntheticCorpus c(small_spec());
    // P1: 24 frames of template 0, then 20 of template 1 with an 8-frame blend.
    CHECK(c.blend(23).weight == 1.0);
    CHECK(c.blend(24).from == 0);
    CHECK(c.blend(24).to == 1);
    CHECK(c.blend(24).weight == doctest::Approx(0.5 / 8));
    CHECK(c.blend(31).weight == doctest::Approx(7.5 / 8));
    CHECK(c.blend(32).weight == 1.0);
    CHECK(c.blend(32).from == 1);
    // no blend across participants
    CHECK(c.blend(44).from == c.blend(44).to);
    const auto tr = c.transitions();
    REQUIRE(tr.size() == 1);
    CHECK(tr[0].first_index == 24);
    CHECK(tr[0].midpoint_ms == 6000 + 1000);
    CHECK(c.records()[28].rgb_path == "rgb/template_1.ppm");
    CHECK(c.records()[27].rgb_path == "rgb/template_0.ppm");
}

TEST_CASE("frames are reproducible and on the storage grid") {
    const SyntheticCorpus a(small_spec()), b(small_spec());
    for (std::size_t i : {0u, 10u, 30u}) {
        const ThermalFrame fa = a.thermal(i), fb = b.thermal(i);
        CHECK(fa.temps == fb.temps);
        for (double t : fa.temps) CHECK(sample_to_temp(temp_to_sample(t)) == t);
    }
    ScenarioSpec other = small_spec();
    other.seed = 7;
    CHECK(SyntheticCorpus(other).thermal(0).temps != a.thermal(0).temps);
}

TEST_CASE("reference scenario layout") {
    const ScenarioSpec s = reference_scenario(42);
    REQUIRE(s.participants.size() == 3);
    for (const auto& p : s.participants) {
        REQUIRE(p.segments.size() == 16);
        int shorts = 0, mediums = 0, longs = 0;
        for (std::size_t i = 0; i < p.segments.size(); ++i) {
            const double d = p.segments[i].duration_s;
            CHECK(d == std::floor(d));
            if (d >= 20 && d <= 50) ++shorts;
            if (d >= 70 && d <= 150) ++mediums;
            if (d >= 180 && d <= 400) ++longs;
            if (i > 0) CHECK(p.segments[i].label != p.segments[i - 1].label);
        }
        CHECK(shorts == 6);
        CHECK(mediums == 6);
        CHECK(longs == 4);
    }
    const SyntheticCorpus c(s);
    const auto bins = bin_segments(c.segments(), LengthThresholds::study_defaults());
    std::map<LengthBin, int> counts;
    for (const auto& [_, b] : bins.bin_of) ++counts[b];
    CHECK(counts[LengthBin::short_] == 18);
    CHECK(counts[LengthBin::medium] == 18);
    CHECK(counts[LengthBin::long_] == 12);
    CHECK(reference_scenario(42).to_json() == s.to_json());
}

TEST_CASE("scenario json round trip and validation") {
    const ScenarioSpec s = small_spec();
    const ScenarioSpec back = ScenarioSpec::from_json(nlohmann::json::parse(s.to_json().dump()));
    CHECK(back.to_json() == s.to_json());

    ScenarioSpec bad = small_spec();
    bad.participants[0].segments[0].duration_s = 1.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_spec();
    bad.participants[1].id = "P1";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_spec();
    bad.noise_sigma = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(ScenarioSpec::from_json(nlohmann::json::parse(R"({"participants":3})")), ConfigError);

    testutil::TempDir dir;
    CHECK_THROWS_AS(ScenarioSpec::load(dir / "none.json"), IoError);
    {
        std::ofstream out(dir / "bad.json");
        out << "{oops";
    }
    CHECK_THROWS_AS(ScenarioSpec::load(dir / "bad.json"), ParseError);
}

TEST_CASE("generated corpus on disk") {
    testutil::TempDir a, b;
    const ScenarioSpec s = small_spec();
    generate_corpus(s, a.path());
    generate_corpus(s, b.path());

    const Stream st = load_stream(a.path());
    const SyntheticCorpus c(s);
    CHECK(st.records == c.records());
    CHECK(st.segments == c.segments());
    CHECK(read_thermal(st.thermal_path(st.records[5])).temps == c.thermal(5).temps);
    CHECK(read_rgb(st.rgb_path(st.records[30])).pixels == c.rgb(30).pixels);
    CHECK(ScenarioSpec::load(a / "scenario.json").to_json() == s.to_json());

    for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
        if (!entry.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(entry.path(), a.path());
        CHECK(slurp(entry.path()) == slurp(b.path() / rel));
    }
}

TEST_CASE("oracle captions name their own activity") {
    const SyntheticCorpus c(reference_scenario(42));
    const KeywordMap m = KeywordMap::bundled_default();
    const auto caps = oracle_captions(c.segments(), m);
    REQUIRE(caps.size() == c.segments().size());
    const auto report = evaluate(caps, m);
    CHECK(report.macro_classes.f1 == 1.0);
    CHECK(report.micro_accuracy == 1.0);

    std::vector<ActivitySegment> unknown{{0, "P1", "Juggling", 0, 1000}};
    CHECK_THROWS_AS(oracle_captions(unknown, m), ConfigError);
}
