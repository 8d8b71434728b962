#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tgs/error.hpp"
#include "tgs/temporal.hpp"

using namespace tgs;

namespace {

SamplerConfig cfg(double fmin, double fmax, std::size_t T = 8) {
    SamplerConfig c;
    c.fps_min = fmin;
    c.fps_max = fmax;
    c.window = T;
    return c;
}

Embedding random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Embedding e;
    for (auto& v : e.values) v = d(rng);
    normalize(e.values);
    return e;
}

std::vector<FrameRecord> stream(int frames, const std::string& participant = "P1", std::int64_t first_id = 0) {
    std::vector<FrameRecord> out;
    for (int i = 0; i < frames; ++i) {
        FrameRecord r;
        r.frame_id = first_id + i;
        r.timestamp_ms = i * 250;
        r.participant_id = participant;
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_CASE("fps update examples") {
    const SamplerConfig c = cfg(0.25, 4);
    const std::vector<double> w{0.2, 0.8, 0.5};
    CHECK(fps_from_means(w, 0.8, c) == 0.25);
    CHECK(fps_from_means(w, 0.2, c) == 4.0);
    CHECK(fps_from_means(w, 0.5, c) == doctest::Approx(2.125).epsilon(1e-7));

    // Extremes return the configured rates exactly, whatever their rounding.
    for (double lo = 0.01; lo < 1.0; lo += 0.037) {
        const SamplerConfig odd = cfg(lo, lo + 0.3 + lo * lo);
        CHECK(fps_from_means(w, 0.2, odd) == odd.fps_max);
        CHECK(fps_from_means(w, 0.8, odd) == odd.fps_min);
    }

    const std::vector<double> flat{0.9, 0.9};
    CHECK(fps_from_means(flat, 0.9, c) == 0.25);
    SamplerConfig literal = c;
    literal.degenerate_policy = DegeneratePolicy::max_rate;
    CHECK(fps_from_means(flat, 0.9, literal) == 4.0);
}

TEST_CASE("update_fps agrees with the straight-line transcription") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 500; ++trial) {
        SamplerConfig c = cfg(0.05 + 0.1 * (rng() % 5), 4, 2 + rng() % 20);
        SimilarityWindow win(c.window);
        std::vector<Embedding> all;
        const int n = 1 + static_cast<int>(rng() % 40);
        Embedding cur = random_unit(rng);
        for (int i = 0; i < n; ++i) {
            Embedding step = random_unit(rng);
            for (std::size_t k = 0; k < kEmbeddingDim; ++k) cur.values[k] += 0.5 * step.values[k];
            normalize(cur.values);
            win.push(cur);
        }
        const auto w = win.rolling_means();
        const double got = update_fps(win, c, win.last_index());
        CHECK(std::abs(got - oracle::straight_line_fps(w, w.size() - 1, c)) <= 1e-9);
        CHECK(got >= c.fps_min);
        CHECK(got <= c.fps_max);
    }
}

TEST_CASE("scheduler examples") {
    SUBCASE("fps at the base rate samples every frame") {
        TemporalSampler s(cfg(4, 4));
        Embedding e;
        e.values[0] = 1;
        for (int i = 0; i < 20; ++i) CHECK(s.step(e, i * 250) == Decision::sample);
    }
    SUBCASE("fps 1 samples every fourth frame") {
        TemporalSampler s(cfg(1, 1));
        std::mt19937_64 rng(3);
        for (int i = 0; i < 40; ++i) CHECK((s.step(random_unit(rng), i * 250) == Decision::sample) == (i % 4 == 0));
    }
    SUBCASE("constant stream drops to the floor rate") {
        TemporalSampler s(cfg(0.25, 4));
        Embedding e;
        e.values[5] = 1;
        std::vector<int> picked;
        for (int i = 0; i < 48; ++i)
            if (s.step(e, i * 250) == Decision::sample) picked.push_back(i);
        CHECK(picked == std::vector<int>{0, 16, 32});
        CHECK(s.current_fps() == 0.25);
    }
}

TEST_CASE("scheduler rejects time going backwards") {
    TemporalSampler s(cfg(1, 4));
    Embedding e;
    e.values[0] = 1;
    s.step(e, 1000);
    s.step(e, 1000);
    CHECK_THROWS_AS(s.step(e, 750), SequencingError);
}

TEST_CASE("rate bound and sampling budget hold on random streams") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const SamplerConfig c = cfg(0.125, 0.5 + 0.5 * (rng() % 8), 4 + rng() % 30);
        TemporalSampler s(c);
        std::vector<std::int64_t> times;
        Embedding cur = random_unit(rng);
        std::int64_t t = 0;
        for (int i = 0; i < 400; ++i) {
            if (rng() % 10 == 0) cur = random_unit(rng);
            t += 250 * (1 + static_cast<std::int64_t>(rng() % 3 == 0));
            if (s.step(cur, t) == Decision::sample) times.push_back(t);
            CHECK(s.current_fps() >= c.fps_min);
            CHECK(s.current_fps() <= c.fps_max);
            CHECK(s.credit() >= 0.0);
            CHECK(s.credit() <= 1.0);
        }
        for (std::size_t a = 0; a < times.size(); ++a)
            for (std::size_t b = a; b < times.size(); ++b) {
                const double span_s = static_cast<double>(times[b] - times[a]) / 1000.0;
                CHECK(static_cast<double>(b - a + 1) <= std::ceil(c.fps_max * span_s - 1e-9) + 1);
            }
    }
}

TEST_CASE("sampler config") {
    SamplerConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.set("fps_min", "1/16"));
    CHECK(c.fps_min == 0.0625);
    CHECK(c.set("T", "64"));
    CHECK(c.window == 64);
    CHECK(c.set("degenerate_policy", "max_rate"));
    CHECK(c.degenerate_policy == DegeneratePolicy::max_rate);
    CHECK_FALSE(c.set("bogus", "1"));
    CHECK_THROWS_AS(c.set("degenerate_policy", "sometimes"), ConfigError);
    CHECK_THROWS_AS(c.apply({{"fps_max", "8"}}), ConfigError);
    CHECK_THROWS_AS(c.apply({{"nope", "1"}}), ConfigError);

    SamplerConfig bad;
    bad.fps_min = 2;
    bad.fps_max = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SamplerConfig{};
    bad.window = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SamplerConfig{};
    bad.epsilon = 0;
    CHECK_THROWS_AS(TemporalSampler{bad}, ConfigError);

    const auto j = SamplerConfig{}.to_json();
    CHECK(j["T"] == 32);
    CHECK(j["fps_max"] == 4.0);
}

TEST_CASE("variant presets") {
    CHECK(variant_preset("thor_high").fps_max == 4.0);
    CHECK(variant_preset("thor-high").window == 32);
    CHECK(variant_preset("thor_mid").fps_min == 1.0 / 16);
    CHECK(variant_preset("thor_low").window == 128);
    CHECK(variant_preset("thor-low").fps_max == 0.5);
    CHECK(canonical_variant_name("thor-mid") == "thor_mid");
    CHECK_THROWS_AS(variant_preset("thor_ultra"), ConfigError);
    for (const char* n : {"thor_high", "thor_mid", "thor_low"}) CHECK_NOTHROW(variant_preset(n).validate());
}

TEST_CASE("uniform baselines") {
    const auto recs = stream(240);
    const FrameDims dims{956, 720};
    CHECK(uniform_sampler(recs, 2, dims).entries.size() == 30);

    const auto mid = uniform_sampler(recs, 8, dims);
    REQUIRE(mid.entries.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(mid.entries[i].timestamp_ms == static_cast<std::int64_t>(i) * 8000);

    const auto low = uniform_sampler(recs, 17, dims);
    REQUIRE(low.entries.size() == 4);
    CHECK(low.entries[3].timestamp_ms == 51000);
    CHECK(low.entries[0].crop == Box{0, 0, 956, 720});
    CHECK(low.sampler == "uniform-17");

    CHECK_THROWS_AS(uniform_sampler(recs, 0, dims), ArgumentError);
}

TEST_CASE("uniform sampling restarts per participant and waits out gaps") {
    auto recs = stream(20);
    auto more = stream(20, "P2", 20);
    recs.insert(recs.end(), more.begin(), more.end());
    const auto t = uniform_sampler(recs, 2, {10, 10});
    REQUIRE(t.entries.size() == 6);
    CHECK(t.entries[3].frame_id == 20);

    std::vector<FrameRecord> gappy = stream(3);
    gappy[1].timestamp_ms = 2600;
    gappy[2].timestamp_ms = 2700;
    const auto g = uniform_sampler(gappy, 1, {10, 10});
    // 0 s, then the first frame at/after 1 s (2.6 s); 2 s is already passed.
    REQUIRE(g.entries.size() == 2);
    CHECK(g.entries[1].timestamp_ms == 2600);
}

TEST_CASE("trace round trip") {
    testutil::TempDir dir;
    SampleTrace t;
    t.sampler = "thor-high";
    t.config = SamplerConfig{}.to_json();
    t.stream_id = "abc";
    t.entries = {{1, 250, 4.0, Box{1, 2, 3, 4}}, {5, 1250, 0.125, std::nullopt}};
    write_trace(t, dir / "t.jsonl");
    const SampleTrace back = read_trace(dir / "t.jsonl");
    CHECK(back.sampler == t.sampler);
    CHECK(back.stream_id == t.stream_id);
    CHECK(back.config == t.config);
    CHECK(back.entries == t.entries);
    CHECK(trace_to_string(back) == trace_to_string(t));

    {
        std::ofstream out(dir / "bad.jsonl");
        out << trace_to_string(t) << R"({"frame_id":0,"t_ms":0,"fps":1,"crop":null})" << "\n";
    }
    CHECK_THROWS_AS(read_trace(dir / "bad.jsonl"), ValidationError);
    {
        std::ofstream out(dir / "crop.jsonl");
        out << R"({"trace":{"sampler":"x","config":{},"stream":"","count":1}})" << "\n"
            << R"({"frame_id":0,"t_ms":0,"fps":1,"crop":[1,2]})" << "\n";
    }
    CHECK_THROWS_AS(read_trace(dir / "crop.jsonl"), ParseError);
    CHECK_THROWS_AS(read_trace(dir / "none.jsonl"), IoError);
}
