#include <doctest.h>

#include <fstream>
#include <random>

#include "test_util.hpp"
#include "tgs/error.hpp"
#include "tgs/frames.hpp"

using namespace tgs;

namespace {

FrameRecord make_record(std::int64_t id, std::int64_t t, std::optional<std::string> label = std::nullopt,
                        std::string participant = "P1") {
    FrameRecord r;
    r.frame_id = id;
    r.timestamp_ms = t;
    r.thermal_path = "thermal/" + std::to_string(id) + ".pgm";
    r.rgb_path = "rgb/" + std::to_string(id) + ".ppm";
    r.participant_id = std::move(participant);
    r.activity_label = std::move(label);
    return r;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("thermal sample mapping") {
    CHECK(sample_to_temp(4000) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sample_to_temp(65535) == doctest::Approx(615.35).epsilon(1e-12));
    CHECK(temp_to_sample(37.0) == 7700);
    CHECK(sample_to_temp(temp_to_sample(37.0)) == doctest::Approx(37.0).epsilon(1e-12));
    CHECK(temp_to_sample(-40.0) == 0);
    CHECK_THROWS_AS(temp_to_sample(-40.01), ValidationError);
    CHECK_THROWS_AS(temp_to_sample(615.36), ValidationError);
}

TEST_CASE("thermal quantization error stays within half a step") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> temp(-40.0, 615.35);
    for (int i = 0; i < 10000; ++i) {
        const double t = temp(rng);
        CHECK(std::abs(sample_to_temp(temp_to_sample(t)) - t) <= 0.005 + 1e-12);
    }
}

TEST_CASE("thermal codec round trip") {
    ThermalFrame f;
    f.temps.resize(32 * 24);
    for (std::size_t i = 0; i < f.temps.size(); ++i) f.temps[i] = sample_to_temp(static_cast<std::uint16_t>(i * 83));
    const auto bytes = encode_thermal(f);
    const std::string head(bytes.begin(), bytes.begin() + 15);
    CHECK(head == "P5\n32 24\n65535\n");
    CHECK(bytes.size() == 15 + 2 * 32 * 24);
    // big-endian samples
    CHECK(bytes[15 + 2] == 0);
    CHECK(bytes[15 + 3] == 83);

    const ThermalFrame back = decode_thermal(bytes, 1234);
    CHECK(back.width == 32);
    CHECK(back.height == 24);
    CHECK(back.timestamp_ms == 1234);
    CHECK(back.temps == f.temps);
    CHECK(encode_thermal(back) == bytes);
}

TEST_CASE("thermal decode rejects bad input") {
    auto to_bytes = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };
    CHECK_THROWS_AS(decode_thermal(to_bytes("P6\n1 1\n65535\n\0\0")), FormatError);
    CHECK_THROWS_AS(decode_thermal(to_bytes("P5\n1 1\n255\n\x01")), FormatError);
    CHECK_THROWS_AS(decode_thermal(to_bytes("P5\n2 2\n65535\n\x01\x02")), FormatError);
    CHECK_THROWS_AS(decode_thermal(to_bytes("P5\n")), FormatError);
}

TEST_CASE("netpbm headers may carry comments") {
    std::string s = "P5\n# made by hand\n1 1\n65535\n";
    s.push_back('\x0f');
    s.push_back('\xa0');
    const ThermalFrame f = decode_thermal(std::vector<std::uint8_t>(s.begin(), s.end()));
    CHECK(f.width == 1);
    CHECK(f.temps[0] == doctest::Approx(0.0));
}

TEST_CASE("rgb codec") {
    RgbFrame px;
    px.width = 1;
    px.height = 1;
    px.pixels = {255, 255, 255};
    const auto bytes = encode_rgb(px);
    const std::string expected = "P6\n1 1\n255\n\xff\xff\xff";
    CHECK(std::string(bytes.begin(), bytes.end()) == expected);

    RgbFrame big;
    big.pixels.resize(3u * kRgbWidth * kRgbHeight);
    std::mt19937 rng(3);
    for (auto& b : big.pixels) b = static_cast<std::uint8_t>(rng());
    const auto enc = encode_rgb(big);
    const RgbFrame back = decode_rgb(enc);
    CHECK(back.width == kRgbWidth);
    CHECK(back.height == kRgbHeight);
    CHECK(encode_rgb(back) == enc);

    const std::string deep = "P6\n1 1\n1023\n\0\0\0\0\0\0";
    CHECK_THROWS_AS(decode_rgb(std::vector<std::uint8_t>(deep.begin(), deep.end())), FormatError);
}

TEST_CASE("rgb dims are probed from the header") {
    testutil::TempDir dir;
    RgbFrame f;
    f.width = 5;
    f.height = 3;
    f.pixels.assign(45, 9);
    write_bytes(dir / "a.ppm", encode_rgb(f));
    CHECK(probe_rgb_dims(dir / "a.ppm") == FrameDims{5, 3});
    CHECK(read_rgb(dir / "a.ppm").pixels == f.pixels);
}

TEST_CASE("frame validation") {
    ThermalFrame f;
    f.temps.assign(10, 20.0);
    CHECK_THROWS_AS(f.validate(), ValidationError);
    f.temps.assign(32 * 24, 20.0);
    CHECK_NOTHROW(f.validate());
    f.temps[5] = 700.0;
    CHECK_THROWS_AS(f.validate(), ValidationError);
    CHECK_THROWS_AS(encode_thermal(f), ValidationError);
}

TEST_CASE("derive_segments coalesces labels") {
    std::vector<FrameRecord> recs;
    for (int i = 0; i < 8; ++i) recs.push_back(make_record(i, i * 250, i < 4 ? "A" : "B"));
    const auto segs = derive_segments(recs);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].label == "A");
    CHECK(segs[0].start_ms == 0);
    CHECK(segs[0].end_ms == 1000);
    CHECK(segs[1].label == "B");
    CHECK(segs[1].start_ms == 1000);
    CHECK(segs[1].end_ms == 2000);
    CHECK(segs[0].segment_id != segs[1].segment_id);
}

TEST_CASE("derive_segments breaks on gaps, unlabeled frames and participants") {
    std::vector<FrameRecord> recs{
        make_record(0, 0, "A"),          make_record(1, 250, "A"),
        make_record(2, 1000, "A"),       // gap of 3 periods
        make_record(3, 1250, std::nullopt), make_record(4, 1500, "A"),
        make_record(5, 0, "A", "P2"),
    };
    const auto segs = derive_segments(recs);
    REQUIRE(segs.size() == 4);
    CHECK(segs[0].end_ms == 500);
    CHECK(segs[1].start_ms == 1000);
    CHECK(segs[1].end_ms == 1250);
    CHECK(segs[2].start_ms == 1500);
    CHECK(segs[3].participant_id == "P2");
}

TEST_CASE("validate_records") {
    std::vector<FrameRecord> recs{make_record(0, 0), make_record(2, 250), make_record(1, 500)};
    CHECK_THROWS_AS(validate_records(recs), ValidationError);
    std::vector<FrameRecord> dup{make_record(0, 0), make_record(0, 250)};
    CHECK_THROWS_AS(validate_records(dup), ValidationError);
    std::vector<FrameRecord> back{make_record(0, 500), make_record(1, 250)};
    CHECK_THROWS_AS(validate_records(back), ValidationError);
    // timelines are per participant
    std::vector<FrameRecord> two{make_record(0, 500), make_record(1, 0, std::nullopt, "P2")};
    CHECK_NOTHROW(validate_records(two));
}

TEST_CASE("manifest line round trip") {
    FrameRecord r = make_record(17, 4250, "Cutting Food");
    r.segment_id = 3;
    CHECK(parse_manifest_line(manifest_line(r), 1) == r);
    FrameRecord bare = make_record(1, 0);
    CHECK(parse_manifest_line(manifest_line(bare), 1) == bare);

    CHECK_THROWS_AS(parse_manifest_line("{not json", 1), ParseError);
    CHECK_THROWS_AS(parse_manifest_line(R"({"frame_id":1})", 1), ParseError);
    CHECK_THROWS_AS(parse_manifest_line(R"({"frame_id":"x","t_ms":0,"thermal":"a","rgb":"b","participant":"P"})", 1),
                    ParseError);
    CHECK_THROWS_AS(
        parse_manifest_line(R"({"frame_id":1,"t_ms":0,"thermal":"a","rgb":"b","participant":"P","extra":1})", 1),
        ParseError);
}

TEST_CASE("store and load a stream") {
    testutil::TempDir dir;
    std::vector<FrameRecord> recs;
    for (int i = 0; i < 100; ++i) {
        recs.push_back(make_record(i, i * 250, i < 60 ? "A" : "B"));
        recs.back().segment_id = i < 60 ? 0 : 1;
    }
    const auto segs = derive_segments(recs);
    const auto path = store_stream(recs, segs, dir.path());
    CHECK(path.filename() == kManifestName);

    const Stream s = load_stream(dir.path());
    CHECK(s.records == recs);
    CHECK(s.segments == segs);
    CHECK(s.thermal_path(s.records[3]) == dir.path() / "thermal/3.pgm");
    CHECK(load_stream(path).records == recs);
}

TEST_CASE("segments file takes precedence over derived segments") {
    testutil::TempDir dir;
    std::vector<FrameRecord> recs;
    for (int i = 0; i < 8; ++i) recs.push_back(make_record(i, i * 250, "A"));
    std::vector<ActivitySegment> segs{{7, "P1", "Custom", 0, 500}, {8, "P1", "Other", 500, 2000}};
    store_stream(recs, segs, dir.path());
    CHECK(load_stream(dir.path()).segments == segs);

    std::filesystem::remove(dir / kSegmentsName);
    const auto derived = load_stream(dir.path()).segments;
    REQUIRE(derived.size() == 1);
    CHECK(derived[0].label == "A");
}

TEST_CASE("empty and invalid manifests") {
    testutil::TempDir dir;
    store_stream({}, {}, dir.path());
    const Stream s = load_stream(dir.path());
    CHECK(s.records.empty());
    CHECK(s.segments.empty());

    std::vector<FrameRecord> dup{make_record(0, 0), make_record(0, 250)};
    CHECK_THROWS_AS(store_stream(dup, {}, dir / "dup"), ValidationError);

    testutil::TempDir bad;
    write_text(bad / kManifestName, manifest_line(make_record(0, 0)) + "\n" + manifest_line(make_record(2, 250)) +
                                        "\n" + manifest_line(make_record(1, 500)) + "\n");
    CHECK_THROWS_AS(load_stream(bad.path()), ValidationError);

    CHECK_THROWS_AS(load_stream(bad / "missing"), IoError);
}

TEST_CASE("segment lines round trip") {
    const ActivitySegment s{4, "P2", "Reading", 1000, 61000};
    CHECK(parse_segment_line(segment_line(s), 1) == s);
    CHECK(s.duration_s() == doctest::Approx(60.0));
    CHECK(s.contains(1000));
    CHECK_FALSE(s.contains(61000));
}
