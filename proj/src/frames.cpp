#include "tgs/frames.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tgs/error.hpp"

namespace tgs {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ThermalFrame::validate() const {
    if (width <= 0 || height <= 0 || temps.size() != static_cast<std::size_t>(width) * height)
        throw ValidationError("thermal frame size does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    for (double t : temps) {
        if (!std::isfinite(t) || t < kThermalMinC || t > kThermalMaxC)
            throw ValidationError("thermal temperature out of storage range: " + std::to_string(t));
    }
}

void RgbFrame::validate() const {
    if (width <= 0 || height <= 0 || pixels.size() != 3u * static_cast<std::size_t>(width) * height)
        throw ValidationError("rgb frame size does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
}

std::uint16_t temp_to_sample(double temp_c) {
    if (!std::isfinite(temp_c) || temp_c < kThermalMinC || temp_c > kThermalMaxC)
        throw ValidationError("temperature outside storage range: " + std::to_string(temp_c));
    return static_cast<std::uint16_t>(std::lround((temp_c - kThermalMinC) * 100.0));
}

double sample_to_temp(std::uint16_t sample) { return static_cast<double>(sample) / 100.0 + kThermalMinC; }

namespace {

struct PnmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_offset = 0;
};

// Netpbm header: magic, then width, height, maxval separated by whitespace
// (with '#' comments), then exactly one whitespace byte before the raster.
PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    auto fail = [](const std::string& msg) -> PnmHeader { throw FormatError("netpbm: " + msg); };

    if (bytes.size() < 2) fail("truncated header");
    PnmHeader h;
    h.magic = {static_cast<char>(bytes[0]), static_cast<char>(bytes[1])};
    pos = 2;

    auto skip_space = [&] {
        while (pos < bytes.size()) {
            char c = static_cast<char>(bytes[pos]);
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> int {
        skip_space();
        long value = 0;
        std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000'000L) fail("header value too large");
            ++pos;
        }
        if (pos == start) fail("expected integer in header");
        return static_cast<int>(value);
    };

    if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("bad magic");
    h.width = read_int();
    h.height = read_int();
    h.maxval = read_int();
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("truncated header");
    h.data_offset = pos + 1;
    if (h.width <= 0 || h.height <= 0) fail("non-positive dimensions");
    return h;
}

std::string header_text(const char* magic, int w, int h, int maxval) {
    return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
           std::to_string(maxval) + "\n";
}

}  // namespace

std::vector<std::uint8_t> encode_thermal(const ThermalFrame& frame) {
    frame.validate();
    std::string head = header_text("P5", frame.width, frame.height, 65535);
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.reserve(out.size() + frame.temps.size() * 2);
    for (double t : frame.temps) {
        std::uint16_t s = temp_to_sample(t);
        out.push_back(static_cast<std::uint8_t>(s >> 8));
        out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
    return out;
}

ThermalFrame decode_thermal(std::span<const std::uint8_t> bytes, std::int64_t timestamp_ms) {
    PnmHeader h = parse_pnm_header(bytes);
    if (h.magic != "P5") throw FormatError("thermal: expected P5 magic, got " + h.magic);
    if (h.maxval != 65535) throw FormatError("thermal: expected maxval 65535, got " + std::to_string(h.maxval));
    std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.data_offset < 2 * n) throw FormatError("thermal: truncated payload");

    ThermalFrame f;
    f.timestamp_ms = timestamp_ms;
    f.width = h.width;
    f.height = h.height;
    f.temps.resize(n);
    const std::uint8_t* p = bytes.data() + h.data_offset;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
        f.temps[i] = sample_to_temp(s);
    }
    return f;
}

std::vector<std::uint8_t> encode_rgb(const RgbFrame& frame) {
    frame.validate();
    std::string head = header_text("P6", frame.width, frame.height, 255);
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

RgbFrame decode_rgb(std::span<const std::uint8_t> bytes, std::int64_t timestamp_ms) {
    PnmHeader h = parse_pnm_header(bytes);
    if (h.magic != "P6") throw FormatError("rgb: expected P6 magic, got " + h.magic);
    if (h.maxval != 255) throw FormatError("rgb: expected maxval 255, got " + std::to_string(h.maxval));
    std::size_t n = 3u * static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.data_offset < n) throw FormatError("rgb: truncated payload");

    RgbFrame f;
    f.timestamp_ms = timestamp_ms;
    f.width = h.width;
    f.height = h.height;
    f.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset),
                    bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset + n));
    return f;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

FrameDims probe_rgb_dims(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> head(256);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    PnmHeader h = parse_pnm_header(head);
    if (h.magic != "P6") throw FormatError("rgb: expected P6 magic in " + path.string());
    return {h.width, h.height};
}

ThermalFrame read_thermal(const fs::path& path, std::int64_t timestamp_ms) {
    auto bytes = read_bytes(path);
    return decode_thermal(bytes, timestamp_ms);
}

RgbFrame read_rgb(const fs::path& path, std::int64_t timestamp_ms) {
    auto bytes = read_bytes(path);
    return decode_rgb(bytes, timestamp_ms);
}

// --- manifests -------------------------------------------------------------

void validate_records(std::span<const FrameRecord> records) {
    std::map<std::string, std::int64_t> last_t;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && r.frame_id <= records[i - 1].frame_id)
            throw ValidationError("frame_id not strictly increasing at frame_id " + std::to_string(r.frame_id));
        if (r.timestamp_ms < 0) throw ValidationError("negative timestamp at frame_id " + std::to_string(r.frame_id));
        auto [it, inserted] = last_t.try_emplace(r.participant_id, r.timestamp_ms);
        if (!inserted) {
            if (r.timestamp_ms < it->second)
                throw ValidationError("timestamp decreases at frame_id " + std::to_string(r.frame_id));
            it->second = r.timestamp_ms;
        }
    }
}

namespace {

void validate_segments(std::span<const ActivitySegment> segments) {
    std::map<std::string, std::vector<const ActivitySegment*>> by_participant;
    for (const auto& s : segments) {
        if (s.end_ms <= s.start_ms)
            throw ValidationError("segment " + std::to_string(s.segment_id) + " has end <= start");
        by_participant[s.participant_id].push_back(&s);
    }
    for (auto& [pid, segs] : by_participant) {
        std::sort(segs.begin(), segs.end(), [](auto* a, auto* b) { return a->start_ms < b->start_ms; });
        for (std::size_t i = 1; i < segs.size(); ++i) {
            if (segs[i]->start_ms < segs[i - 1]->end_ms)
                throw ValidationError("overlapping segments for participant " + pid);
        }
    }
}

}  // namespace

std::vector<ActivitySegment> derive_segments(std::span<const FrameRecord> records, std::int64_t period_ms) {
    std::vector<ActivitySegment> out;
    std::optional<ActivitySegment> run;
    std::int64_t last_t = 0;
    std::int64_t next_id = 0;

    auto close = [&] {
        if (run) {
            run->end_ms = last_t + period_ms;
            out.push_back(*run);
            run.reset();
        }
    };

    for (const auto& r : records) {
        bool continues = run && r.activity_label && *r.activity_label == run->label &&
                         r.participant_id == run->participant_id && r.timestamp_ms - last_t <= 2 * period_ms;
        if (!continues) {
            close();
            if (r.activity_label) {
                run = ActivitySegment{next_id++, r.participant_id, *r.activity_label, r.timestamp_ms, 0};
            }
        }
        last_t = r.timestamp_ms;
    }
    close();
    return out;
}

std::string manifest_line(const FrameRecord& r) {
    ordered_json j;
    j["frame_id"] = r.frame_id;
    j["t_ms"] = r.timestamp_ms;
    j["thermal"] = r.thermal_path;
    j["rgb"] = r.rgb_path;
    j["participant"] = r.participant_id;
    j["label"] = r.activity_label ? ordered_json(*r.activity_label) : ordered_json(nullptr);
    j["segment"] = r.segment_id ? ordered_json(*r.segment_id) : ordered_json(nullptr);
    return j.dump();
}

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key, std::size_t line_no) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        throw ParseError("line " + std::to_string(line_no) + ": missing key '" + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": wrong type for key '" + key + "'");
    }
}

template <typename T>
std::optional<T> optional_key(const nlohmann::json& j, const char* key, std::size_t line_no) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": wrong type for key '" + key + "'");
    }
}

nlohmann::json parse_object(const std::string& line, std::size_t line_no,
                            std::initializer_list<const char*> allowed) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("line " + std::to_string(line_no) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return j;
}

template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        fn(line, line_no);
    }
}

}  // namespace

FrameRecord parse_manifest_line(const std::string& line, std::size_t line_no) {
    auto j = parse_object(line, line_no, {"frame_id", "t_ms", "thermal", "rgb", "participant", "label", "segment"});
    FrameRecord r;
    r.frame_id = required<std::int64_t>(j, "frame_id", line_no);
    r.timestamp_ms = required<std::int64_t>(j, "t_ms", line_no);
    r.thermal_path = required<std::string>(j, "thermal", line_no);
    r.rgb_path = required<std::string>(j, "rgb", line_no);
    r.participant_id = required<std::string>(j, "participant", line_no);
    r.activity_label = optional_key<std::string>(j, "label", line_no);
    r.segment_id = optional_key<std::int64_t>(j, "segment", line_no);
    return r;
}

std::string segment_line(const ActivitySegment& s) {
    ordered_json j;
    j["segment"] = s.segment_id;
    j["participant"] = s.participant_id;
    j["label"] = s.label;
    j["start_ms"] = s.start_ms;
    j["end_ms"] = s.end_ms;
    return j.dump();
}

ActivitySegment parse_segment_line(const std::string& line, std::size_t line_no) {
    auto j = parse_object(line, line_no, {"segment", "participant", "label", "start_ms", "end_ms"});
    ActivitySegment s;
    s.segment_id = required<std::int64_t>(j, "segment", line_no);
    s.participant_id = required<std::string>(j, "participant", line_no);
    s.label = required<std::string>(j, "label", line_no);
    s.start_ms = required<std::int64_t>(j, "start_ms", line_no);
    s.end_ms = required<std::int64_t>(j, "end_ms", line_no);
    return s;
}

Stream load_stream(const fs::path& manifest_path, std::int64_t period_ms) {
    fs::path manifest = fs::is_directory(manifest_path) ? manifest_path / kManifestName : manifest_path;
    if (!fs::exists(manifest)) throw IoError("manifest not found: " + manifest.string());

    Stream stream;
    stream.root = manifest.parent_path();
    for_each_line(manifest, [&](const std::string& line, std::size_t n) {
        stream.records.push_back(parse_manifest_line(line, n));
    });
    validate_records(stream.records);

    fs::path seg_file = stream.root / kSegmentsName;
    if (fs::exists(seg_file)) {
        for_each_line(seg_file, [&](const std::string& line, std::size_t n) {
            stream.segments.push_back(parse_segment_line(line, n));
        });
        validate_segments(stream.segments);
    } else {
        stream.segments = derive_segments(stream.records, period_ms);
    }
    return stream;
}

fs::path store_stream(std::span<const FrameRecord> records, std::span<const ActivitySegment> segments,
                      const fs::path& out_dir) {
    validate_records(records);
    validate_segments(segments);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    auto write_lines = [](const fs::path& path, auto&& range, auto&& fmt) {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        for (const auto& item : range) out << fmt(item) << '\n';
        if (!out) throw IoError("write failed: " + path.string());
    };

    fs::path manifest = out_dir / kManifestName;
    write_lines(manifest, records, manifest_line);
    write_lines(out_dir / kSegmentsName, segments, segment_line);
    return manifest;
}

std::string stream_digest(std::span<const FrameRecord> records) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (const auto& r : records) {
        for (unsigned char c : manifest_line(r)) mix(c);
        mix('\n');
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace tgs
