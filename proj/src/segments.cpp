#include "tgs/segments.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "tgs/error.hpp"

namespace tgs {

const char* to_string(LengthBin bin) {
    switch (bin) {
        case LengthBin::short_: return "short";
        case LengthBin::medium: return "medium";
        case LengthBin::long_: return "long";
    }
    return "short";
}

LengthBin LengthThresholds::bin_of(double length_s) const {
    if (length_s < t1_s) return LengthBin::short_;
    if (length_s < t2_s) return LengthBin::medium;
    return LengthBin::long_;
}

LengthThresholds head_tail_thresholds(std::span<const double> lengths_s) {
    if (lengths_s.empty()) throw DegenerateError("head/tail: no lengths");
    auto [mn, mx] = std::minmax_element(lengths_s.begin(), lengths_s.end());
    if (!(*mx > *mn)) throw DegenerateError("head/tail: constant length distribution");

    double sum = 0.0;
    for (double v : lengths_s) sum += v;
    const double t1 = sum / static_cast<double>(lengths_s.size());

    double head_sum = 0.0;
    std::size_t head_n = 0;
    for (double v : lengths_s) {
        if (v > t1) {
            head_sum += v;
            ++head_n;
        }
    }
    if (head_n == 0) throw DegenerateError("head/tail: empty head");
    return {t1, head_sum / static_cast<double>(head_n)};
}

SegmentBins bin_segments(std::span<const ActivitySegment> segments, const LengthThresholds& thresholds) {
    if (!(thresholds.t1_s < thresholds.t2_s)) throw ArgumentError("length thresholds must satisfy t1 < t2");
    SegmentBins bins{thresholds, {}};
    for (const auto& s : segments) bins.bin_of[s.segment_id] = thresholds.bin_of(s.duration_s());
    return bins;
}

namespace {

const FrameRecord& find_record(std::span<const FrameRecord> records, std::int64_t frame_id) {
    auto it = std::lower_bound(records.begin(), records.end(), frame_id,
                               [](const FrameRecord& r, std::int64_t id) { return r.frame_id < id; });
    if (it == records.end() || it->frame_id != frame_id)
        throw ConsistencyError("trace references unknown frame_id " + std::to_string(frame_id));
    return *it;
}

nlohmann::ordered_json bin_json(const BinCoverage& b) {
    return {{"covered", b.covered}, {"total", b.total}, {"fraction", b.fraction()}};
}

}  // namespace

CoverageReport coverage(const SampleTrace& trace, std::span<const FrameRecord> records,
                        std::span<const ActivitySegment> segments, const SegmentBins& bins, int min_frames) {
    CoverageReport report;
    report.min_frames = min_frames;

    std::map<std::string, std::vector<const ActivitySegment*>> by_participant;
    for (const auto& s : segments) {
        by_participant[s.participant_id].push_back(&s);
        report.sampled_frames[s.segment_id] = 0;
    }
    for (auto& [_, segs] : by_participant)
        std::sort(segs.begin(), segs.end(), [](auto* a, auto* b) { return a->start_ms < b->start_ms; });

    for (const auto& e : trace.entries) {
        const FrameRecord& rec = find_record(records, e.frame_id);
        if (rec.timestamp_ms != e.timestamp_ms)
            throw ConsistencyError("trace timestamp for frame_id " + std::to_string(e.frame_id) +
                                   " disagrees with the manifest");
        auto it = by_participant.find(rec.participant_id);
        if (it == by_participant.end()) continue;
        const auto& segs = it->second;
        // Last segment starting at or before t.
        auto pos = std::upper_bound(segs.begin(), segs.end(), e.timestamp_ms,
                                    [](std::int64_t t, const ActivitySegment* s) { return t < s->start_ms; });
        if (pos == segs.begin()) continue;
        const ActivitySegment* seg = *std::prev(pos);
        if (seg->contains(e.timestamp_ms)) ++report.sampled_frames[seg->segment_id];
    }

    for (LengthBin b : kAllBins) report.per_bin[b] = {};
    for (const auto& s : segments) {
        auto bin_it = bins.bin_of.find(s.segment_id);
        LengthBin bin = bin_it != bins.bin_of.end() ? bin_it->second : bins.thresholds.bin_of(s.duration_s());
        bool covered = report.sampled_frames[s.segment_id] >= min_frames;
        auto& pb = report.per_bin[bin];
        ++pb.total;
        ++report.overall.total;
        if (covered) {
            ++pb.covered;
            ++report.overall.covered;
        }
    }
    return report;
}

nlohmann::ordered_json CoverageReport::to_json() const {
    nlohmann::ordered_json j;
    j["min_frames"] = min_frames;
    for (const auto& [bin, b] : per_bin) j["bins"][to_string(bin)] = bin_json(b);
    j["overall"] = bin_json(overall);
    return j;
}

UsageReport pixel_usage(const SampleTrace& trace, std::span<const FrameRecord> records, FrameDims rgb) {
    UsageReport report;
    const std::int64_t area = rgb.area();
    for (const auto& r : records) report.per_participant[r.participant_id].total += area;
    report.overall.total = area * static_cast<std::int64_t>(records.size());

    for (const auto& e : trace.entries) {
        const FrameRecord& rec = find_record(records, e.frame_id);
        std::int64_t px = e.crop ? e.crop->area() : area;
        report.per_participant[rec.participant_id].sampled += px;
        report.overall.sampled += px;
    }
    return report;
}

nlohmann::ordered_json UsageReport::to_json() const {
    nlohmann::ordered_json j;
    j["pixels_sampled"] = overall.sampled;
    j["pixels_total"] = overall.total;
    j["ratio"] = overall.ratio();
    for (const auto& [pid, c] : per_participant)
        j["participants"][pid] = {{"pixels_sampled", c.sampled}, {"pixels_total", c.total}, {"ratio", c.ratio()}};
    return j;
}

std::string coverage_table_csv(std::span<const ComparisonRow> rows) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "sampler,coverage_short,coverage_medium,coverage_long,coverage_overall,pixel_usage\n";
    for (const auto& r : rows) {
        out << r.sampler;
        for (LengthBin b : kAllBins) {
            auto it = r.coverage.per_bin.find(b);
            out << ',' << (it == r.coverage.per_bin.end() ? 0.0 : it->second.fraction());
        }
        out << ',' << r.coverage.overall.fraction() << ',' << r.usage.ratio() << '\n';
    }
    return out.str();
}

std::string participant_usage_csv(std::span<const ComparisonRow> rows) {
    std::set<std::string> participants;
    for (const auto& r : rows)
        for (const auto& [pid, _] : r.usage.per_participant) participants.insert(pid);

    std::ostringstream out;
    out << std::setprecision(10);
    out << "participant";
    for (const auto& r : rows) out << ',' << r.sampler;
    out << '\n';
    auto row_for = [&](const std::string& name, auto&& cell) {
        out << name;
        for (const auto& r : rows) out << ',' << 100.0 * cell(r);
        out << '\n';
    };
    for (const auto& pid : participants) {
        row_for(pid, [&](const ComparisonRow& r) {
            auto it = r.usage.per_participant.find(pid);
            return it == r.usage.per_participant.end() ? 0.0 : it->second.ratio();
        });
    }
    // Mean of per-participant percentages, as in a per-participant table footer.
    row_for("mean", [&](const ComparisonRow& r) {
        if (r.usage.per_participant.empty()) return 0.0;
        double s = 0.0;
        for (const auto& [_, c] : r.usage.per_participant) s += c.ratio();
        return s / static_cast<double>(r.usage.per_participant.size());
    });
    return out.str();
}

}  // namespace tgs
