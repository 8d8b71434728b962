#include "tgs/pipeline.hpp"

#include <map>

#include "tgs/error.hpp"

namespace tgs {

SampleTrace run_adaptive(std::span<const FrameRecord> records, const ThermalSource& thermal_at, FrameDims rgb,
                         FrameDims thermal, const PipelineOptions& options, const EmbeddingTable* external,
                         const StepObserver& observer) {
    options.sampler.validate();
    const Calibration cal = options.spatial.calibration_for(thermal, rgb);

    SampleTrace trace;
    trace.sampler = options.name;
    trace.config = options.sampler.to_json();
    trace.config["margin_px"] = options.spatial.margin_px;
    trace.config["calibration"] = {cal.scale_x, cal.scale_y, cal.offset_x, cal.offset_y};
    trace.config["crop"] = options.crop;
    trace.stream_id = stream_digest(records);

    std::map<std::string, TemporalSampler> samplers;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const FrameRecord& r = records[i];
        auto it = samplers.find(r.participant_id);
        if (it == samplers.end()) it = samplers.emplace(r.participant_id, TemporalSampler(options.sampler)).first;

        std::optional<ThermalFrame> frame;
        Embedding e;
        if (external) {
            auto found = external->find(r.frame_id);
            if (found == external->end())
                throw MissingEmbeddingError("no embedding for frame_id " + std::to_string(r.frame_id));
            e = found->second;
        } else {
            frame = thermal_at(i);
            e = embed_blockmean(*frame, r.frame_id);
        }

        Decision d = it->second.step(e, r.timestamp_ms);
        if (observer) observer(i, it->second.current_fps(), d);
        if (d != Decision::sample) continue;

        TraceEntry entry{r.frame_id, r.timestamp_ms, it->second.current_fps(), std::nullopt};
        if (options.crop) {
            if (!frame) frame = thermal_at(i);
            entry.crop = patch_box(*frame, cal, options.spatial.margin_px, rgb);
        }
        trace.entries.push_back(entry);
    }
    return trace;
}

}  // namespace tgs
