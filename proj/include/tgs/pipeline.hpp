#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "tgs/embeddings.hpp"
#include "tgs/frames.hpp"
#include "tgs/spatial.hpp"
#include "tgs/temporal.hpp"

namespace tgs {

struct PipelineOptions {
    std::string name = "thor-high";
    SamplerConfig sampler;
    SpatialConfig spatial;
    bool crop = true;  // false: sampled frames keep the full frame
};

// Per-frame callback: record index, fps after the update, decision.
using StepObserver = std::function<void(std::size_t, double, Decision)>;
using ThermalSource = std::function<ThermalFrame(std::size_t)>;

// Runs embed -> similarity window -> dynamic FPS -> credit scheduler -> crop
// over `records`, one independent sampler per participant. Embeddings come
// from `external` when given, else from the block-mean embedder. Sampled
// frames without a heat patch keep the full frame (null crop).
SampleTrace run_adaptive(std::span<const FrameRecord> records, const ThermalSource& thermal_at, FrameDims rgb,
                         FrameDims thermal, const PipelineOptions& options, const EmbeddingTable* external = nullptr,
                         const StepObserver& observer = {});

}  // namespace tgs
