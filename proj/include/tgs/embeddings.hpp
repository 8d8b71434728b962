#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tgs/frames.hpp"

namespace tgs {

inline constexpr std::size_t kEmbeddingDim = 64;
inline constexpr int kBlockGrid = 8;  // 8x8 blocks -> 64 components

struct Embedding {
    std::int64_t frame_id = 0;
    std::array<double, kEmbeddingDim> values{};

    double norm() const;
};

// Normalizes `values` to unit length in place. Throws DegenerateError on a
// zero (or non-finite) vector.
void normalize(std::span<double> values);

// Built-in stand-in for a learned thermal encoder: 8x8 block means,
// mean-centered, L2-normalized.
Embedding embed_blockmean(const ThermalFrame& frame, std::int64_t frame_id = 0);

using EmbeddingTable = std::map<std::int64_t, Embedding>;

// CSV rows `frame_id,v0,...,v63`; an optional header row starting with
// "frame_id" is skipped. Rows are normalized on load.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void store_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

struct ClusterAssignment {
    std::map<std::int64_t, int> cluster_of;  // frame_id -> cluster index
    int k = 0;
    std::vector<double> objective_trace;     // within-cluster SSE after each Lloyd iteration

    double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

// Lloyd's algorithm with k-means++ seeding. Stops when assignments stop
// changing or after max_iter iterations.
ClusterAssignment kmeans(std::span<const Embedding> points, int k, std::uint64_t seed, int max_iter = 100);

void store_assignment(const ClusterAssignment& a, const std::filesystem::path& path);

// Normalized mutual information I(C;L) / sqrt(H(C) H(L)), natural log.
// Returns 0 when either side has zero entropy.
double nmi(const std::map<std::int64_t, int>& clusters, const std::map<std::int64_t, std::string>& labels);

// Generic form over two aligned label vectors.
double nmi(std::span<const int> a, std::span<const int> b);

}  // namespace tgs
