#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tgs/embeddings.hpp"

namespace tgs {

// Dot product of two unit vectors, clamped to [-1, 1].
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const Embedding& a, const Embedding& b);

struct WindowStats {
    double min = 0.0;
    double max = 0.0;
    double range() const { return max - min; }
};

// Sliding window over the most recent `capacity` embeddings of one stream.
//
// Entries are addressed by absolute stream index (0 for the first push).
// Each push computes the new entry's similarities against the retained
// entries and records the rolling mean w_j of the square similarity
// submatrix over indices [max(0, j - capacity + 1), j], diagonal included.
// Because that submatrix is exactly the window content at push time, the
// stored w_j equals a batch evaluation over the full similarity matrix.
// (wi - min w) / (max w - min w + epsilon) over explicit rolling means.
double min_max_score(std::span<const double> w, double wi, double epsilon = 1e-8);

class SimilarityWindow {
public:
    explicit SimilarityWindow(std::size_t capacity);

    void push(const Embedding& e);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    // Absolute index range currently held, inclusive. Undefined when empty.
    std::int64_t first_index() const { return next_ - static_cast<std::int64_t>(size_); }
    std::int64_t last_index() const { return next_ - 1; }
    bool contains(std::int64_t j) const { return size_ > 0 && j >= first_index() && j <= last_index(); }

    const Embedding& entry(std::int64_t j) const;
    double similarity(std::int64_t a, std::int64_t b) const;

    // w_j; throws ArgumentError when j is outside the window.
    double rolling_mean(std::int64_t j) const;

    // Rolling means of every in-window index, oldest first.
    std::vector<double> rolling_means() const;
    WindowStats stats() const;

    // (w_i - min_j w_j) / (max_j w_j - min_j w_j + epsilon) over the window.
    double normalized_score(std::int64_t i, double epsilon = 1e-8) const;

    // Dense copy of the in-window similarity matrix, oldest first.
    std::vector<std::vector<double>> matrix() const;
    void dump_csv(const std::filesystem::path& path) const;

private:
    std::size_t slot(std::int64_t j) const { return static_cast<std::size_t>(j % static_cast<std::int64_t>(capacity_)); }
    void require(std::int64_t j) const;

    std::size_t capacity_;
    std::size_t size_ = 0;
    std::int64_t next_ = 0;
    std::vector<Embedding> entries_;
    std::vector<double> sim_;       // capacity x capacity, indexed by slot
    std::vector<double> row_sum_;   // per-slot sum of similarities to in-window entries
    std::vector<double> rolling_;   // per-slot w_j
};

}  // namespace tgs
