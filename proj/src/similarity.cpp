#include "tgs/similarity.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "tgs/error.hpp"

namespace tgs {

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionError("cosine: dimension mismatch " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return std::clamp(s, -1.0, 1.0);
}

double cosine(const Embedding& a, const Embedding& b) { return cosine(a.values, b.values); }

SimilarityWindow::SimilarityWindow(std::size_t capacity)
    : capacity_(capacity),
      entries_(capacity),
      sim_(capacity * capacity, 0.0),
      row_sum_(capacity, 0.0),
      rolling_(capacity, 0.0) {
    if (capacity == 0) throw ArgumentError("similarity window capacity must be >= 1");
}

void SimilarityWindow::push(const Embedding& e) {
    if (size_ == capacity_) {
        const std::int64_t evicted = first_index();
        const std::size_t es = slot(evicted);
        for (std::int64_t m = evicted + 1; m <= last_index(); ++m) row_sum_[slot(m)] -= sim_[slot(m) * capacity_ + es];
        --size_;
    }

    const std::int64_t j = next_;
    const std::size_t js = slot(j);
    entries_[js] = e;
    sim_[js * capacity_ + js] = 1.0;
    double row = 1.0;
    for (std::int64_t m = first_index(); m < j; ++m) {
        const std::size_t ms = slot(m);
        double c = cosine(e, entries_[ms]);
        sim_[js * capacity_ + ms] = c;
        sim_[ms * capacity_ + js] = c;
        row_sum_[ms] += c;
        row += c;
    }
    row_sum_[js] = row;
    ++size_;
    ++next_;

    double total = 0.0;
    for (std::int64_t m = first_index(); m <= j; ++m) total += row_sum_[slot(m)];
    rolling_[js] = total / static_cast<double>(size_ * size_);
}

void SimilarityWindow::require(std::int64_t j) const {
    if (!contains(j)) throw ArgumentError("index " + std::to_string(j) + " is outside the similarity window");
}

const Embedding& SimilarityWindow::entry(std::int64_t j) const {
    require(j);
    return entries_[slot(j)];
}

double SimilarityWindow::similarity(std::int64_t a, std::int64_t b) const {
    require(a);
    require(b);
    return sim_[slot(a) * capacity_ + slot(b)];
}

double SimilarityWindow::rolling_mean(std::int64_t j) const {
    require(j);
    return rolling_[slot(j)];
}

std::vector<double> SimilarityWindow::rolling_means() const {
    std::vector<double> out;
    out.reserve(size_);
    for (std::int64_t m = first_index(); m <= last_index(); ++m) out.push_back(rolling_[slot(m)]);
    return out;
}

WindowStats SimilarityWindow::stats() const {
    if (empty()) throw ArgumentError("similarity window is empty");
    WindowStats s{rolling_[slot(first_index())], rolling_[slot(first_index())]};
    for (std::int64_t m = first_index(); m <= last_index(); ++m) {
        s.min = std::min(s.min, rolling_[slot(m)]);
        s.max = std::max(s.max, rolling_[slot(m)]);
    }
    return s;
}

double SimilarityWindow::normalized_score(std::int64_t i, double epsilon) const {
    const double wi = rolling_mean(i);
    const WindowStats s = stats();
    return (wi - s.min) / (s.range() + epsilon);
}

double min_max_score(std::span<const double> w, double wi, double epsilon) {
    if (w.empty()) throw ArgumentError("normalized score of an empty window");
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return (wi - *lo) / (*hi - *lo + epsilon);
}

std::vector<std::vector<double>> SimilarityWindow::matrix() const {
    std::vector<std::vector<double>> out;
    for (std::int64_t a = first_index(); a <= last_index(); ++a) {
        auto& row = out.emplace_back();
        for (std::int64_t b = first_index(); b <= last_index(); ++b) row.push_back(sim_[slot(a) * capacity_ + slot(b)]);
    }
    return out;
}

void SimilarityWindow::dump_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    out << "index";
    for (std::int64_t b = first_index(); b <= last_index(); ++b) out << ',' << b;
    out << '\n';
    auto m = matrix();
    for (std::size_t a = 0; a < m.size(); ++a) {
        out << first_index() + static_cast<std::int64_t>(a);
        for (double v : m[a]) out << ',' << v;
        out << '\n';
    }
}

}  // namespace tgs
