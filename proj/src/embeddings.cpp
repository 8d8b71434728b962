#include "tgs/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "tgs/error.hpp"

namespace tgs {

double Embedding::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

void normalize(std::span<double> values) {
    double s = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw DegenerateError("embedding has a non-finite component");
        s += v * v;
    }
    double n = std::sqrt(s);
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateError("embedding has zero norm");
    for (double& v : values) v /= n;
}

Embedding embed_blockmean(const ThermalFrame& frame, std::int64_t frame_id) {
    if (frame.width % kBlockGrid != 0 || frame.height % kBlockGrid != 0 ||
        frame.temps.size() != static_cast<std::size_t>(frame.width) * frame.height)
        throw DimensionError("thermal frame " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                             " does not tile into an 8x8 block grid");

    const int bw = frame.width / kBlockGrid;
    const int bh = frame.height / kBlockGrid;
    Embedding e;
    e.frame_id = frame_id;
    for (int by = 0; by < kBlockGrid; ++by) {
        for (int bx = 0; bx < kBlockGrid; ++bx) {
            double s = 0.0;
            for (int y = by * bh; y < (by + 1) * bh; ++y)
                for (int x = bx * bw; x < (bx + 1) * bw; ++x) s += frame.at(x, y);
            e.values[static_cast<std::size_t>(by * kBlockGrid + bx)] = s / (bw * bh);
        }
    }

    double mean = 0.0;
    for (double v : e.values) mean += v;
    mean /= kEmbeddingDim;
    double spread = 0.0;
    for (double& v : e.values) {
        v -= mean;
        spread = std::max(spread, std::abs(v));
    }
    // Block means of a constant frame differ from their mean only by rounding.
    if (spread <= 1e-9 * std::max(1.0, std::abs(mean)))
        throw DegenerateError("zero-variance thermal frame has no embedding");
    normalize(e.values);
    return e;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("frame_id", 0) == 0) continue;

        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != kEmbeddingDim + 1)
            throw ParseError("embeddings line " + std::to_string(line_no) + ": expected " +
                             std::to_string(kEmbeddingDim + 1) + " columns, got " + std::to_string(cells.size()));

        Embedding e;
        try {
            std::size_t used = 0;
            e.frame_id = std::stoll(cells[0], &used);
            for (std::size_t i = 0; i < kEmbeddingDim; ++i) e.values[i] = std::stod(cells[i + 1]);
        } catch (const std::exception&) {
            throw ParseError("embeddings line " + std::to_string(line_no) + ": bad number");
        }
        for (double v : e.values)
            if (!std::isfinite(v))
                throw ParseError("embeddings line " + std::to_string(line_no) + ": non-finite value");
        normalize(e.values);
        if (!table.emplace(e.frame_id, e).second)
            throw ValidationError("embeddings line " + std::to_string(line_no) + ": duplicate frame_id");
    }
    return table;
}

void store_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    for (const auto& [id, e] : table) {
        out << id;
        for (double v : e.values) out << ',' << v;
        out << '\n';
    }
}

namespace {

double sq_dist(const Embedding& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
        double d = a.values[i] - c[i];
        s += d * d;
    }
    return s;
}

}  // namespace

ClusterAssignment kmeans(std::span<const Embedding> points, int k, std::uint64_t seed, int max_iter) {
    const std::size_t n = points.size();
    if (k < 1) throw ArgumentError("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(k) > n) throw ArgumentError("kmeans: k exceeds point count");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(k));

    // k-means++ seeding.
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    auto first = pick(rng);
    centers.emplace_back(points[first].values.begin(), points[first].values.end());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);
    chosen[first] = 1;
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(points[i], centers.back()));
            total += chosen[i] ? 0.0 : d2[i];
        }
        std::size_t next = n;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng), acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                acc += d2[i];
                if (acc >= target && d2[i] > 0.0) {
                    next = i;
                    break;
                }
            }
        }
        if (next == n) {
            // Remaining points coincide with chosen centers; take the first unchosen.
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) {
                    next = i;
                    break;
                }
        }
        chosen[next] = 1;
        centers.emplace_back(points[next].values.begin(), points[next].values.end());
    }

    std::vector<int> assign(n, -1);
    ClusterAssignment result;
    result.k = k;
    for (int iter = 0; iter < std::max(1, max_iter); ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points[i], centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points[i], centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k), std::vector<double>(kEmbeddingDim, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto c = static_cast<std::size_t>(assign[i]);
            ++counts[c];
            for (std::size_t d = 0; d < kEmbeddingDim; ++d) sums[c][d] += points[i].values[d];
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its center
            for (std::size_t d = 0; d < kEmbeddingDim; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
        double sse_after = 0.0;
        for (std::size_t i = 0; i < n; ++i) sse_after += sq_dist(points[i], centers[static_cast<std::size_t>(assign[i])]);
        result.objective_trace.push_back(sse_after);
    }

    for (std::size_t i = 0; i < n; ++i) result.cluster_of[points[i].frame_id] = assign[i];
    return result;
}

void store_assignment(const ClusterAssignment& a, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "frame_id,cluster\n";
    for (const auto& [id, c] : a.cluster_of) out << id << ',' << c << '\n';
}

namespace {

// Entropy from counts. Terms are summed in sorted order so identical count
// multisets give bitwise-identical entropies.
double entropy(std::vector<double> counts, double total) {
    std::vector<double> terms;
    terms.reserve(counts.size());
    for (double c : counts) {
        if (c <= 0) continue;
        double p = c / total;
        terms.push_back(-p * std::log(p));
    }
    std::sort(terms.begin(), terms.end());
    double h = 0.0;
    for (double t : terms) h += t;
    return h;
}

}  // namespace

double nmi(std::span<const int> a, std::span<const int> b) {
    if (a.empty()) throw ArgumentError("nmi: empty input");
    if (a.size() != b.size()) throw ArgumentError("nmi: inputs differ in size");

    std::map<int, double> ca, cb;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[a[i]] += 1;
        cb[b[i]] += 1;
        joint[{a[i], b[i]}] += 1;
    }
    auto values = [](const auto& m) {
        std::vector<double> v;
        for (const auto& [_, c] : m) v.push_back(c);
        return v;
    };
    const double n = static_cast<double>(a.size());
    double ha = entropy(values(ca), n);
    double hb = entropy(values(cb), n);
    if (ha <= 0.0 || hb <= 0.0) return 0.0;
    double hab = entropy(values(joint), n);
    double mi = ha + hb - hab;
    double score = mi / std::sqrt(ha * hb);
    return std::clamp(score, 0.0, 1.0);
}

double nmi(const std::map<std::int64_t, int>& clusters, const std::map<std::int64_t, std::string>& labels) {
    if (clusters.empty() || labels.empty()) throw ArgumentError("nmi: empty input");
    if (clusters.size() != labels.size()) throw ArgumentError("nmi: assignment and labels cover different frames");

    std::map<std::string, int> label_index;
    std::vector<int> a, b;
    a.reserve(clusters.size());
    b.reserve(clusters.size());
    for (const auto& [id, c] : clusters) {
        auto it = labels.find(id);
        if (it == labels.end()) throw ArgumentError("nmi: frame " + std::to_string(id) + " has no label");
        auto [li, _] = label_index.try_emplace(it->second, static_cast<int>(label_index.size()));
        a.push_back(c);
        b.push_back(li->second);
    }
    return nmi(a, b);
}

}  // namespace tgs
