#include "tgs/recognition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tgs/error.hpp"

namespace tgs {

namespace detail {
extern const std::string_view kDefaultKeywordsCsv;
}

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
        } else if (std::ispunct(c)) {
            continue;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in(normalize_text(text));
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

void KeywordMap::add(const std::string& activity, std::string_view phrase) {
    std::string p = normalize_text(phrase);
    auto& list = entries_[activity];
    if (!p.empty()) list.push_back(std::move(p));
}

void KeywordMap::validate() const {
    for (const auto& [activity, phrases] : entries_)
        if (phrases.empty()) throw ValidationError("activity '" + activity + "' has no keywords");
}

namespace {

KeywordMap parse_keyword_csv(std::istream& in, const std::string& source) {
    KeywordMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "activity,keyword") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(source + " line " + std::to_string(line_no) + ": expected activity,keyword");
        map.add(line.substr(0, comma), line.substr(comma + 1));
    }
    map.validate();
    return map;
}

}  // namespace

KeywordMap KeywordMap::bundled_default() {
    std::istringstream in{std::string(detail::kDefaultKeywordsCsv)};
    return parse_keyword_csv(in, "bundled keywords");
}

KeywordMap KeywordMap::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_keyword_csv(in, path.string());
}

std::string KeywordMap::to_csv() const {
    std::string out = "activity,keyword\n";
    for (const auto& [activity, phrases] : entries_)
        for (const auto& p : phrases) out += activity + "," + p + "\n";
    return out;
}

namespace {

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

std::set<std::string> match_caption(std::string_view caption, const KeywordMap& map) {
    const auto tokens = tokenize(caption);
    std::set<std::string> out;
    for (const auto& [activity, phrases] : map.entries()) {
        for (const auto& p : phrases) {
            if (contains_run(tokens, tokenize(p))) {
                out.insert(activity);
                break;
            }
        }
    }
    return out;
}

std::optional<std::string> distinctive_keyword(const std::string& activity, const KeywordMap& map) {
    auto it = map.entries().find(activity);
    if (it == map.entries().end()) return std::nullopt;
    for (const auto& p : it->second) {
        auto m = match_caption(p, map);
        if (m.size() == 1 && *m.begin() == activity) return p;
    }
    return std::nullopt;
}

std::vector<CaptionRecord> load_captions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<CaptionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            CaptionRecord r;
            r.segment_id = j.at("segment").get<std::int64_t>();
            r.participant_id = j.at("participant").get<std::string>();
            r.caption = j.at("caption").get<std::string>();
            r.ground_truth = j.at("truth").get<std::string>();
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("captions line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void store_captions(std::span<const CaptionRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["segment"] = r.segment_id;
        j["participant"] = r.participant_id;
        j["caption"] = r.caption;
        j["truth"] = r.ground_truth;
        out << j.dump() << '\n';
    }
}

namespace {

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

struct Tally {
    std::map<std::string, ClassCounts> counts;
    std::int64_t correct = 0;
    std::int64_t total = 0;
};

Tally tally(std::span<const CaptionRecord* const> records, const KeywordMap& map) {
    Tally t;
    for (const auto* r : records) {
        t.counts[r->ground_truth].support += 1;
        auto matches = match_caption(r->caption, map);
        bool hit = matches.count(r->ground_truth) != 0;
        ++t.total;
        if (hit) {
            ++t.correct;
            ++t.counts[r->ground_truth].tp;
        } else {
            ++t.counts[r->ground_truth].fn;
        }
        for (const auto& m : matches)
            if (m != r->ground_truth) ++t.counts[m].fp;
    }
    return t;
}

Metrics metrics_of(const ClassCounts& c) {
    Metrics m;
    m.precision = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    m.recall = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.accuracy = safe_div(static_cast<double>(c.tp), static_cast<double>(c.support));
    return m;
}

// Mean over classes that have ground-truth support.
Metrics macro_over_classes(const std::map<std::string, ClassCounts>& counts, std::map<std::string, Metrics>* per_class) {
    Metrics sum;
    int n = 0;
    for (const auto& [label, c] : counts) {
        if (c.support == 0) continue;
        Metrics m = metrics_of(c);
        if (per_class) (*per_class)[label] = m;
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.f1 += m.f1;
        sum.accuracy += m.accuracy;
        ++n;
    }
    if (n > 0) {
        sum.precision /= n;
        sum.recall /= n;
        sum.f1 /= n;
        sum.accuracy /= n;
    }
    return sum;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy}};
}

}  // namespace

PrfReport evaluate(std::span<const CaptionRecord> records, const KeywordMap& map) {
    if (records.empty()) throw ArgumentError("evaluate: no caption records");
    std::vector<const CaptionRecord*> all;
    std::map<std::string, std::vector<const CaptionRecord*>> by_participant;
    for (const auto& r : records) {
        if (!map.contains(r.ground_truth))
            throw ConfigError("ground truth '" + r.ground_truth + "' is not in the keyword map");
        all.push_back(&r);
        by_participant[r.participant_id].push_back(&r);
    }

    PrfReport report;
    Tally pooled = tally(all, map);
    report.counts = pooled.counts;
    report.records = pooled.total;
    report.micro_accuracy = safe_div(static_cast<double>(pooled.correct), static_cast<double>(pooled.total));
    report.macro_classes = macro_over_classes(pooled.counts, &report.per_class);

    Metrics sum;
    for (const auto& [pid, recs] : by_participant) {
        Metrics m = macro_over_classes(tally(recs, map).counts, nullptr);
        report.per_participant[pid] = m;
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.f1 += m.f1;
        sum.accuracy += m.accuracy;
    }
    const double np = static_cast<double>(by_participant.size());
    report.macro_participants = {sum.precision / np, sum.recall / np, sum.f1 / np, sum.accuracy / np};
    return report;
}

nlohmann::ordered_json PrfReport::to_json() const {
    nlohmann::ordered_json j;
    j["records"] = records;
    j["micro_accuracy"] = micro_accuracy;
    j["macro_classes"] = metrics_json(macro_classes);
    j["macro_participants"] = metrics_json(macro_participants);
    for (const auto& [label, m] : per_class) {
        auto& c = counts.at(label);
        auto row = metrics_json(m);
        row["tp"] = c.tp;
        row["fp"] = c.fp;
        row["fn"] = c.fn;
        row["support"] = c.support;
        j["per_class"][label] = row;
    }
    for (const auto& [pid, m] : per_participant) j["per_participant"][pid] = metrics_json(m);
    return j;
}

std::string text_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : normalize_text(text)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

ExternalVectorizer ExternalVectorizer::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    ExternalVectorizer v;
    std::string line;
    std::size_t line_no = 0, dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("text_hash", 0) == 0)) continue;
        std::stringstream ss(line);
        std::string key, cell;
        std::getline(ss, key, ',');
        std::vector<double> vec;
        try {
            while (std::getline(ss, cell, ',')) vec.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ParseError("vectors line " + std::to_string(line_no) + ": bad number");
        }
        if (vec.empty()) throw ParseError("vectors line " + std::to_string(line_no) + ": no components");
        if (dim == 0) dim = vec.size();
        if (vec.size() != dim) throw ParseError("vectors line " + std::to_string(line_no) + ": dimension mismatch");
        v.table_[key] = std::move(vec);
    }
    return v;
}

void ExternalVectorizer::add(std::string_view text, std::vector<double> vec) { table_[text_hash(text)] = std::move(vec); }

const std::vector<double>& ExternalVectorizer::lookup(std::string_view text) const {
    auto it = table_.find(text_hash(text));
    if (it == table_.end()) throw MissingEmbeddingError("no external embedding for text '" + std::string(text) + "'");
    return it->second;
}

namespace {

void require_text(std::string_view text) {
    if (normalize_text(text).empty()) throw ArgumentError("caption_similarity: empty text after normalization");
}

}  // namespace

double caption_similarity(std::string_view a, std::string_view b) {
    require_text(a);
    require_text(b);
    std::map<std::string, double> ta, tb;
    for (auto& t : tokenize(a)) ta[t] += 1.0;
    for (auto& t : tokenize(b)) tb[t] += 1.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, c] : ta) {
        na += c * c;
        auto it = tb.find(t);
        if (it != tb.end()) dot += c * it->second;
    }
    for (const auto& [t, c] : tb) nb += c * c;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double caption_similarity(std::string_view a, std::string_view b, const ExternalVectorizer& vectorizer) {
    require_text(a);
    require_text(b);
    const auto& va = vectorizer.lookup(a);
    const auto& vb = vectorizer.lookup(b);
    if (va.size() != vb.size()) throw DimensionError("caption_similarity: vector dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 || nb == 0.0) throw DegenerateError("caption_similarity: zero vector");
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace tgs
