#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tgs {

// Lowercase, drop punctuation, collapse whitespace.
std::string normalize_text(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

// activity label -> keyword phrases (normalized).
class KeywordMap {
public:
    KeywordMap() = default;

    // Adds a phrase; empty phrases (after normalization) are ignored.
    void add(const std::string& activity, std::string_view phrase);

    const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }
    bool contains(const std::string& activity) const { return entries_.count(activity) != 0; }
    std::size_t size() const { return entries_.size(); }

    // Throws ValidationError when an activity has no phrases.
    void validate() const;

    // The 30-activity keyword table used for the study's recognition scoring.
    static KeywordMap bundled_default();
    static KeywordMap load_csv(const std::filesystem::path& path);
    std::string to_csv() const;

private:
    std::map<std::string, std::vector<std::string>> entries_;
};

// Activities whose phrases occur as whole-word token runs in the caption.
std::set<std::string> match_caption(std::string_view caption, const KeywordMap& map);

// First phrase of `activity` that, used as a caption, matches only that
// activity. nullopt if every phrase overlaps another activity.
std::optional<std::string> distinctive_keyword(const std::string& activity, const KeywordMap& map);

struct CaptionRecord {
    std::int64_t segment_id = 0;
    std::string participant_id;
    std::string caption;
    std::string ground_truth;
};

// Captions JSONL: {segment, participant, caption, truth}.
std::vector<CaptionRecord> load_captions(const std::filesystem::path& path);
void store_captions(std::span<const CaptionRecord> records, const std::filesystem::path& path);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

struct ClassCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t support = 0;  // records with this ground truth
};

struct PrfReport {
    std::map<std::string, ClassCounts> counts;     // pooled over all records
    std::map<std::string, Metrics> per_class;
    Metrics macro_classes;                         // mean over ground-truth classes
    std::map<std::string, Metrics> per_participant;
    Metrics macro_participants;                    // mean over participants
    double micro_accuracy = 0.0;                   // correct records / all records
    std::int64_t records = 0;

    nlohmann::ordered_json to_json() const;
};

// A record is correct iff its ground truth is in the caption's match set.
// One-vs-rest counts per class: a match on another class is a false
// positive for that class; a missing ground-truth match is a false negative.
// Per-class accuracy is the fraction of the class's records that are correct.
// Throws ConfigError when a ground truth is missing from the map.
PrfReport evaluate(std::span<const CaptionRecord> records, const KeywordMap& map);

// Text -> vector lookup for externally embedded captions, keyed by
// text_hash(normalized text).
class ExternalVectorizer {
public:
    static ExternalVectorizer load_csv(const std::filesystem::path& path);
    void add(std::string_view text, std::vector<double> vec);
    const std::vector<double>& lookup(std::string_view text) const;

private:
    std::map<std::string, std::vector<double>> table_;
};

// FNV-1a 64 of the normalized text, as 16 lowercase hex digits.
std::string text_hash(std::string_view text);

// Built-in: cosine of L2-normalized unigram term frequencies, in [0, 1].
double caption_similarity(std::string_view a, std::string_view b);
// External: cosine of looked-up vectors, clamped to [0, 1].
double caption_similarity(std::string_view a, std::string_view b, const ExternalVectorizer& vectorizer);

}  // namespace tgs
