#include <doctest.h>

#include <fstream>

#include "test_util.hpp"
#include "tgs/error.hpp"
#include "tgs/recognition.hpp"

using namespace tgs;

namespace {

KeywordMap two_class() {
    KeywordMap m;
    m.add("A", "alpha");
    m.add("B", "beta");
    return m;
}

CaptionRecord rec(std::int64_t seg, const std::string& pid, const std::string& caption, const std::string& truth) {
    return {seg, pid, caption, truth};
}

}  // namespace

TEST_CASE("text normalization") {
    CHECK(normalize_text("  Cutting, the ONION!  ") == "cutting the onion");
    CHECK(normalize_text("") == "");
    CHECK(tokenize("a  b\tc") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("bundled keyword map") {
    const KeywordMap m = KeywordMap::bundled_default();
    CHECK(m.size() == 30);
    CHECK_NOTHROW(m.validate());
    CHECK(match_caption("She is texting a friend", m) == std::set<std::string>{"Using Phone"});
    CHECK(match_caption("cutting onion on a board", m) == std::set<std::string>{"Cutting Food"});
    CHECK(match_caption("playing a video game", m) == std::set<std::string>{"Playing Video Games", "Using Computer"});
    CHECK(match_caption("staring at the wall", m).empty());
    for (const auto& [activity, _] : m.entries()) {
        const auto kw = distinctive_keyword(activity, m);
        REQUIRE(kw);
        CHECK(match_caption(*kw, m) == std::set<std::string>{activity});
    }
}

TEST_CASE("phrases match whole token runs") {
    KeywordMap m;
    m.add("Reading", "read");
    m.add("Cooking", "stir fry");
    CHECK(match_caption("they read a book", m) == std::set<std::string>{"Reading"});
    CHECK(match_caption("already done", m).empty());
    CHECK(match_caption("a quick Stir-Fry", m).empty());
    CHECK(match_caption("a quick stir fry", m) == std::set<std::string>{"Cooking"});
    CHECK(match_caption("fry stir", m).empty());
}

TEST_CASE("keyword map csv") {
    testutil::TempDir dir;
    {
        std::ofstream out(dir / "k.csv");
        out << "activity,keyword\nA,alpha one\nA,\nB,beta\n";
    }
    const KeywordMap m = KeywordMap::load_csv(dir / "k.csv");
    CHECK(m.entries().at("A") == std::vector<std::string>{"alpha one"});
    CHECK(m.to_csv() == "activity,keyword\nA,alpha one\nB,beta\n");
    KeywordMap empty;
    empty.add("A", "  ");
    CHECK(empty.entries().at("A").empty());
    CHECK_THROWS_AS(empty.validate(), ValidationError);
    CHECK_THROWS_AS(KeywordMap::load_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("evaluate perfect and empty captions") {
    const KeywordMap m = two_class();
    const std::vector<CaptionRecord> perfect{rec(0, "P1", "alpha", "A"), rec(1, "P1", "beta", "B"),
                                             rec(2, "P2", "an alpha", "A")};
    const auto r = evaluate(perfect, m);
    CHECK(r.macro_classes.precision == 1.0);
    CHECK(r.macro_classes.recall == 1.0);
    CHECK(r.macro_classes.f1 == 1.0);
    CHECK(r.macro_classes.accuracy == 1.0);
    CHECK(r.micro_accuracy == 1.0);
    CHECK(r.macro_participants.f1 == 1.0);

    const std::vector<CaptionRecord> blank{rec(0, "P1", "", "A"), rec(1, "P1", "", "B")};
    const auto b = evaluate(blank, m);
    CHECK(b.macro_classes.recall == 0.0);
    CHECK(b.macro_classes.f1 == 0.0);
    CHECK(b.micro_accuracy == 0.0);
}

TEST_CASE("evaluate tallies a confusion") {
    const KeywordMap m = two_class();
    const std::vector<CaptionRecord> recs{rec(0, "P1", "alpha", "A"), rec(1, "P1", "beta", "A"),
                                          rec(2, "P2", "beta", "B"), rec(3, "P2", "beta", "B")};
    const auto r = evaluate(recs, m);
    const auto& a = r.counts.at("A");
    const auto& b = r.counts.at("B");
    CHECK(a.tp == 1);
    CHECK(a.fn == 1);
    CHECK(a.fp == 0);
    CHECK(b.tp == 2);
    CHECK(b.fp == 1);
    CHECK(b.fn == 0);
    CHECK(r.per_class.at("A").recall == 0.5);
    CHECK(r.per_class.at("B").precision == doctest::Approx(2.0 / 3));
    CHECK(r.macro_classes.precision == doctest::Approx(5.0 / 6));
    CHECK(r.macro_classes.recall == doctest::Approx(0.75));
    CHECK(r.macro_classes.f1 == doctest::Approx((2.0 / 3 + 0.8) / 2));
    CHECK(r.macro_classes.accuracy == doctest::Approx(0.75));
    CHECK(r.micro_accuracy == 0.75);
    // P1 holds only class A (1 of 2 right); P2 only class B (all right).
    CHECK(r.per_participant.at("P1").recall == 0.5);
    CHECK(r.per_participant.at("P2").recall == 1.0);
    CHECK(r.macro_participants.recall == 0.75);

    const auto j = r.to_json();
    CHECK(j["per_class"]["B"]["fp"] == 1);
    CHECK(j["records"] == 4);
}

TEST_CASE("evaluate errors") {
    const KeywordMap m = two_class();
    CHECK_THROWS_AS(evaluate(std::vector<CaptionRecord>{}, m), ArgumentError);
    CHECK_THROWS_AS(evaluate(std::vector<CaptionRecord>{rec(0, "P", "x", "Z")}, m), ConfigError);
}

TEST_CASE("caption files round trip") {
    testutil::TempDir dir;
    const std::vector<CaptionRecord> recs{rec(3, "P1", "a person \"typing\"", "Using Computer"),
                                          rec(4, "P2", "", "Reading")};
    store_captions(recs, dir / "c.jsonl");
    const auto back = load_captions(dir / "c.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].caption == recs[0].caption);
    CHECK(back[1].segment_id == 4);
    CHECK(back[1].ground_truth == "Reading");
    {
        std::ofstream out(dir / "bad.jsonl");
        out << R"({"segment":1,"participant":"P"})" << "\n";
    }
    CHECK_THROWS_AS(load_captions(dir / "bad.jsonl"), ParseError);
}

TEST_CASE("caption similarity") {
    CHECK(caption_similarity("cutting onion", "cutting onion") == doctest::Approx(1.0));
    CHECK(caption_similarity("cutting onion", "reading book") == 0.0);
    CHECK(caption_similarity("cutting onion", "Cutting potato!") == doctest::Approx(0.5));
    CHECK_THROWS_AS(caption_similarity(" ,", "x"), ArgumentError);

    ExternalVectorizer v;
    v.add("Cutting onion", {1, 0});
    v.add("cutting potato", {1, 1});
    CHECK(caption_similarity("cutting  onion", "cutting potato", v) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK_THROWS_AS(caption_similarity("cutting onion", "unknown", v), MissingEmbeddingError);
    CHECK(text_hash("A b") == text_hash("a   B"));
    CHECK(text_hash("a").size() == 16);

    testutil::TempDir dir;
    {
        std::ofstream out(dir / "v.csv");
        out << "text_hash,v0,v1\n" << text_hash("x") << ",0,1\n" << text_hash("y") << ",0,-1\n";
    }
    const auto loaded = ExternalVectorizer::load_csv(dir / "v.csv");
    CHECK(caption_similarity("x", "y", loaded) == 0.0);
    CHECK(caption_similarity("x", "x", loaded) == doctest::Approx(1.0));
}
