#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "passguess/report.hpp"

using namespace passguess;
using passguess::testing::build_store;
using passguess::testing::StoreSpec;

namespace {

GuessEstimate with_low(std::optional<GuessNumber> v) {
    GuessEstimate e;
    e.low = std::move(v);
    return e;
}

RankedPhrase ranked(const std::string& id, const std::string& text, const NgramStore& store) {
    const auto p = normalize(text);
    return {id, p, estimate_passphrase(p, store)};
}

}  // namespace

TEST(GuessingCurve, AllNotGuessableIsEmpty) {
    const std::vector<GuessEstimate> es{with_low(std::nullopt), with_low(std::nullopt)};
    EXPECT_TRUE(guessing_curve(es, Estimator::Low).empty());
}

TEST(GuessingCurve, SinglePhrase) {
    const std::vector<GuessEstimate> es{with_low(GuessNumber(1024)), with_low(std::nullopt), with_low(std::nullopt)};
    const auto c = guessing_curve(es, Estimator::Low);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_DOUBLE_EQ(c[0].log2_guesses, 10.0);
    EXPECT_DOUBLE_EQ(c[0].fraction_guessed, 1.0 / 3.0);
}

TEST(GuessingCurve, StepsMatchSortAndCount) {
    const std::vector<int> values{64, 8, 64, 2, 4096};
    std::vector<GuessEstimate> es;
    for (int v : values) es.push_back(with_low(GuessNumber(v)));
    const auto c = guessing_curve(es, Estimator::Low);
    ASSERT_EQ(c.size(), 4u);
    const double xs[] = {1, 3, 6, 12};
    const double ys[] = {0.2, 0.4, 0.8, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(c[i].log2_guesses, xs[i]);
        EXPECT_DOUBLE_EQ(c[i].fraction_guessed, ys[i]);
    }
}

TEST(GuessingCurve, HugeValues) {
    const GuessNumber big = boost::multiprecision::pow(GuessNumber(2), 300);
    const std::vector<GuessEstimate> es{with_low(big), with_low(big + 1)};
    const auto c = guessing_curve(es, Estimator::Low);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0].log2_guesses, 300.0, 1e-9);
    EXPECT_DOUBLE_EQ(c[1].fraction_guessed, 1.0);
}

TEST(ToleranceAudit, RadiusRule) {
    EXPECT_EQ(word_tolerance_radius(4), 0u);
    EXPECT_EQ(word_tolerance_radius(7), 0u);
    EXPECT_EQ(word_tolerance_radius(8), 1u);
    EXPECT_EQ(word_tolerance_radius(9), 1u);
    EXPECT_EQ(word_tolerance_radius(16), 2u);
}

TEST(ToleranceAudit, RescuesMisspelling) {
    const auto store = build_store({{"december", 3}, {"in", 9}, {"snow", 2}, {"cat", 2}});
    const std::vector<RankedPhrase> phrases{ranked("1", "snow in decemeber", store), ranked("2", "snow in qxzwvbnmlk", store),
                                            ranked("3", "snow in december", store)};
    const auto rows = tolerance_audit(phrases, store);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].phrase_id, "1");
    ASSERT_EQ(rows[0].rescued.size(), 1u);
    EXPECT_EQ(rows[0].rescued[0].word, "decemeber");
    EXPECT_EQ(rows[0].rescued[0].match, "december");
    EXPECT_EQ(rows[0].rescued[0].distance, 1u);
    EXPECT_TRUE(rows[0].fully_rescued);
    EXPECT_EQ(rows[1].phrase_id, "2");
    EXPECT_TRUE(rows[1].rescued.empty());
    EXPECT_FALSE(rows[1].fully_rescued);
}

TEST(ToleranceAudit, ShortWordsNeedExactMatch) {
    const auto store = build_store({{"cat", 1}});
    const std::vector<RankedPhrase> phrases{ranked("1", "cat hat", store)};
    const auto rows = tolerance_audit(phrases, store);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].rescued.empty());
}

TEST(ToleranceAudit, NoUnfoundWordsMeansEmpty) {
    const auto store = build_store({{"cat", 1}, {"sat", 1}});
    const std::vector<RankedPhrase> phrases{ranked("1", "cat sat", store)};
    EXPECT_TRUE(tolerance_audit(phrases, store).empty());
}

TEST(PhraseDictionary, ExactMatchesOnly) {
    std::istringstream known("The quick brown fox!\nto be or not to be\n\n");
    const auto set = read_known_phrases(known);
    EXPECT_EQ(set.size(), 2u);
    const auto store = build_store({{"x", 1}});
    const std::vector<RankedPhrase> phrases{ranked("a", "the QUICK brown fox", store),
                                            ranked("b", "the quick brown dog", store),
                                            ranked("c", "To be, or not to be.", store)};
    const auto hits = phrase_dictionary_check(phrases, set);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].phrase_id, "a");
    EXPECT_EQ(hits[1].phrase_id, "c");
}

TEST(PhraseDictionary, TwoOfThirtyNine) {
    const auto store = build_store({{"x", 1}});
    std::vector<RankedPhrase> phrases;
    for (int i = 0; i < 39; ++i) phrases.push_back(ranked(std::to_string(i), "phrase number " + std::to_string(i), store));
    const std::set<std::string> known{"phrase number 4", "phrase number 17", "phrase number 99"};
    EXPECT_EQ(phrase_dictionary_check(phrases, known).size(), 2u);
}

TEST(Coverage, EmptyInput) {
    const auto store = build_store({{"x", 1}});
    const auto t = coverage_table({}, store);
    EXPECT_TRUE(t.rows.empty());
    EXPECT_EQ(t.summary.phrases, 0u);
    EXPECT_EQ(t.summary.total_words, 0u);
    EXPECT_DOUBLE_EQ(t.summary.percent_words_found, 0.0);
}

TEST(Coverage, AllWordsFound) {
    const auto store = build_store({{"a", 1}, {"b", 1}});
    const std::vector<RankedPhrase> phrases{ranked("1", "a b a", store)};
    const auto t = coverage_table(phrases, store);
    EXPECT_DOUBLE_EQ(t.summary.percent_words_found, 100.0);
    EXPECT_TRUE(t.rows[0].low_guessable);
}

TEST(Coverage, MixedSetHandTally) {
    StoreSpec spec;
    spec.ngrams = {{"a", 1}, {"b", 1}, {"c", 1}};
    spec.slang = {"yolo", "b"};
    const auto store = build_store(spec);
    const std::vector<RankedPhrase> phrases{ranked("1", "a b c", store), ranked("2", "a yolo zz", store),
                                            ranked("3", "zz qq a", store)};
    const auto t = coverage_table(phrases, store);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0].slang_hits, 1u);
    EXPECT_EQ(t.rows[0].not_found, 0u);
    EXPECT_EQ(t.rows[1].slang_hits, 1u);
    EXPECT_EQ(t.rows[1].not_found, 1u);
    EXPECT_EQ(t.rows[2].not_found, 2u);
    EXPECT_FALSE(t.rows[2].low_guessable);
    EXPECT_EQ(t.summary.phrases, 3u);
    EXPECT_EQ(t.summary.total_words, 9u);
    EXPECT_EQ(t.summary.words_in_lexicon, 5u);
    EXPECT_EQ(t.summary.slang_words, 2u);
    EXPECT_EQ(t.summary.not_found_words, 3u);
    EXPECT_EQ(t.summary.phrases_with_slang, 2u);
    EXPECT_EQ(t.summary.phrases_with_not_found, 2u);
    EXPECT_NEAR(t.summary.percent_words_found, 500.0 / 9.0, 1e-9);
}

TEST(Coverage, PermutationInvariantSummary) {
    const auto store = build_store({{"a", 1}, {"b", 1}});
    std::vector<RankedPhrase> phrases{ranked("1", "a b", store), ranked("2", "a zz", store), ranked("3", "q b a", store)};
    const auto s1 = coverage_table(phrases, store).summary;
    std::reverse(phrases.begin(), phrases.end());
    const auto s2 = coverage_table(phrases, store).summary;
    EXPECT_EQ(s1.total_words, s2.total_words);
    EXPECT_EQ(s1.not_found_words, s2.not_found_words);
    EXPECT_EQ(s1.phrases_with_not_found, s2.phrases_with_not_found);
    EXPECT_DOUBLE_EQ(s1.percent_words_found, s2.percent_words_found);
}
