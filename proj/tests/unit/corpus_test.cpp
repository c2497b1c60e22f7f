#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "passguess/corpus.hpp"
#include "passguess/error.hpp"

using namespace passguess;
using passguess::testing::build_store;
using passguess::testing::StoreSpec;
using passguess::testing::TempDir;

namespace {

std::vector<std::uint64_t> ranks_of(const std::vector<std::uint64_t>& freqs) {
    FrequencyMap m;
    for (std::size_t i = 0; i < freqs.size(); ++i) m[NgramKey({"k" + std::to_string(100 + i)})] = freqs[i];
    std::vector<std::uint64_t> out;
    for (const auto& r : rank_table(m)) out.push_back(r.rank);
    return out;
}

NgramKey key(const std::string& words) { return NgramKey(passguess::testing::split_words(words)); }

}  // namespace

TEST(NgramKey, ArityLimits) {
    EXPECT_THROW(NgramKey({}), Error);
    EXPECT_THROW(NgramKey({"a", "b", "c", "d", "e", "f"}), Error);
    EXPECT_THROW(NgramKey({"Upper"}), Error);
    EXPECT_EQ(key("a b c").order(), 3u);
    EXPECT_EQ(key("a b c").joined(), "a b c");
}

TEST(RankTable, CompetitionRanking) {
    EXPECT_EQ(ranks_of({9, 9, 9, 9, 9, 4}), (std::vector<std::uint64_t>{1, 1, 1, 1, 1, 6}));
    EXPECT_EQ(ranks_of({5}), (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(ranks_of({7, 3, 3, 1}), (std::vector<std::uint64_t>{1, 2, 2, 4}));
}

TEST(RankTable, EmptyThrows) {
    try {
        rank_table({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyTable);
    }
}

TEST(RankTable, TiesOrderedLexicographically) {
    FrequencyMap m{{key("pear"), 3}, {key("apple"), 3}, {key("fig"), 8}};
    const auto t = rank_table(m);
    EXPECT_EQ(t[0].key, key("fig"));
    EXPECT_EQ(t[1].key, key("apple"));
    EXPECT_EQ(t[2].key, key("pear"));
}

TEST(RankTable, InvariantsOnRandomTables) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> freqs(std::uniform_int_distribution<int>(1, 60)(rng));
        for (auto& f : freqs) f = std::uniform_int_distribution<std::uint64_t>(1, 8)(rng);
        FrequencyMap m;
        for (std::size_t i = 0; i < freqs.size(); ++i) m[NgramKey({"k" + std::to_string(i)})] = freqs[i];
        const auto t = rank_table(m);
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = 0; j < t.size(); ++j) {
                if (t[i].frequency > t[j].frequency) EXPECT_LT(t[i].rank, t[j].rank);
                if (t[i].frequency == t[j].frequency) EXPECT_EQ(t[i].rank, t[j].rank);
            }
            // Rank counts every entry strictly ahead of the tie group.
            if (i > 0 && t[i].frequency != t[i - 1].frequency) EXPECT_EQ(t[i].rank, i + 1);
        }
    }
}

TEST(Extract, SlidingWindowCounts) {
    const auto c = extract_ngrams("a b a b a", {2});
    const FrequencyMap want{{key("a b"), 2}, {key("b a"), 2}};
    EXPECT_EQ(c.of_order(2), want);
    EXPECT_EQ(c.of_order(1).at(key("a")), 3u);
    EXPECT_TRUE(c.of_order(3).empty());
}

TEST(Extract, SingleToken) {
    const auto c = extract_ngrams("hello", {1});
    EXPECT_EQ(c.of_order(1), (FrequencyMap{{key("hello"), 1}}));
}

TEST(Extract, RepeatedToken) {
    const auto c = extract_ngrams("x x x x", {3});
    EXPECT_EQ(c.of_order(3), (FrequencyMap{{key("x x x"), 2}}));
}

TEST(Extract, EmptyCorpusThrows) {
    try {
        extract_ngrams(" ... !!", {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyCorpus);
    }
}

TEST(Extract, SentenceBoundariesStopWindows) {
    const auto plain = extract_ngrams("a b. c d", {2, false});
    EXPECT_EQ(plain.of_order(2).count(key("b c")), 1u);
    const auto split = extract_ngrams("a b. c d", {2, true});
    EXPECT_EQ(split.of_order(2).count(key("b c")), 0u);
    EXPECT_EQ(split.of_order(2).size(), 2u);
}

TEST(Extract, ConservationOfWindows) {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::string text;
        const auto n_tokens = std::uniform_int_distribution<int>(1, 40)(rng);
        for (int i = 0; i < n_tokens; ++i) text += passguess::testing::vocab_word(rng() % 5) + (rng() % 4 ? " " : ", ");
        const auto c = extract_ngrams(text);
        EXPECT_EQ(c.total_tokens, static_cast<std::uint64_t>(n_tokens));
        for (std::size_t n = 1; n <= kMaxOrder; ++n) {
            std::uint64_t sum = 0;
            for (const auto& [k, f] : c.of_order(n)) sum += f;
            const auto t = static_cast<std::uint64_t>(n_tokens);
            EXPECT_EQ(sum, t >= n ? t - n + 1 : 0) << "n=" << n;
        }
    }
}

TEST(Extract, StreamingMatchesWholeText) {
    NgramCounter counter;
    counter.feed("one two three ");
    counter.feed("four five\n");
    counter.feed("six");
    const auto whole = extract_ngrams("one two three four five six");
    const auto streamed = counter.counts();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) EXPECT_EQ(streamed.of_order(n), whole.of_order(n));
}

TEST(Store, WildcardLookupOrdersByFrequency) {
    const auto store = build_store({{"book cover page", 5}, {"book was good", 9}, {"a book was", 7}});
    const auto hits = store.lookup({std::string("book"), std::nullopt, std::nullopt});
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].key, key("book was good"));
    EXPECT_EQ(hits[1].key, key("book cover page"));
    EXPECT_EQ(hits[0].rank, 1u);
    EXPECT_EQ(hits[1].rank, 3u);
}

TEST(Store, ExactLookup) {
    const auto store = build_store({{"uoit deploys lenovo thinkpads", 4}, {"x y z w", 9}});
    const auto hits = store.lookup({std::string("uoit"), std::string("deploys"), std::string("lenovo"),
                                    std::string("thinkpads")});
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].rank, 2u);
    EXPECT_TRUE(store.lookup({std::string("no"), std::string("such"), std::string("thing"), std::string("here")})
                    .empty());
    EXPECT_FALSE(store.find(key("x y z")).has_value());
}

TEST(Store, LookupArityErrors) {
    const auto store = build_store({{"a b", 1}});
    EXPECT_THROW(store.lookup({}), Error);
    EXPECT_THROW(store.lookup(NgramPattern(6, std::string("a"))), Error);
    EXPECT_THROW(store.lookup({std::nullopt, std::nullopt}), Error);
}

TEST(Store, BlacklistBoundary) {
    StoreSpec spec;
    for (int i = 1; i <= 10'001; ++i) spec.ngrams.push_back({"w" + std::to_string(i) + " b c", 20'000u - i});
    const auto store = build_store(spec);
    EXPECT_TRUE(store.is_blacklisted(key("w1 b c")));
    EXPECT_TRUE(store.is_blacklisted(key("w10000 b c")));
    EXPECT_FALSE(store.is_blacklisted(key("w10001 b c")));
    EXPECT_FALSE(store.is_blacklisted(key("a b c d")));
    EXPECT_THROW(store.is_blacklisted(key("a b")), Error);
    EXPECT_EQ(store.max_rank(3), 10'001u);
}

TEST(Store, SurvivingEntriesKeepRanks) {
    StoreSpec spec;
    spec.options.blacklist_k = 3;
    for (int i = 0; i < 8; ++i) spec.ngrams.push_back({"t" + std::to_string(i) + " x y", 100u - i / 2});
    const auto store = build_store(spec);
    const auto all = store.entries(3);
    const auto kept = store.surviving_entries(3);
    ASSERT_FALSE(kept.empty());
    for (const auto& e : kept) {
        EXPECT_GT(e.rank, 3u);
        const auto it = std::find_if(all.begin(), all.end(), [&](const auto& a) { return a.key == e.key; });
        ASSERT_NE(it, all.end());
        EXPECT_EQ(it->rank, e.rank);
    }
    EXPECT_EQ(kept.size(), 4u);
}

TEST(Store, CapsTruncateAfterRanking) {
    StoreSpec spec;
    spec.options.caps[1] = 2;
    spec.ngrams = {{"a b", 5}, {"b c", 4}, {"c d", 3}, {"d e", 2}};
    const auto store = build_store(spec);
    EXPECT_EQ(store.table_size(2), 2u);
    EXPECT_FALSE(store.find(key("c d")).has_value());
    EXPECT_EQ(store.find(key("b c"))->rank, 2u);
}

TEST(Store, LexiconAndOverride) {
    StoreSpec spec;
    spec.ngrams = {{"a", 1}, {"b", 2}, {"c", 2}, {"a b", 1}};
    spec.proper_nouns = {"uoit"};
    spec.slang = {"bazinga"};
    auto store = build_store(spec);
    EXPECT_EQ(store.lexicon_size(), 3u);
    EXPECT_TRUE(store.in_lexicon("a"));
    EXPECT_FALSE(store.in_lexicon("uoit"));
    EXPECT_TRUE(store.is_proper_noun("uoit"));
    EXPECT_TRUE(store.is_slang("bazinga"));
    spec.options.lexicon_size_override = 493906;
    EXPECT_EQ(build_store(spec).lexicon_size(), 493906u);
}

TEST(Persistence, RoundTrip) {
    StoreSpec spec;
    spec.options.blacklist_k = 2;
    spec.options.caps[4] = 10;
    spec.proper_nouns = {"uoit", "lenovo"};
    spec.slang = {"wazzup"};
    std::mt19937_64 rng(8);
    auto tables = passguess::testing::random_tables(rng, 15, 150);
    for (const auto& [w, f] : tables.entries) {
        std::string joined;
        for (const auto& x : w) joined += (joined.empty() ? "" : " ") + x;
        spec.ngrams.push_back({joined, f});
    }
    const auto store = build_store(spec);
    TempDir dir;
    save_store(store, dir.path());
    const auto loaded = load_store(dir.path());
    for (std::size_t n = 1; n <= kMaxOrder; ++n) EXPECT_EQ(loaded.entries(n), store.entries(n)) << n;
    EXPECT_EQ(loaded.proper_nouns(), store.proper_nouns());
    EXPECT_EQ(loaded.slang_terms(), store.slang_terms());
    EXPECT_EQ(loaded.blacklist_k(), 2u);
    EXPECT_EQ(loaded.options().caps[4], std::optional<std::uint64_t>(10));
    EXPECT_EQ(loaded.stats().counts, store.stats().counts);
}

TEST(Persistence, MissingDirectory) {
    try {
        load_store("/nonexistent/passguess/store");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StoreMissing);
    }
}

TEST(Persistence, MalformedLineReportsLineNumber) {
    TempDir dir;
    std::ofstream(dir.path() / "2gram.tsv") << "3\ta\tb\n2\tb\tc\nxx\tc\td\n";
    try {
        load_store(dir.path());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
        EXPECT_EQ(e.line(), std::optional<std::size_t>(3));
    }
}

TEST(Persistence, TableParsingRules) {
    NgramStore::Builder b;
    std::istringstream ok("4\tThe\tCat\n1\tthe\tcat\n\n2\tdog\tday\n");
    read_table(ok, 2, b);
    const auto store = std::move(b).build();
    EXPECT_EQ(store.find(key("the cat"))->frequency, 5u);

    NgramStore::Builder b2;
    std::istringstream wrong_arity("4\ta\tb\tc\n");
    EXPECT_THROW(read_table(wrong_arity, 2, b2), Error);
    std::istringstream zero("0\ta\tb\n");
    EXPECT_THROW(read_table(zero, 2, b2), Error);
    std::istringstream two_words("3\ta b\tc\n");
    EXPECT_THROW(read_table(two_words, 2, b2), Error);
}

TEST(Persistence, UnsortedInputAccepted) {
    TempDir dir;
    std::ofstream(dir.path() / "1gram.tsv") << "1\tz\n9\ta\n5\tm\n";
    const auto store = load_store(dir.path());
    EXPECT_EQ(store.find(key("a"))->rank, 1u);
    EXPECT_EQ(store.find(key("m"))->rank, 2u);
    EXPECT_EQ(store.find(key("z"))->rank, 3u);
}
