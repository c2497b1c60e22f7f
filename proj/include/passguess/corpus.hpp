#pragma once

// Ranked n-gram tables (n = 1..5) with auxiliary proper-noun and slang
// lexicons. Stores are immutable once built and cheap to copy.

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace passguess {

inline constexpr std::size_t kMaxOrder = 5;

/// Ordered sequence of 1..5 normalized tokens.
class NgramKey {
public:
    /// Throws Errc::BadArity for an empty or over-long key and
    /// Errc::InvalidArgument for a token that is not normalized.
    explicit NgramKey(std::vector<std::string> words);

    const std::vector<std::string>& words() const noexcept { return words_; }
    std::size_t order() const noexcept { return words_.size(); }
    std::string joined() const;

    auto operator<=>(const NgramKey&) const = default;
    bool operator==(const NgramKey&) const = default;

private:
    std::vector<std::string> words_;
};

using FrequencyMap = std::map<NgramKey, std::uint64_t>;

struct RankedNgram {
    NgramKey key;
    std::uint64_t frequency = 0;
    std::uint64_t rank = 0;

    bool operator==(const RankedNgram&) const = default;
};

/// Sorts by descending frequency (ties by key) and assigns competition
/// ranks: {9,9,9,9,9,4} ranks as {1,1,1,1,1,6}. Throws Errc::EmptyTable.
std::vector<RankedNgram> rank_table(const FrequencyMap& freqs);

struct CorpusStats {
    std::array<std::uint64_t, kMaxOrder> counts{};  // distinct n-grams, index n-1
    std::uint64_t total_tokens = 0;
};

struct CorpusCounts {
    std::array<FrequencyMap, kMaxOrder> tables;  // index n-1
    std::uint64_t total_tokens = 0;

    const FrequencyMap& of_order(std::size_t n) const { return tables.at(n - 1); }
};

struct ExtractOptions {
    std::size_t max_order = kMaxOrder;
    /// When set, windows never span '.', '!' or '?'.
    bool sentence_boundaries = false;
};

/// A wildcard slot is std::nullopt.
using NgramPattern = std::vector<std::optional<std::string>>;

struct StoreOptions {
    std::uint64_t blacklist_k = 10'000;
    /// Optional maximum entry count per order (index n-1); the most frequent
    /// entries are kept.
    std::array<std::optional<std::uint64_t>, kMaxOrder> caps{};
    /// Replaces the distinct 1-gram count wherever a vocabulary size is used.
    std::optional<std::uint64_t> lexicon_size_override;
};

class NgramStore {
public:
    class Builder;

    /// Dense token identifier. Ids are ordered like the token strings.
    using TokenId = std::uint32_t;
    using IdPattern = std::vector<std::optional<TokenId>>;

    NgramStore();

    const StoreOptions& options() const noexcept;
    std::uint64_t blacklist_k() const noexcept { return options().blacklist_k; }

    std::size_t table_size(std::size_t n) const;
    /// Largest rank stored for order n; 0 when the table is empty.
    std::uint64_t max_rank(std::size_t n) const;
    /// Distinct 1-grams, or the configured override.
    std::uint64_t lexicon_size() const noexcept;
    CorpusStats stats() const;

    std::optional<RankedNgram> find(const NgramKey& key) const;

    /// Matches ordered by frequency descending, ties by key. Exact patterns
    /// return at most one entry. Throws Errc::BadArity for a length outside
    /// 1..5 and Errc::InvalidArgument for an all-wildcard pattern.
    std::vector<RankedNgram> lookup(const NgramPattern& pattern) const;

    /// True iff the key is stored with rank <= blacklist_k(). Throws
    /// Errc::BadArity unless the key has 3..5 words.
    bool is_blacklisted(const NgramKey& key) const;

    /// Entries with rank > blacklist_k(), original ranks retained.
    std::vector<RankedNgram> surviving_entries(std::size_t n) const;

    /// Whole table in rank order.
    std::vector<RankedNgram> entries(std::size_t n) const;

    bool in_lexicon(std::string_view token) const;
    bool is_proper_noun(std::string_view token) const;
    bool is_slang(std::string_view token) const;
    const std::set<std::string>& proper_nouns() const noexcept;
    const std::set<std::string>& slang_terms() const noexcept;

    // Id-level access used by the ranker and the estimators.
    std::optional<TokenId> token_id(std::string_view token) const;
    const std::string& token_text(TokenId id) const;
    /// Rows (positions in rank order) matching the pattern, in rank order.
    std::vector<std::uint32_t> query(const IdPattern& pattern) const;
    std::span<const TokenId> row_words(std::size_t n, std::uint32_t row) const;
    std::uint64_t row_rank(std::size_t n, std::uint32_t row) const;
    std::uint64_t row_frequency(std::size_t n, std::uint32_t row) const;

private:
    struct Impl;
    explicit NgramStore(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

class NgramStore::Builder {
public:
    explicit Builder(StoreOptions options = {});
    ~Builder();
    Builder(Builder&&) noexcept;
    Builder& operator=(Builder&&) noexcept;

    /// Adds `frequency` occurrences; repeated keys accumulate. Tokens must be
    /// normalized. Throws Errc::BadArity / Errc::InvalidArgument.
    Builder& add(std::span<const std::string> words, std::uint64_t frequency);
    Builder& add(const NgramKey& key, std::uint64_t frequency);
    Builder& add_counts(const CorpusCounts& counts);
    Builder& add_proper_noun(std::string token);
    Builder& add_slang(std::string token);
    Builder& set_total_tokens(std::uint64_t total);
    Builder& set_options(StoreOptions options);

    /// Snapshot of the accumulated frequencies.
    CorpusCounts counts() const;

    NgramStore build() &&;

private:
    friend class NgramCounter;
    struct State;
    std::unique_ptr<State> state_;
};

/// Streaming sliding-window counter. Windows continue across feed() calls
/// unless sentence boundaries are enabled.
class NgramCounter {
public:
    explicit NgramCounter(ExtractOptions options = {});

    void feed(std::string_view text);
    std::uint64_t total_tokens() const noexcept { return total_tokens_; }

    CorpusCounts counts() const;
    /// Throws Errc::EmptyCorpus when no tokens were fed.
    NgramStore::Builder into_builder(StoreOptions options = {}) &&;

private:
    void push_token(std::string token);

    ExtractOptions options_;
    NgramStore::Builder builder_;
    std::vector<std::string> window_;
    std::uint64_t total_tokens_ = 0;
};

/// Throws Errc::EmptyCorpus when nothing survives normalization and
/// Errc::BadArity for max_order outside 1..5.
CorpusCounts extract_ngrams(std::string_view text, const ExtractOptions& options = {});

/// Directory layout: 1gram.tsv .. 5gram.tsv, proper_nouns.txt, slang.txt,
/// meta.json. Tables are `frequency<TAB>w1<TAB>...<TAB>wn`, any order.
NgramStore load_store(const std::filesystem::path& dir);
void save_store(const NgramStore& store, const std::filesystem::path& dir);

/// Reads one table file into a builder. Errc::ParseError carries the line.
void read_table(std::istream& in, std::size_t n, NgramStore::Builder& builder,
                const std::string& source = "<stream>");
/// Reads a lexicon (one token per line, blank lines ignored).
std::set<std::string> read_lexicon(std::istream& in, const std::string& source = "<stream>");

}  // namespace passguess
