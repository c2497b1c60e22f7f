#pragma once

// Creation-policy evaluation: hard requirements (length, proper noun, no
// common 3/4/5-word sequences) plus non-blocking recommendations.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "passguess/corpus.hpp"
#include "passguess/matching.hpp"

namespace passguess {

namespace codes {
inline constexpr std::string_view kWordCount = "WORD_COUNT";
inline constexpr std::string_view kProperNoun = "PROPER_NOUN";
inline constexpr std::string_view kBlacklistedNgram = "BLACKLISTED_NGRAM";
inline constexpr std::string_view kEmptyPhrase = "EMPTY_PHRASE";
inline constexpr std::string_view kShortWord = "SHORT_WORD";
inline constexpr std::string_view kNoSlang = "NO_SLANG";
inline constexpr std::string_view kCommonBigrams = "COMMON_BIGRAMS";
}  // namespace codes

struct PolicyConfig {
    std::size_t min_words = 7;
    std::uint64_t blacklist_k = 10'000;
    std::vector<std::size_t> blacklist_orders{3, 4, 5};
    bool require_proper_noun = true;
    /// Per-word minimum length; 1 leaves the check off.
    std::size_t min_word_chars = 1;

    /// Throws Errc::InvalidArgument.
    void validate() const;
};

struct Finding {
    std::string code;
    std::string message;
    std::string evidence;

    bool operator==(const Finding&) const = default;
};

struct BlacklistedWindow {
    std::size_t order = 0;
    std::size_t start = 0;
    std::vector<std::string> words;
    std::uint64_t rank = 0;

    bool operator==(const BlacklistedWindow&) const = default;
};

struct PolicyReport {
    std::vector<Finding> violations;
    std::vector<Finding> recommendations;
    std::size_t word_count = 0;
    std::vector<std::string> proper_noun_tokens;
    std::vector<std::string> slang_tokens;
    std::vector<std::string> non_dictionary_tokens;
    std::vector<BlacklistedWindow> blacklisted_windows;
    /// 2-gram windows ranked within the top K; informational only.
    std::size_t common_bigram_windows = 0;

    bool acceptable() const noexcept { return violations.empty(); }
    bool has_violation(std::string_view code) const;
    bool has_recommendation(std::string_view code) const;

    bool operator==(const PolicyReport&) const = default;
};

struct TokenClass {
    std::string token;
    bool in_lexicon = false;
    bool slang = false;
    bool not_found_anywhere = false;

    bool operator==(const TokenClass&) const = default;
};

/// One entry per phrase token, in order.
std::vector<TokenClass> classify_tokens(const NormalizedPhrase& phrase, const NgramStore& store);

/// Tokens that count as proper nouns: listed in the proper-noun lexicon,
/// capitalized anywhere after the first word of the raw input, or missing
/// from the 1-gram lexicon. Each token is reported once, in phrase order.
std::vector<std::string> detect_proper_nouns(std::string_view raw, const NgramStore& store);

PolicyReport check_policy(std::string_view raw, const NgramStore& store, const PolicyConfig& cfg = {});

}  // namespace passguess
