#pragma once

// Guess-number calculator: chains ranked n-grams over a passphrase from the
// largest order down to 1-grams and reports low/high n-gram estimates plus a
// 1-gram permutation estimate.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "passguess/corpus.hpp"
#include "passguess/matching.hpp"

namespace passguess {

using GuessNumber = boost::multiprecision::cpp_int;

/// log2 of a positive guess number, accurate to double precision.
double log2_guesses(const GuessNumber& value);

enum class HighCombiner {
    Sum,      // product(score) + product(score_not_found)
    Product,  // product(score) * product(score_not_found)
};

enum class Estimator { Low, High, Unigram };

struct RankerConfig {
    HighCombiner high_combiner = HighCombiner::Sum;
    std::size_t largest_order = kMaxOrder;
    /// 2 disables the 1-gram pass of the n-gram descent.
    std::size_t smallest_order = 1;
    /// Shortest passphrase length the attacker enumerates first.
    std::size_t min_words = 7;
    /// Vocabulary size for the length-prefix term; defaults to the store's
    /// lexicon size.
    std::optional<std::uint64_t> vocab_override;

    void validate() const;
};

struct FoundSpan {
    std::size_t start = 0;
    std::size_t order = 0;
    std::vector<std::string> words;
    std::uint64_t rank_used = 0;
    /// Rank came from re-ranking the overlap-constrained subset.
    bool dynamic = false;

    bool operator==(const FoundSpan&) const = default;
};

/// Raw rank lists accumulated during a descent.
struct SearchTrace {
    std::vector<std::uint64_t> score;
    std::vector<std::uint64_t> score_not_found;
};

struct GuessEstimate {
    /// std::nullopt means not guessable under that estimator.
    std::optional<GuessNumber> low;
    std::optional<GuessNumber> high;
    std::optional<GuessNumber> unigram;

    std::vector<FoundSpan> found_spans;
    std::vector<std::string> unfound_words;
    SearchTrace trace;

    /// Words missing from the 1-gram table (1-gram permutation pass).
    std::vector<std::string> unigram_unfound_words;

    const std::optional<GuessNumber>& get(Estimator e) const;
    std::optional<double> bits(Estimator e) const;
};

/// Runs the n-gram descent; fills low, high, found_spans, unfound_words and
/// trace. Throws Errc::EmptyPhrase for an empty phrase.
GuessEstimate rank_passphrase(const NormalizedPhrase& phrase, const NgramStore& store, const RankerConfig& cfg = {});

/// 1-gram-only pass; fills unigram and unigram_unfound_words.
GuessEstimate unigram_permutation_estimate(const NormalizedPhrase& phrase, const NgramStore& store,
                                           const RankerConfig& cfg = {});

/// Both passes merged into one estimate.
GuessEstimate estimate_passphrase(const NormalizedPhrase& phrase, const NgramStore& store,
                                  const RankerConfig& cfg = {});

struct AttackReport {
    std::vector<GuessEstimate> rows;
    std::size_t low_guessable = 0;
    std::size_t high_guessable = 0;
    std::size_t unigram_guessable = 0;

    /// Guessable share of all rows; 0 for an empty report.
    double fraction(Estimator e) const;
};

AttackReport attack_report(std::span<const NormalizedPhrase> phrases, const NgramStore& store,
                           const RankerConfig& cfg = {});

}  // namespace passguess
