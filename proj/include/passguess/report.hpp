#pragma once

// Analysis artifacts over a batch of ranked passphrases: guessing curves,
// slang/coverage tables, tolerance audits and exact-phrase dictionary hits.

#include <istream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "passguess/corpus.hpp"
#include "passguess/matching.hpp"
#include "passguess/ranker.hpp"

namespace passguess {

struct RankedPhrase {
    std::string id;
    NormalizedPhrase phrase;
    GuessEstimate estimate;
};

struct CurvePoint {
    double log2_guesses = 0.0;
    double fraction_guessed = 0.0;
};

/// One point per distinct guess number. Not-guessable phrases count in the
/// denominator only.
std::vector<CurvePoint> guessing_curve(std::span<const GuessEstimate> estimates, Estimator estimator);

struct RescuedWord {
    std::string word;
    std::string match;
    std::size_t distance = 0;
};

struct ToleranceAuditRow {
    std::string phrase_id;
    std::vector<std::string> unfound_words;
    std::vector<RescuedWord> rescued;
    /// Every unfound word has a lexicon entry within tolerance.
    bool fully_rescued = false;
};

/// Edit radius allowed for a single word: floor(tolerance * length), at
/// least 1 once the word reaches 8 code points.
std::size_t word_tolerance_radius(std::size_t word_length, const ToleranceConfig& cfg = {});

/// Rows only for phrases with unfound words.
std::vector<ToleranceAuditRow> tolerance_audit(std::span<const RankedPhrase> phrases, const NgramStore& store,
                                               const ToleranceConfig& cfg = {});

struct PhraseHit {
    std::string phrase_id;
    std::string canonical;
};

/// Known-phrase list, one phrase per line, normalized on load.
std::set<std::string> read_known_phrases(std::istream& in);

/// Exact matches of the normalized phrase against the known set.
std::vector<PhraseHit> phrase_dictionary_check(std::span<const RankedPhrase> phrases,
                                               const std::set<std::string>& known);

struct CoverageRow {
    std::string phrase_id;
    std::size_t word_count = 0;
    std::size_t slang_hits = 0;
    std::size_t not_found = 0;
    bool low_guessable = false;
    bool high_guessable = false;
    bool unigram_guessable = false;
};

struct CoverageSummary {
    std::size_t phrases = 0;
    std::size_t total_words = 0;
    std::size_t words_in_lexicon = 0;
    std::size_t slang_words = 0;
    std::size_t not_found_words = 0;
    std::size_t phrases_with_slang = 0;
    std::size_t phrases_with_not_found = 0;
    /// words_in_lexicon / total_words * 100, 0 when there are no words.
    double percent_words_found = 0.0;
};

struct CoverageTable {
    std::vector<CoverageRow> rows;
    CoverageSummary summary;
};

CoverageTable coverage_table(std::span<const RankedPhrase> phrases, const NgramStore& store);

}  // namespace passguess
