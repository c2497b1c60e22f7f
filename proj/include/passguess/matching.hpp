#pragma once

// Text normalization and edit-distance tolerance shared by the verifier,
// the policy engine and the ranker.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace passguess {

/// Lowercased, punctuation-free word sequence.
///
/// `canonical()` is always the tokens joined by single spaces. Construction
/// goes through `normalize()` or `from_tokens()`, both of which enforce that
/// every token is already in normal form.
class NormalizedPhrase {
public:
    NormalizedPhrase() = default;

    /// Throws Errc::InvalidArgument if a token is not in normal form.
    static NormalizedPhrase from_tokens(std::vector<std::string> tokens);

    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& canonical() const noexcept { return canonical_; }
    std::size_t word_count() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }

    /// Length of the canonical form in code points.
    std::size_t length() const noexcept { return length_; }

    friend bool operator==(const NormalizedPhrase& a, const NormalizedPhrase& b) {
        return a.canonical_ == b.canonical_;
    }

private:
    std::vector<std::string> tokens_;
    std::string canonical_;
    std::size_t length_ = 0;
};

/// Splits `raw` into normalized tokens: lowercase, letters and digits only.
/// Characters that are neither letters, digits nor whitespace are dropped
/// without splitting the surrounding word ("don't" -> "dont").
/// May return an empty vector.
std::vector<std::string> normalize_tokens(std::string_view raw);

/// A whitespace-delimited word of raw input with its normalized form.
struct RawWord {
    std::string token;
    /// First letter of the raw word is uppercase.
    bool capitalized = false;
};

/// Words of `raw` that survive normalization, in order. The tokens equal
/// normalize_tokens(raw).
std::vector<RawWord> raw_words(std::string_view raw);

/// Throws Errc::EmptyPhrase when nothing survives normalization.
NormalizedPhrase normalize(std::string_view raw);

/// True when `token` is non-empty and equal to its own normalization.
bool is_normal_token(std::string_view token);

/// Number of Unicode code points in a UTF-8 string (invalid bytes count as one).
std::size_t code_point_length(std::string_view utf8);

/// Levenshtein distance counted in code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Like levenshtein() but gives up once the distance exceeds `limit`,
/// returning limit + 1.
std::size_t levenshtein_bounded(std::string_view a, std::string_view b, std::size_t limit);

struct ToleranceConfig {
    double max_relative_distance = 0.125;

    /// Throws Errc::InvalidArgument unless 0 <= value < 1.
    void validate() const;
};

struct ToleranceResult {
    bool accepted = false;
    std::size_t distance = 0;
    double relative = 0.0;
};

/// Relative distance is measured against the stored phrase length.
ToleranceResult within_tolerance(const NormalizedPhrase& stored, const NormalizedPhrase& attempt,
                                 const ToleranceConfig& cfg = {});

}  // namespace passguess
