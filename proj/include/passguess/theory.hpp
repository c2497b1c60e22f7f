#pragma once

// Theoretical guessing-effort estimators: marginal guesswork over ranked
// distributions, n-gram join-space counts and bit-space baselines.

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <vector>

#include "passguess/corpus.hpp"
#include "passguess/ranker.hpp"

namespace passguess {

/// Probabilities in non-increasing order, each in (0, 1], summing to at most 1.
class Distribution {
public:
    /// Sorts descending. Throws Errc::InvalidArgument for values outside
    /// (0, 1] or a total above 1 + 1e-9.
    static Distribution from_probabilities(std::vector<double> probs);
    /// Normalizes positive weights to sum to 1.
    static Distribution from_frequencies(std::span<const double> weights);
    /// One value per line. Values all <= 1 with total <= 1 + 1e-9 are read
    /// as probabilities, anything else as frequencies.
    static Distribution read(std::istream& in);

    const std::vector<double>& probabilities() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double total_mass() const noexcept { return total_; }

private:
    std::vector<double> probs_;
    double total_ = 0.0;
};

/// Smallest 1-based i whose cumulative mass reaches alpha, or std::nullopt
/// if the total mass never does. Throws Errc::BadAlpha unless 0 < alpha <= 1.
std::optional<std::uint64_t> marginal_guesswork(const Distribution& dist, double alpha);

struct GuessworkPoint {
    std::uint64_t index = 0;
    double cumulative_mass = 0.0;
    double log2_index = 0.0;
};

/// Emits every `stride`-th index and always the last one.
std::vector<GuessworkPoint> guesswork_curve(const Distribution& dist, std::size_t stride = 1);

struct BlacklistMass {
    double top_m = 0.0;
    double top_m_after_removal = 0.0;
};

/// Mass of the M most frequent n-grams, and of the M most frequent once the
/// top K are removed. Denominator is the full-table total unless
/// `renormalize`, which divides the second value by the mass left after
/// removal.
BlacklistMass blacklist_mass(const NgramStore& store, std::size_t n, std::uint64_t top_k, std::uint64_t m,
                             bool renormalize = false);

/// N-gram orders joined end to start, each join sharing one word.
class Composition {
public:
    /// Throws Errc::BadArity for an empty list or a part outside 1..5.
    explicit Composition(std::vector<std::size_t> parts);

    const std::vector<std::size_t>& parts() const noexcept { return parts_; }
    /// Words covered by the joined chain.
    std::size_t word_length() const noexcept;

private:
    std::vector<std::size_t> parts_;
};

struct JoinCount {
    GuessNumber count = 0;
    /// std::nullopt when the count is zero.
    std::optional<double> bits;
};

/// Number of chains in which consecutive n-grams share their boundary word.
/// Throws Errc::EmptyTable if a referenced table is empty.
JoinCount join_count(const NgramStore& store, const Composition& composition);

/// length * log2(alphabet_size).
double exhaustive_bits(std::uint64_t alphabet_size, double length);

/// log2(base_count * lexicon_size).
double multiplier_bits(const GuessNumber& base_count, const GuessNumber& lexicon_size);

}  // namespace passguess
