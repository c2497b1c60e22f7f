#include "passguess/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "passguess/error.hpp"

namespace passguess {
namespace {

constexpr double kMassSlack = 1e-9;

}  // namespace

Distribution Distribution::from_probabilities(std::vector<double> probs) {
    long double total = 0;
    for (double p : probs) {
        if (!(p > 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "probability outside (0, 1]");
        total += p;
    }
    if (total > 1.0L + kMassSlack) throw Error(Errc::InvalidArgument, "probabilities sum above 1");
    std::sort(probs.begin(), probs.end(), std::greater<>());
    Distribution d;
    d.probs_ = std::move(probs);
    d.total_ = static_cast<double>(total);
    return d;
}

Distribution Distribution::from_frequencies(std::span<const double> weights) {
    long double total = 0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "frequency must be positive");
        total += w;
    }
    std::vector<double> probs;
    probs.reserve(weights.size());
    for (double w : weights) probs.push_back(static_cast<double>(w / total));
    std::sort(probs.begin(), probs.end(), std::greater<>());
    Distribution d;
    d.probs_ = std::move(probs);
    d.total_ = weights.empty() ? 0.0 : 1.0;
    return d;
}

Distribution Distribution::read(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(line.substr(first), &used);
        } catch (const std::exception&) {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": not a number", lineno);
        }
        if (line.find_first_not_of(" \t\r", first + used) != std::string::npos || !(v > 0.0))
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected a positive number", lineno);
        values.push_back(v);
    }
    const long double total = std::accumulate(values.begin(), values.end(), 0.0L);
    const bool probabilities =
        std::all_of(values.begin(), values.end(), [](double v) { return v <= 1.0; }) && total <= 1.0L + kMassSlack;
    return probabilities ? from_probabilities(std::move(values)) : from_frequencies(values);
}

std::optional<std::uint64_t> marginal_guesswork(const Distribution& dist, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::BadAlpha, "alpha must lie in (0, 1]");
    const auto& p = dist.probabilities();
    // Rounding slack: ten copies of 0.1 must reach alpha = 1.
    constexpr long double slack = 1e-12L;
    long double cumulative = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cumulative += p[i];
        if (cumulative + slack >= alpha) return i + 1;
    }
    return std::nullopt;
}

std::vector<GuessworkPoint> guesswork_curve(const Distribution& dist, std::size_t stride) {
    if (stride == 0) throw Error(Errc::InvalidArgument, "stride must be positive");
    std::vector<GuessworkPoint> out;
    const auto& p = dist.probabilities();
    long double cumulative = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cumulative += p[i];
        const auto index = i + 1;
        if (index % stride == 0 || index == p.size())
            out.push_back({index, static_cast<double>(cumulative), std::log2(static_cast<double>(index))});
    }
    return out;
}

BlacklistMass blacklist_mass(const NgramStore& store, std::size_t n, std::uint64_t top_k, std::uint64_t m,
                             bool renormalize) {
    const auto size = store.table_size(n);
    if (size == 0) throw Error(Errc::EmptyTable, "table " + std::to_string(n) + " is empty");
    long double total = 0;
    for (std::uint32_t r = 0; r < size; ++r) total += store.row_frequency(n, r);

    const auto sum_range = [&](std::uint64_t from, std::uint64_t count) {
        long double s = 0;
        const auto end = std::min<std::uint64_t>(size, from + count);
        for (auto r = from; r < end; ++r) s += store.row_frequency(n, static_cast<std::uint32_t>(r));
        return s;
    };

    BlacklistMass out;
    out.top_m = static_cast<double>(sum_range(0, m) / total);
    const long double after = sum_range(std::min<std::uint64_t>(top_k, size), m);
    long double denominator = total;
    if (renormalize) denominator = total - sum_range(0, top_k);
    out.top_m_after_removal = denominator > 0 ? static_cast<double>(after / denominator) : 0.0;
    return out;
}

Composition::Composition(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw Error(Errc::BadArity, "composition needs at least one part");
    for (auto p : parts_)
        if (p < 1 || p > kMaxOrder) throw Error(Errc::BadArity, "composition part outside 1..5");
}

std::size_t Composition::word_length() const noexcept {
    return std::accumulate(parts_.begin(), parts_.end(), std::size_t{0}) - (parts_.size() - 1);
}

JoinCount join_count(const NgramStore& store, const Composition& composition) {
    using TokenId = NgramStore::TokenId;
    for (auto n : composition.parts())
        if (store.table_size(n) == 0) throw Error(Errc::EmptyTable, "table " + std::to_string(n) + " is empty");

    // chains[w] = number of partial chains whose last word is w.
    std::unordered_map<TokenId, GuessNumber> chains;
    const auto first = composition.parts().front();
    for (std::uint32_t r = 0; r < store.table_size(first); ++r) chains[store.row_words(first, r).back()] += 1;

    for (std::size_t part = 1; part < composition.parts().size(); ++part) {
        const auto n = composition.parts()[part];
        std::unordered_map<TokenId, GuessNumber> next;
        for (std::uint32_t r = 0; r < store.table_size(n); ++r) {
            const auto words = store.row_words(n, r);
            const auto it = chains.find(words.front());
            if (it != chains.end()) next[words.back()] += it->second;
        }
        chains = std::move(next);
        if (chains.empty()) break;
    }

    JoinCount out;
    for (const auto& [word, count] : chains) out.count += count;
    if (out.count > 0) out.bits = log2_guesses(out.count);
    return out;
}

double exhaustive_bits(std::uint64_t alphabet_size, double length) {
    if (alphabet_size < 2) throw Error(Errc::InvalidArgument, "alphabet size must be at least 2");
    if (!(length > 0.0)) throw Error(Errc::InvalidArgument, "length must be positive");
    return length * std::log2(static_cast<double>(alphabet_size));
}

double multiplier_bits(const GuessNumber& base_count, const GuessNumber& lexicon_size) {
    if (base_count < 1 || lexicon_size < 1) throw Error(Errc::InvalidArgument, "counts must be at least 1");
    return log2_guesses(base_count * lexicon_size);
}

}  // namespace passguess
