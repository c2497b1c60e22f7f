#include "passguess/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "passguess/error.hpp"

namespace passguess {
namespace {

using boost::multiprecision::msb;

struct Descent {
    std::vector<bool> found;
    SearchTrace trace;
    std::vector<FoundSpan> spans;

    std::vector<std::string> unfound(const std::vector<std::string>& words) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < words.size(); ++i)
            if (!found[i]) out.push_back(words[i]);
        return out;
    }
};

GuessNumber product(const std::vector<std::uint64_t>& values) {
    GuessNumber p = 1;
    for (auto v : values) p *= v;
    return p;
}

// One pass over window sizes largest..smallest, scanning each size left to
// right. A window is searched when all its words are unfound, or when it can
// chain onto an already matched word at its front or just past its end; in
// the chaining case unfound slots become wildcards and a match is scored by
// its position in the constrained result list.
Descent descend(const std::vector<std::string>& words, const NgramStore& store, std::size_t largest,
                std::size_t smallest) {
    const std::size_t len = words.size();
    std::vector<std::optional<NgramStore::TokenId>> ids;
    ids.reserve(len);
    for (const auto& w : words) ids.push_back(store.token_id(w));

    Descent d;
    d.found.assign(len, false);

    const auto record_miss = [&](std::uint64_t effort) {
        // An empty table costs the attacker nothing.
        if (effort > 0) d.trace.score_not_found.push_back(effort);
    };

    for (std::size_t n = largest; n >= smallest; --n) {
        for (std::size_t i = 0; i + n <= len; ++i) {
            std::size_t run = 0;
            for (std::size_t k = 0; k < n; ++k) run = d.found[i + k] ? 0 : run + 1;

            std::size_t start = i;
            std::size_t available = run;
            bool overlap = false;
            if (n > 1 && run + 1 >= n) {
                if (d.found[i]) {
                    ++available;
                    overlap = true;
                }
                if (i + n < len && d.found[i + n]) {
                    ++available;
                    start = i + 1;
                    overlap = true;
                }
            }
            if (available < n) continue;

            NgramStore::IdPattern pattern(n);
            bool target_known = true;
            bool pattern_known = true;
            for (std::size_t k = 0; k < n; ++k) {
                const auto pos = start + k;
                if (!ids[pos]) target_known = false;
                if (overlap && !d.found[pos]) continue;
                if (!ids[pos]) pattern_known = false;
                pattern[k] = ids[pos];
            }

            const auto rows = pattern_known ? store.query(pattern) : std::vector<std::uint32_t>{};
            const auto is_target = [&](std::uint32_t row) {
                if (!target_known) return false;
                const auto stored = store.row_words(n, row);
                for (std::size_t k = 0; k < n; ++k)
                    if (stored[k] != *ids[start + k]) return false;
                return true;
            };

            std::optional<std::uint64_t> used;
            if (rows.size() > 1) {
                std::uint64_t dynamic_rank = 0;
                for (auto row : rows) {
                    ++dynamic_rank;
                    if (is_target(row)) used = overlap ? dynamic_rank : store.row_rank(n, row);
                }
                if (!used) record_miss(overlap ? dynamic_rank : store.max_rank(n));
            } else if (rows.size() == 1 && is_target(rows.front())) {
                used = overlap ? 1 : store.row_rank(n, rows.front());
            } else {
                record_miss(store.max_rank(n));
            }

            if (used) {
                d.trace.score.push_back(*used);
                d.spans.push_back({start, n, {words.begin() + start, words.begin() + start + n}, *used, overlap});
                for (std::size_t k = 0; k < n; ++k) d.found[start + k] = true;
            }
        }
        if (n == 1) break;
    }
    return d;
}

void require_words(const NormalizedPhrase& phrase) {
    if (phrase.empty()) throw Error(Errc::EmptyPhrase, "cannot rank an empty phrase");
}

}  // namespace

double log2_guesses(const GuessNumber& value) {
    if (value <= 0) throw Error(Errc::InvalidArgument, "log2 of a non-positive guess number");
    const auto top_bit = msb(value);
    if (top_bit < 63) return std::log2(static_cast<double>(value.convert_to<std::uint64_t>()));
    const auto shift = top_bit - 62;
    const GuessNumber head = value >> shift;
    return std::log2(static_cast<double>(head.convert_to<std::uint64_t>())) + static_cast<double>(shift);
}

void RankerConfig::validate() const {
    if (largest_order < 1 || largest_order > kMaxOrder || smallest_order < 1 || smallest_order > largest_order)
        throw Error(Errc::InvalidArgument, "n-gram order range must satisfy 1 <= smallest <= largest <= 5");
}

const std::optional<GuessNumber>& GuessEstimate::get(Estimator e) const {
    switch (e) {
        case Estimator::Low: return low;
        case Estimator::High: return high;
        case Estimator::Unigram: return unigram;
    }
    return low;
}

std::optional<double> GuessEstimate::bits(Estimator e) const {
    const auto& v = get(e);
    if (!v) return std::nullopt;
    return log2_guesses(*v);
}

GuessEstimate rank_passphrase(const NormalizedPhrase& phrase, const NgramStore& store, const RankerConfig& cfg) {
    cfg.validate();
    require_words(phrase);
    const auto& words = phrase.tokens();
    auto d = descend(words, store, cfg.largest_order, cfg.smallest_order);

    GuessEstimate est;
    est.unfound_words = d.unfound(words);
    est.found_spans = std::move(d.spans);
    est.trace = std::move(d.trace);
    if (!est.unfound_words.empty()) return est;

    GuessNumber low = product(est.trace.score);
    GuessNumber missed = product(est.trace.score_not_found);
    if (cfg.high_combiner == HighCombiner::Sum) {
        est.high = est.trace.score_not_found.empty() ? low : low + missed;
    } else {
        est.high = low * missed;
    }
    est.low = std::move(low);
    return est;
}

GuessEstimate unigram_permutation_estimate(const NormalizedPhrase& phrase, const NgramStore& store,
                                           const RankerConfig& cfg) {
    require_words(phrase);
    const auto& words = phrase.tokens();
    const auto d = descend(words, store, 1, 1);

    GuessEstimate est;
    est.unigram_unfound_words = d.unfound(words);
    if (!est.unigram_unfound_words.empty()) return est;

    GuessNumber total = product(d.trace.score);
    const GuessNumber vocab = cfg.vocab_override.value_or(store.lexicon_size());
    // Every shorter length from the minimum up is enumerated first.
    for (std::size_t k = cfg.min_words; k < words.size(); ++k) total += boost::multiprecision::pow(vocab, k);
    est.unigram = std::move(total);
    return est;
}

GuessEstimate estimate_passphrase(const NormalizedPhrase& phrase, const NgramStore& store, const RankerConfig& cfg) {
    auto est = rank_passphrase(phrase, store, cfg);
    auto uni = unigram_permutation_estimate(phrase, store, cfg);
    est.unigram = std::move(uni.unigram);
    est.unigram_unfound_words = std::move(uni.unigram_unfound_words);
    return est;
}

double AttackReport::fraction(Estimator e) const {
    if (rows.empty()) return 0.0;
    const std::size_t hits = e == Estimator::Low ? low_guessable : e == Estimator::High ? high_guessable : unigram_guessable;
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

AttackReport attack_report(std::span<const NormalizedPhrase> phrases, const NgramStore& store,
                           const RankerConfig& cfg) {
    AttackReport report;
    report.rows.reserve(phrases.size());
    for (const auto& p : phrases) {
        auto est = estimate_passphrase(p, store, cfg);
        report.low_guessable += est.low.has_value();
        report.high_guessable += est.high.has_value();
        report.unigram_guessable += est.unigram.has_value();
        report.rows.push_back(std::move(est));
    }
    return report;
}

}  // namespace passguess
