#include "passguess/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "passguess/policy.hpp"

namespace passguess {

std::vector<CurvePoint> guessing_curve(std::span<const GuessEstimate> estimates, Estimator estimator) {
    std::vector<GuessNumber> guessed;
    for (const auto& e : estimates)
        if (const auto& v = e.get(estimator)) guessed.push_back(*v);
    std::sort(guessed.begin(), guessed.end());

    std::vector<CurvePoint> out;
    const auto total = static_cast<double>(estimates.size());
    for (std::size_t i = 0; i < guessed.size(); ++i) {
        if (i + 1 < guessed.size() && guessed[i + 1] == guessed[i]) continue;
        out.push_back({log2_guesses(guessed[i]), static_cast<double>(i + 1) / total});
    }
    return out;
}

std::size_t word_tolerance_radius(std::size_t word_length, const ToleranceConfig& cfg) {
    cfg.validate();
    auto radius = static_cast<std::size_t>(std::floor(cfg.max_relative_distance * static_cast<double>(word_length)));
    if (word_length >= 8) radius = std::max<std::size_t>(radius, 1);
    return radius;
}

std::vector<ToleranceAuditRow> tolerance_audit(std::span<const RankedPhrase> phrases, const NgramStore& store,
                                               const ToleranceConfig& cfg) {
    // Group the lexicon by code-point length so each probe only scans
    // entries that could be within its radius.
    std::map<std::size_t, std::vector<std::string>> by_length;
    bool indexed = false;

    std::vector<ToleranceAuditRow> out;
    for (const auto& p : phrases) {
        if (p.estimate.unfound_words.empty()) continue;
        if (!indexed) {
            for (std::uint32_t r = 0; r < store.table_size(1); ++r) {
                const auto& token = store.token_text(store.row_words(1, r).front());
                by_length[code_point_length(token)].push_back(token);
            }
            indexed = true;
        }
        ToleranceAuditRow row;
        row.phrase_id = p.id;
        row.unfound_words = p.estimate.unfound_words;
        std::size_t rescued_count = 0;
        for (const auto& word : row.unfound_words) {
            const auto len = code_point_length(word);
            const auto radius = word_tolerance_radius(len, cfg);
            if (radius == 0) continue;
            std::optional<RescuedWord> best;
            const auto lo = len > radius ? len - radius : 0;
            for (auto it = by_length.lower_bound(lo); it != by_length.end() && it->first <= len + radius; ++it) {
                for (const auto& candidate : it->second) {
                    const auto d = levenshtein_bounded(word, candidate, radius);
                    if (d > radius) continue;
                    // Lexicon entries are scanned in string order within a
                    // length bucket; keep the closest, earliest match.
                    if (!best || d < best->distance) best = RescuedWord{word, candidate, d};
                }
            }
            if (best) {
                row.rescued.push_back(std::move(*best));
                ++rescued_count;
            }
        }
        row.fully_rescued = rescued_count == row.unfound_words.size();
        out.push_back(std::move(row));
    }
    return out;
}

std::set<std::string> read_known_phrases(std::istream& in) {
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto tokens = normalize_tokens(line);
        if (!tokens.empty()) out.insert(NormalizedPhrase::from_tokens(tokens).canonical());
    }
    return out;
}

std::vector<PhraseHit> phrase_dictionary_check(std::span<const RankedPhrase> phrases,
                                               const std::set<std::string>& known) {
    std::vector<PhraseHit> hits;
    for (const auto& p : phrases)
        if (known.count(p.phrase.canonical())) hits.push_back({p.id, p.phrase.canonical()});
    return hits;
}

CoverageTable coverage_table(std::span<const RankedPhrase> phrases, const NgramStore& store) {
    CoverageTable table;
    auto& s = table.summary;
    for (const auto& p : phrases) {
        CoverageRow row;
        row.phrase_id = p.id;
        row.word_count = p.phrase.word_count();
        for (const auto& c : classify_tokens(p.phrase, store)) {
            row.slang_hits += c.slang;
            row.not_found += c.not_found_anywhere;
            s.words_in_lexicon += c.in_lexicon;
        }
        row.low_guessable = p.estimate.low.has_value();
        row.high_guessable = p.estimate.high.has_value();
        row.unigram_guessable = p.estimate.unigram.has_value();

        ++s.phrases;
        s.total_words += row.word_count;
        s.slang_words += row.slang_hits;
        s.not_found_words += row.not_found;
        s.phrases_with_slang += row.slang_hits > 0;
        s.phrases_with_not_found += row.not_found > 0;
        table.rows.push_back(std::move(row));
    }
    if (s.total_words > 0)
        s.percent_words_found = 100.0 * static_cast<double>(s.words_in_lexicon) / static_cast<double>(s.total_words);
    return table;
}

}  // namespace passguess
