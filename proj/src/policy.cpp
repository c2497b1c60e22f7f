#include "passguess/policy.hpp"

#include <algorithm>
#include <set>

#include "passguess/error.hpp"

namespace passguess {
namespace {

void push_unique(std::vector<std::string>& out, const std::string& token) {
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(token);
}

std::string join(const std::vector<std::string>& words, std::string_view sep = " ") {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += sep;
        out += w;
    }
    return out;
}

// Rank of the window if stored in table n.
std::optional<std::uint64_t> window_rank(const NgramStore& store, const std::vector<std::string>& tokens,
                                         std::size_t start, std::size_t n) {
    NgramStore::IdPattern pattern;
    for (std::size_t k = 0; k < n; ++k) {
        const auto id = store.token_id(tokens[start + k]);
        if (!id) return std::nullopt;
        pattern.emplace_back(*id);
    }
    const auto rows = store.query(pattern);
    if (rows.empty()) return std::nullopt;
    return store.row_rank(n, rows.front());
}

}  // namespace

void PolicyConfig::validate() const {
    if (min_words < 1) throw Error(Errc::InvalidArgument, "min_words must be at least 1");
    if (min_word_chars < 1) throw Error(Errc::InvalidArgument, "min_word_chars must be at least 1");
    for (auto n : blacklist_orders)
        if (n < 3 || n > 5) throw Error(Errc::InvalidArgument, "blacklist orders must be within 3..5");
}

bool PolicyReport::has_violation(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Finding& f) { return f.code == code; });
}

bool PolicyReport::has_recommendation(std::string_view code) const {
    return std::any_of(recommendations.begin(), recommendations.end(),
                       [&](const Finding& f) { return f.code == code; });
}

std::vector<TokenClass> classify_tokens(const NormalizedPhrase& phrase, const NgramStore& store) {
    std::vector<TokenClass> out;
    out.reserve(phrase.word_count());
    for (const auto& t : phrase.tokens()) {
        TokenClass c{t, store.in_lexicon(t), store.is_slang(t), false};
        c.not_found_anywhere = !c.in_lexicon && !c.slang;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::string> detect_proper_nouns(std::string_view raw, const NgramStore& store) {
    std::vector<std::string> out;
    const auto words = raw_words(raw);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        const bool listed = store.is_proper_noun(w.token);
        const bool capitalized_mid_phrase = i > 0 && w.capitalized;
        const bool non_dictionary = !store.in_lexicon(w.token);
        if (listed || capitalized_mid_phrase || non_dictionary) push_unique(out, w.token);
    }
    return out;
}

PolicyReport check_policy(std::string_view raw, const NgramStore& store, const PolicyConfig& cfg) {
    cfg.validate();
    PolicyReport report;
    const auto tokens = normalize_tokens(raw);
    report.word_count = tokens.size();
    if (tokens.empty()) {
        report.violations.push_back({std::string(codes::kEmptyPhrase), "Passphrase is empty.", ""});
        return report;
    }
    const auto phrase = NormalizedPhrase::from_tokens(tokens);

    if (tokens.size() < cfg.min_words) {
        report.violations.push_back({std::string(codes::kWordCount),
                                     "Passphrase needs at least " + std::to_string(cfg.min_words) + " words.",
                                     std::to_string(tokens.size()) + " words"});
    }

    report.proper_noun_tokens = detect_proper_nouns(raw, store);
    if (cfg.require_proper_noun && report.proper_noun_tokens.empty()) {
        report.violations.push_back(
            {std::string(codes::kProperNoun), "Include at least one proper noun such as a name or a place.", ""});
    }

    if (cfg.min_word_chars > 1) {
        std::vector<std::string> short_words;
        for (const auto& t : tokens)
            if (code_point_length(t) < cfg.min_word_chars) push_unique(short_words, t);
        if (!short_words.empty()) {
            report.violations.push_back({std::string(codes::kShortWord),
                                         "Every word needs at least " + std::to_string(cfg.min_word_chars) +
                                             " characters.",
                                         join(short_words, ",")});
        }
    }

    auto orders = cfg.blacklist_orders;
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    for (auto n : orders) {
        for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
            const auto rank = window_rank(store, tokens, start, n);
            if (!rank || *rank > cfg.blacklist_k) continue;
            BlacklistedWindow w{n, start, {tokens.begin() + start, tokens.begin() + start + n}, *rank};
            report.violations.push_back({std::string(codes::kBlacklistedNgram),
                                         "Avoid common word sequences.",
                                         join(w.words) + " (rank " + std::to_string(w.rank) + ")"});
            report.blacklisted_windows.push_back(std::move(w));
        }
    }

    for (const auto& c : classify_tokens(phrase, store)) {
        if (c.slang) push_unique(report.slang_tokens, c.token);
        if (!c.in_lexicon) push_unique(report.non_dictionary_tokens, c.token);
    }
    if (report.slang_tokens.empty() && report.non_dictionary_tokens.empty()) {
        report.recommendations.push_back(
            {std::string(codes::kNoSlang), "Consider adding slang or a word you would not find in a dictionary.", ""});
    }

    for (std::size_t start = 0; start + 2 <= tokens.size(); ++start) {
        const auto rank = window_rank(store, tokens, start, 2);
        if (rank && *rank <= cfg.blacklist_k) ++report.common_bigram_windows;
    }
    if (report.common_bigram_windows > 0) {
        report.recommendations.push_back({std::string(codes::kCommonBigrams),
                                          "Some adjacent word pairs are very common.",
                                          std::to_string(report.common_bigram_windows) + " windows"});
    }
    return report;
}

}  // namespace passguess
