#include "passguess/serialize.hpp"

namespace passguess {
namespace {

nlohmann::json findings(const std::vector<Finding>& list) {
    auto out = nlohmann::json::array();
    for (const auto& f : list) out.push_back({{"code", f.code}, {"message", f.message}, {"evidence", f.evidence}});
    return out;
}

nlohmann::json bits_or_null(const GuessEstimate& e, Estimator which) {
    const auto b = e.bits(which);
    return b ? nlohmann::json(*b) : nlohmann::json(nullptr);
}

}  // namespace

std::string guess_to_string(const std::optional<GuessNumber>& value) {
    return value ? value->str() : std::string(kNotGuessable);
}

nlohmann::json to_json(const PolicyReport& r) {
    auto windows = nlohmann::json::array();
    for (const auto& w : r.blacklisted_windows)
        windows.push_back({{"n", w.order}, {"start", w.start}, {"words", w.words}, {"rank", w.rank}});
    return {
        {"acceptable", r.acceptable()},
        {"violations", findings(r.violations)},
        {"recommendations", findings(r.recommendations)},
        {"word_count", r.word_count},
        {"proper_noun_tokens", r.proper_noun_tokens},
        {"slang_tokens", r.slang_tokens},
        {"non_dictionary_tokens", r.non_dictionary_tokens},
        {"blacklisted_windows", windows},
        {"common_bigram_windows", r.common_bigram_windows},
    };
}

nlohmann::json to_json(const GuessEstimate& e) {
    auto spans = nlohmann::json::array();
    for (const auto& s : e.found_spans)
        spans.push_back(
            {{"start", s.start}, {"n", s.order}, {"words", s.words}, {"rank", s.rank_used}, {"dynamic", s.dynamic}});
    return {
        {"low", guess_to_string(e.low)},
        {"high", guess_to_string(e.high)},
        {"unigram", guess_to_string(e.unigram)},
        {"low_bits", bits_or_null(e, Estimator::Low)},
        {"high_bits", bits_or_null(e, Estimator::High)},
        {"unigram_bits", bits_or_null(e, Estimator::Unigram)},
        {"found_spans", spans},
        {"unfound_words", e.unfound_words},
        {"unigram_unfound_words", e.unigram_unfound_words},
        {"score", e.trace.score},
        {"score_not_found", e.trace.score_not_found},
    };
}

nlohmann::json to_json(const CorpusStats& stats) {
    nlohmann::json counts = nlohmann::json::object();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) counts[std::to_string(n)] = stats.counts[n - 1];
    return {{"counts", counts}, {"total_tokens", stats.total_tokens}};
}

nlohmann::json to_json(const ToleranceAuditRow& row) {
    auto rescued = nlohmann::json::array();
    for (const auto& r : row.rescued) rescued.push_back({{"word", r.word}, {"match", r.match}, {"distance", r.distance}});
    return {{"phrase_id", row.phrase_id},
            {"unfound_words", row.unfound_words},
            {"rescued", rescued},
            {"fully_rescued", row.fully_rescued}};
}

}  // namespace passguess
