#pragma once

// JSON renderings shared by the CLI and the HTTP service.

#include <string>

#include <nlohmann/json.hpp>

#include "passguess/corpus.hpp"
#include "passguess/policy.hpp"
#include "passguess/ranker.hpp"
#include "passguess/report.hpp"

namespace passguess {

inline constexpr const char* kNotGuessable = "not_guessable";

/// Decimal string, or "not_guessable".
std::string guess_to_string(const std::optional<GuessNumber>& value);

nlohmann::json to_json(const PolicyReport& report);
/// low/high/unigram as decimal strings plus *_bits (null when not guessable).
nlohmann::json to_json(const GuessEstimate& estimate);
nlohmann::json to_json(const CorpusStats& stats);
nlohmann::json to_json(const ToleranceAuditRow& row);

}  // namespace passguess
