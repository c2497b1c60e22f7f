#include "passguess/matching.hpp"

#include <algorithm>
#include <numeric>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "passguess/error.hpp"

namespace passguess {
namespace {

std::u32string decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
    const auto len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, len, c);
        // Malformed sequences decode to U+FFFD so lengths stay meaningful.
        out.push_back(c < 0 ? char32_t{0xFFFD} : static_cast<char32_t>(c));
    }
    return out;
}

void append_utf8(std::string& out, UChar32 c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

bool is_word_char(UChar32 c) {
    if (u_isalpha(c) || u_isdigit(c)) return true;
    const auto cat = u_charType(c);
    return cat == U_NON_SPACING_MARK || cat == U_COMBINING_SPACING_MARK || cat == U_ENCLOSING_MARK;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

std::size_t edit_distance(const std::u32string& a, const std::u32string& b, std::size_t limit) {
    const std::u32string& s = a.size() < b.size() ? b : a;
    const std::u32string& t = a.size() < b.size() ? a : b;
    if (s.size() - t.size() > limit) return limit + 1;
    if (t.empty()) return s.size();

    std::vector<std::size_t> row(t.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= s.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        std::size_t row_min = row[0];
        for (std::size_t j = 1; j <= t.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t cost = s[i - 1] == t[j - 1] ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = up;
            row_min = std::min(row_min, row[j]);
        }
        if (row_min > limit) return limit + 1;
    }
    return std::min(row[t.size()], limit + 1);
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string current;
    const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
    const auto len = static_cast<int32_t>(raw.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, len, c);
        if (c < 0) continue;
        if (is_space(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else if (is_word_char(c)) {
            append_utf8(current, u_tolower(c));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<RawWord> raw_words(std::string_view raw) {
    std::vector<RawWord> words;
    RawWord current;
    bool seen_letter = false;
    const auto flush = [&] {
        if (!current.token.empty()) words.push_back(std::move(current));
        current = {};
        seen_letter = false;
    };
    const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
    const auto len = static_cast<int32_t>(raw.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, len, c);
        if (c < 0) continue;
        if (is_space(c)) {
            flush();
            continue;
        }
        if (!is_word_char(c)) continue;
        if (!seen_letter && u_isalpha(c)) {
            seen_letter = true;
            current.capitalized = u_isupper(c) || u_istitle(c);
        }
        append_utf8(current.token, u_tolower(c));
    }
    flush();
    return words;
}

NormalizedPhrase normalize(std::string_view raw) {
    auto tokens = normalize_tokens(raw);
    if (tokens.empty()) throw Error(Errc::EmptyPhrase, "phrase is empty after normalization");
    return NormalizedPhrase::from_tokens(std::move(tokens));
}

bool is_normal_token(std::string_view token) {
    const auto tokens = normalize_tokens(token);
    return tokens.size() == 1 && tokens.front() == token;
}

NormalizedPhrase NormalizedPhrase::from_tokens(std::vector<std::string> tokens) {
    NormalizedPhrase p;
    for (const auto& t : tokens) {
        if (!is_normal_token(t)) throw Error(Errc::InvalidArgument, "token not normalized: '" + t + "'");
        if (!p.canonical_.empty()) p.canonical_.push_back(' ');
        p.canonical_ += t;
    }
    p.tokens_ = std::move(tokens);
    p.length_ = code_point_length(p.canonical_);
    return p;
}

std::size_t code_point_length(std::string_view utf8) { return decode(utf8).size(); }

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const auto ua = decode(a);
    const auto ub = decode(b);
    return edit_distance(ua, ub, std::max(ua.size(), ub.size()));
}

std::size_t levenshtein_bounded(std::string_view a, std::string_view b, std::size_t limit) {
    return edit_distance(decode(a), decode(b), limit);
}

void ToleranceConfig::validate() const {
    if (!(max_relative_distance >= 0.0 && max_relative_distance < 1.0))
        throw Error(Errc::InvalidArgument, "tolerance must lie in [0, 1)");
}

ToleranceResult within_tolerance(const NormalizedPhrase& stored, const NormalizedPhrase& attempt,
                                 const ToleranceConfig& cfg) {
    cfg.validate();
    if (stored.empty()) throw Error(Errc::EmptyPhrase, "stored phrase is empty");
    ToleranceResult r;
    r.distance = levenshtein(stored.canonical(), attempt.canonical());
    r.relative = static_cast<double>(r.distance) / static_cast<double>(stored.length());
    r.accepted = r.relative <= cfg.max_relative_distance;
    return r;
}

}  // namespace passguess
