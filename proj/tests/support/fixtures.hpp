#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "passguess/corpus.hpp"

namespace passguess::testing {

inline std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

struct NgramSpec {
    std::string words;  // space separated
    std::uint64_t frequency;
};

struct StoreSpec {
    std::vector<NgramSpec> ngrams;
    std::vector<std::string> proper_nouns;
    std::vector<std::string> slang;
    StoreOptions options;
};

inline NgramStore build_store(const StoreSpec& spec) {
    NgramStore::Builder builder(spec.options);
    for (const auto& g : spec.ngrams) builder.add(split_words(g.words), g.frequency);
    for (const auto& p : spec.proper_nouns) builder.add_proper_noun(p);
    for (const auto& s : spec.slang) builder.add_slang(s);
    return std::move(builder).build();
}

inline NgramStore build_store(std::vector<NgramSpec> ngrams) {
    StoreSpec spec;
    spec.ngrams = std::move(ngrams);
    return build_store(spec);
}

/// Directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "passguess") {
        static std::atomic<unsigned> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string vocab_word(std::size_t i) {
    static const char* const names[] = {"ash",  "bay",  "cold", "dusk", "echo", "fern", "gale", "hill", "iris", "jade",
                                        "kite", "lamp", "moss", "nest", "oak",  "pine", "quay", "reed", "sand", "tide"};
    return names[i % 20];
}

/// Random raw tables over a small vocabulary: up to `max_ngrams` entries
/// spread over orders 1..5, small frequencies so ties are common.
struct RandomTables {
    std::size_t vocab_size = 0;
    std::vector<std::pair<std::vector<std::string>, std::uint64_t>> entries;
};

inline RandomTables random_tables(std::mt19937_64& rng, std::size_t max_vocab, std::size_t max_ngrams,
                                  std::uint64_t max_freq = 6) {
    RandomTables t;
    t.vocab_size = std::uniform_int_distribution<std::size_t>(3, max_vocab)(rng);
    const auto count = std::uniform_int_distribution<std::size_t>(1, max_ngrams)(rng);
    std::uniform_int_distribution<std::size_t> word(0, t.vocab_size - 1);
    std::uniform_int_distribution<std::size_t> order(1, kMaxOrder);
    std::uniform_int_distribution<std::uint64_t> freq(1, max_freq);
    std::set<std::vector<std::string>> seen;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<std::string> words(order(rng));
        for (auto& w : words) w = vocab_word(word(rng));
        if (!seen.insert(words).second) continue;
        t.entries.emplace_back(std::move(words), freq(rng));
    }
    return t;
}

inline NgramStore store_from(const RandomTables& t, StoreOptions options = {}) {
    NgramStore::Builder builder(options);
    for (const auto& [words, f] : t.entries) builder.add(words, f);
    return std::move(builder).build();
}

/// Phrase of `length` words stitched from stored n-grams and vocabulary
/// words, with an occasional word no table contains.
inline std::vector<std::string> random_phrase(std::mt19937_64& rng, const RandomTables& t, std::size_t length,
                                              double stranger_rate = 0.03) {
    std::vector<std::string> out;
    std::uniform_int_distribution<std::size_t> pick(0, t.entries.size() - 1);
    std::uniform_int_distribution<std::size_t> word(0, t.vocab_size - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    while (out.size() < length) {
        const double c = coin(rng);
        if (c < stranger_rate) {
            out.push_back("zzz");
        } else if (c < 0.6) {
            const auto& g = t.entries[pick(rng)].first;
            // Sometimes reuse the previous word as the first word of the piece.
            std::size_t from = (!out.empty() && out.back() == g.front() && coin(rng) < 0.5) ? 1 : 0;
            for (std::size_t k = from; k < g.size() && out.size() < length; ++k) out.push_back(g[k]);
        } else {
            out.push_back(vocab_word(word(rng)));
        }
    }
    return out;
}

}  // namespace passguess::testing
