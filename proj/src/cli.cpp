#include "passguess/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <set>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "passguess/corpus.hpp"
#include "passguess/error.hpp"
#include "passguess/policy.hpp"
#include "passguess/ranker.hpp"
#include "passguess/report.hpp"
#include "passguess/serialize.hpp"
#include "passguess/service.hpp"
#include "passguess/theory.hpp"

namespace passguess {
namespace {

using nlohmann::json;

struct CliConfig {
    std::string store_dir;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> blacklist_k;
    std::string high_combiner = "sum";
    std::optional<std::uint64_t> vocab;
    std::size_t min_words = 7;
    bool no_unigrams = false;
    std::string format = "auto";
    unsigned jobs = 1;
};

struct Phrase {
    std::string id;
    std::string raw;
};

/// Input source that is either the caller's stdin ("-") or a file.
class Input {
public:
    Input(const std::string& path, std::istream& stdin_stream) {
        if (path == "-") {
            stream_ = &stdin_stream;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path);
        if (!*file_) throw Error(Errc::Io, "cannot open " + path);
        stream_ = file_.get();
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

/// Reads non-blank lines in batches; ids are 1-based line numbers.
class PhraseReader {
public:
    explicit PhraseReader(std::istream& in) : in_(in) {}

    std::vector<Phrase> next_batch(std::size_t max) {
        std::vector<Phrase> batch;
        std::string line;
        while (batch.size() < max && std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            batch.push_back({std::to_string(lineno_), std::move(line)});
        }
        return batch;
    }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

std::string resolve_format(const CliConfig& cfg, const std::string& fallback) {
    return cfg.format == "auto" ? fallback : cfg.format;
}

NgramStore open_store(const CliConfig& cfg) {
    if (cfg.store_dir.empty()) throw Error(Errc::StoreMissing, "no store given (use --store or PASSGUESS_STORE)");
    return load_store(cfg.store_dir);
}

RankerConfig ranker_config(const CliConfig& cfg) {
    RankerConfig r;
    r.high_combiner = cfg.high_combiner == "product" ? HighCombiner::Product : HighCombiner::Sum;
    r.vocab_override = cfg.vocab;
    r.min_words = cfg.min_words;
    if (cfg.no_unigrams) r.smallest_order = 2;
    return r;
}

PolicyConfig policy_config(const CliConfig& cfg, const NgramStore& store) {
    PolicyConfig p;
    p.min_words = cfg.min_words;
    p.blacklist_k = cfg.blacklist_k.value_or(store.blacklist_k());
    return p;
}

ToleranceConfig tolerance_config(const CliConfig& cfg) {
    ToleranceConfig t;
    if (cfg.tolerance) t.max_relative_distance = *cfg.tolerance;
    t.validate();
    return t;
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string bits_cell(const std::optional<double>& b) { return b ? fixed(*b) : std::string(); }

/// Ranks a batch over `jobs` threads, preserving order.
std::vector<std::optional<RankedPhrase>> rank_batch(const std::vector<Phrase>& batch, const NgramStore& store,
                                                    const RankerConfig& rc, unsigned jobs) {
    std::vector<std::optional<RankedPhrase>> out(batch.size());
    const auto work = [&](std::size_t first, std::size_t step) {
        for (std::size_t i = first; i < batch.size(); i += step) {
            const auto tokens = normalize_tokens(batch[i].raw);
            if (tokens.empty()) continue;
            auto phrase = NormalizedPhrase::from_tokens(tokens);
            auto est = estimate_passphrase(phrase, store, rc);
            out[i] = RankedPhrase{batch[i].id, std::move(phrase), std::move(est)};
        }
    };
    if (jobs <= 1 || batch.size() < 2) {
        work(0, 1);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
    pool.clear();
    return out;
}

/// Ranks every phrase of `path`, invoking `sink` in input order.
void for_each_ranked(const std::string& path, std::istream& in, const NgramStore& store, const CliConfig& cfg,
                     const std::function<void(const Phrase&, const std::optional<RankedPhrase>&)>& sink) {
    Input input(path, in);
    PhraseReader reader(input.get());
    const auto rc = ranker_config(cfg);
    while (true) {
        const auto batch = reader.next_batch(256);
        if (batch.empty()) break;
        const auto ranked = rank_batch(batch, store, rc, cfg.jobs);
        for (std::size_t i = 0; i < batch.size(); ++i) sink(batch[i], ranked[i]);
    }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ingest(const CliConfig& cfg, const std::string& corpus, std::size_t max_n, const std::string& out_dir,
               bool sentences, const std::vector<std::string>& caps, const std::string& proper_path,
               const std::string& slang_path, std::optional<std::uint64_t> lexicon_size, std::istream& in,
               std::ostream& out) {
    StoreOptions options;
    options.blacklist_k = cfg.blacklist_k.value_or(options.blacklist_k);
    options.lexicon_size_override = lexicon_size;
    for (const auto& cap : caps) {
        const auto eq = cap.find('=');
        std::size_t n = 0;
        std::uint64_t limit = 0;
        try {
            if (eq == std::string::npos) throw std::invalid_argument(cap);
            n = std::stoul(cap.substr(0, eq));
            limit = std::stoull(cap.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(Errc::InvalidArgument, "--cap expects N=MAX, got '" + cap + "'");
        }
        if (n < 1 || n > kMaxOrder) throw Error(Errc::BadArity, "--cap order outside 1..5");
        options.caps[n - 1] = limit;
    }

    NgramCounter counter({max_n, sentences});
    {
        Input input(corpus, in);
        std::string line;
        while (std::getline(input.get(), line)) {
            line.push_back('\n');
            counter.feed(line);
        }
    }
    auto builder = std::move(counter).into_builder(options);
    const auto read_lex = [&](const std::string& path, bool proper) {
        if (path.empty()) return;
        Input input(path, in);
        for (auto token : read_lexicon(input.get(), path)) {
            if (proper)
                builder.add_proper_noun(std::move(token));
            else
                builder.add_slang(std::move(token));
        }
    };
    read_lex(proper_path, true);
    read_lex(slang_path, false);
    const auto store = std::move(builder).build();
    save_store(store, out_dir);
    out << to_json(store.stats()).dump() << '\n';
    return 0;
}

int cmd_policy(const CliConfig& cfg, const std::string& passphrase, const std::string& in_path,
               std::size_t min_word_chars, std::istream& in, std::ostream& out) {
    const auto store = open_store(cfg);
    auto pc = policy_config(cfg, store);
    pc.min_word_chars = min_word_chars;
    if (in_path.empty()) {
        out << to_json(check_policy(passphrase, store, pc)).dump() << '\n';
        return 0;
    }
    Input input(in_path, in);
    PhraseReader reader(input.get());
    while (true) {
        const auto batch = reader.next_batch(256);
        if (batch.empty()) break;
        for (const auto& p : batch) {
            json row = to_json(check_policy(p.raw, store, pc));
            row["id"] = p.id;
            out << row.dump() << '\n';
        }
    }
    return 0;
}

int cmd_rank(const CliConfig& cfg, const std::string& in_path, bool summary, std::istream& in, std::ostream& out) {
    const auto store = open_store(cfg);
    const auto format = resolve_format(cfg, "json");
    std::size_t total = 0, low = 0, high = 0, uni = 0;
    if (format == "csv") out << "id,low,high,unigram,low_bits,high_bits,unigram_bits\n";
    for_each_ranked(in_path, in, store, cfg, [&](const Phrase& p, const std::optional<RankedPhrase>& r) {
        ++total;
        if (!r) {
            if (format == "csv")
                out << p.id << ",,,,,,\n";
            else
                out << json{{"id", p.id}, {"error", to_string(Errc::EmptyPhrase)}}.dump() << '\n';
            return;
        }
        const auto& e = r->estimate;
        low += e.low.has_value();
        high += e.high.has_value();
        uni += e.unigram.has_value();
        if (format == "csv") {
            out << p.id << ',' << guess_to_string(e.low) << ',' << guess_to_string(e.high) << ','
                << guess_to_string(e.unigram) << ',' << bits_cell(e.bits(Estimator::Low)) << ','
                << bits_cell(e.bits(Estimator::High)) << ',' << bits_cell(e.bits(Estimator::Unigram)) << '\n';
        } else if (format == "text") {
            out << p.id << "\t" << r->phrase.canonical() << "\tlow=" << guess_to_string(e.low)
                << "\thigh=" << guess_to_string(e.high) << "\tunigram=" << guess_to_string(e.unigram) << '\n';
        } else {
            auto row = to_json(e);
            row["id"] = p.id;
            row["phrase"] = r->phrase.canonical();
            out << row.dump() << '\n';
        }
    });
    if (summary) {
        const auto frac = [&](std::size_t k) { return total ? static_cast<double>(k) / total : 0.0; };
        out << json{{"summary",
                     {{"phrases", total},
                      {"low_guessable", low},
                      {"high_guessable", high},
                      {"unigram_guessable", uni},
                      {"low_fraction", frac(low)},
                      {"high_fraction", frac(high)},
                      {"unigram_fraction", frac(uni)}}}}
                   .dump()
            << '\n';
    }
    return 0;
}

Estimator parse_estimator(const std::string& name) {
    if (name == "low") return Estimator::Low;
    if (name == "high") return Estimator::High;
    return Estimator::Unigram;
}

int cmd_report_curve(const CliConfig& cfg, const std::string& in_path, const std::string& estimator,
                     std::istream& in, std::ostream& out) {
    const auto store = open_store(cfg);
    const auto which = parse_estimator(estimator);
    // Only the chosen guess number is retained per phrase.
    std::vector<GuessEstimate> slim;
    for_each_ranked(in_path, in, store, cfg, [&](const Phrase&, const std::optional<RankedPhrase>& r) {
        GuessEstimate e;
        if (r) {
            switch (which) {
                case Estimator::Low: e.low = r->estimate.low; break;
                case Estimator::High: e.high = r->estimate.high; break;
                case Estimator::Unigram: e.unigram = r->estimate.unigram; break;
            }
        }
        slim.push_back(std::move(e));
    });
    const auto curve = guessing_curve(slim, which);
    if (resolve_format(cfg, "csv") == "json") {
        auto arr = json::array();
        for (const auto& p : curve) arr.push_back({{"log2_guesses", p.log2_guesses}, {"fraction_guessed", p.fraction_guessed}});
        out << arr.dump() << '\n';
        return 0;
    }
    out << "log2_guesses,fraction_guessed\n";
    for (const auto& p : curve) out << fixed(p.log2_guesses) << ',' << fixed(p.fraction_guessed) << '\n';
    return 0;
}

int cmd_report_coverage(const CliConfig& cfg, const std::string& in_path, std::istream& in, std::ostream& out) {
    const auto store = open_store(cfg);
    const auto format = resolve_format(cfg, "csv");
    CoverageSummary total;
    if (format == "csv") out << "phrase_id,word_count,slang_hits,not_found,low_guessable,high_guessable,unigram_guessable\n";
    for_each_ranked(in_path, in, store, cfg, [&](const Phrase&, const std::optional<RankedPhrase>& r) {
        if (!r) return;
        const auto table = coverage_table(std::span(&*r, 1), store);
        const auto& row = table.rows.front();
        const auto& s = table.summary;
        total.phrases += s.phrases;
        total.total_words += s.total_words;
        total.words_in_lexicon += s.words_in_lexicon;
        total.slang_words += s.slang_words;
        total.not_found_words += s.not_found_words;
        total.phrases_with_slang += s.phrases_with_slang;
        total.phrases_with_not_found += s.phrases_with_not_found;
        if (format == "csv") {
            out << std::boolalpha << row.phrase_id << ',' << row.word_count << ',' << row.slang_hits << ',' << row.not_found << ','
                << row.low_guessable << ',' << row.high_guessable << ',' << row.unigram_guessable << '\n';
        } else {
            out << json{{"phrase_id", row.phrase_id},       {"word_count", row.word_count},
                        {"slang_hits", row.slang_hits},     {"not_found", row.not_found},
                        {"low_guessable", row.low_guessable}, {"high_guessable", row.high_guessable},
                        {"unigram_guessable", row.unigram_guessable}}
                       .dump()
                << '\n';
        }
    });
    if (format != "csv") {
        if (total.total_words > 0)
            total.percent_words_found = 100.0 * static_cast<double>(total.words_in_lexicon) / total.total_words;
        out << json{{"summary",
                     {{"phrases", total.phrases},
                      {"total_words", total.total_words},
                      {"words_in_lexicon", total.words_in_lexicon},
                      {"slang_words", total.slang_words},
                      {"not_found_words", total.not_found_words},
                      {"phrases_with_slang", total.phrases_with_slang},
                      {"phrases_with_not_found", total.phrases_with_not_found},
                      {"percent_words_found", total.percent_words_found}}}}
                   .dump()
            << '\n';
    }
    return 0;
}

int cmd_report_tolerance(const CliConfig& cfg, const std::string& in_path, std::istream& in, std::ostream& out) {
    const auto store = open_store(cfg);
    const auto tol = tolerance_config(cfg);
    for_each_ranked(in_path, in, store, cfg, [&](const Phrase&, const std::optional<RankedPhrase>& r) {
        if (!r) return;
        for (const auto& row : tolerance_audit(std::span(&*r, 1), store, tol)) out << to_json(row).dump() << '\n';
    });
    return 0;
}

int cmd_report_phrasedict(const std::string& in_path, const std::string& known_path, std::istream& in,
                          std::ostream& out) {
    std::set<std::string> known;
    {
        Input input(known_path, in);
        known = read_known_phrases(input.get());
    }
    Input input(in_path, in);
    PhraseReader reader(input.get());
    std::size_t total = 0;
    auto hits = json::array();
    while (true) {
        const auto batch = reader.next_batch(256);
        if (batch.empty()) break;
        for (const auto& p : batch) {
            ++total;
            const auto tokens = normalize_tokens(p.raw);
            if (tokens.empty()) continue;
            const RankedPhrase rp{p.id, NormalizedPhrase::from_tokens(tokens), {}};
            for (const auto& h : phrase_dictionary_check(std::span(&rp, 1), known))
                hits.push_back({{"phrase_id", h.phrase_id}, {"phrase", h.canonical}});
        }
    }
    out << json{{"phrases", total}, {"hit_count", hits.size()}, {"hits", hits}}.dump() << '\n';
    return 0;
}

std::vector<std::size_t> parse_parts(const std::string& spec) {
    std::vector<std::size_t> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            parts.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw Error(Errc::InvalidArgument, "--parts expects comma-separated integers");
        }
    }
    return parts;
}

GuessNumber parse_big(const std::string& text, const char* flag) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw Error(Errc::InvalidArgument, std::string(flag) + " expects a non-negative integer");
    return GuessNumber(text);
}

void emit_scalar(const CliConfig& cfg, std::ostream& out, const char* name, double value, json extra = json::object()) {
    if (resolve_format(cfg, "json") == "text") {
        out << fixed(value, 3) << '\n';
        return;
    }
    extra[name] = value;
    out << extra.dump() << '\n';
}

void print_error(std::ostream& err, const Error& e) {
    json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.line()) j["line"] = *e.line();
    err << j.dump() << '\n';
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::StoreMissing: return kExitStoreMissing;
        case Errc::ParseError: return kExitParseError;
        default: return 1;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Passphrase policy and guessability toolkit", "passguess"};
    app.require_subcommand(1);
    app.fallthrough();

    CliConfig cfg;
    app.add_option("--store", cfg.store_dir, "N-gram store directory")->envname("PASSGUESS_STORE");
    app.add_option("--tolerance", cfg.tolerance, "Maximum relative edit distance")->check(CLI::Range(0.0, 0.999999));
    app.add_option("--blacklist-k", cfg.blacklist_k, "Blacklist rank cutoff");
    app.add_option("--high-combiner", cfg.high_combiner, "sum|product")->check(CLI::IsMember({"sum", "product"}));
    app.add_option("--vocab", cfg.vocab, "Vocabulary size for the 1-gram length prefix");
    app.add_option("--min-words", cfg.min_words, "Minimum passphrase word count")->check(CLI::PositiveNumber);
    app.add_flag("--no-unigrams", cfg.no_unigrams, "Exclude 1-grams from the n-gram descent");
    app.add_option("--format", cfg.format, "json|csv|text")->check(CLI::IsMember({"auto", "json", "csv", "text"}));
    app.add_option("--jobs", cfg.jobs, "Ranking threads")->check(CLI::Range(1u, 256u));

    std::function<int()> action;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Build an n-gram store from plain text");
    std::string corpus, out_dir, proper_path, slang_path;
    std::size_t max_n = 5;
    bool sentences = false;
    std::vector<std::string> caps;
    std::optional<std::uint64_t> lexicon_size;
    ingest->add_option("--corpus", corpus, "Text file or - for stdin")->required();
    ingest->add_option("--max-n", max_n, "Largest n-gram order")->check(CLI::Range(1, 5));
    ingest->add_option("--out", out_dir, "Store directory to write")->required();
    ingest->add_flag("--sentences", sentences, "Do not count windows across . ! ?");
    ingest->add_option("--cap", caps, "Keep at most MAX entries of order N (N=MAX)");
    ingest->add_option("--proper-nouns", proper_path, "Proper-noun lexicon file");
    ingest->add_option("--slang", slang_path, "Slang lexicon file");
    ingest->add_option("--lexicon-size", lexicon_size, "Override the vocabulary size");
    ingest->callback([&] {
        action = [&] {
            return cmd_ingest(cfg, corpus, max_n, out_dir, sentences, caps, proper_path, slang_path, lexicon_size, in,
                              out);
        };
    });

    // policy
    auto* policy = app.add_subcommand("policy", "Check passphrases against the creation policy");
    std::string passphrase, policy_in;
    std::size_t min_word_chars = 1;
    policy->add_option("passphrase", passphrase, "Passphrase to check");
    policy->add_option("--in", policy_in, "File with one passphrase per line (- for stdin)");
    policy->add_option("--min-word-chars", min_word_chars, "Minimum characters per word")->check(CLI::PositiveNumber);
    policy->callback([&] {
        if (passphrase.empty() && policy_in.empty()) throw CLI::ValidationError("policy", "give a passphrase or --in");
        action = [&] { return cmd_policy(cfg, passphrase, policy_in, min_word_chars, in, out); };
    });

    // rank
    auto* rank = app.add_subcommand("rank", "Compute guess numbers");
    std::string rank_in;
    bool summary = false;
    rank->add_option("--in", rank_in, "File with one passphrase per line (- for stdin)")->required();
    rank->add_flag("--summary", summary, "Append aggregate guessable fractions");
    rank->callback([&] { action = [&] { return cmd_rank(cfg, rank_in, summary, in, out); }; });

    // theory
    auto* theory = app.add_subcommand("theory", "Theoretical estimators");
    theory->require_subcommand(1);

    auto* bits = theory->add_subcommand("bits", "length * log2(alphabet)");
    std::uint64_t alphabet = 0;
    double length = 0;
    bits->add_option("--alphabet", alphabet)->required();
    bits->add_option("--length", length)->required();
    bits->callback([&] {
        action = [&] {
            emit_scalar(cfg, out, "bits", exhaustive_bits(alphabet, length), {{"alphabet", alphabet}, {"length", length}});
            return 0;
        };
    });

    auto* multiplier = theory->add_subcommand("multiplier", "log2(base * lexicon)");
    std::string base_text, lexicon_text;
    multiplier->add_option("--base", base_text)->required();
    multiplier->add_option("--lexicon", lexicon_text)->required();
    multiplier->callback([&] {
        action = [&] {
            const auto b = parse_big(base_text, "--base");
            const auto l = parse_big(lexicon_text, "--lexicon");
            emit_scalar(cfg, out, "bits", multiplier_bits(b, l), {{"base", base_text}, {"lexicon", lexicon_text}});
            return 0;
        };
    });

    auto* guesswork = theory->add_subcommand("guesswork", "Marginal guesswork of a ranked distribution");
    std::string dist_path;
    std::optional<double> alpha;
    bool curve = false;
    std::size_t stride = 1;
    guesswork->add_option("--dist", dist_path, "One probability or frequency per line")->required();
    guesswork->add_option("--alpha", alpha, "Target success probability");
    guesswork->add_flag("--curve", curve, "Emit the cumulative curve as CSV");
    guesswork->add_option("--stride", stride, "Curve sampling stride")->check(CLI::PositiveNumber);
    guesswork->callback([&] {
        if (!alpha && !curve) throw CLI::ValidationError("guesswork", "give --alpha and/or --curve");
        action = [&] {
            Input input(dist_path, in);
            const auto dist = Distribution::read(input.get());
            if (alpha) {
                const auto w = marginal_guesswork(dist, *alpha);
                json j{{"alpha", *alpha}, {"guesses", w ? json(*w) : json("unreachable")}};
                if (w) j["log2_guesses"] = std::log2(static_cast<double>(*w));
                out << j.dump() << '\n';
            }
            if (curve) {
                out << "index,cumulative_mass,log2_index\n";
                for (const auto& p : guesswork_curve(dist, stride))
                    out << p.index << ',' << fixed(p.cumulative_mass, 9) << ',' << fixed(p.log2_index) << '\n';
            }
            return 0;
        };
    });

    auto* joins = theory->add_subcommand("joins", "Count overlap-joined n-gram chains");
    std::string parts_text;
    joins->add_option("--parts", parts_text, "Composition such as 5,3")->required();
    joins->callback([&] {
        action = [&] {
            const auto store = open_store(cfg);
            const Composition comp(parse_parts(parts_text));
            const auto jc = join_count(store, comp);
            out << json{{"parts", comp.parts()},
                        {"words", comp.word_length()},
                        {"count", jc.count.str()},
                        {"bits", jc.bits ? json(*jc.bits) : json(nullptr)}}
                       .dump()
                << '\n';
            return 0;
        };
    });

    auto* mass = theory->add_subcommand("mass", "Probability mass of the top M n-grams with and without the top K");
    std::size_t mass_n = 3;
    std::uint64_t top_k = 10'000, top_m = 1'000'000;
    bool renormalize = false;
    mass->add_option("--n", mass_n)->check(CLI::Range(1, 5));
    mass->add_option("--top-k", top_k);
    mass->add_option("--m", top_m);
    mass->add_flag("--renormalize", renormalize);
    mass->callback([&] {
        action = [&] {
            const auto store = open_store(cfg);
            const auto bm = blacklist_mass(store, mass_n, top_k, top_m, renormalize);
            out << json{{"n", mass_n},
                        {"top_k", top_k},
                        {"m", top_m},
                        {"mass_top_m", bm.top_m},
                        {"mass_top_m_after_removing_top_k", bm.top_m_after_removal}}
                       .dump()
                << '\n';
            return 0;
        };
    });

    // report
    auto* report = app.add_subcommand("report", "Batch analysis artifacts");
    report->require_subcommand(1);
    std::string report_in, estimator = "low", known_path;

    auto* rcurve = report->add_subcommand("curve", "Guessing curve CSV");
    rcurve->add_option("--in", report_in)->required();
    rcurve->add_option("--estimator", estimator)->check(CLI::IsMember({"low", "high", "unigram"}));
    rcurve->callback([&] { action = [&] { return cmd_report_curve(cfg, report_in, estimator, in, out); }; });

    auto* coverage = report->add_subcommand("coverage", "Slang and lexicon coverage per phrase");
    coverage->add_option("--in", report_in)->required();
    coverage->callback([&] { action = [&] { return cmd_report_coverage(cfg, report_in, in, out); }; });

    auto* tolerance = report->add_subcommand("tolerance", "Unfound words a tolerant matcher would rescue");
    tolerance->add_option("--in", report_in)->required();
    tolerance->callback([&] { action = [&] { return cmd_report_tolerance(cfg, report_in, in, out); }; });

    auto* phrasedict = report->add_subcommand("phrasedict", "Exact matches against a known-phrase list");
    phrasedict->add_option("--in", report_in)->required();
    phrasedict->add_option("--known", known_path)->required();
    phrasedict->callback([&] { action = [&] { return cmd_report_phrasedict(report_in, known_path, in, out); }; });

    // serve
    auto* serve = app.add_subcommand("serve", "Run the demo authentication service");
    int port = 8080;
    std::string host = "127.0.0.1", data_dir = "data", static_dir;
    bool expose_cue = false;
    serve->add_option("--port", port)->check(CLI::Range(0, 65535));
    serve->add_option("--host", host);
    serve->add_option("--data-dir", data_dir);
    serve->add_option("--static-dir", static_dir, "Directory served at /");
    serve->add_flag("--expose-cue", expose_cue, "Enable GET /api/accounts/{user}/cue");
    serve->callback([&] {
        action = [&] {
            const auto store = open_store(cfg);
            ServiceConfig sc;
            sc.data_dir = data_dir;
            sc.tolerance = tolerance_config(cfg);
            sc.policy = policy_config(cfg, store);
            sc.ranker = ranker_config(cfg);
            sc.expose_cue = expose_cue;
            AccountService service(store, sc);
            std::optional<std::filesystem::path> statics;
            if (!static_dir.empty()) statics = static_dir;
            if (!run_server(service, host, port, statics))
                throw Error(Errc::Io, "cannot listen on " + host + ":" + std::to_string(port));
            return 0;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    try {
        return action ? action() : 1;
    } catch (const Error& e) {
        print_error(err, e);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
}

}  // namespace passguess
