#include "passguess/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "passguess/error.hpp"
#include "passguess/matching.hpp"

namespace passguess {
namespace {

using TokenId = NgramStore::TokenId;

struct PackedKey {
    std::array<TokenId, kMaxOrder> ids{};
    bool operator==(const PackedKey&) const = default;
};

struct PackedKeyHash {
    std::size_t operator()(const PackedKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (TokenId id : k.ids) {
            h ^= id;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

void check_order(std::size_t n) {
    if (n < 1 || n > kMaxOrder)
        throw Error(Errc::BadArity, "n-gram length must be 1.." + std::to_string(kMaxOrder) + ", got " +
                                        std::to_string(n));
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::filesystem::path table_file(const std::filesystem::path& dir, std::size_t n) {
    return dir / (std::to_string(n) + "gram.tsv");
}

}  // namespace

// ---------------------------------------------------------------------------
// NgramKey / rank_table

NgramKey::NgramKey(std::vector<std::string> words) : words_(std::move(words)) {
    check_order(words_.size());
    for (const auto& w : words_)
        if (!is_normal_token(w)) throw Error(Errc::InvalidArgument, "token not normalized: '" + w + "'");
}

std::string NgramKey::joined() const {
    std::string out;
    for (const auto& w : words_) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

std::vector<RankedNgram> rank_table(const FrequencyMap& freqs) {
    if (freqs.empty()) throw Error(Errc::EmptyTable, "cannot rank an empty table");
    std::vector<RankedNgram> out;
    out.reserve(freqs.size());
    for (const auto& [key, freq] : freqs) out.push_back({key, freq, 0});
    // std::map iteration is already key-ordered, so a stable sort on
    // frequency leaves ties in key order.
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedNgram& a, const RankedNgram& b) { return a.frequency > b.frequency; });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].rank = (i > 0 && out[i].frequency == out[i - 1].frequency) ? out[i - 1].rank : i + 1;
    return out;
}

// ---------------------------------------------------------------------------
// Store internals

struct NgramStore::Impl {
    struct Table {
        std::size_t n = 0;
        std::vector<TokenId> words;  // n ids per row
        std::vector<std::uint64_t> freq;
        std::vector<std::uint64_t> rank;
        std::unordered_map<PackedKey, std::uint32_t, PackedKeyHash> exact;
        std::vector<std::unordered_map<TokenId, std::vector<std::uint32_t>>> by_slot;

        std::size_t size() const { return freq.size(); }
        std::span<const TokenId> row(std::uint32_t r) const { return {words.data() + r * n, n}; }

        void index() {
            by_slot.assign(n, {});
            exact.reserve(size());
            for (std::uint32_t r = 0; r < size(); ++r) {
                PackedKey key;
                const auto ids = row(r);
                std::copy(ids.begin(), ids.end(), key.ids.begin());
                exact.emplace(key, r);
                for (std::size_t s = 0; s < n; ++s) by_slot[s][ids[s]].push_back(r);
            }
        }
    };

    StoreOptions options;
    std::vector<std::string> vocab;  // sorted; index == TokenId
    std::array<Table, kMaxOrder> tables;
    std::set<std::string> proper_nouns;
    std::set<std::string> slang;
    std::uint64_t total_tokens = 0;

    const Table& table(std::size_t n) const {
        check_order(n);
        return tables[n - 1];
    }

    RankedNgram materialize(const Table& t, std::uint32_t r) const {
        std::vector<std::string> words;
        for (TokenId id : t.row(r)) words.push_back(vocab[id]);
        return {NgramKey(std::move(words)), t.freq[r], t.rank[r]};
    }
};

NgramStore::NgramStore() {
    auto impl = std::make_shared<Impl>();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) impl->tables[n - 1].n = n;
    impl_ = std::move(impl);
}

NgramStore::NgramStore(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const StoreOptions& NgramStore::options() const noexcept { return impl_->options; }

std::size_t NgramStore::table_size(std::size_t n) const { return impl_->table(n).size(); }

std::uint64_t NgramStore::max_rank(std::size_t n) const {
    const auto& t = impl_->table(n);
    return t.rank.empty() ? 0 : t.rank.back();
}

std::uint64_t NgramStore::lexicon_size() const noexcept {
    return impl_->options.lexicon_size_override.value_or(impl_->tables[0].size());
}

CorpusStats NgramStore::stats() const {
    CorpusStats s;
    for (std::size_t n = 1; n <= kMaxOrder; ++n) s.counts[n - 1] = table_size(n);
    s.total_tokens = impl_->total_tokens;
    return s;
}

std::optional<NgramStore::TokenId> NgramStore::token_id(std::string_view token) const {
    const auto& v = impl_->vocab;
    const auto it = std::lower_bound(v.begin(), v.end(), token,
                                     [](const std::string& a, std::string_view b) { return a < b; });
    if (it == v.end() || *it != token) return std::nullopt;
    return static_cast<TokenId>(it - v.begin());
}

const std::string& NgramStore::token_text(TokenId id) const { return impl_->vocab.at(id); }

std::vector<std::uint32_t> NgramStore::query(const IdPattern& pattern) const {
    const auto& t = impl_->table(pattern.size());
    std::vector<std::size_t> fixed;
    for (std::size_t s = 0; s < pattern.size(); ++s)
        if (pattern[s]) fixed.push_back(s);
    if (fixed.empty()) throw Error(Errc::InvalidArgument, "pattern needs at least one fixed word");

    if (fixed.size() == pattern.size()) {
        PackedKey key;
        for (std::size_t s = 0; s < pattern.size(); ++s) key.ids[s] = *pattern[s];
        const auto it = t.exact.find(key);
        if (it == t.exact.end()) return {};
        return {it->second};
    }

    const std::vector<std::uint32_t>* best = nullptr;
    for (std::size_t s : fixed) {
        const auto it = t.by_slot[s].find(*pattern[s]);
        if (it == t.by_slot[s].end()) return {};
        if (!best || it->second.size() < best->size()) best = &it->second;
    }
    std::vector<std::uint32_t> rows;
    for (std::uint32_t r : *best) {
        const auto ids = t.row(r);
        const bool ok = std::all_of(fixed.begin(), fixed.end(), [&](std::size_t s) { return ids[s] == *pattern[s]; });
        if (ok) rows.push_back(r);
    }
    return rows;
}

std::span<const NgramStore::TokenId> NgramStore::row_words(std::size_t n, std::uint32_t row) const {
    return impl_->table(n).row(row);
}

std::uint64_t NgramStore::row_rank(std::size_t n, std::uint32_t row) const { return impl_->table(n).rank.at(row); }

std::uint64_t NgramStore::row_frequency(std::size_t n, std::uint32_t row) const {
    return impl_->table(n).freq.at(row);
}

std::vector<RankedNgram> NgramStore::lookup(const NgramPattern& pattern) const {
    check_order(pattern.size());
    IdPattern ids;
    bool any_fixed = false;
    bool unknown = false;
    for (const auto& slot : pattern) {
        if (!slot) {
            ids.emplace_back(std::nullopt);
            continue;
        }
        any_fixed = true;
        const auto id = token_id(*slot);
        if (!id) unknown = true;
        ids.emplace_back(id.value_or(0));
    }
    if (!any_fixed) throw Error(Errc::InvalidArgument, "pattern needs at least one fixed word");
    if (unknown) return {};
    std::vector<RankedNgram> out;
    const auto& t = impl_->table(pattern.size());
    for (std::uint32_t r : query(ids)) out.push_back(impl_->materialize(t, r));
    return out;
}

std::optional<RankedNgram> NgramStore::find(const NgramKey& key) const {
    NgramPattern p(key.words().begin(), key.words().end());
    auto hits = lookup(p);
    if (hits.empty()) return std::nullopt;
    return std::move(hits.front());
}

bool NgramStore::is_blacklisted(const NgramKey& key) const {
    if (key.order() < 3 || key.order() > 5) throw Error(Errc::BadArity, "blacklist applies to 3..5-grams");
    const auto hit = find(key);
    return hit && hit->rank <= blacklist_k();
}

std::vector<RankedNgram> NgramStore::entries(std::size_t n) const {
    const auto& t = impl_->table(n);
    std::vector<RankedNgram> out;
    out.reserve(t.size());
    for (std::uint32_t r = 0; r < t.size(); ++r) out.push_back(impl_->materialize(t, r));
    return out;
}

std::vector<RankedNgram> NgramStore::surviving_entries(std::size_t n) const {
    const auto& t = impl_->table(n);
    std::vector<RankedNgram> out;
    for (std::uint32_t r = 0; r < t.size(); ++r)
        if (t.rank[r] > blacklist_k()) out.push_back(impl_->materialize(t, r));
    return out;
}

bool NgramStore::in_lexicon(std::string_view token) const {
    const auto id = token_id(token);
    if (!id) return false;
    return !query({*id}).empty();
}

bool NgramStore::is_proper_noun(std::string_view token) const {
    return impl_->proper_nouns.find(std::string(token)) != impl_->proper_nouns.end();
}

bool NgramStore::is_slang(std::string_view token) const {
    return impl_->slang.find(std::string(token)) != impl_->slang.end();
}

const std::set<std::string>& NgramStore::proper_nouns() const noexcept { return impl_->proper_nouns; }
const std::set<std::string>& NgramStore::slang_terms() const noexcept { return impl_->slang; }

// ---------------------------------------------------------------------------
// Builder

struct NgramStore::Builder::State {
    StoreOptions options;
    std::vector<std::string> vocab;
    std::unordered_map<std::string, TokenId> vocab_index;
    std::array<std::unordered_map<PackedKey, std::uint64_t, PackedKeyHash>, kMaxOrder> counts;
    std::set<std::string> proper_nouns;
    std::set<std::string> slang;
    std::uint64_t total_tokens = 0;

    TokenId intern(const std::string& token) {
        const auto [it, inserted] = vocab_index.try_emplace(token, static_cast<TokenId>(vocab.size()));
        if (inserted) vocab.push_back(token);
        return it->second;
    }

    void add_unchecked(std::span<const std::string> words, std::uint64_t frequency) {
        PackedKey key;
        for (std::size_t i = 0; i < words.size(); ++i) key.ids[i] = intern(words[i]);
        counts[words.size() - 1][key] += frequency;
    }
};

NgramStore::Builder::Builder(StoreOptions options) : state_(std::make_unique<State>()) {
    state_->options = std::move(options);
}
NgramStore::Builder::~Builder() = default;
NgramStore::Builder::Builder(Builder&&) noexcept = default;
NgramStore::Builder& NgramStore::Builder::operator=(Builder&&) noexcept = default;

NgramStore::Builder& NgramStore::Builder::add(std::span<const std::string> words, std::uint64_t frequency) {
    check_order(words.size());
    for (const auto& w : words)
        if (!is_normal_token(w)) throw Error(Errc::InvalidArgument, "token not normalized: '" + w + "'");
    if (frequency == 0) throw Error(Errc::InvalidArgument, "frequency must be positive");
    state_->add_unchecked(words, frequency);
    return *this;
}

NgramStore::Builder& NgramStore::Builder::add(const NgramKey& key, std::uint64_t frequency) {
    if (frequency == 0) throw Error(Errc::InvalidArgument, "frequency must be positive");
    state_->add_unchecked(key.words(), frequency);
    return *this;
}

NgramStore::Builder& NgramStore::Builder::add_counts(const CorpusCounts& counts) {
    for (const auto& table : counts.tables)
        for (const auto& [key, freq] : table) add(key, freq);
    state_->total_tokens += counts.total_tokens;
    return *this;
}

NgramStore::Builder& NgramStore::Builder::add_proper_noun(std::string token) {
    if (!is_normal_token(token)) throw Error(Errc::InvalidArgument, "token not normalized: '" + token + "'");
    state_->proper_nouns.insert(std::move(token));
    return *this;
}

NgramStore::Builder& NgramStore::Builder::add_slang(std::string token) {
    if (!is_normal_token(token)) throw Error(Errc::InvalidArgument, "token not normalized: '" + token + "'");
    state_->slang.insert(std::move(token));
    return *this;
}

NgramStore::Builder& NgramStore::Builder::set_total_tokens(std::uint64_t total) {
    state_->total_tokens = total;
    return *this;
}

NgramStore::Builder& NgramStore::Builder::set_options(StoreOptions options) {
    state_->options = std::move(options);
    return *this;
}

CorpusCounts NgramStore::Builder::counts() const {
    CorpusCounts out;
    out.total_tokens = state_->total_tokens;
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
        for (const auto& [key, freq] : state_->counts[n - 1]) {
            std::vector<std::string> words;
            for (std::size_t i = 0; i < n; ++i) words.push_back(state_->vocab[key.ids[i]]);
            out.tables[n - 1].emplace(NgramKey(std::move(words)), freq);
        }
    }
    return out;
}

NgramStore NgramStore::Builder::build() && {
    auto impl = std::make_shared<Impl>();
    auto& st = *state_;
    impl->options = st.options;
    impl->proper_nouns = std::move(st.proper_nouns);
    impl->slang = std::move(st.slang);
    impl->total_tokens = st.total_tokens;

    // Renumber tokens so id order matches string order; packed keys then
    // compare lexicographically like their word sequences.
    std::vector<TokenId> order(st.vocab.size());
    std::iota(order.begin(), order.end(), TokenId{0});
    std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) { return st.vocab[a] < st.vocab[b]; });
    std::vector<TokenId> remap(st.vocab.size());
    impl->vocab.reserve(st.vocab.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = static_cast<TokenId>(i);
        impl->vocab.push_back(std::move(st.vocab[order[i]]));
    }

    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
        std::vector<std::pair<PackedKey, std::uint64_t>> rows;
        rows.reserve(st.counts[n - 1].size());
        for (const auto& [key, freq] : st.counts[n - 1]) {
            PackedKey k;
            for (std::size_t i = 0; i < n; ++i) k.ids[i] = remap[key.ids[i]];
            rows.emplace_back(k, freq);
        }
        st.counts[n - 1].clear();
        std::sort(rows.begin(), rows.end(), [n](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return std::lexicographical_compare(a.first.ids.begin(), a.first.ids.begin() + n, b.first.ids.begin(),
                                                b.first.ids.begin() + n);
        });
        if (const auto cap = st.options.caps[n - 1]; cap && rows.size() > *cap) rows.resize(*cap);

        auto& t = impl->tables[n - 1];
        t.n = n;
        t.words.reserve(rows.size() * n);
        t.freq.reserve(rows.size());
        t.rank.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            t.words.insert(t.words.end(), rows[i].first.ids.begin(), rows[i].first.ids.begin() + n);
            t.freq.push_back(rows[i].second);
            t.rank.push_back(i > 0 && rows[i].second == rows[i - 1].second ? t.rank.back() : i + 1);
        }
        t.index();
    }
    state_ = std::make_unique<State>();
    return NgramStore(std::move(impl));
}

// ---------------------------------------------------------------------------
// Extraction

NgramCounter::NgramCounter(ExtractOptions options) : options_(options) { check_order(options_.max_order); }

void NgramCounter::push_token(std::string token) {
    window_.push_back(std::move(token));
    if (window_.size() > options_.max_order) window_.erase(window_.begin());
    ++total_tokens_;
    const std::span<const std::string> w(window_);
    for (std::size_t n = 1; n <= window_.size(); ++n) builder_.state_->add_unchecked(w.last(n), 1);
}

void NgramCounter::feed(std::string_view text) {
    if (!options_.sentence_boundaries) {
        for (auto& t : normalize_tokens(text)) push_token(std::move(t));
        return;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find_first_of(".!?", start);
        const auto segment = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        for (auto& t : normalize_tokens(segment)) push_token(std::move(t));
        if (end == std::string_view::npos) break;
        window_.clear();
        start = end + 1;
    }
}

CorpusCounts NgramCounter::counts() const {
    auto out = builder_.counts();
    out.total_tokens = total_tokens_;
    return out;
}

NgramStore::Builder NgramCounter::into_builder(StoreOptions options) && {
    if (total_tokens_ == 0) throw Error(Errc::EmptyCorpus, "corpus has no tokens after normalization");
    builder_.set_options(std::move(options));
    builder_.set_total_tokens(total_tokens_);
    return std::move(builder_);
}

CorpusCounts extract_ngrams(std::string_view text, const ExtractOptions& options) {
    NgramCounter counter(options);
    counter.feed(text);
    if (counter.total_tokens() == 0) throw Error(Errc::EmptyCorpus, "corpus has no tokens after normalization");
    return counter.counts();
}

// ---------------------------------------------------------------------------
// Persistence

void read_table(std::istream& in, std::size_t n, NgramStore::Builder& builder, const std::string& source) {
    check_order(n);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> words;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fail = [&](const std::string& why) {
            throw Error(Errc::ParseError, source + ":" + std::to_string(lineno) + ": " + why, lineno);
        };
        const auto fields = split_tabs(line);
        if (fields.size() != n + 1)
            fail("expected " + std::to_string(n + 1) + " fields, got " + std::to_string(fields.size()));
        std::uint64_t freq = 0;
        const auto f = fields[0];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), freq);
        if (ec != std::errc{} || ptr != f.data() + f.size() || freq == 0) fail("bad frequency '" + std::string(f) + "'");
        words.clear();
        for (std::size_t i = 1; i <= n; ++i) {
            auto toks = normalize_tokens(fields[i]);
            if (toks.size() != 1) fail("field " + std::to_string(i + 1) + " is not a single word");
            words.push_back(std::move(toks.front()));
        }
        builder.add(words, freq);
    }
}

std::set<std::string> read_lexicon(std::istream& in, const std::string& source) {
    std::set<std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = normalize_tokens(line);
        if (toks.empty()) continue;
        if (toks.size() != 1)
            throw Error(Errc::ParseError, source + ":" + std::to_string(lineno) + ": expected one token per line",
                        lineno);
        out.insert(std::move(toks.front()));
    }
    return out;
}

NgramStore load_store(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(Errc::StoreMissing, "store directory not found: " + dir.string());

    bool any = false;
    StoreOptions options;
    std::uint64_t total_tokens = 0;
    if (const auto meta_path = dir / "meta.json"; fs::exists(meta_path)) {
        any = true;
        std::ifstream in(meta_path);
        nlohmann::json meta;
        try {
            meta = nlohmann::json::parse(in);
            options.blacklist_k = meta.value("blacklist_k", options.blacklist_k);
            if (meta.contains("caps"))
                for (const auto& [k, v] : meta["caps"].items()) {
                    const auto n = std::stoul(k);
                    check_order(n);
                    if (!v.is_null()) options.caps[n - 1] = v.get<std::uint64_t>();
                }
            if (meta.contains("lexicon_size_override") && !meta["lexicon_size_override"].is_null())
                options.lexicon_size_override = meta["lexicon_size_override"].get<std::uint64_t>();
            total_tokens = meta.value("total_tokens", std::uint64_t{0});
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, meta_path.string() + ": " + e.what());
        } catch (const std::logic_error& e) {
            throw Error(Errc::ParseError, meta_path.string() + ": bad caps key");
        }
    }

    NgramStore::Builder builder(options);
    builder.set_total_tokens(total_tokens);
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
        const auto path = table_file(dir, n);
        if (!fs::exists(path)) continue;
        any = true;
        std::ifstream in(path);
        if (!in) throw Error(Errc::Io, "cannot open " + path.string());
        read_table(in, n, builder, path.string());
    }
    for (const auto& [name, proper] : {std::pair{"proper_nouns.txt", true}, std::pair{"slang.txt", false}}) {
        const auto path = dir / name;
        if (!fs::exists(path)) continue;
        any = true;
        std::ifstream in(path);
        for (auto token : read_lexicon(in, path.string())) {
            if (proper)
                builder.add_proper_noun(std::move(token));
            else
                builder.add_slang(std::move(token));
        }
    }
    if (!any) throw Error(Errc::StoreMissing, "no store files in " + dir.string());
    return std::move(builder).build();
}

void save_store(const NgramStore& store, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());

    const auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::Io, "cannot write " + p.string());
        return out;
    };

    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
        auto out = open(table_file(dir, n));
        for (std::uint32_t r = 0; r < store.table_size(n); ++r) {
            out << store.row_frequency(n, r);
            for (auto id : store.row_words(n, r)) out << '\t' << store.token_text(id);
            out << '\n';
        }
    }
    {
        auto out = open(dir / "proper_nouns.txt");
        for (const auto& t : store.proper_nouns()) out << t << '\n';
    }
    {
        auto out = open(dir / "slang.txt");
        for (const auto& t : store.slang_terms()) out << t << '\n';
    }

    const auto& opts = store.options();
    nlohmann::json meta;
    meta["format"] = "passguess-store/1";
    meta["blacklist_k"] = opts.blacklist_k;
    meta["caps"] = nlohmann::json::object();
    for (std::size_t n = 1; n <= kMaxOrder; ++n)
        if (opts.caps[n - 1]) meta["caps"][std::to_string(n)] = *opts.caps[n - 1];
    meta["counts"] = nlohmann::json::object();
    const auto stats = store.stats();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) meta["counts"][std::to_string(n)] = stats.counts[n - 1];
    meta["total_tokens"] = stats.total_tokens;
    meta["lexicon_size_override"] =
        opts.lexicon_size_override ? nlohmann::json(*opts.lexicon_size_override) : nlohmann::json(nullptr);
    auto out = open(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

}  // namespace passguess
