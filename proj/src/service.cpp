#include "passguess/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <limits>

#include "passguess/error.hpp"
#include "passguess/serialize.hpp"

namespace passguess {
namespace {

using nlohmann::json;

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::system_clock::to_time_t(now);
    const auto millis =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(millis));
    return out;
}

ServiceResponse error_response(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::optional<json> parse_object(std::string_view body) {
    auto parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    return parsed;
}

std::optional<std::string> string_field(const json& obj, const char* name) {
    const auto it = obj.find(name);
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

NormalizedPhrase normalize_lenient(std::string_view raw) { return NormalizedPhrase::from_tokens(normalize_tokens(raw)); }

}  // namespace

AccountService::AccountService(NgramStore store, ServiceConfig cfg) : store_(std::move(store)), cfg_(std::move(cfg)) {
    cfg_.tolerance.validate();
    cfg_.policy.validate();
    cfg_.ranker.validate();
    replay();
}

std::filesystem::path AccountService::log_path(const std::filesystem::path& data_dir) {
    return data_dir / "accounts.jsonl";
}

void AccountService::replay() {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg_.data_dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + cfg_.data_dir.string() + ": " + ec.message());
    const auto path = log_path(cfg_.data_dir);
    if (!fs::exists(path)) {
        append({{"event", "header"}, {"warning", kLogWarning}, {"format", "passguess-accounts/1"}});
        return;
    }

    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fail = [&](const std::string& why) {
            throw Error(Errc::ParseError, path.string() + ":" + std::to_string(lineno) + ": " + why, lineno);
        };
        const auto ev = json::parse(line, nullptr, false);
        if (ev.is_discarded() || !ev.is_object()) fail("not a JSON object");
        try {
            const auto kind = ev.at("event").get<std::string>();
            if (kind == "create") {
                AccountRecord rec;
                rec.username = ev.at("username").get<std::string>();
                rec.raw_passphrase = ev.at("rawPassphrase").get<std::string>();
                rec.normalized = normalize_lenient(rec.raw_passphrase);
                rec.cue = ev.at("cue").get<std::string>();
                rec.created_at = ev.at("createdAt").get<std::string>();
                rec.reset_count = ev.value("resetCount", 0u);
                accounts_[rec.username] = std::move(rec);
            } else if (kind == "login") {
                LoginAttempt a;
                a.username = ev.at("username").get<std::string>();
                a.attempt_text = ev.at("attempt").get<std::string>();
                a.accepted = ev.at("accepted").get<bool>();
                a.edit_distance = ev.at("editDistance").get<std::size_t>();
                a.relative = ev.at("relative").get<double>();
                a.timestamp = ev.at("timestamp").get<std::string>();
                attempts_.push_back(std::move(a));
            } else if (kind != "header") {
                fail("unknown event '" + kind + "'");
            }
        } catch (const json::exception& e) {
            fail(e.what());
        }
    }
}

void AccountService::append(const json& event) {
    const auto path = log_path(cfg_.data_dir);
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot append to " + path.string());
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

ServiceResponse AccountService::check(std::string_view body) const {
    const auto req = parse_object(body);
    if (!req) return error_response(400, "body must be a JSON object");
    const auto passphrase = string_field(*req, "passphrase");
    if (!passphrase) return error_response(400, "missing string field 'passphrase'");

    const auto report = check_policy(*passphrase, store_, cfg_.policy);
    json quick = nullptr;
    if (const auto tokens = normalize_tokens(*passphrase); !tokens.empty()) {
        RankerConfig product_only = cfg_.ranker;
        product_only.min_words = std::numeric_limits<std::size_t>::max();
        const auto est = unigram_permutation_estimate(NormalizedPhrase::from_tokens(tokens), store_, product_only);
        if (const auto bits = est.bits(Estimator::Unigram)) quick = *bits;
    }
    return {200, {{"report", to_json(report)}, {"quickStrengthBits", quick}}};
}

ServiceResponse AccountService::create_account(std::string_view body) {
    const auto req = parse_object(body);
    if (!req) return error_response(400, "body must be a JSON object");
    const auto username = string_field(*req, "username");
    const auto passphrase = string_field(*req, "passphrase");
    const auto cue = string_field(*req, "cue");
    if (!username || username->empty() || !passphrase || !cue)
        return error_response(400, "fields 'username', 'passphrase' and 'cue' are required strings");
    const bool overwrite = req->value("overwrite", false);

    const auto report = check_policy(*passphrase, store_, cfg_.policy);

    std::unique_lock lock(mutex_);
    const auto existing = accounts_.find(*username);
    if (existing != accounts_.end() && !overwrite) return error_response(409, "username already exists");
    if (!report.acceptable()) return {422, {{"report", to_json(report)}}};

    AccountRecord rec;
    rec.username = *username;
    rec.raw_passphrase = *passphrase;
    rec.normalized = normalize(*passphrase);
    rec.cue = *cue;
    rec.created_at = utc_now();
    rec.reset_count = existing != accounts_.end() ? existing->second.reset_count + 1 : 0;
    append({{"event", "create"},
            {"username", rec.username},
            {"rawPassphrase", rec.raw_passphrase},
            {"cue", rec.cue},
            {"createdAt", rec.created_at},
            {"resetCount", rec.reset_count}});
    const auto reset_count = rec.reset_count;
    accounts_[rec.username] = std::move(rec);
    return {201, {{"username", *username}, {"resetCount", reset_count}}};
}

ServiceResponse AccountService::login(std::string_view body) {
    const auto req = parse_object(body);
    if (!req) return error_response(400, "body must be a JSON object");
    const auto username = string_field(*req, "username");
    const auto passphrase = string_field(*req, "passphrase");
    if (!username || !passphrase) return error_response(400, "fields 'username' and 'passphrase' are required");

    std::unique_lock lock(mutex_);
    const auto it = accounts_.find(*username);
    if (it == accounts_.end()) return error_response(404, "unknown account");

    const auto result = within_tolerance(it->second.normalized, normalize_lenient(*passphrase), cfg_.tolerance);
    LoginAttempt attempt{*username, *passphrase, result.accepted, result.distance, result.relative, utc_now()};
    append({{"event", "login"},
            {"username", attempt.username},
            {"attempt", attempt.attempt_text},
            {"accepted", attempt.accepted},
            {"editDistance", attempt.edit_distance},
            {"relative", attempt.relative},
            {"timestamp", attempt.timestamp}});
    attempts_.push_back(std::move(attempt));

    std::size_t consecutive_failures = 0;
    for (auto a = attempts_.rbegin(); a != attempts_.rend(); ++a) {
        if (a->username != *username) continue;
        if (a->accepted) break;
        ++consecutive_failures;
    }
    return {200,
            {{"accepted", result.accepted},
             {"editDistance", result.distance},
             {"relative", result.relative},
             {"consecutiveFailures", consecutive_failures}}};
}

ServiceResponse AccountService::strength(const std::string& username) const {
    std::optional<NormalizedPhrase> phrase;
    {
        std::shared_lock lock(mutex_);
        const auto it = accounts_.find(username);
        if (it == accounts_.end()) return error_response(404, "unknown account");
        phrase = it->second.normalized;
    }
    auto body = to_json(estimate_passphrase(*phrase, store_, cfg_.ranker));
    body["username"] = username;
    return {200, body};
}

ServiceResponse AccountService::cue(const std::string& username) const {
    if (!cfg_.expose_cue) return error_response(404, "cue endpoint disabled");
    std::shared_lock lock(mutex_);
    const auto it = accounts_.find(username);
    if (it == accounts_.end()) return error_response(404, "unknown account");
    return {200, {{"username", username}, {"cue", it->second.cue}}};
}

ServiceResponse AccountService::health() const {
    std::shared_lock lock(mutex_);
    return {200, {{"status", "ok"}, {"storeCounts", to_json(store_.stats())["counts"]}, {"accounts", accounts_.size()}}};
}

std::optional<AccountRecord> AccountService::account(const std::string& username) const {
    std::shared_lock lock(mutex_);
    const auto it = accounts_.find(username);
    if (it == accounts_.end()) return std::nullopt;
    return it->second;
}

std::vector<LoginAttempt> AccountService::attempts() const {
    std::shared_lock lock(mutex_);
    return attempts_;
}

}  // namespace passguess
