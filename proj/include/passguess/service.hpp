#pragma once

// Demo authentication service: passphrase creation under the policy,
// error-tolerant login and strength estimates. Accounts live in an
// append-only JSON-lines log that is replayed on startup.
//
// Passphrases are stored in plaintext because tolerant verification needs
// the reference string. Research use only.

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "passguess/corpus.hpp"
#include "passguess/matching.hpp"
#include "passguess/policy.hpp"
#include "passguess/ranker.hpp"

namespace httplib {
class Server;
}

namespace passguess {

struct ServiceConfig {
    std::filesystem::path data_dir = "data";
    ToleranceConfig tolerance;
    PolicyConfig policy;
    RankerConfig ranker;
    /// Enables GET /api/accounts/{user}/cue.
    bool expose_cue = false;
};

struct AccountRecord {
    std::string username;
    std::string raw_passphrase;
    NormalizedPhrase normalized;
    std::string cue;
    std::string created_at;
    std::uint32_t reset_count = 0;
};

struct LoginAttempt {
    std::string username;
    std::string attempt_text;
    bool accepted = false;
    std::size_t edit_distance = 0;
    double relative = 0.0;
    std::string timestamp;
};

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

class AccountService {
public:
    /// Replays the account log in `cfg.data_dir`, creating it if absent.
    /// Throws Errc::ParseError on a corrupt log line.
    AccountService(NgramStore store, ServiceConfig cfg);

    ServiceResponse check(std::string_view body) const;
    ServiceResponse create_account(std::string_view body);
    ServiceResponse login(std::string_view body);
    ServiceResponse strength(const std::string& username) const;
    ServiceResponse cue(const std::string& username) const;
    ServiceResponse health() const;

    std::optional<AccountRecord> account(const std::string& username) const;
    std::vector<LoginAttempt> attempts() const;
    const ServiceConfig& config() const noexcept { return cfg_; }

    static std::filesystem::path log_path(const std::filesystem::path& data_dir);
    static constexpr std::string_view kLogWarning =
        "RESEARCH USE ONLY: this file stores passphrases in plaintext. Do not use for real accounts.";

private:
    void replay();
    void append(const nlohmann::json& event);

    NgramStore store_;
    ServiceConfig cfg_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, AccountRecord> accounts_;
    std::vector<LoginAttempt> attempts_;
};

/// Registers the /api routes; serves `static_dir` at / when given.
void mount_routes(httplib::Server& server, AccountService& service,
                  const std::optional<std::filesystem::path>& static_dir = std::nullopt);

/// Blocks serving on host:port. Returns false if the socket cannot be bound.
bool run_server(AccountService& service, const std::string& host, int port,
                const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace passguess
