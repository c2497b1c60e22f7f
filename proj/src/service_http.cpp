#include <httplib.h>

#include <iostream>

#include "passguess/service.hpp"

namespace passguess {
namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

}  // namespace

void mount_routes(httplib::Server& server, AccountService& service,
                  const std::optional<std::filesystem::path>& static_dir) {
    server.Post("/api/check", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.check(req.body));
    });
    server.Post("/api/accounts", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.create_account(req.body));
    });
    server.Post("/api/login", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.login(req.body));
    });
    server.Get(R"(/api/accounts/([^/]+)/strength)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.strength(req.matches[1]));
    });
    server.Get(R"(/api/accounts/([^/]+)/cue)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.cue(req.matches[1]));
    });
    server.Get("/api/health", [&](const httplib::Request&, httplib::Response& res) { reply(res, service.health()); });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        reply(res, {500, {{"error", what}}});
    });

    if (static_dir) server.set_mount_point("/", static_dir->string());
}

bool run_server(AccountService& service, const std::string& host, int port,
                const std::optional<std::filesystem::path>& static_dir) {
    httplib::Server server;
    mount_routes(server, service, static_dir);
    std::cerr << "passguess service listening on " << host << ":" << port << '\n';
    return server.listen(host, port);
}

}  // namespace passguess
