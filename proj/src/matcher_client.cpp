#include <iostream>

#include "httplib.h"
#include "json.hpp"

#include "ivq/errors.hpp"
#include "ivq/eval.hpp"

namespace ivq {

namespace {

struct ParsedUrl {
    std::string base;
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ExternalServiceError("matcher URL needs a scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

MatchResult match_answer_external(const std::string& raw,
                                  const std::array<std::string, 4>& options,
                                  const MatcherConfig& config) {
    auto fallback = [&](const std::string& reason) {
        std::cerr << "warning: external matcher failed (" << reason
                  << "); falling back to rule-based matching\n";
        return match_answer(raw, options);
    };

    try {
        ParsedUrl parsed = split_url(config.url);
        httplib::Client client(parsed.base);
        client.set_connection_timeout(0, config.timeout_ms * 1000);
        client.set_read_timeout(0, config.timeout_ms * 1000);
        if (!config.api_key.empty()) client.set_bearer_token_auth(config.api_key);

        nlohmann::json body;
        body["question"] = config.question;
        nlohmann::json opts;
        for (int k = 0; k < 4; ++k) {
            opts[std::string(1, static_cast<char>('A' + k))] = options[static_cast<std::size_t>(k)];
        }
        body["options"] = std::move(opts);
        body["raw_output"] = raw;

        auto res = client.Post(parsed.path, body.dump(), "application/json");
        if (!res) return fallback("transport error: " + httplib::to_string(res.error()));
        if (res->status != 200) return fallback("status " + std::to_string(res->status));

        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("key") || !reply["key"].is_string()) {
            return fallback("malformed response body");
        }
        std::string key = reply["key"].get<std::string>();
        if (key == "none") return {std::nullopt, MatchMethod::unmatched};
        if (key.size() == 1 && key[0] >= 'A' && key[0] <= 'D') {
            return {key[0], MatchMethod::external};
        }
        return fallback("unexpected key value: " + key);
    } catch (const ExternalServiceError&) {
        throw;
    } catch (const std::exception& e) {
        return fallback(e.what());
    }
}

} // namespace ivq
