#pragma once

// HTTP translation provider. Separate header because it pulls in cpp-httplib.

#include <chrono>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/translate.hpp"

namespace qaforge::translate {

struct HttpProviderOptions {
  int max_attempts = 5;
  int initial_backoff_ms = 100;
  int timeout_sec = 60;
};

// POST <endpoint>/translate with {"units":[{"id","text","src_lang","tgt_lang"}]},
// expecting {"results":[{"id","text"}]}. Only status 200 is accepted; any
// other outcome retries with exponential backoff up to max_attempts, then
// surfaces ProviderUnavailable.
class HttpProvider final : public TranslationProvider {
public:
  explicit HttpProvider(std::string endpoint, std::string auth_token = {},
                        HttpProviderOptions opts = {})
      : endpoint_(std::move(endpoint)), auth_token_(std::move(auth_token)), opts_(opts) {}

  std::string name() const override { return "http:" + endpoint_; }

protected:
  std::vector<TranslationResult> do_translate(std::span<const TranslationUnit> units) override {
    nlohmann::ordered_json body;
    auto& jus = body["units"] = nlohmann::ordered_json::array();
    for (const TranslationUnit& u : units) {
      nlohmann::ordered_json ju;
      ju["id"] = u.id;
      ju["text"] = u.source_text;
      ju["src_lang"] = u.source_lang;
      ju["tgt_lang"] = u.target_lang;
      jus.push_back(std::move(ju));
    }
    const std::string payload = body.dump();

    std::string last_error = "no attempt made";
    int backoff_ms = opts_.initial_backoff_ms;
    for (int attempt = 0; attempt < opts_.max_attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        backoff_ms *= 2;
      }
      httplib::Client client(endpoint_);
      client.set_connection_timeout(opts_.timeout_sec, 0);
      client.set_read_timeout(opts_.timeout_sec, 0);
      httplib::Headers headers;
      if (!auth_token_.empty()) headers.emplace("Authorization", "Bearer " + auth_token_);
      auto res = client.Post("/translate", headers, payload, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "status " + std::to_string(res->status);
        continue;
      }
      nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (parsed.is_discarded() || !parsed.contains("results"))
        throw ParseError("http provider: malformed response body from " + endpoint_);
      std::vector<TranslationResult> out;
      for (const auto& jr : parsed.at("results"))
        out.push_back({jr.at("id").get<std::string>(), jr.at("text").get<std::string>()});
      return out;
    }
    throw ProviderUnavailable("http provider " + endpoint_ + " failed after " +
                              std::to_string(opts_.max_attempts) + " attempts (" + last_error +
                              ")");
  }

private:
  std::string endpoint_;
  std::string auth_token_;
  HttpProviderOptions opts_;
};

inline ProviderHandle http_provider(std::string endpoint, std::string auth_token = {},
                                    HttpProviderOptions opts = {}) {
  return std::make_shared<HttpProvider>(std::move(endpoint), std::move(auth_token), opts);
}

} // namespace qaforge::translate
