#pragma once

// HTTP client for a chat-completion-style text service. Kept out of
// textgen.hpp so that unit tests do not pay for the httplib include.

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/textgen.hpp"

namespace tdgen {

inline constexpr const char* kApiKeyEnvVar = "TD_TEXTGEN_API_KEY";

// POSTs {"prompt": ...} and expects {"text": ...}. Credentials come from
// TD_TEXTGEN_API_KEY (sent as a bearer token when set).
class HttpTextService : public TextService {
 public:
  // endpoint: e.g. "http://localhost:8080/v1/complete"
  explicit HttpTextService(const std::string& endpoint) {
    std::size_t scheme = endpoint.find("://");
    std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    std::size_t path_start = endpoint.find('/', host_start);
    if (path_start == std::string::npos) {
      base_ = endpoint;
      path_ = "/";
    } else {
      base_ = endpoint.substr(0, path_start);
      path_ = endpoint.substr(path_start);
    }
  }

  std::string complete(const std::string& prompt) override {
    httplib::Client client(base_);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar))
      headers.emplace("Authorization", std::string("Bearer ") + key);
    nlohmann::json body{{"prompt", prompt}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res || res->status != 200)
      fail(Errc::ServiceUnavailable,
           base_ + path_ + (res ? " returned status " + std::to_string(res->status)
                                : " is unreachable"));
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ServiceUnavailable, std::string("bad response body: ") + e.what());
    }
    if (!j.contains("text")) fail(Errc::ServiceUnavailable, "response missing \"text\" field");
    return j["text"].get<std::string>();
  }

 private:
  std::string base_;
  std::string path_;
};

}  // namespace tdgen
