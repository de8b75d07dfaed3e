#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"

namespace tdgen {

// Blocking request/response text-generation client. Implementations must
// be usable from multiple workers with independent connections.
class TextService {
 public:
  virtual ~TextService() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

class MockTextService : public TextService {
 public:
  explicit MockTextService(std::function<std::string(const std::string&)> fn)
      : fn_(std::move(fn)) {}

  std::string complete(const std::string& prompt) override { return fn_(prompt); }

 private:
  std::function<std::string(const std::string&)> fn_;
};

// Records every (prompt, response) exchange of an inner service so a run
// can later be replayed deterministically.
class RecordingTextService : public TextService {
 public:
  explicit RecordingTextService(TextService& inner) : inner_(inner) {}

  std::string complete(const std::string& prompt) override {
    std::string response = inner_.complete(prompt);
    transcript_.emplace_back(prompt, response);
    return response;
  }

  const std::vector<std::pair<std::string, std::string>>& transcript() const {
    return transcript_;
  }

  nlohmann::json transcript_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [p, r] : transcript_) j.push_back({{"prompt", p}, {"response", r}});
    return j;
  }

 private:
  TextService& inner_;
  std::vector<std::pair<std::string, std::string>> transcript_;
};

class ReplayTextService : public TextService {
 public:
  explicit ReplayTextService(std::vector<std::pair<std::string, std::string>> transcript)
      : transcript_(std::move(transcript)) {}

  static ReplayTextService from_json(const nlohmann::json& j) {
    std::vector<std::pair<std::string, std::string>> t;
    for (const nlohmann::json& e : j)
      t.emplace_back(e.at("prompt").get<std::string>(), e.at("response").get<std::string>());
    return ReplayTextService(std::move(t));
  }

  std::string complete(const std::string& prompt) override {
    if (pos_ >= transcript_.size())
      fail(Errc::ServiceUnavailable, "replay transcript exhausted");
    if (transcript_[pos_].first != prompt)
      fail(Errc::ServiceUnavailable, "replay prompt mismatch at exchange " + std::to_string(pos_));
    return transcript_[pos_++].second;
  }

 private:
  std::vector<std::pair<std::string, std::string>> transcript_;
  std::size_t pos_ = 0;
};

}  // namespace tdgen
