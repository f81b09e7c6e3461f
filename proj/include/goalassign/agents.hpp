#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "goalassign/observation.hpp"

namespace goalassign {

struct Decision {
  Ranking ranking;
  int retries = 0;
  bool fallback = false;
};

// Anything that can turn an Observation into a complete goal ranking.
class DecisionMaker {
 public:
  virtual ~DecisionMaker() = default;

  virtual Decision decide(const Observation& observation) = 0;
  virtual bool deterministic() const = 0;
  virtual std::string name() const = 0;
};

Ranking distance_ranker(const Observation& observation);
Ranking team_oracle(const Observation& observation);

class DistanceRanker final : public DecisionMaker {
 public:
  Decision decide(const Observation& observation) override { return {distance_ranker(observation)}; }
  bool deterministic() const override { return true; }
  std::string name() const override { return "distance"; }
};

class TeamOracle final : public DecisionMaker {
 public:
  Decision decide(const Observation& observation) override { return {team_oracle(observation)}; }
  bool deterministic() const override { return true; }
  std::string name() const override { return "oracle"; }
};

// Replays a fixed list of goal orders, one per call; the last is repeated.
class ScriptedAgent final : public DecisionMaker {
 public:
  explicit ScriptedAgent(std::vector<std::vector<GoalIndex>> script) : script_(std::move(script)) {}

  Decision decide(const Observation& observation) override;
  bool deterministic() const override { return true; }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<std::vector<GoalIndex>> script_;
  std::size_t next_ = 0;
};

// ---------------------------------------------------------------------------
// Language-model agents

// "B > A > C"
std::string format_ranking(const std::vector<GoalIndex>& order);
// Reads the last "RANKING:" line. Throws MalformedResponse.
Ranking parse_ranking(std::string_view response, AgentIndex agent, int k);

struct LLMConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4.1";
  double temperature = 0.0;
  int retries = 2;
  double timeout_seconds = 60.0;
  bool include_distances = true;
  bool include_image = false;
  std::string credential_env = "OPENAI_API_KEY";
  double requests_per_minute = 0.0;  // 0 disables rate limiting

  void check() const;
};

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  std::vector<std::uint8_t> image_png;  // empty unless include_image

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

// The five team-level reasoning steps, in order.
const std::vector<std::string>& reasoning_checklist();

PromptBundle build_prompt(const Observation& observation, const LLMConfig& config);

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string text;
  std::vector<std::uint8_t> image_png;
};

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::vector<ChatMessage> messages;

  // Chat-completions request body; stable bytes for identical requests.
  std::string to_json() const;
  // Hex SHA-256 of to_json().
  std::string hash() const;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Returns the assistant text. Throws TransportFailure.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-compatible chat-completions endpoint over HTTP(S).
class HttpChatTransport final : public ChatTransport {
 public:
  // Throws CredentialMissing when the configured variable is unset.
  explicit HttpChatTransport(const LLMConfig& config);

  std::string complete(const ChatRequest& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  std::chrono::duration<double> timeout_;
};

// Offline replay: request hash -> canned assistant text.
class FixtureTransport final : public ChatTransport {
 public:
  FixtureTransport() = default;
  explicit FixtureTransport(std::map<std::string, std::string> responses) : responses_(std::move(responses)) {}
  static FixtureTransport load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  void add(const ChatRequest& request, std::string response) { responses_[request.hash()] = std::move(response); }
  std::string complete(const ChatRequest& request) override;
  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

// Returns canned responses in call order, then repeats the last one.
class ScriptedTransport final : public ChatTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> responses) : responses_(std::move(responses)) {}

  std::string complete(const ChatRequest& request) override;
  int calls() const { return calls_; }
  const std::vector<ChatRequest>& requests() const { return requests_; }

 private:
  std::vector<std::string> responses_;
  std::vector<ChatRequest> requests_;
  int calls_ = 0;
};

// Forwards to another transport and remembers every exchange so it can be
// written out as a fixture.
class RecordingTransport final : public ChatTransport {
 public:
  explicit RecordingTransport(ChatTransport& inner) : inner_(inner) {}

  std::string complete(const ChatRequest& request) override;
  const FixtureTransport& fixture() const { return recorded_; }

 private:
  ChatTransport& inner_;
  FixtureTransport recorded_;
  std::mutex mutex_;
};

// Minimum spacing between requests shared by every agent using one endpoint.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void acquire();

 private:
  std::chrono::duration<double> interval_;
  std::chrono::steady_clock::time_point next_;
  std::mutex mutex_;
};

struct Exchange {
  std::string request_json;
  std::string response_text;
};

class LlmAgent final : public DecisionMaker {
 public:
  LlmAgent(LLMConfig config, std::shared_ptr<ChatTransport> transport, std::shared_ptr<RateLimiter> limiter = nullptr);

  // build_prompt -> request -> parse_ranking, retrying malformed answers with
  // the parse error appended; falls back to distance_ranker on exhaustion.
  Decision decide(const Observation& observation) override;
  bool deterministic() const override { return false; }
  std::string name() const override { return "llm"; }

  const std::vector<Exchange>& transcript() const { return transcript_; }

 private:
  std::string send(const ChatRequest& request);

  LLMConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  std::vector<Exchange> transcript_;
};

}  // namespace goalassign
