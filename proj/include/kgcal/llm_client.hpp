#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcal/prompts.hpp"

namespace kgcal {

struct CompletionParams {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_output_tokens = 64;
};

struct CompletionResult {
  std::string text;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  bool cached = false;
};

class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResult complete(const Conversation& conversation,
                                    const CompletionParams& params) = 0;
};

/// Chat-completions over HTTP(S): POST {model, messages, temperature,
/// max_tokens}, reads choices[0].message.content and usage.
class HttpBackend final : public Backend {
 public:
  struct Options {
    std::string endpoint_url;  // full URL, e.g. https://host/v1/chat/completions
    std::string api_key;       // sent as a bearer token when non-empty
    int retries = 3;
    std::chrono::milliseconds backoff{500};
    std::chrono::seconds timeout{60};
  };

  explicit HttpBackend(Options options);
  CompletionResult complete(const Conversation& conversation,
                            const CompletionParams& params) override;

 private:
  Options options_;
  std::string origin_;
  std::string path_;
};

/// Parses a chat-completions response body. Throws LlmError("bad completion
/// payload") when the body is empty or lacks choices[0].message.content.
CompletionResult parse_completion_payload(const std::string& body);

/// Scripted replies. Rules are tried in order; a rule matches when its tag
/// (T0, T1, T2 or PANEL) matches the last user turn and, if set, its substring
/// occurs in that turn.
class MockBackend final : public Backend {
 public:
  struct Rule {
    std::string tag;       // empty = any
    std::string contains;  // empty = any
    std::string reply;
  };
  using Responder = std::function<std::optional<std::string>(const Conversation&)>;

  MockBackend() = default;
  MockBackend(std::vector<Rule> rules, bool strict, std::string default_reply = "{unknown}");
  /// Replies computed from the conversation; nullopt falls through to rules.
  explicit MockBackend(Responder responder, bool strict = true);

  /// JSON: {"strict": bool, "default": str, "rules": [{"tag","contains","reply"}]}.
  static MockBackend from_json_text(const std::string& text);
  static MockBackend from_file(const std::filesystem::path& path);

  void add_rule(Rule rule) { rules_.push_back(std::move(rule)); }

  CompletionResult complete(const Conversation& conversation,
                            const CompletionParams& params) override;

  /// Tag for the conversation's last user turn: T0/T1/T2/PANEL or "".
  static std::string tag_of(const Conversation& conversation);

 private:
  std::vector<Rule> rules_;
  Responder responder_;
  bool strict_ = false;
  std::string default_reply_ = "{unknown}";
};

/// Whitespace-delimited word count; the token estimate used by the mock.
long approx_tokens(std::string_view text);

/// SHA-256 (hex) over the canonical JSON of model, temperature,
/// max_output_tokens and every turn's role and content.
std::string cache_key(const Conversation& conversation, const CompletionParams& params);

/// Backend wrapper with a one-file-per-key disk cache and a bound on
/// concurrent backend calls. Shareable across threads.
class LlmClient {
 public:
  struct Options {
    std::optional<std::filesystem::path> cache_dir;
    int max_in_flight = 4;
  };

  LlmClient(std::shared_ptr<Backend> backend, Options options);

  /// Throws LlmError when the conversation is invalid or the backend fails.
  CompletionResult complete(const Conversation& conversation, const CompletionParams& params);

  long backend_calls() const { return backend_calls_.load(); }
  long cache_hits() const { return cache_hits_.load(); }

 private:
  std::optional<CompletionResult> read_cache(const std::string& key) const;
  void write_cache(const std::string& key, const Conversation& conversation,
                   const CompletionParams& params, const CompletionResult& result) const;

  std::shared_ptr<Backend> backend_;
  Options options_;
  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;
  std::atomic<long> backend_calls_{0};
  std::atomic<long> cache_hits_{0};
};

}  // namespace kgcal
