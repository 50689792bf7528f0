#include "kgcal/llm_client.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "httplib.h"
#include "json.hpp"
#include "sha256.hpp"

namespace kgcal {
namespace {

using nlohmann::json;

json canonical_request(const Conversation& conversation, const CompletionParams& params) {
  json turns = json::array();
  for (const auto& t : conversation.turns) turns.push_back({role_name(t.role), t.content});
  return {{"model", params.model},
          {"temperature", params.temperature},
          {"max_output_tokens", params.max_output_tokens},
          {"turns", std::move(turns)}};
}

std::string dump(const json& j, int indent = -1) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

}  // namespace

long approx_tokens(std::string_view text) {
  long n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string cache_key(const Conversation& conversation, const CompletionParams& params) {
  return detail::sha256_hex(dump(canonical_request(conversation, params)));
}

// ---------------------------------------------------------------------------
// HTTP backend

CompletionResult parse_completion_payload(const std::string& body) {
  if (body.empty()) throw LlmError("bad completion payload");
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw LlmError("bad completion payload");
  try {
    CompletionResult r;
    r.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    if (doc.contains("usage") && doc["usage"].is_object()) {
      r.prompt_tokens = doc["usage"].value("prompt_tokens", 0L);
      r.completion_tokens = doc["usage"].value("completion_tokens", 0L);
    }
    if (r.prompt_tokens < 0 || r.completion_tokens < 0) throw LlmError("bad completion payload");
    return r;
  } catch (const json::exception&) {
    throw LlmError("bad completion payload");
  }
}

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(options_.endpoint_url, m, url_re))
    throw LlmError("invalid endpoint url: " + options_.endpoint_url);
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
}

CompletionResult HttpBackend::complete(const Conversation& conversation,
                                       const CompletionParams& params) {
  json messages = json::array();
  for (const auto& t : conversation.turns)
    messages.push_back({{"role", role_name(t.role)}, {"content", t.content}});
  const std::string body = dump({{"model", params.model},
                                 {"messages", std::move(messages)},
                                 {"temperature", params.temperature},
                                 {"max_tokens", params.max_output_tokens}});

  httplib::Client client(origin_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_cause = "no attempt made";
  const int attempts = 1 + std::max(0, options_.retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff * (1 << (attempt - 1)));
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_cause = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return parse_completion_payload(res->body);
    last_cause = "HTTP " + std::to_string(res->status);
    if (res->status != 429 && res->status < 500) break;
  }
  throw LlmError("completion failed after " + std::to_string(attempts) +
                 " attempt(s): " + last_cause);
}

// ---------------------------------------------------------------------------
// Mock backend

MockBackend::MockBackend(std::vector<Rule> rules, bool strict, std::string default_reply)
    : rules_(std::move(rules)), strict_(strict), default_reply_(std::move(default_reply)) {}

MockBackend::MockBackend(Responder responder, bool strict)
    : responder_(std::move(responder)), strict_(strict) {}

MockBackend MockBackend::from_json_text(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw LlmError("mock script: invalid JSON");
  std::vector<Rule> rules;
  for (const auto& r : doc.value("rules", json::array())) {
    if (!r.contains("reply")) throw LlmError("mock script: rule without reply");
    rules.push_back({r.value("tag", ""), r.value("contains", ""), r.at("reply").get<std::string>()});
  }
  return MockBackend(std::move(rules), doc.value("strict", false),
                     doc.value("default", std::string("{unknown}")));
}

MockBackend MockBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LlmError("cannot open mock script " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string MockBackend::tag_of(const Conversation& conversation) {
  const auto content = conversation.last_user_content();
  if (auto id = detect_intervention(content)) return name_of(*id);
  if (is_panel_prompt(content)) return "PANEL";
  return {};
}

CompletionResult MockBackend::complete(const Conversation& conversation,
                                       const CompletionParams&) {
  std::optional<std::string> reply;
  if (responder_) reply = responder_(conversation);
  if (!reply) {
    const std::string tag = tag_of(conversation);
    const auto content = conversation.last_user_content();
    for (const auto& rule : rules_) {
      if (!rule.tag.empty() && rule.tag != tag) continue;
      if (!rule.contains.empty() && content.find(rule.contains) == std::string_view::npos)
        continue;
      reply = rule.reply;
      break;
    }
  }
  if (!reply) {
    if (strict_) throw LlmError("unscripted conversation");
    reply = default_reply_;
  }
  CompletionResult r;
  r.text = *reply;
  for (const auto& t : conversation.turns) r.prompt_tokens += approx_tokens(t.content);
  r.completion_tokens = approx_tokens(r.text);
  return r;
}

// ---------------------------------------------------------------------------
// Client

LlmClient::LlmClient(std::shared_ptr<Backend> backend, Options options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw LlmError("no backend");
  if (options_.max_in_flight < 1) options_.max_in_flight = 1;
  if (options_.cache_dir) std::filesystem::create_directories(*options_.cache_dir);
}

std::optional<CompletionResult> LlmClient::read_cache(const std::string& key) const {
  if (!options_.cache_dir) return std::nullopt;
  std::ifstream in(*options_.cache_dir / (key + ".json"));
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  const json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded() || !doc.contains("response")) return std::nullopt;
  const json& resp = doc["response"];
  CompletionResult r;
  r.text = resp.value("text", std::string());
  r.prompt_tokens = resp.value("prompt_tokens", 0L);
  r.completion_tokens = resp.value("completion_tokens", 0L);
  r.cached = true;
  return r;
}

void LlmClient::write_cache(const std::string& key, const Conversation& conversation,
                            const CompletionParams& params, const CompletionResult& result) const {
  if (!options_.cache_dir) return;
  const json doc = {{"key", key},
                    {"request", canonical_request(conversation, params)},
                    {"response",
                     {{"text", result.text},
                      {"prompt_tokens", result.prompt_tokens},
                      {"completion_tokens", result.completion_tokens}}}};
  static std::atomic<unsigned long> counter{0};
  const auto final_path = *options_.cache_dir / (key + ".json");
  const auto tmp_path =
      *options_.cache_dir / (key + ".tmp." + std::to_string(::getpid()) + "." +
                             std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp_path, std::ios::binary);
    out << dump(doc, 2) << '\n';
    if (!out) throw LlmError("cannot write cache entry " + tmp_path.string());
  }
  // link() refuses to replace an existing entry, so the first writer wins and
  // readers only ever see complete files.
  ::link(tmp_path.c_str(), final_path.c_str());
  std::error_code ec;
  std::filesystem::remove(tmp_path, ec);
}

CompletionResult LlmClient::complete(const Conversation& conversation,
                                     const CompletionParams& params) {
  if (!is_valid(conversation)) throw LlmError("invalid conversation");
  if (params.temperature < 0) throw LlmError("temperature must be non-negative");
  const std::string key = cache_key(conversation, params);
  if (auto hit = read_cache(key)) {
    cache_hits_.fetch_add(1);
    return *hit;
  }

  {
    std::unique_lock lock(slots_mutex_);
    slots_cv_.wait(lock, [this] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
  }
  CompletionResult result;
  try {
    backend_calls_.fetch_add(1);
    result = backend_->complete(conversation, params);
  } catch (...) {
    {
      std::lock_guard lock(slots_mutex_);
      --in_flight_;
    }
    slots_cv_.notify_one();
    throw;
  }
  {
    std::lock_guard lock(slots_mutex_);
    --in_flight_;
  }
  slots_cv_.notify_one();

  result.cached = false;
  write_cache(key, conversation, params, result);
  return result;
}

}  // namespace kgcal
