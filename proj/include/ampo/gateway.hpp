#pragma once

#include "ampo/types.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ampo {

enum class MessageRole { system, user, assistant };

const char* to_string(MessageRole role);

enum class RequestTag { target, analyzer, summarizer, revisor, initializer };

const char* to_string(RequestTag tag);

struct ChatMessage {
    MessageRole role = MessageRole::user;
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;  // non-empty; last message role = user
    double temperature = 0.0;           // [0, 2]
    std::optional<int> max_tokens;      // > 0 when present
    RequestTag tag = RequestTag::target;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct ChatResponse {
    std::string content;
    TokenUsage usage;
    std::int64_t latency_ms = 0;
};

// Anything that can answer a chat completion request.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

// One scripted response rule. "any" rules are consumed once each (queue
// semantics); "tag" and "contains" rules match repeatedly.
struct ScriptEntry {
    enum class Match { any, tag, contains };

    Match match = Match::any;
    std::string match_value;  // tag name or substring; unused for "any"
    std::string response;
};

// Deterministic offline backend: first matching entry in script order wins.
//
// Concurrent use is supported only when the script consists of tag/contains
// rules; "any" consumption order depends on request arrival order.
class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptEntry> script);

    // Loads a script file: one JSON record per line with fields
    // match, match_value, response.
    static ScriptedBackend from_file(const std::string& path);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "scripted"; }

    // Re-arms consumed "any" entries.
    void reset();

private:
    std::vector<ScriptEntry> script_;
    std::vector<bool> consumed_;
    std::mutex mutex_;
};

// Remote OpenAI-compatible chat endpoint: POST {base}/v1/chat/completions.
class HttpBackend final : public ChatBackend {
public:
    HttpBackend(std::string base_url, std::string api_key, int timeout_seconds = 120);

    // Reads AMPO_API_BASE / AMPO_API_KEY.
    static HttpBackend from_env();

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "remote"; }

    // Exposed for wire-format tests.
    static std::string serialize_body(const ChatRequest& request);
    static ChatResponse parse_body(const std::string& body, std::int64_t latency_ms);

private:
    std::string base_url_;
    std::string api_key_;
    int timeout_seconds_;
};

// One line of the capture log.
struct CaptureEntry {
    std::int64_t timestamp_ms = 0;
    RequestTag tag = RequestTag::target;
    std::string model;
    double temperature = 0.0;
    std::vector<ChatMessage> messages;
    std::string content;
    TokenUsage usage;
};

struct RetryPolicy {
    int max_attempts = 3;
    int base_backoff_ms = 250;
};

// Uniform completion interface: validates requests, records every completed
// call, and accounts usage. The capture log is append-only and ordered by
// completion time; concurrent complete() calls are allowed.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy retry = {});

    // Single attempt. Appends exactly one capture entry on success.
    ChatResponse complete(const ChatRequest& request);

    // Retries only on TransportError/RateLimited with exponential backoff
    // (base * 2^attempt); propagates the last error once attempts run out.
    ChatResponse with_retry(const ChatRequest& request, int max_attempts, int base_backoff_ms);

    // with_retry using the configured policy.
    ChatResponse call(const ChatRequest& request);

    std::vector<CaptureEntry> capture_log() const;
    std::size_t capture_size() const;
    TokenUsage total_usage() const;
    std::int64_t calls_with_tag(RequestTag tag) const;

    // Writes the capture log, one JSON record per line.
    void write_capture(const std::string& path) const;

    const RetryPolicy& retry_policy() const { return retry_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    RetryPolicy retry_;
    mutable std::mutex mutex_;
    std::vector<CaptureEntry> capture_;
};

// env var names for the remote backend
inline constexpr const char* kEnvApiBase = "AMPO_API_BASE";
inline constexpr const char* kEnvApiKey = "AMPO_API_KEY";

}  // namespace ampo
