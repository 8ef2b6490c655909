#include "ampo/gateway.hpp"

#include "ampo/errors.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#ifdef AMPO_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace ampo {

using nlohmann::json;

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void validate_request(const ChatRequest& request) {
    if (request.messages.empty()) throw GatewayError("request has no messages");
    if (request.messages.back().role != MessageRole::user) {
        throw GatewayError("last message role must be user");
    }
    if (request.temperature < 0.0 || request.temperature > 2.0) {
        throw GatewayError("temperature outside [0, 2]");
    }
    if (request.max_tokens && *request.max_tokens <= 0) {
        throw GatewayError("max_tokens must be > 0");
    }
}

std::string joined_content(const ChatRequest& request) {
    std::string all;
    for (const auto& message : request.messages) {
        if (!all.empty()) all += '\n';
        all += message.content;
    }
    return all;
}

}  // namespace

const char* to_string(MessageRole role) {
    switch (role) {
        case MessageRole::system: return "system";
        case MessageRole::user: return "user";
        case MessageRole::assistant: return "assistant";
    }
    return "user";
}

const char* to_string(RequestTag tag) {
    switch (tag) {
        case RequestTag::target: return "target";
        case RequestTag::analyzer: return "analyzer";
        case RequestTag::summarizer: return "summarizer";
        case RequestTag::revisor: return "revisor";
        case RequestTag::initializer: return "initializer";
    }
    return "target";
}

// --- ScriptedBackend ---

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script)
    : script_(std::move(script)), consumed_(script_.size(), false) {}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path);
    std::vector<ScriptEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        ScriptEntry entry;
        const std::string match = record.value("match", "any");
        if (match == "any") {
            entry.match = ScriptEntry::Match::any;
        } else if (match == "tag") {
            entry.match = ScriptEntry::Match::tag;
        } else if (match == "contains") {
            entry.match = ScriptEntry::Match::contains;
        } else {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown match kind '" +
                              match + "'");
        }
        entry.match_value = record.value("match_value", "");
        if (!record.contains("response")) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": missing response field");
        }
        entry.response = record.at("response").get<std::string>();
        entries.push_back(std::move(entry));
    }
    return ScriptedBackend(std::move(entries));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    validate_request(request);
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string content = joined_content(request);
    for (std::size_t i = 0; i < script_.size(); ++i) {
        const ScriptEntry& entry = script_[i];
        bool hit = false;
        switch (entry.match) {
            case ScriptEntry::Match::any:
                hit = !consumed_[i];
                break;
            case ScriptEntry::Match::tag:
                hit = entry.match_value == to_string(request.tag);
                break;
            case ScriptEntry::Match::contains:
                hit = content.find(entry.match_value) != std::string::npos;
                break;
        }
        if (!hit) continue;
        if (entry.match == ScriptEntry::Match::any) consumed_[i] = true;
        ChatResponse response;
        response.content = entry.response;
        // deterministic pseudo-usage so accounting paths stay exercised
        response.usage.prompt_tokens = static_cast<std::int64_t>(content.size() / 4);
        response.usage.completion_tokens = static_cast<std::int64_t>(entry.response.size() / 4);
        response.latency_ms = 0;
        return response;
    }
    throw ScriptMismatch("no script entry matches request (tag=" +
                         std::string(to_string(request.tag)) + ")");
}

void ScriptedBackend::reset() {
    std::lock_guard<std::mutex> lock(mutex_);
    consumed_.assign(script_.size(), false);
}

// --- HttpBackend ---

HttpBackend::HttpBackend(std::string base_url, std::string api_key, int timeout_seconds)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
    if (base_url_.empty()) throw ConfigError("remote backend requires a base URL");
}

HttpBackend HttpBackend::from_env() {
    const char* base = std::getenv(kEnvApiBase);
    if (base == nullptr || *base == '\0') {
        throw ConfigError(std::string(kEnvApiBase) + " is not set");
    }
    const char* key = std::getenv(kEnvApiKey);
    return HttpBackend(base, key ? key : "");
}

std::string HttpBackend::serialize_body(const ChatRequest& request) {
    json body;
    body["model"] = request.model;
    json messages = json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    body["messages"] = messages;
    body["temperature"] = request.temperature;
    if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
    return body.dump();
}

ChatResponse HttpBackend::parse_body(const std::string& body, std::int64_t latency_ms) {
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::parse_error& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty() || !parsed["choices"][0].contains("message") ||
        !parsed["choices"][0]["message"].contains("content")) {
        throw MalformedResponse("response missing choices[0].message.content");
    }
    ChatResponse response;
    response.content = parsed["choices"][0]["message"]["content"].get<std::string>();
    if (parsed.contains("usage")) {
        const auto& usage = parsed["usage"];
        response.usage.prompt_tokens = usage.value("prompt_tokens", std::int64_t{0});
        response.usage.completion_tokens = usage.value("completion_tokens", std::int64_t{0});
    }
    response.latency_ms = latency_ms;
    return response;
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    validate_request(request);

    std::string host = base_url_;
    std::string path_prefix;
    const auto scheme_end = host.find("://");
    const auto path_start = host.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start != std::string::npos) {
        path_prefix = host.substr(path_start);
        host = host.substr(0, path_start);
    }
#ifndef AMPO_HAVE_OPENSSL
    if (host.rfind("https://", 0) == 0) {
        throw TransportError("built without TLS support; use an http:// base URL");
    }
#endif

    httplib::Client client(host);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const std::string body = serialize_body(request);
    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(path_prefix + "/v1/chat/completions", headers, body,
                              "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (!result) {
        throw TransportError("connection failed: " + httplib::to_string(result.error()));
    }
    if (result->status == 429) {
        throw RateLimited("rate limited (HTTP 429)");
    }
    if (result->status >= 500) {
        throw TransportError("server error (HTTP " + std::to_string(result->status) + ")");
    }
    if (result->status != 200) {
        throw MalformedResponse("unexpected status " + std::to_string(result->status) + ": " +
                                result->body);
    }
    return parse_body(result->body, latency);
}

// --- Gateway ---

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy retry)
    : backend_(std::move(backend)), retry_(retry) {
    if (!backend_) throw ConfigError("gateway requires a backend");
}

ChatResponse Gateway::complete(const ChatRequest& request) {
    validate_request(request);
    ChatResponse response = backend_->complete(request);
    CaptureEntry entry;
    entry.timestamp_ms = now_ms();
    entry.tag = request.tag;
    entry.model = request.model;
    entry.temperature = request.temperature;
    entry.messages = request.messages;
    entry.content = response.content;
    entry.usage = response.usage;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        capture_.push_back(std::move(entry));
    }
    return response;
}

ChatResponse Gateway::with_retry(const ChatRequest& request, int max_attempts,
                                 int base_backoff_ms) {
    if (max_attempts < 1) throw GatewayError("max_attempts must be >= 1");
    for (int attempt = 0;; ++attempt) {
        try {
            return complete(request);
        } catch (const RateLimited&) {
            if (attempt + 1 >= max_attempts) throw;
        } catch (const TransportError&) {
            if (attempt + 1 >= max_attempts) throw;
        }
        if (base_backoff_ms > 0) {
            const auto delay = std::chrono::milliseconds(base_backoff_ms * (1LL << attempt));
            std::this_thread::sleep_for(delay);
        }
    }
}

ChatResponse Gateway::call(const ChatRequest& request) {
    return with_retry(request, retry_.max_attempts, retry_.base_backoff_ms);
}

std::vector<CaptureEntry> Gateway::capture_log() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return capture_;
}

std::size_t Gateway::capture_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return capture_.size();
}

TokenUsage Gateway::total_usage() const {
    std::lock_guard<std::mutex> lock(mutex_);
    TokenUsage total;
    for (const auto& entry : capture_) {
        total.prompt_tokens += entry.usage.prompt_tokens;
        total.completion_tokens += entry.usage.completion_tokens;
    }
    return total;
}

std::int64_t Gateway::calls_with_tag(RequestTag tag) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::int64_t count = 0;
    for (const auto& entry : capture_) {
        if (entry.tag == tag) ++count;
    }
    return count;
}

void Gateway::write_capture(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write capture log: " + path);
    const auto entries = capture_log();
    for (const auto& entry : entries) {
        json messages = json::array();
        for (const auto& message : entry.messages) {
            messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
        }
        json line{{"timestamp", entry.timestamp_ms},
                  {"request_tag", to_string(entry.tag)},
                  {"model", entry.model},
                  {"temperature", entry.temperature},
                  {"messages", messages},
                  {"content", entry.content},
                  {"usage",
                   {{"prompt_tokens", entry.usage.prompt_tokens},
                    {"completion_tokens", entry.usage.completion_tokens}}}};
        out << line.dump() << '\n';
    }
}

}  // namespace ampo
