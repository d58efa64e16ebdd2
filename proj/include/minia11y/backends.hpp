#pragma once

#include <condition_variable>
#include <filesystem>
#include <mutex>

#include "minia11y/backend.hpp"

namespace minia11y {

/// Replays canned responses from a JSON fixture of the form
///   {"responses": [{"match": "...", "role": "...", "reply": "..."}, ...]}
/// The first entry whose `match` occurs in the request's user text (and
/// whose `role`, when given, equals the request kind) answers it. Both
/// filters are optional; an entry with neither matches everything. A request
/// no entry matches raises a backend error.
class ScriptedBackend : public Backend {
  public:
    explicit ScriptedBackend(const nlohmann::json& script);
    static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

    std::string name() const override { return "scripted"; }
    ChatResponse complete(const std::vector<ChatMessage>& messages,
                          const ChatContext& context) override;

  private:
    struct Entry {
        std::string role;
        std::string match;
        std::string reply;
    };
    std::vector<Entry> entries_;
};

/// Deterministic rule-based stand-in for a language model. It answers from
/// the structured request context, in the same text formats the agents
/// parse, so the full pipeline runs offline and reproducibly: plans come
/// from a fixed table per issue kind and fixes are AST rewrites of the
/// snippet under repair.
class HeuristicBackend : public Backend {
  public:
    std::string name() const override { return "heuristic"; }
    ChatResponse complete(const std::vector<ChatMessage>& messages,
                          const ChatContext& context) override;
};

/// Talks to an OpenAI-style chat completion endpoint. Requests carry the
/// rendered prompt only; the structured context stays local. At most
/// `max_concurrent` requests are in flight at once.
class HttpBackend : public Backend {
  public:
    HttpBackend(std::string base_url, std::string model, std::string api_key,
                int max_concurrent, int timeout_seconds);

    std::string name() const override { return "http"; }
    ChatResponse complete(const std::vector<ChatMessage>& messages,
                          const ChatContext& context) override;

  private:
    std::string base_url_;
    std::string model_;
    std::string api_key_;
    int timeout_seconds_;
    // Counting gate; <semaphore> needs a compile-time ceiling, a mutex pair
    // does not and this path is far from hot.
    std::mutex mutex_;
    std::condition_variable slots_available_;
    int free_slots_;
};

}  // namespace minia11y
