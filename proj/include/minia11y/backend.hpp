#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace minia11y {

enum class ChatRole { System, User };

struct ChatMessage {
    ChatRole role = ChatRole::User;
    std::string text;
};

/// Machine-readable companion to the rendered prompt. HTTP backends ignore
/// it; the scripted and heuristic backends answer from it without a model.
struct ChatContext {
    std::string role;  // "plan", "rate", "compare" or "fix"
    nlohmann::ordered_json payload;
};

struct ChatResponse {
    std::string text;
    long prompt_tokens = 0;
    long completion_tokens = 0;
};

class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    /// Throws BackendError when no response can be produced.
    virtual ChatResponse complete(const std::vector<ChatMessage>& messages,
                                  const ChatContext& context) = 0;
};

/// Selects a backend: "heuristic", "scripted:<fixture.json>" or an
/// "http(s)://host[:port]" base URL.
struct BackendConfig {
    std::string spec = "heuristic";
    std::string model = "gpt-4";
    std::string api_key_env = "MINIA11Y_API_KEY";
    int max_concurrent = 4;
    int timeout_seconds = 60;
};

std::shared_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace minia11y
