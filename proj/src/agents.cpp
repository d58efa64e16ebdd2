#include "minia11y/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

#include "minia11y/errors.hpp"
#include "minia11y/text_util.hpp"

namespace minia11y {

namespace {

// Plans containing these cannot be carried out by editing the source.
const char* const kNonSourceMarkers[] = {
    "third-party",   "third party",      "external tool",
    "manual test",   "manually verify",  "screen reader testing",
    "testing service", "hire ",
};

/// "3. Do the thing" -> {3, "Do the thing"}; nullopt for other lines.
std::optional<std::pair<int, std::string>> numbered_entry(const std::string& line) {
    std::string t = trim(line);
    std::size_t i = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == 0 || i >= t.size()) return std::nullopt;
    if (t[i] != '.' && t[i] != ')') return std::nullopt;
    std::string rest = trim(t.substr(i + 1));
    if (rest.empty()) return std::nullopt;
    return std::make_pair(std::atoi(t.substr(0, i).c_str()), rest);
}

std::string after_marker(const std::string& text, const std::string& marker) {
    auto pos = text.find(marker);
    if (pos == std::string::npos) return "";
    return trim(text.substr(pos + marker.size()));
}

std::vector<ChatMessage> messages_for(const PromptSet& prompts, std::string user) {
    return {ChatMessage{ChatRole::System, prompts.system},
            ChatMessage{ChatRole::User, std::move(user)}};
}

nlohmann::ordered_json issue_json(const Issue& issue) {
    return {{"kind", issue_kind_name(issue.kind)},
            {"element", issue.element},
            {"description", issue.description}};
}

}  // namespace

std::vector<FixPlan> parse_plans(const std::string& text) {
    std::vector<FixPlan> plans;
    for (const std::string& line : split_lines(text)) {
        if (auto entry = numbered_entry(line)) {
            plans.push_back(FixPlan{entry->first, entry->second, "", ""});
            continue;
        }
        if (plans.empty()) continue;
        std::string t = trim(line);
        if (starts_with(t, "Rationale:")) {
            plans.back().rationale = trim(t.substr(10));
        } else if (starts_with(t, "Guideline:")) {
            plans.back().guideline = trim(t.substr(10));
        }
    }
    if (plans.empty())
        throw PlanParseError("planner reply contains no numbered plan entries");
    return plans;
}

bool plan_is_actionable(const FixPlan& plan) {
    std::string haystack = to_lower(plan.summary + " " + plan.rationale);
    for (const char* marker : kNonSourceMarkers)
        if (haystack.find(marker) != std::string::npos) return false;
    return true;
}

int parse_score(const std::string& text) {
    auto value = after_marker(text, "SCORE:");
    if (value.empty()) throw RatingParseError("rating reply has no SCORE: line");
    char* end = nullptr;
    long score = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str())
        throw RatingParseError("rating reply has a non-numeric SCORE: line");
    return static_cast<int>(std::clamp(score, 0L, 100L));
}

std::string parse_choice(const std::string& text) {
    auto pos = text.find("CHOICE:");
    if (pos == std::string::npos)
        throw SelectionParseError("comparer reply has no CHOICE: line");
    std::string rest = text.substr(pos + 7);
    if (auto eol = rest.find('\n'); eol != std::string::npos) rest = rest.substr(0, eol);
    std::string name = trim(rest);
    if (name.empty()) throw SelectionParseError("comparer CHOICE: line names nothing");
    return name;
}

std::string extract_fenced_snippet(const std::string& text) {
    std::size_t body = std::string::npos;
    if (auto open = text.find("```minui"); open != std::string::npos) {
        body = text.find('\n', open);
    } else if (auto bare = text.find("```"); bare != std::string::npos) {
        body = text.find('\n', bare);
    }
    if (body == std::string::npos)
        throw SnippetParseError("fixer reply has no fenced code block");
    ++body;
    auto close = text.find("\n```", body);
    if (close == std::string::npos)
        throw SnippetParseError("fixer reply has an unterminated code fence");
    return text.substr(body, close - body);
}

std::vector<FixPlan> generate_plans(Backend& backend, const PromptSet& prompts,
                                    const Issue& issue,
                                    const nlohmann::ordered_json& element_json,
                                    const std::string& snippet, int count) {
    std::string prompt = render_template(
        prompts.planner,
        {{"root_view", issue.root_view},
         {"element", issue.element},
         {"issue_description", issue.description},
         {"issue_kind", issue_kind_name(issue.kind)},
         {"element_json", element_json.dump(2)},
         {"snippet", snippet},
         {"count", std::to_string(count)}});

    nlohmann::ordered_json payload;
    payload["issue"] = issue_json(issue);
    payload["count"] = count;

    for (int round = 0;; ++round) {
        std::string ask = prompt;
        if (round > 0)
            ask += "\nRegeneration round " + std::to_string(round) +
                   ": every plan must directly edit the declaration shown above.";
        ChatResponse reply =
            backend.complete(messages_for(prompts, ask), ChatContext{"plan", payload});

        std::vector<FixPlan> parsed;
        try {
            parsed = parse_plans(reply.text);
        } catch (const PlanParseError&) {
        }
        std::vector<FixPlan> usable;
        for (auto& plan : parsed) {
            if (!plan_is_actionable(plan)) continue;
            usable.push_back(std::move(plan));
            if (static_cast<int>(usable.size()) == count) break;
        }
        if (!usable.empty()) return usable;
        if (round == 2)
            throw PlanParseError("planner produced no usable plans in three rounds");
    }
}

SnippetRating rate_snippet(Backend& backend, const PromptSet& prompts,
                           const Issue& issue, const FixPlan& plan,
                           const CandidateSnippet& candidate) {
    std::string relation = snippet_relation_name(candidate.relation);
    std::string prompt =
        render_template(prompts.rater, {{"issue_description", issue.description},
                                        {"plan_summary", plan.summary},
                                        {"relation", relation},
                                        {"view_name", candidate.view_name},
                                        {"snippet", candidate.text}});

    nlohmann::ordered_json payload;
    payload["issue"] = issue_json(issue);
    payload["plan"] = {{"summary", plan.summary}};
    payload["snippet"] = {{"viewName", candidate.view_name},
                          {"relation", relation},
                          {"text", candidate.text}};

    ChatResponse reply =
        backend.complete(messages_for(prompts, prompt), ChatContext{"rate", payload});
    SnippetRating rating;
    rating.score = parse_score(reply.text);
    rating.reasoning = after_marker(reply.text, "REASONING:");
    return rating;
}

SnippetSelection select_snippet(Backend& backend, const PromptSet& prompts,
                                const Issue& issue, const FixPlan& plan,
                                const std::vector<CandidateSnippet>& candidates,
                                int topk) {
    if (candidates.empty())
        throw SelectionParseError("no candidate declarations to choose from");

    SnippetSelection selection;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        SnippetRating rating = rate_snippet(backend, prompts, issue, plan, candidates[i]);
        rating.candidate = i;
        selection.ratings.push_back(std::move(rating));
    }
    if (candidates.size() == 1) return selection;

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return selection.ratings[a].score > selection.ratings[b].score;
    });
    if (topk > 0 && static_cast<std::size_t>(topk) < order.size())
        order.resize(static_cast<std::size_t>(topk));
    selection.chosen = order.front();
    if (order.size() == 1) return selection;

    std::string block;
    nlohmann::ordered_json listed = nlohmann::ordered_json::array();
    for (std::size_t idx : order) {
        const CandidateSnippet& c = candidates[idx];
        int score = selection.ratings[idx].score;
        block += "Candidate " + c.view_name + " (" +
                 snippet_relation_name(c.relation) + ", rated " +
                 std::to_string(score) + "):\n" + c.text + "\n\n";
        listed.push_back({{"viewName", c.view_name},
                          {"relation", snippet_relation_name(c.relation)},
                          {"score", score}});
    }
    std::string prompt =
        render_template(prompts.comparer, {{"issue_description", issue.description},
                                           {"plan_summary", plan.summary},
                                           {"candidates", block}});
    nlohmann::ordered_json payload;
    payload["issue"] = issue_json(issue);
    payload["plan"] = {{"summary", plan.summary}};
    payload["candidates"] = listed;

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string ask = prompt;
        if (attempt > 0)
            ask += "\nAnswer with a single line of the form CHOICE: <view name>.";
        ChatResponse reply = backend.complete(messages_for(prompts, ask),
                                              ChatContext{"compare", payload});
        std::string name;
        try {
            name = parse_choice(reply.text);
        } catch (const SelectionParseError&) {
            continue;
        }
        for (std::size_t idx : order) {
            if (candidates[idx].view_name == name) {
                selection.chosen = idx;
                return selection;
            }
        }
    }
    // Unusable comparer output: the highest rated candidate already set.
    return selection;
}

FixDraft draft_fix(Backend& backend, const PromptSet& prompts, const Issue& issue,
                   const FixPlan& plan, const CandidateSnippet& snippet,
                   const std::vector<std::string>& feedback, int attempt) {
    std::string feedback_block;
    if (!feedback.empty()) {
        feedback_block = "Feedback on your previous attempts:\n";
        for (const std::string& line : feedback) feedback_block += line + "\n";
    }
    std::string prompt = render_template(
        prompts.fixer, {{"element", issue.element},
                        {"root_view", issue.root_view},
                        {"issue_description", issue.description},
                        {"issue_kind", issue_kind_name(issue.kind)},
                        {"plan_summary", plan.summary},
                        {"view_name", snippet.view_name},
                        {"snippet", snippet.text},
                        {"feedback", feedback_block},
                        {"attempt", std::to_string(attempt)}});

    nlohmann::ordered_json payload;
    payload["issue"] = issue_json(issue);
    payload["plan"] = {{"index", plan.index}, {"summary", plan.summary}};
    payload["snippet"] = {{"viewName", snippet.view_name}, {"text", snippet.text}};
    payload["feedback"] = feedback;
    payload["attempt"] = attempt;

    ChatResponse reply =
        backend.complete(messages_for(prompts, prompt), ChatContext{"fix", payload});
    FixDraft draft;
    draft.snippet_text = extract_fenced_snippet(reply.text);
    std::string explanation = after_marker(reply.text, "EXPLANATION:");
    if (auto fence = explanation.find("```"); fence != std::string::npos)
        explanation = trim(explanation.substr(0, fence));
    draft.explanation = explanation;
    return draft;
}

}  // namespace minia11y
