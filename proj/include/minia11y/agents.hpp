#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "minia11y/backend.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/prompts.hpp"
#include "minia11y/scanner.hpp"

namespace minia11y {

/// One numbered repair strategy proposed by the planner.
struct FixPlan {
    int index = 0;  // the number the planner gave it, 1-based
    std::string summary;
    std::string rationale;
    std::string guideline;
};

struct SnippetRating {
    std::size_t candidate = 0;  // index into the rated candidate list
    int score = 0;              // clamped to 0..100
    std::string reasoning;
};

struct SnippetSelection {
    std::size_t chosen = 0;  // index into the candidate list handed in
    std::vector<SnippetRating> ratings;
};

struct FixDraft {
    std::string explanation;
    std::string snippet_text;  // the rewritten view declaration
};

/// Parses a numbered plan list: "N. summary" entries with optional indented
/// "Rationale:" and "Guideline:" lines. Unrelated prose is ignored. Throws
/// PlanParseError when the reply contains no numbered entry at all.
std::vector<FixPlan> parse_plans(const std::string& text);

/// False for plans that do not edit the source: recommendations to use
/// third-party tools, manual verification steps and similar.
bool plan_is_actionable(const FixPlan& plan);

/// First "SCORE: n" value, clamped to 0..100. Throws RatingParseError.
int parse_score(const std::string& text);

/// Value of the first "CHOICE:" line. Throws SelectionParseError.
std::string parse_choice(const std::string& text);

/// Body of the first fenced ```minui block (a bare ``` fence is accepted).
/// Throws SnippetParseError when no complete fence is present.
std::string extract_fenced_snippet(const std::string& text);

/// Asks the planner for `count` alternative fix strategies and filters out
/// non-source plans. A round that yields nothing usable is retried up to
/// twice with a regeneration note; after that PlanParseError is thrown.
std::vector<FixPlan> generate_plans(Backend& backend, const PromptSet& prompts,
                                    const Issue& issue,
                                    const nlohmann::ordered_json& element_json,
                                    const std::string& snippet, int count);

SnippetRating rate_snippet(Backend& backend, const PromptSet& prompts,
                           const Issue& issue, const FixPlan& plan,
                           const CandidateSnippet& candidate);

/// Rates every candidate, shortlists the `topk` best and asks the comparer
/// to pick one. A single candidate is returned without a comparer call; an
/// unparseable choice is retried once and then falls back to the top rating.
SnippetSelection select_snippet(Backend& backend, const PromptSet& prompts,
                                const Issue& issue, const FixPlan& plan,
                                const std::vector<CandidateSnippet>& candidates,
                                int topk = 3);

/// Asks the fixer for a rewritten declaration. `feedback` lines from earlier
/// attempts are passed through verbatim; `attempt` is 1-based.
FixDraft draft_fix(Backend& backend, const PromptSet& prompts, const Issue& issue,
                   const FixPlan& plan, const CandidateSnippet& snippet,
                   const std::vector<std::string>& feedback, int attempt);

}  // namespace minia11y
