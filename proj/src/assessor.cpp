#include "minia11y/assessor.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"

namespace minia11y {

namespace {

struct ScreenState {
    Scene scene;
    std::vector<Issue> issues;
};

ScreenState resolve_state(const Project& project, const ScreenRef& ref) {
    UiHierarchy hierarchy = build_hierarchy(project, ref.root_view);
    ScreenState state{resolve_screen(project, hierarchy, ref.device), {}};
    state.issues = scan_scene(state.scene);
    return state;
}

/// What a fix must not change: which actions the screens offer and what
/// visible text they show. Text is compared as a multiset of non-whitespace
/// bytes so rewording layout (merging labels, re-wrapping) stays legal.
struct Functionality {
    std::vector<std::string> actions;
    std::string glyphs;

    bool operator==(const Functionality&) const = default;
};

Functionality functionality_of(const std::vector<ScreenState>& states) {
    Functionality f;
    for (const ScreenState& state : states) {
        for (const RenderedElement& e : state.scene.elements) {
            if (!e.action.empty()) f.actions.push_back(e.action);
            if (e.kind == NodeKind::Text || e.kind == NodeKind::Button ||
                e.kind == NodeKind::Toggle)
                for (char c : e.text)
                    if (!std::isspace(static_cast<unsigned char>(c))) f.glyphs += c;
        }
    }
    std::sort(f.actions.begin(), f.actions.end());
    std::sort(f.glyphs.begin(), f.glyphs.end());
    return f;
}

std::string functionality_difference(const Functionality& before,
                                     const Functionality& after) {
    if (before.actions != after.actions) {
        std::vector<std::string> missing;
        std::set_difference(before.actions.begin(), before.actions.end(),
                            after.actions.begin(), after.actions.end(),
                            std::back_inserter(missing));
        if (!missing.empty())
            return "the interaction \"" + missing.front() + "\" is gone";
        return "the fix adds interactions the screen did not have";
    }
    return "the visible text content changed";
}

std::vector<ScreenRef> checked_screens(const ScreenRef& screen,
                                       const std::vector<ScreenRef>& also_check) {
    std::vector<ScreenRef> refs{screen};
    for (const ScreenRef& extra : also_check) {
        bool dup = std::any_of(refs.begin(), refs.end(), [&](const ScreenRef& r) {
            return r.root_view == extra.root_view && r.device.name == extra.device.name;
        });
        if (!dup) refs.push_back(extra);
    }
    return refs;
}

std::string issue_digest(const std::vector<Issue>& issues, std::size_t limit) {
    std::string out;
    for (std::size_t i = 0; i < issues.size() && i < limit; ++i) {
        if (!out.empty()) out += "; ";
        out += issues[i].description;
    }
    if (issues.size() > limit)
        out += "; and " + std::to_string(issues.size() - limit) + " more";
    return out;
}

}  // namespace

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Plausible: return "Plausible";
        case Verdict::NewIssuesIntroduced: return "NewIssuesIntroduced";
        case Verdict::NotResolved: return "NotResolved";
        case Verdict::FunctionalityRemoved: return "FunctionalityRemoved";
        case Verdict::BuildError: return "BuildError";
        case Verdict::BackendFailed: return "BackendError";
    }
    return "BuildError";
}

PatchAssessment assess_patch(const Project& project, const ScreenRef& screen,
                             const Issue& target, const std::string& view_name,
                             const std::string& patched_view,
                             const std::vector<ScreenRef>& also_check) {
    PatchAssessment out;
    std::vector<ScreenRef> refs = checked_screens(screen, also_check);

    std::vector<ScreenState> before;
    for (const ScreenRef& ref : refs) before.push_back(resolve_state(project, ref));

    Project patched;
    try {
        std::string path = project.decl_path(view_name);
        if (path.empty()) throw UnknownView(view_name);
        out.patch = compute_patch(*project.file(path), patched_view, view_name);
        patched = instrument(apply_patch(project, out.patch)).project;
    } catch (const std::exception& e) {
        out.verdict = Verdict::BuildError;
        out.detail = std::string("the rewritten declaration does not build: ") + e.what();
        return out;
    }

    std::vector<ScreenState> after;
    try {
        for (const ScreenRef& ref : refs) after.push_back(resolve_state(patched, ref));
    } catch (const std::exception& e) {
        out.verdict = Verdict::BuildError;
        out.detail = std::string("the patched screen does not resolve: ") + e.what();
        return out;
    }

    std::map<std::string, const Issue*> before_by_id;
    for (const ScreenState& state : before)
        for (const Issue& issue : state.issues) before_by_id.emplace(issue.id, &issue);
    std::set<std::string> after_ids;
    for (const ScreenState& state : after)
        for (const Issue& issue : state.issues) {
            after_ids.insert(issue.id);
            out.remaining.push_back(issue);
            if (!before_by_id.count(issue.id)) out.introduced.push_back(issue);
        }
    for (const auto& [id, issue] : before_by_id)
        if (id != target.id && !after_ids.count(id)) out.also_resolved.push_back(*issue);

    Functionality functionality_before = functionality_of(before);
    Functionality functionality_after = functionality_of(after);
    if (!(functionality_before == functionality_after)) {
        out.verdict = Verdict::FunctionalityRemoved;
        out.detail = "the fix removes functionality: " +
                     functionality_difference(functionality_before, functionality_after);
        return out;
    }

    if (after_ids.count(target.id)) {
        out.verdict = Verdict::NotResolved;
        for (const Issue& issue : out.remaining)
            if (issue.id == target.id) {
                out.detail = "the issue is still present: " + issue.description;
                break;
            }
        return out;
    }

    if (!out.introduced.empty()) {
        out.verdict = Verdict::NewIssuesIntroduced;
        out.detail = "the fix introduces new issues: " + issue_digest(out.introduced, 2);
        return out;
    }

    out.verdict = Verdict::Plausible;
    out.detail = "the issue is resolved and the scan stays clean";
    return out;
}

std::vector<FixSuggestion> suggest_fixes(Backend& backend, const PromptSet& prompts,
                                         const Project& project,
                                         const ScreenRef& screen,
                                         const std::vector<Issue>& issues,
                                         const SuggestConfig& config) {
    UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
    Scene scene = resolve_screen(project, hierarchy, screen.device);
    nlohmann::ordered_json scene_json = scene_to_json(scene);

    std::vector<FixSuggestion> suggestions;
    for (const Issue& issue : issues) {
        nlohmann::ordered_json element_json = nlohmann::ordered_json::object();
        for (const auto& element : scene_json.at("elements"))
            if (element.at("id") == issue.element) {
                element_json = element;
                break;
            }
        std::vector<CandidateSnippet> candidates =
            candidate_snippets(project, hierarchy, issue.element);

        std::vector<FixPlan> plans;
        try {
            plans = generate_plans(backend, prompts, issue, element_json,
                                   candidates.front().text,
                                   config.plans);
        } catch (const BackendError&) {
            if (suggestions.empty()) throw;
            return suggestions;  // keep what exists; the caller sees the log
        }

        for (const FixPlan& plan : plans) {
            FixSuggestion suggestion;
            suggestion.issue = issue;
            suggestion.plan = plan;
            try {
                SnippetSelection selection = select_snippet(
                    backend, prompts, issue, plan, candidates, config.topk);
                const CandidateSnippet& chosen = candidates[selection.chosen];
                suggestion.view_name = chosen.view_name;
                suggestion.relation = chosen.relation;
                suggestion.ratings = std::move(selection.ratings);

                std::vector<std::string> feedback;
                for (int attempt = 1; attempt <= config.iterations; ++attempt) {
                    FixAttempt record;
                    record.number = attempt;
                    try {
                        record.draft = draft_fix(backend, prompts, issue, plan, chosen,
                                                 feedback, attempt);
                    } catch (const SnippetParseError& e) {
                        record.verdict = Verdict::BuildError;
                        record.detail =
                            std::string("the reply had no usable code block: ") +
                            e.what();
                        suggestion.attempts.push_back(record);
                        suggestion.verdict = record.verdict;
                        suggestion.detail = record.detail;
                        feedback.push_back("attempt " + std::to_string(attempt) + ": " +
                                           record.detail);
                        continue;
                    }
                    PatchAssessment assessment =
                        assess_patch(project, screen, issue, suggestion.view_name,
                                     record.draft.snippet_text, config.rescan);
                    record.verdict = assessment.verdict;
                    record.detail = assessment.detail;
                    suggestion.attempts.push_back(record);
                    suggestion.verdict = assessment.verdict;
                    suggestion.detail = assessment.detail;
                    if (assessment.verdict == Verdict::Plausible) {
                        suggestion.patch = std::move(assessment.patch);
                        suggestion.patch.provenance =
                            "issue " + issue.id + " plan " +
                            std::to_string(plan.index) + " attempt " +
                            std::to_string(attempt);
                        suggestion.fixed_view = record.draft.snippet_text;
                        for (const Issue& other : assessment.also_resolved)
                            suggestion.also_resolved.push_back(other.id);
                        break;
                    }
                    feedback.push_back("attempt " + std::to_string(attempt) + ": " +
                                       assessment.detail);
                }
            } catch (const BackendError& e) {
                suggestion.verdict = Verdict::BackendFailed;
                suggestion.detail = e.what();
            } catch (const RatingParseError& e) {
                suggestion.verdict = Verdict::BackendFailed;
                suggestion.detail = e.what();
            }
            suggestions.push_back(std::move(suggestion));
        }
    }
    return suggestions;
}

}  // namespace minia11y
