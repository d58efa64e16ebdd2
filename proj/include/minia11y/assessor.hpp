#pragma once

#include <string>
#include <vector>

#include "minia11y/agents.hpp"
#include "minia11y/ast.hpp"
#include "minia11y/patch.hpp"
#include "minia11y/render.hpp"
#include "minia11y/scanner.hpp"

namespace minia11y {

/// Outcome of trying one patch, or of a whole plan. Listed best-first; when
/// several apply the worst one wins (a patch that fails to build is a
/// BuildError no matter what else it would have changed).
enum class Verdict {
    Plausible,             // target issue gone, nothing broken, nothing new
    NewIssuesIntroduced,   // target issue gone but the scan reports new ones
    NotResolved,           // the target issue is still reported
    FunctionalityRemoved,  // visible text or interactions changed
    BuildError,            // patch does not apply, parse or resolve
    BackendFailed,         // the backend died while working on this plan
};

const char* verdict_name(Verdict verdict);

/// One screen to lay out and scan: a root view on a device.
struct ScreenRef {
    std::string root_view;
    DeviceConfig device;
};

struct PatchAssessment {
    Verdict verdict = Verdict::BuildError;
    std::string detail;  // one feedback-ready sentence
    Patch patch;         // empty when the snippet never became a patch
    std::vector<Issue> remaining;   // all issues found after the patch
    std::vector<Issue> introduced;  // remaining issues that are new
    /// Pre-existing issues other than the target that the patch also fixed.
    /// Informational: they never block a Plausible verdict.
    std::vector<Issue> also_resolved;
};

/// Replaces declaration `view_name` with `patched_view` on a copy of
/// `project`, re-instruments, re-renders and re-scans `screen` (plus
/// `also_check`), and grades the result. Functionality must be preserved:
/// the multiset of interaction action names and the multiset of visible
/// non-whitespace characters across the checked screens may not change.
PatchAssessment assess_patch(const Project& project, const ScreenRef& screen,
                             const Issue& target, const std::string& view_name,
                             const std::string& patched_view,
                             const std::vector<ScreenRef>& also_check = {});

struct SuggestConfig {
    int plans = 3;       // alternative strategies per issue
    int iterations = 3;  // repair attempts per plan
    int topk = 3;        // localization shortlist size
    /// Extra screens re-scanned after each patch. By default only the
    /// issue's own screen is checked; shared declarations can affect others.
    std::vector<ScreenRef> rescan;
};

struct FixAttempt {
    int number = 1;
    FixDraft draft;
    Verdict verdict = Verdict::BuildError;
    std::string detail;
};

/// Everything produced for one (issue, plan) pair.
struct FixSuggestion {
    Issue issue;
    FixPlan plan;
    std::string view_name;  // declaration the fix edits
    SnippetRelation relation = SnippetRelation::Self;
    std::vector<SnippetRating> ratings;  // localization scores, candidate order
    std::vector<FixAttempt> attempts;
    Verdict verdict = Verdict::BackendFailed;  // final verdict (last attempt)
    std::string detail;
    Patch patch;             // the accepted patch when verdict is Plausible
    std::string fixed_view;  // accepted rewritten declaration text
    std::vector<std::string> also_resolved;  // ids of other issues fixed too
};

/// Runs the plan / localize / fix loop for every issue. Each plan gets up to
/// `iterations` attempts; assessment feedback from failed attempts is passed
/// back to the fixer verbatim and the first Plausible attempt stops the
/// plan's loop. A backend failure mid-plan fails that plan only; a backend
/// failure before any suggestion was produced propagates as BackendError.
std::vector<FixSuggestion> suggest_fixes(Backend& backend, const PromptSet& prompts,
                                         const Project& project,
                                         const ScreenRef& screen,
                                         const std::vector<Issue>& issues,
                                         const SuggestConfig& config = {});

}  // namespace minia11y
