#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "minia11y/assessor.hpp"
#include "minia11y/backends.hpp"
#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/printer.hpp"

using namespace minia11y;

namespace {

Project make_project(std::vector<std::pair<std::string, std::string>> files) {
    Project p;
    for (auto& [path, text] : files) p.files.push_back(parse_source(text, path));
    return p;
}

Project instrumented(std::vector<std::pair<std::string, std::string>> files) {
    return instrument(make_project(std::move(files))).project;
}

ScreenRef phone(const std::string& root_view) {
    return ScreenRef{root_view, DeviceConfig{}};
}

std::vector<Issue> scan_screen(const Project& project, const ScreenRef& screen) {
    UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
    return scan_scene(resolve_screen(project, hierarchy, screen.device));
}

Issue only_issue_of_kind(const std::vector<Issue>& issues, IssueKind kind) {
    for (const Issue& issue : issues)
        if (issue.kind == kind) return issue;
    REQUIRE(false);
    return {};
}

const char* kContrastScreen =
    "view Login {\n"
    "  Text(\"Forgot password\").color(#999999)\n"
    "}";

const char* kPinScreen =
    "view PinBar {\n"
    "  HStack(spacing: 4) {\n"
    "    Text(\"Add pin to map\")\n"
    "    Button(\"+\", action: addPin)\n"
    "  }\n"
    "}";

}  // namespace

TEST_CASE("verdicts have stable names") {
    CHECK(std::string(verdict_name(Verdict::Plausible)) == "Plausible");
    CHECK(std::string(verdict_name(Verdict::NewIssuesIntroduced)) ==
          "NewIssuesIntroduced");
    CHECK(std::string(verdict_name(Verdict::NotResolved)) == "NotResolved");
    CHECK(std::string(verdict_name(Verdict::FunctionalityRemoved)) ==
          "FunctionalityRemoved");
    CHECK(std::string(verdict_name(Verdict::BuildError)) == "BuildError");
    CHECK(std::string(verdict_name(Verdict::BackendFailed)) == "BackendError");
}

TEST_CASE("a contrast fix that passes the rescan is plausible") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));
    REQUIRE(issues.size() == 1);

    auto assessment = assess_patch(
        project, phone("Login"), issues[0], "Login",
        "view Login {\n  Text(\"Forgot password\").color(#626262)"
        ".axIdentifier(\"ax_0\")\n}");
    CHECK(assessment.verdict == Verdict::Plausible);
    CHECK(assessment.detail == "the issue is resolved and the scan stays clean");
    CHECK(assessment.remaining.empty());
    CHECK(assessment.introduced.empty());
    CHECK(assessment.also_resolved.empty());
    CHECK_FALSE(assessment.patch.empty());

    Project patched = apply_patch(project, assessment.patch);
    CHECK(patched.files[0].text.find("#626262") != std::string::npos);
    CHECK(patched.files[0].text.find("#999999") == std::string::npos);
}

TEST_CASE("an unchanged declaration is not resolved") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));
    std::string same = print_decl(*project.decl("Login"));

    auto assessment = assess_patch(project, phone("Login"), issues[0], "Login", same);
    CHECK(assessment.verdict == Verdict::NotResolved);
    CHECK(assessment.detail.find("the issue is still present: Contrast failed") == 0);
    CHECK(assessment.patch.empty());
    REQUIRE(assessment.remaining.size() == 1);
    CHECK(assessment.remaining[0].id == issues[0].id);
}

TEST_CASE("a half fix that lands in the nearly passed band introduces an issue") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));

    auto assessment = assess_patch(
        project, phone("Login"), issues[0], "Login",
        "view Login {\n  Text(\"Forgot password\").color(#7A7A7A)"
        ".axIdentifier(\"ax_0\")\n}");
    CHECK(assessment.verdict == Verdict::NewIssuesIntroduced);
    CHECK(assessment.detail.find("introduces new issues") != std::string::npos);
    CHECK(assessment.detail.find("Contrast nearly passed") != std::string::npos);
    REQUIRE(assessment.introduced.size() == 1);
    CHECK(assessment.introduced[0].kind == IssueKind::ContrastNearlyPassed);
}

TEST_CASE("dropping visible text or interactions removes functionality") {
    Project project = instrumented({{"pins.minui", kPinScreen}});
    auto issues = scan_screen(project, phone("PinBar"));
    Issue hit = only_issue_of_kind(issues, IssueKind::HitAreaTooSmall);

    auto text_changed = assess_patch(
        project, phone("PinBar"), hit, "PinBar",
        "view PinBar {\n"
        "  HStack(spacing: 4) {\n"
        "    Text(\"Add pin\").axIdentifier(\"ax_1\")\n"
        "    Button(\"+\", action: addPin).axIdentifier(\"ax_2\")\n"
        "  }.axIdentifier(\"ax_0\")\n"
        "}");
    CHECK(text_changed.verdict == Verdict::FunctionalityRemoved);
    CHECK(text_changed.detail ==
          "the fix removes functionality: the visible text content changed");

    auto control_dropped = assess_patch(
        project, phone("PinBar"), hit, "PinBar",
        "view PinBar {\n"
        "  HStack(spacing: 4) {\n"
        "    Text(\"Add pin to map +\").axIdentifier(\"ax_1\")\n"
        "  }.axIdentifier(\"ax_0\")\n"
        "}");
    CHECK(control_dropped.verdict == Verdict::FunctionalityRemoved);
    CHECK(control_dropped.detail.find("the interaction \"addPin\" is gone") !=
          std::string::npos);
}

TEST_CASE("broken snippets and renames are build errors") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));

    auto truncated =
        assess_patch(project, phone("Login"), issues[0], "Login", "view Login {");
    CHECK(truncated.verdict == Verdict::BuildError);
    CHECK(truncated.detail.find("does not build") != std::string::npos);

    auto renamed = assess_patch(
        project, phone("Login"), issues[0], "Login",
        "view Renamed {\n  Text(\"Forgot password\").axIdentifier(\"ax_0\")\n}");
    CHECK(renamed.verdict == Verdict::BuildError);

    auto dangling = assess_patch(
        project, phone("Login"), issues[0], "Login",
        "view Login {\n  MissingChild().axIdentifier(\"ax_0\")\n}");
    CHECK(dangling.verdict == Verdict::BuildError);
    CHECK(dangling.detail.find("does not resolve") != std::string::npos);
}

TEST_CASE("merging a tiny control with its caption keeps functionality") {
    Project project = instrumented({{"pins.minui", kPinScreen}});
    auto issues = scan_screen(project, phone("PinBar"));
    Issue hit = only_issue_of_kind(issues, IssueKind::HitAreaTooSmall);
    CHECK(hit.element == "ax_2");

    auto assessment = assess_patch(
        project, phone("PinBar"), hit, "PinBar",
        "view PinBar {\n"
        "  Button(\"Add pin to map +\", action: addPin).padding(12)"
        ".axIdentifier(\"ax_2\")\n"
        "}");
    CHECK(assessment.verdict == Verdict::Plausible);
    CHECK(assessment.remaining.empty());
}

TEST_CASE("fixing the target can resolve other issues on the side") {
    Project project = instrumented(
        {{"combo.minui",
          "view Combo {\n"
          "  Text(\"Forgot password\").color(#999999).font(size: 14)\n"
          "}"}});
    auto issues = scan_screen(project, phone("Combo"));
    REQUIRE(issues.size() == 2);
    Issue contrast = only_issue_of_kind(issues, IssueKind::ContrastFailed);
    Issue fixed_font = only_issue_of_kind(issues, IssueKind::DynamicTypeUnsupported);

    auto assessment = assess_patch(
        project, phone("Combo"), contrast, "Combo",
        "view Combo {\n"
        "  Text(\"Forgot password\").color(#626262).font(style: body)"
        ".axIdentifier(\"ax_0\")\n"
        "}");
    CHECK(assessment.verdict == Verdict::Plausible);
    REQUIRE(assessment.also_resolved.size() == 1);
    CHECK(assessment.also_resolved[0].id == fixed_font.id);
}

TEST_CASE("extra screens surface side effects of shared declarations") {
    auto files = std::vector<std::pair<std::string, std::string>>{
        {"shared.minui",
         "view Shared {\n"
         "  Text(\"Forgot password\").color(#999999)\n"
         "}\n"
         "\n"
         "view HostA {\n"
         "  Shared()\n"
         "}\n"
         "\n"
         "view HostB {\n"
         "  Shared()\n"
         "}"}};
    Project project = instrumented(files);
    auto issues_a = scan_screen(project, phone("HostA"));
    auto issues_b = scan_screen(project, phone("HostB"));
    REQUIRE(issues_a.size() == 1);
    REQUIRE(issues_b.size() == 1);
    CHECK(issues_a[0].id != issues_b[0].id);

    const char* fix =
        "view Shared {\n"
        "  Text(\"Forgot password\").color(#626262).axIdentifier(\"ax_0\")\n"
        "}";
    auto alone = assess_patch(project, phone("HostA"), issues_a[0], "Shared", fix);
    CHECK(alone.verdict == Verdict::Plausible);
    CHECK(alone.also_resolved.empty());

    auto both = assess_patch(project, phone("HostA"), issues_a[0], "Shared", fix,
                             {phone("HostB")});
    CHECK(both.verdict == Verdict::Plausible);
    REQUIRE(both.also_resolved.size() == 1);
    CHECK(both.also_resolved[0].id == issues_b[0].id);

    const char* regression =
        "view Shared {\n"
        "  Text(\"Forgot password\").color(#626262).lineLimit(1)"
        ".frame(width: 60).axIdentifier(\"ax_0\")\n"
        "}";
    auto unchecked = assess_patch(project, phone("HostA"), issues_a[0], "Shared",
                                  regression);
    CHECK(unchecked.verdict == Verdict::NewIssuesIntroduced);
    auto checked = assess_patch(project, phone("HostA"), issues_a[0], "Shared",
                                regression, {phone("HostB")});
    CHECK(checked.verdict == Verdict::NewIssuesIntroduced);
    CHECK(checked.introduced.size() == 2);
}

TEST_CASE("the heuristic loop repairs a contrast issue across attempts") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));
    REQUIRE(issues.size() == 1);

    HeuristicBackend backend;
    PromptSet prompts = PromptSet::defaults();
    auto suggestions =
        suggest_fixes(backend, prompts, project, phone("Login"), issues);
    REQUIRE(suggestions.size() == 3);

    const FixSuggestion& darken = suggestions[0];
    CHECK(darken.plan.summary ==
          "Darken the foreground color until the contrast ratio passes");
    CHECK(darken.view_name == "Login");
    CHECK(darken.relation == SnippetRelation::Self);
    REQUIRE(darken.ratings.size() == 1);
    CHECK(darken.ratings[0].score == 100);
    REQUIRE(darken.attempts.size() == 2);
    CHECK(darken.attempts[0].verdict == Verdict::NewIssuesIntroduced);
    CHECK(darken.attempts[1].verdict == Verdict::Plausible);
    CHECK(darken.verdict == Verdict::Plausible);
    CHECK(darken.fixed_view.find("#626262") != std::string::npos);
    CHECK_FALSE(darken.patch.empty());
    CHECK(darken.patch.provenance.find("attempt 2") != std::string::npos);

    const FixSuggestion& background = suggestions[1];
    CHECK(background.plan.summary == "Adjust the background color behind the text");
    CHECK(background.verdict == Verdict::NotResolved);
    CHECK(background.attempts.size() == 3);

    const FixSuggestion& headline = suggestions[2];
    CHECK(headline.plan.summary == "Increase the font size to the headline style");
    CHECK(headline.verdict == Verdict::NewIssuesIntroduced);
    CHECK(headline.attempts.size() == 3);
}

TEST_CASE("scripted feedback drives a fail twice then succeed repair") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));

    auto reply_with = [](const std::string& color) {
        return "EXPLANATION: adjust\n```minui\nview Login {\n"
               "  Text(\"Forgot password\").color(" +
               color + ").axIdentifier(\"ax_0\")\n}\n```";
    };
    nlohmann::json script = {
        {"responses",
         {
             {{"role", "plan"},
              {"reply", "1. Darken the text color\n   Rationale: contrast.\n"}},
             {{"role", "rate"}, {"reply", "SCORE: 80\nREASONING: holds the element"}},
             {{"role", "fix"}, {"match", "attempt 2:"}, {"reply", reply_with("#5A5A5A")}},
             {{"role", "fix"}, {"match", "attempt 1:"}, {"reply", reply_with("#8A8A8A")}},
             {{"role", "fix"}, {"reply", reply_with("#959595")}},
         }}};
    ScriptedBackend backend(script);
    PromptSet prompts = PromptSet::defaults();
    SuggestConfig config;
    config.plans = 1;

    auto suggestions =
        suggest_fixes(backend, prompts, project, phone("Login"), issues, config);
    REQUIRE(suggestions.size() == 1);
    const FixSuggestion& s = suggestions[0];
    REQUIRE(s.attempts.size() == 3);
    CHECK(s.attempts[0].verdict == Verdict::NotResolved);
    CHECK(s.attempts[0].detail.find("ratio 3.00") != std::string::npos);
    CHECK(s.attempts[1].verdict == Verdict::NotResolved);
    CHECK(s.attempts[1].detail.find("ratio 3.45") != std::string::npos);
    CHECK(s.attempts[2].verdict == Verdict::Plausible);
    CHECK(s.verdict == Verdict::Plausible);
    CHECK(s.fixed_view.find("#5A5A5A") != std::string::npos);
}

TEST_CASE("a backend dying mid plan fails only that plan") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));

    nlohmann::json script = {
        {"responses",
         {
             {{"role", "plan"},
              {"reply", "1. Darken the text color\n   Rationale: contrast.\n"}},
             {{"role", "rate"}, {"reply", "SCORE: 80\nREASONING: r"}},
         }}};
    ScriptedBackend backend(script);
    PromptSet prompts = PromptSet::defaults();
    SuggestConfig config;
    config.plans = 1;

    auto suggestions =
        suggest_fixes(backend, prompts, project, phone("Login"), issues, config);
    REQUIRE(suggestions.size() == 1);
    CHECK(suggestions[0].verdict == Verdict::BackendFailed);
    CHECK(suggestions[0].attempts.empty());
    CHECK(suggestions[0].detail.find("no scripted response") != std::string::npos);
}

TEST_CASE("a backend that never answers propagates before any suggestion") {
    Project project = instrumented({{"login.minui", kContrastScreen}});
    auto issues = scan_screen(project, phone("Login"));

    nlohmann::json script = {{"responses", nlohmann::json::array()}};
    ScriptedBackend backend(script);
    PromptSet prompts = PromptSet::defaults();
    CHECK_THROWS_AS(
        suggest_fixes(backend, prompts, project, phone("Login"), issues),
        BackendError);
}
