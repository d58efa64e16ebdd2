// Acceptance gate for the whole pipeline. Each check prints exactly one
// PASS/FAIL line; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "minia11y/agents.hpp"
#include "minia11y/assessor.hpp"
#include "minia11y/backends.hpp"
#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/patch.hpp"
#include "minia11y/printer.hpp"
#include "minia11y/prompts.hpp"
#include "minia11y/run.hpp"
#include "minia11y/scanner.hpp"

using namespace minia11y;
namespace fs = std::filesystem;

namespace {

const fs::path kRepo = MINIA11Y_REPO_ROOT;
int failures = 0;

void report(bool ok, const std::string& what) {
    std::cout << (ok ? "PASS: " : "FAIL: ") << what << "\n";
    if (!ok) ++failures;
}

void report_error(const std::string& what, const std::exception& e) {
    report(false, what + " (threw: " + e.what() + ")");
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("/tmp/minia11y_acceptance") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Structure-only random projects: a DAG of views (references point forward
// and are used once), containers up to depth 6, at most 30 views.
class StructureGen {
  public:
    explicit StructureGen(unsigned seed) : rng_(seed) {}

    Project generate() {
        view_count_ = pick(2, 30);
        referenced_.assign(view_count_, false);
        std::string text;
        for (int i = 0; i < view_count_; ++i) {
            if (!text.empty()) text += "\n";
            text += "view View" + std::to_string(i) + " {\n" + node(2, 0, i) + "}\n";
        }
        Project project;
        project.files.push_back(parse_source(text, "gen.minui"));
        return instrument(project).project;
    }

    std::string root_view() const { return "View0"; }

  private:
    int pick(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    std::string leaf(int decl_index) {
        if (pick(1, 100) <= 30) {
            std::vector<int> avail;
            for (int j = decl_index + 1; j < view_count_; ++j)
                if (!referenced_[j]) avail.push_back(j);
            if (!avail.empty()) {
                int target = avail[pick(0, static_cast<int>(avail.size()) - 1)];
                referenced_[target] = true;
                return "View" + std::to_string(target) + "()";
            }
        }
        switch (pick(0, 3)) {
            case 0: return "Text(\"Sample\")";
            case 1: return "Image(\"pin\")";
            case 2: return "Button(\"Go\", action: go)";
            default: return "Spacer";
        }
    }

    std::string node(int indent, int depth, int decl_index) {
        std::string pad(indent, ' ');
        if (depth < 6 && pick(1, 100) <= (depth == 0 ? 80 : 40)) {
            std::string out = pad + "VStack {\n";
            for (int i = pick(1, 3); i > 0; --i)
                out += node(indent + 2, depth + 1, decl_index);
            return out + pad + "}\n";
        }
        return pad + leaf(decl_index) + "\n";
    }

    std::mt19937 rng_;
    int view_count_ = 0;
    std::vector<bool> referenced_;
};

std::vector<std::pair<std::string, SnippetRelation>> brute_force_candidates(
    const UiHierarchy& hierarchy, const ElementId& target) {
    std::vector<std::pair<std::string, SnippetRelation>> expected;
    std::set<std::string> taken;
    const ElementRef& ref = hierarchy.at(target);
    expected.emplace_back(ref.declared_in, SnippetRelation::Self);
    taken.insert(ref.declared_in);
    if (ref.parent) {
        const std::string& up = hierarchy.at(*ref.parent).declared_in;
        if (taken.insert(up).second)
            expected.emplace_back(up, SnippetRelation::Parent);
    }
    for (const ElementId& below : hierarchy.subtree(target))
        if (taken.insert(hierarchy.at(below).declared_in).second)
            expected.emplace_back(hierarchy.at(below).declared_in,
                                  SnippetRelation::Descendant);
    return expected;
}

// Interactions and visible glyphs across every screen of a manifest;
// whitespace is layout, not content.
std::pair<std::vector<std::string>, std::string> functionality(
    const Project& project, const Manifest& manifest) {
    std::vector<std::string> actions;
    std::string glyphs;
    for (const ScreenSpec& screen : manifest.screens) {
        UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
        Scene scene =
            resolve_screen(project, hierarchy, manifest.devices.front());
        for (const RenderedElement& element : scene.elements) {
            if (!element.action.empty()) actions.push_back(element.action);
            if (element.kind == NodeKind::Text || element.kind == NodeKind::Button ||
                element.kind == NodeKind::Toggle)
                for (char c : element.text)
                    if (!std::isspace(static_cast<unsigned char>(c)))
                        glyphs += c;
        }
    }
    std::sort(actions.begin(), actions.end());
    std::sort(glyphs.begin(), glyphs.end());
    return {actions, glyphs};
}

struct AuditOutcome {
    int plausible = 0;
    int discrepancies = 0;
};

// Independent re-check of every accepted suggestion: apply the stored diff to
// the stored snapshot, re-scan every screen on every device, and require the
// target issue gone, no new issue ids anywhere, and functionality intact.
AuditOutcome audit_run(const fs::path& run_dir) {
    AuditOutcome outcome;
    RunStore store(run_dir);
    Manifest manifest = store.manifest();
    Project snapshot = store.project();

    std::map<std::string, std::set<std::string>> before;  // screen@device -> ids
    auto scan_ids = [&](const Project& project,
                        std::map<std::string, std::set<std::string>>* out) {
        for (const ScreenSpec& screen : manifest.screens) {
            UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
            for (const DeviceConfig& device : manifest.devices) {
                Scene scene = resolve_screen(project, hierarchy, device);
                auto& ids = (*out)[screen.name + "@" + device.name];
                for (const Issue& issue : scan_scene(scene)) ids.insert(issue.id);
            }
        }
    };
    scan_ids(snapshot, &before);
    auto base_functionality = functionality(snapshot, manifest);

    for (const auto& entry :
         fs::recursive_directory_iterator(run_dir / "suggestions")) {
        if (entry.path().extension() != ".json") continue;
        nlohmann::ordered_json doc =
            nlohmann::ordered_json::parse(read_text(entry.path()));
        if (doc.at("verdict") != "Plausible") continue;
        outcome.plausible += 1;

        fs::path diff_path = entry.path();
        diff_path.replace_extension(".diff");
        Patch patch = parse_patch(read_text(diff_path));
        Project patched = instrument(apply_patch(snapshot, patch)).project;

        std::map<std::string, std::set<std::string>> after;
        scan_ids(patched, &after);
        std::string target = doc.at("issue").at("id");
        bool ok = true;
        for (const auto& [where, ids] : after) {
            if (ids.count(target)) ok = false;
            for (const std::string& id : ids)
                if (!before.at(where).count(id)) ok = false;  // a new defect
        }
        if (functionality(patched, manifest) != base_functionality) ok = false;
        if (!ok) outcome.discrepancies += 1;
    }
    return outcome;
}

std::vector<Issue> scan_screen(const Project& project, const ScreenRef& screen) {
    UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
    return scan_scene(resolve_screen(project, hierarchy, screen.device));
}

}  // namespace

int main() {
    fs::path landmarks_run;
    fs::path themepicker_run;

    // 1. The audit fixture seeds exactly one defect of each kind and the
    //    scanner reports precisely those nine.
    try {
        auto start = Clock::now();
        ScanOptions options;
        options.project_dir = kRepo / "fixtures" / "landmarks9";
        options.out_dir = landmarks_run = fresh_dir("landmarks");
        ScanSummary summary = run_scan(options);
        double elapsed = seconds_since(start);

        std::multiset<std::string> kinds;
        for (const auto& entry : summary.reports.at("reports")[0].at("issues"))
            kinds.insert(entry.at("kind"));
        std::multiset<std::string> expected = {
            "TextClipped",
            "ContrastFailed",
            "ContrastNearlyPassed",
            "DynamicTypePartiallyUnsupported",
            "DynamicTypeUnsupported",
            "ElementHasNoDescription",
            "LabelNotHumanReadable",
            "PotentiallyInaccessibleText",
            "HitAreaTooSmall",
        };
        report(summary.issues == 9 && kinds == expected && elapsed < 1.0,
               "scanner reports exactly one issue of each of the 9 kinds on the "
               "seeded fixture (" + fmt_seconds(elapsed) + ", limit 1s)");
    } catch (const std::exception& e) {
        report_error("scanner oracle on the seeded fixture", e);
    }

    // 2. Contrast arithmetic: the black/white anchor and an independent
    //    evaluation of the luminance formula.
    try {
        auto linear = [](int channel) {
            double v = channel / 255.0;
            return v <= 0.03928 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
        };
        double grey = 0.2126 * linear(0x77) + 0.7152 * linear(0x77) +
                      0.0722 * linear(0x77);
        double expected = 1.05 / (grey + 0.05);
        bool anchors = std::abs(contrast_ratio("#FFFFFF", "#000000") - 21.0) < 1e-9;
        bool formula =
            std::abs(contrast_ratio("#777777", "#FFFFFF") - expected) < 1e-6;
        report(anchors && formula,
               "contrast ratios hit the 21.0 anchor and match an independent "
               "luminance evaluation within 1e-6");
    } catch (const std::exception& e) {
        report_error("contrast arithmetic", e);
    }

    // 3. Fix localization equals a brute-force search over 100 random
    //    projects of up to 30 views and depth 6.
    try {
        auto start = Clock::now();
        int projects = 0;
        int mismatches = 0;
        for (int round = 0; projects < 100 && round < 300; ++round) {
            StructureGen gen(42000 + round);
            Project project = gen.generate();
            UiHierarchy hierarchy = build_hierarchy(project, gen.root_view());
            if (hierarchy.preorder.empty()) continue;  // a bare Spacer screen
            projects += 1;
            for (const ElementId& target : hierarchy.preorder) {
                auto expected = brute_force_candidates(hierarchy, target);
                auto got = candidate_snippets(project, hierarchy, target);
                if (got.size() != expected.size()) { mismatches += 1; continue; }
                for (std::size_t i = 0; i < got.size(); ++i)
                    if (got[i].view_name != expected[i].first ||
                        got[i].relation != expected[i].second)
                        mismatches += 1;
            }
        }
        double elapsed = seconds_since(start);
        report(projects >= 100 && mismatches == 0 && elapsed < 10.0,
               "candidate localization matches brute force on " +
                   std::to_string(projects) + " random projects (" +
                   fmt_seconds(elapsed) + ", limit 10s)");
    } catch (const std::exception& e) {
        report_error("localization equivalence", e);
    }

    // 4. The heuristic backend repairs the fixture end to end: every issue
    //    ends up with at least one plausible suggestion.
    try {
        auto start = Clock::now();
        SuggestOptions options;
        options.run_dir = landmarks_run;
        SuggestSummary summary = run_suggest(options);
        double elapsed = seconds_since(start);
        report(summary.issues == 9 && summary.issues_with_plausible == 9 &&
                   !summary.backend_gave_up && elapsed < 30.0,
               "heuristic repair finds a plausible fix for 9 of 9 fixture "
               "issues (" + fmt_seconds(elapsed) + ", limit 30s)");
    } catch (const std::exception& e) {
        report_error("end-to-end heuristic repair", e);
    }

    // 5. The bounded retry loop: a fixer that fails twice then succeeds is
    //    accepted with three attempts, and rejected when capped at two.
    try {
        Project project;
        project.files.push_back(parse_source(
            "view Login {\n  Text(\"Forgot password\").color(#999999)\n}\n",
            "login.minui"));
        project = instrument(project).project;
        ScreenRef screen{"Login", DeviceConfig{}};
        std::vector<Issue> issues = scan_screen(project, screen);

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
                 {{"role", "rate"}, {"reply", "SCORE: 80\nREASONING: fits"}},
                 {{"role", "fix"}, {"match", "attempt 2:"},
                  {"reply", reply_with("#5A5A5A")}},
                 {{"role", "fix"}, {"match", "attempt 1:"},
                  {"reply", reply_with("#8A8A8A")}},
                 {{"role", "fix"}, {"reply", reply_with("#959595")}},
             }}};
        ScriptedBackend backend(script);
        PromptSet prompts = PromptSet::defaults();

        SuggestConfig three;
        three.plans = 1;
        three.iterations = 3;
        auto accepted =
            suggest_fixes(backend, prompts, project, screen, issues, three);
        SuggestConfig two;
        two.plans = 1;
        two.iterations = 2;
        auto rejected =
            suggest_fixes(backend, prompts, project, screen, issues, two);

        bool ok = accepted.size() == 1 && accepted[0].attempts.size() == 3 &&
                  accepted[0].verdict == Verdict::Plausible &&
                  rejected.size() == 1 && rejected[0].attempts.size() == 2 &&
                  rejected[0].verdict != Verdict::Plausible;
        report(ok,
               "a fix that lands on the third try is accepted with 3 attempts "
               "and rejected when the loop is capped at 2");
    } catch (const std::exception& e) {
        report_error("bounded retry loop semantics", e);
    }

    // 6. Every suggestion marked plausible survives an independent audit:
    //    re-apply the stored diff, re-scan all screens, re-check behavior.
    try {
        ScanOptions options;
        options.project_dir = kRepo / "fixtures" / "themepicker";
        options.out_dir = themepicker_run = fresh_dir("themepicker");
        run_scan(options);
        SuggestOptions suggest_options;
        suggest_options.run_dir = themepicker_run;
        run_suggest(suggest_options);

        AuditOutcome landmarks = audit_run(landmarks_run);
        AuditOutcome themepicker = audit_run(themepicker_run);
        int plausible = landmarks.plausible + themepicker.plausible;
        int discrepancies = landmarks.discrepancies + themepicker.discrepancies;
        report(plausible >= 25 && discrepancies == 0,
               "all " + std::to_string(plausible) +
                   " plausible suggestions survive an independent apply and "
                   "re-scan audit with zero discrepancies");
    } catch (const std::exception& e) {
        report_error("plausibility audit", e);
    }

    // 7. Source handling algebra: byte-exact round trips on the fixtures,
    //    apply/revert identity, idempotent and total instrumentation.
    try {
        bool ok = true;
        for (const auto& entry :
             fs::recursive_directory_iterator(kRepo / "fixtures")) {
            if (entry.path().extension() != ".minui") continue;
            std::string text = read_text(entry.path());
            if (print_source(parse_source(text, entry.path().filename())) != text)
                ok = false;
        }
        for (int round = 0; round < 30; ++round) {
            StructureGen gen(91000 + round);
            Project project = gen.generate();

            std::set<std::string> seen;
            for (const SourceFile& file : project.files)
                for (const ViewDecl& decl : file.decls) {
                    std::vector<const UiNode*> stack{&decl.body};
                    while (!stack.empty()) {
                        const UiNode* node = stack.back();
                        stack.pop_back();
                        for (const UiNode& child : node->children)
                            stack.push_back(&child);
                        if (node->kind == NodeKind::Spacer) continue;
                        auto id = element_identifier(*node);
                        if (!id || !seen.insert(*id).second) ok = false;
                    }
                }

            Project again = instrument(project).project;
            for (std::size_t i = 0; i < again.files.size(); ++i)
                if (print_source(again.files[i]) != print_source(project.files[i]))
                    ok = false;

            const SourceFile& file = project.files.front();
            const ViewDecl& decl = file.decls.front();
            ViewDecl modified = decl;
            modified.source = nullptr;
            modified.body = with_appended_modifier(
                decl.body,
                Modifier{"padding", {Arg{"", Literal::num(6)}}, {}, nullptr});
            Patch patch = compute_patch(file, print_decl(modified), decl.name);
            std::string patched = apply_patch_text(file.text, patch);
            if (apply_patch_text(patched, invert_patch(patch)) != file.text)
                ok = false;
        }
        report(ok,
               "parse/print round trips are byte exact, patches revert cleanly "
               "and instrumentation is idempotent with unique ids");
    } catch (const std::exception& e) {
        report_error("source handling algebra", e);
    }

    // 8. Cross-file localization: the defect sits in a row view declared in
    //    another file than the screen; selection picks the row declaration.
    try {
        Manifest manifest =
            load_manifest(kRepo / "fixtures" / "themepicker" / "minui.json");
        Project project =
            instrument(load_project(manifest, kRepo / "fixtures" / "themepicker"))
                .project;
        ScreenRef screen{"ThemePicker", DeviceConfig{}};
        std::vector<Issue> issues = scan_screen(project, screen);
        const Issue* contrast = nullptr;
        for (const Issue& issue : issues)
            if (issue.kind == IssueKind::ContrastFailed) contrast = &issue;

        bool ok = contrast != nullptr;
        if (ok) {
            UiHierarchy hierarchy = build_hierarchy(project, "ThemePicker");
            auto candidates =
                candidate_snippets(project, hierarchy, contrast->element);
            HeuristicBackend backend;
            PromptSet prompts = PromptSet::defaults();
            FixPlan plan;
            plan.index = 1;
            plan.summary = "Darken the text color";
            plan.rationale = "raise the contrast ratio above the requirement";
            SnippetSelection selection =
                select_snippet(backend, prompts, *contrast, plan, candidates);
            const CandidateSnippet& chosen = candidates[selection.chosen];
            ok = chosen.view_name == "ThemeRow" &&
                 chosen.relation == SnippetRelation::Self &&
                 project.decl_path("ThemeRow") != project.decl_path("ThemePicker");
        }
        report(ok,
               "localization picks the row declaration in the second file, not "
               "the screen that references it");
    } catch (const std::exception& e) {
        report_error("cross-file localization", e);
    }

    // 9. The regrouping repair: the undersized control merges with its
    //    sibling text into one labeled interactive element and is accepted.
    try {
        nlohmann::ordered_json issues = nlohmann::ordered_json::parse(
            read_text(landmarks_run / "issues.json"));
        std::string hit_id;
        for (const auto& entry : issues.at("reports")[0].at("issues"))
            if (entry.at("kind") == "HitAreaTooSmall") hit_id = entry.at("id");

        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(read_text(
            landmarks_run / "suggestions" / hit_id / "plan2.json"));
        bool ok =
            doc.at("plan").at("summary") ==
                "Merge the control with its sibling text into one labeled "
                "control" &&
            doc.at("verdict") == "Plausible";

        if (ok) {
            ViewDecl fixed = parse_view_decl(doc.at("fixedView").get<std::string>());
            const UiNode* merged = nullptr;
            std::vector<const UiNode*> stack{&fixed.body};
            while (!stack.empty()) {
                const UiNode* node = stack.back();
                stack.pop_back();
                for (const UiNode& child : node->children) stack.push_back(&child);
                if (node->kind == NodeKind::Button &&
                    node->arg_named("action")->value.text == "addPin")
                    merged = node;
            }
            ok = merged != nullptr &&
                 merged->arg_positional()->value.text == "Add pin to map +" &&
                 element_identifier(*merged) == std::string("ax_12");

            // The patched screen must not flag the control again.
            Patch patch = parse_patch(read_text(
                landmarks_run / "suggestions" / hit_id / "plan2.diff"));
            RunStore store(landmarks_run);
            Project patched =
                instrument(apply_patch(store.project(), patch)).project;
            for (const Issue& issue :
                 scan_screen(patched, ScreenRef{"AuditScreen", DeviceConfig{}}))
                if (issue.kind == IssueKind::HitAreaTooSmall) ok = false;
        }
        report(ok,
               "the undersized control is merged with its sibling text into one "
               "labeled control and accepted");
    } catch (const std::exception& e) {
        report_error("regrouping repair", e);
    }

    std::cout << (failures == 0 ? "all acceptance checks passed\n"
                                : std::to_string(failures) + " check(s) failed\n");
    return failures;
}
