#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "minia11y/errors.hpp"
#include "minia11y/prompts.hpp"
#include "minia11y/run.hpp"

using namespace minia11y;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const fs::path kRepo = MINIA11Y_REPO_ROOT;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("/tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ordered_json read_json_file(const fs::path& path) {
    return ordered_json::parse(read_text(path));
}

std::vector<std::string> relative_names(const std::vector<fs::path>& paths,
                                        const fs::path& root) {
    std::vector<std::string> out;
    for (const fs::path& path : paths)
        out.push_back(fs::relative(path, root).generic_string());
    return out;
}

ScanSummary scan_fixture(const std::string& fixture, const fs::path& out) {
    ScanOptions options;
    options.project_dir = kRepo / "fixtures" / fixture;
    options.out_dir = out;
    return run_scan(options);
}

std::map<std::string, int> verdict_histogram(const fs::path& run_dir) {
    std::map<std::string, int> out;
    for (const auto& entry :
         fs::recursive_directory_iterator(run_dir / "suggestions"))
        if (entry.path().extension() == ".json")
            out[read_json_file(entry.path()).at("verdict")] += 1;
    return out;
}

}  // namespace

TEST_CASE("manifest parsing fills defaults and rejects bad shapes") {
    Manifest m = parse_manifest(ordered_json::parse(
        R"({"name": "demo", "screens": [{"rootView": "Home"}]})"));
    CHECK(m.name == "demo");
    CHECK(m.source_glob == "*.minui");
    REQUIRE(m.screens.size() == 1);
    CHECK(m.screens[0].name == "Home");
    CHECK(m.screens[0].root_view == "Home");
    REQUIRE(m.devices.size() == 1);
    CHECK(m.devices[0].name == "phone");
    CHECK(m.devices[0].width == 390.0);
    CHECK(m.devices[0].category == ContentSizeCategory::L);

    auto bad = [](const char* text) {
        CHECK_THROWS_AS(parse_manifest(ordered_json::parse(text)), ManifestError);
    };
    bad(R"("just a string")");
    bad(R"({"screens": [{"rootView": "Home"}]})");
    bad(R"({"name": "", "screens": [{"rootView": "Home"}]})");
    bad(R"({"name": "demo", "screens": []})");
    bad(R"({"name": "demo", "screens": [{"name": "x"}]})");
    bad(R"({"name": "demo", "screens": [{"rootView": "A"}, {"rootView": "A"}]})");
    bad(R"({"name": "demo", "screens": [{"rootView": "A"}],
            "devices": [{"name": "p", "contentSize": "huge"}]})");
    bad(R"({"name": "demo", "screens": [{"rootView": "A"}],
            "devices": [{"name": "p"}, {"name": "p"}]})");
    bad(R"({"name": "demo", "screens": [{"rootView": "A"}],
            "devices": [{"name": "p", "width": 0}]})");
    bad(R"({"name": "demo", "screens": [{"rootView": "A"}], "devices": []})");
}

TEST_CASE("manifest json round trips") {
    Manifest m;
    m.name = "trip";
    m.source_glob = "src/**/*.minui";
    m.screens = {{"main", "Main"}, {"detail", "Detail"}};
    DeviceConfig tablet;
    tablet.name = "tablet";
    tablet.width = 820;
    tablet.height = 1180;
    tablet.category = ContentSizeCategory::XL;
    m.devices = {DeviceConfig{}, tablet};

    Manifest back = parse_manifest(manifest_to_json(m));
    CHECK(back.name == m.name);
    CHECK(back.source_glob == m.source_glob);
    REQUIRE(back.screens.size() == 2);
    CHECK(back.screens[1].name == "detail");
    REQUIRE(back.devices.size() == 2);
    CHECK(back.devices[1].width == 820.0);
    CHECK(back.devices[1].category == ContentSizeCategory::XL);
}

TEST_CASE("source globs stay inside path segments unless doubled") {
    fs::path root = fresh_dir("minia11y_glob_test");
    write_text(root / "a.minui", "view A {\n  Spacer\n}\n");
    write_text(root / "sub/b.minui", "view B {\n  Spacer\n}\n");
    write_text(root / "sub/deep/c.minui", "view C {\n  Spacer\n}\n");
    write_text(root / "notes.txt", "not a source\n");

    CHECK(relative_names(glob_sources(root, "*.minui"), root) ==
          std::vector<std::string>{"a.minui"});
    CHECK(relative_names(glob_sources(root, "**/*.minui"), root) ==
          std::vector<std::string>{"a.minui", "sub/b.minui", "sub/deep/c.minui"});
    CHECK(relative_names(glob_sources(root, "sub/*.minui"), root) ==
          std::vector<std::string>{"sub/b.minui"});
    CHECK(relative_names(glob_sources(root, "?.minui"), root) ==
          std::vector<std::string>{"a.minui"});
    CHECK(glob_sources(root, "*.swift").empty());
}

TEST_CASE("project loading cross-validates the declarations") {
    Manifest m;
    m.name = "bad";
    m.screens = {{"home", "Home"}};

    fs::path dup = fresh_dir("minia11y_dup_views");
    write_text(dup / "one.minui", "view Home {\n  Spacer\n}\n");
    write_text(dup / "two.minui", "view Home {\n  Spacer\n}\n");
    CHECK_THROWS_WITH_AS(load_project(m, dup),
                         "manifest error: view Home is declared in both one.minui and two.minui",
                         ManifestError);

    fs::path dangling = fresh_dir("minia11y_dangling_ref");
    write_text(dangling / "app.minui",
               "view Home {\n  VStack(spacing: 8) {\n    Missing()\n  }\n}\n");
    CHECK_THROWS_WITH_AS(
        load_project(m, dangling),
        "manifest error: view Home in app.minui references undeclared view Missing",
        ManifestError);

    fs::path missing_root = fresh_dir("minia11y_missing_root");
    write_text(missing_root / "app.minui", "view Other {\n  Spacer\n}\n");
    CHECK_THROWS_WITH_AS(load_project(m, missing_root),
                         "manifest error: screen \"home\" names unknown root view Home",
                         ManifestError);

    fs::path empty = fresh_dir("minia11y_no_sources");
    CHECK_THROWS_AS(load_project(m, empty), ManifestError);
}

TEST_CASE("the prompt templates shipped on disk match the built-ins") {
    PromptSet defaults = PromptSet::defaults();
    PromptSet shipped = PromptSet::load(kRepo / "prompts");
    CHECK(shipped.system == defaults.system);
    CHECK(shipped.planner == defaults.planner);
    CHECK(shipped.rater == defaults.rater);
    CHECK(shipped.comparer == defaults.comparer);
    CHECK(shipped.fixer == defaults.fixer);
}

TEST_CASE("scan fills the run store and the rescan is stable") {
    fs::path out = fresh_dir("minia11y_scan_landmarks");
    ScanSummary summary = scan_fixture("landmarks9", out);
    CHECK(summary.screens == 1);
    CHECK(summary.issues == 9);

    CHECK(fs::exists(out / "minui.json"));
    CHECK(fs::exists(out / "log.jsonl"));
    std::string snapshot = read_text(out / "project" / "app.minui");
    CHECK(snapshot.find(".axIdentifier(\"ax_0\")") != std::string::npos);
    CHECK(snapshot.find(".axIdentifier(\"ax_12\")") != std::string::npos);

    ordered_json issues = read_json_file(out / "issues.json");
    CHECK(issues.at("project") == "landmarks");
    REQUIRE(issues.at("reports").size() == 1);
    const auto& report = issues.at("reports")[0];
    CHECK(report.at("screen") == "audit");
    CHECK(report.at("device") == "phone");
    REQUIRE(report.at("issues").size() == 9);
    CHECK(report.at("issues")[0].at("kind") == "TextClipped");
    CHECK(report.at("issues")[0].at("element") == "ax_1");
    CHECK(report.at("issues")[8].at("kind") == "HitAreaTooSmall");

    // Scanning the already instrumented snapshot yields the same nine issues:
    // identifiers are stable, so issue ids are too.
    fs::path again_src = fresh_dir("minia11y_scan_again_src");
    fs::copy(out / "project", again_src);
    fs::copy_file(out / "minui.json", again_src / "minui.json");
    fs::path again_out = fresh_dir("minia11y_scan_again_out");
    ScanOptions options;
    options.project_dir = again_src;
    options.out_dir = again_out;
    ScanSummary rescan = run_scan(options);
    CHECK(rescan.issues == 9);
    CHECK(read_json_file(again_out / "issues.json").at("reports") ==
          issues.at("reports"));
}

TEST_CASE("scan walks the whole device matrix") {
    fs::path out = fresh_dir("minia11y_scan_themepicker");
    ScanSummary summary = scan_fixture("themepicker", out);
    CHECK(summary.screens == 2);
    CHECK(summary.issues == 3);

    ordered_json issues = read_json_file(out / "issues.json");
    REQUIRE(issues.at("reports").size() == 2);
    const auto& phone = issues.at("reports")[0];
    const auto& tablet = issues.at("reports")[1];
    CHECK(phone.at("device") == "phone");
    CHECK(tablet.at("device") == "tablet");

    // 17pt text needs 4.5:1 and #8A8A8A only reaches 3.45; at XL the same
    // text renders above 18pt where 3.0:1 suffices, so the tablet is clean.
    std::set<std::string> phone_kinds;
    for (const auto& entry : phone.at("issues"))
        phone_kinds.insert(entry.at("kind"));
    CHECK(phone_kinds ==
          std::set<std::string>{"ContrastFailed", "HitAreaTooSmall"});
    REQUIRE(tablet.at("issues").size() == 1);
    CHECK(tablet.at("issues")[0].at("kind") == "HitAreaTooSmall");

    // The undersized toggle is the same defect on both devices.
    std::set<std::string> ids;
    for (const auto& report : issues.at("reports"))
        for (const auto& entry : report.at("issues"))
            ids.insert(entry.at("id"));
    CHECK(ids.size() == 2);
}

TEST_CASE("a clean project scans clean") {
    fs::path out = fresh_dir("minia11y_scan_clean");
    ScanSummary summary = scan_fixture("clean", out);
    CHECK(summary.screens == 1);
    CHECK(summary.issues == 0);
    ordered_json issues = read_json_file(out / "issues.json");
    CHECK(issues.at("reports")[0].at("issues").empty());
}

TEST_CASE("suggest requires a scanned run") {
    fs::path dir = fresh_dir("minia11y_empty_run");
    RunStore store(dir);
    CHECK_THROWS_AS(store.project(), ManifestError);
    CHECK_THROWS_AS(store.issues(), ManifestError);

    SuggestOptions options;
    options.run_dir = dir;
    CHECK_THROWS_AS(run_suggest(options), ManifestError);
}

TEST_CASE("suggest dedupes issues seen on several devices") {
    fs::path run = fresh_dir("minia11y_suggest_themepicker");
    scan_fixture("themepicker", run);

    SuggestOptions options;
    options.run_dir = run;
    options.jobs = 1;
    SuggestSummary summary = run_suggest(options);
    CHECK(summary.issues == 2);  // three sightings, two distinct defects
    CHECK(summary.suggestions == 6);
    CHECK(summary.issues_with_plausible == 2);
    CHECK_FALSE(summary.backend_gave_up);

    int dirs = 0;
    for (const auto& entry : fs::directory_iterator(run / "suggestions")) {
        CHECK(entry.is_directory());
        dirs += 1;
    }
    CHECK(dirs == 2);

    // Replacing the row with one merged control also removes the text whose
    // contrast failed; the suggestion records that side effect.
    bool merge_seen = false;
    for (const auto& entry :
         fs::recursive_directory_iterator(run / "suggestions")) {
        if (entry.path().extension() != ".json") continue;
        ordered_json doc = read_json_file(entry.path());
        if (doc.at("plan").at("summary") !=
            "Merge the control with its sibling text into one labeled control")
            continue;
        merge_seen = true;
        CHECK(doc.at("verdict") == "Plausible");
        REQUIRE(doc.at("alsoResolved").size() == 1);
        CHECK(doc.at("issue").at("kind") == "HitAreaTooSmall");
    }
    CHECK(merge_seen);
}

TEST_CASE("suggest honors the issue filter and rejects unknown ids") {
    fs::path run = fresh_dir("minia11y_suggest_filtered");
    scan_fixture("themepicker", run);
    ordered_json issues = read_json_file(run / "issues.json");
    std::string contrast_id;
    for (const auto& entry : issues.at("reports")[0].at("issues"))
        if (entry.at("kind") == "ContrastFailed") contrast_id = entry.at("id");
    REQUIRE_FALSE(contrast_id.empty());

    SuggestOptions options;
    options.run_dir = run;
    options.jobs = 1;
    options.issue_filter = {contrast_id};
    SuggestSummary summary = run_suggest(options);
    CHECK(summary.issues == 1);
    CHECK(summary.suggestions == 3);
    CHECK(fs::exists(run / "suggestions" / contrast_id / "plan1.json"));
    CHECK(fs::exists(run / "suggestions" / contrast_id / "plan1.diff"));

    options.issue_filter = {"0000000000000000"};
    CHECK_THROWS_WITH_AS(run_suggest(options),
                         "manifest error: issue 0000000000000000 is not part of this run",
                         ManifestError);
}

TEST_CASE("a backend with no answers fails the run before any artifact") {
    fs::path run = fresh_dir("minia11y_suggest_dead_backend");
    scan_fixture("clean", run);
    // Nothing to do on a clean run, with any backend.
    SuggestOptions options;
    options.run_dir = run;
    options.jobs = 1;
    SuggestSummary clean_summary = run_suggest(options);
    CHECK(clean_summary.issues == 0);
    CHECK(clean_summary.suggestions == 0);

    fs::path script = fs::path("/tmp/minia11y_empty_script.json");
    write_text(script, "{\"responses\": []}\n");
    fs::path failing = fresh_dir("minia11y_suggest_failing");
    scan_fixture("themepicker", failing);
    options.run_dir = failing;
    options.backend.spec = "scripted:" + script.string();
    CHECK_THROWS_AS(run_suggest(options), BackendError);
    CHECK_FALSE(fs::exists(failing / "suggestions"));
}

TEST_CASE("the heuristic loop covers every audit issue") {
    fs::path run = fresh_dir("minia11y_suggest_landmarks");
    scan_fixture("landmarks9", run);

    SuggestOptions options;
    options.run_dir = run;
    options.jobs = 1;
    SuggestSummary summary = run_suggest(options);
    CHECK(summary.issues == 9);
    CHECK(summary.suggestions == 27);
    CHECK(summary.issues_with_plausible == 9);
    CHECK(summary.plausible == 24);

    // Only lightening an already white background (both contrast issues)
    // leaves the scan unchanged; raising #999999 to the headline style trades
    // the failure for a nearly-passed report.
    std::map<std::string, int> verdicts = verdict_histogram(run);
    CHECK(verdicts["Plausible"] == 24);
    CHECK(verdicts["NotResolved"] == 2);
    CHECK(verdicts["NewIssuesIntroduced"] == 1);

    // The darken plan needs two rounds on #999999: the first lands in the
    // nearly-passed band, the second clears it.
    ordered_json issues = read_json_file(run / "issues.json");
    std::string contrast_id;
    for (const auto& entry : issues.at("reports")[0].at("issues"))
        if (entry.at("kind") == "ContrastFailed") contrast_id = entry.at("id");
    ordered_json darken =
        read_json_file(run / "suggestions" / contrast_id / "plan1.json");
    REQUIRE(darken.at("attempts").size() == 2);
    CHECK(darken.at("attempts")[0].at("verdict") == "NewIssuesIntroduced");
    CHECK(darken.at("attempts")[1].at("verdict") == "Plausible");
    CHECK(darken.at("fixedView").get<std::string>().find("#626262") !=
          std::string::npos);
    std::string diff = read_text(run / "suggestions" / contrast_id / "plan1.diff");
    CHECK(diff.find("--- a/app.minui") != std::string::npos);
    CHECK(diff.find("-    Text(\"Forgot password\").color(#999999)") !=
          std::string::npos);

    ReportSummary report = run_report(run);
    CHECK(report.json.at("issues").at("unique") == 9);
    CHECK(report.json.at("issues").at("reported") == 9);
    CHECK(report.json.at("issues").at("byKind").size() == 9);
    CHECK(report.json.at("issues").at("byScreen").at("audit@phone") == 9);
    CHECK(report.json.at("suggestions").at("total") == 27);
    CHECK(report.json.at("suggestions").at("plausible") == 24);
    CHECK(report.json.at("suggestions").at("issuesWithPlausible") == 9);
    CHECK(fs::exists(run / "report.json"));
    CHECK(report.text.find("9 unique") != std::string::npos);
    CHECK(report.text.find("issues with a plausible fix: 9 of 9") !=
          std::string::npos);
}

TEST_CASE("parallel and serial suggest runs write the same artifacts") {
    fs::path serial = fresh_dir("minia11y_suggest_serial");
    fs::path parallel = fresh_dir("minia11y_suggest_parallel");
    scan_fixture("themepicker", serial);
    scan_fixture("themepicker", parallel);

    SuggestOptions options;
    options.run_dir = serial;
    options.jobs = 1;
    run_suggest(options);
    options.run_dir = parallel;
    options.jobs = 4;
    run_suggest(options);

    std::vector<fs::path> files = glob_sources(serial / "suggestions", "**/*");
    REQUIRE_FALSE(files.empty());
    for (const fs::path& file : files) {
        fs::path twin = parallel / "suggestions" /
                        fs::relative(file, serial / "suggestions");
        REQUIRE(fs::exists(twin));
        CHECK(read_text(file) == read_text(twin));
    }
}
