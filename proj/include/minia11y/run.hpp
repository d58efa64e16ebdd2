#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "minia11y/assessor.hpp"
#include "minia11y/ast.hpp"
#include "minia11y/backend.hpp"
#include "minia11y/render.hpp"
#include "minia11y/scanner.hpp"

namespace minia11y {

/// One screen entry of a project manifest.
struct ScreenSpec {
    std::string name;       // defaults to the root view name
    std::string root_view;
};

/// minui.json, next to the sources:
///   {"name": "...", "sourceGlob": "*.minui",
///    "screens": [{"name": "...", "rootView": "..."}],
///    "devices": [{"name": "phone", "width": 390, "height": 844,
///                 "contentSize": "L"}]}
/// `sourceGlob` and `devices` are optional; device entries override any
/// subset of the phone preset.
struct Manifest {
    std::string name;
    std::string source_glob = "*.minui";
    std::vector<ScreenSpec> screens;
    std::vector<DeviceConfig> devices = {DeviceConfig{}};
};

Manifest parse_manifest(const nlohmann::json& doc);            // ManifestError
Manifest load_manifest(const std::filesystem::path& path);     // ManifestError
nlohmann::ordered_json manifest_to_json(const Manifest& manifest);

/// Files under `root` matching `glob`, sorted by relative path. `*` and `?`
/// stay inside one path segment, `**` crosses segments.
std::vector<std::filesystem::path> glob_sources(const std::filesystem::path& root,
                                                const std::string& glob);

/// Loads every source the manifest's glob names and cross-validates the
/// project: at least one file, view names unique across files, every view
/// reference resolvable and a declaration for every screen root. Shape
/// problems raise ManifestError; malformed sources raise SyntaxError.
Project load_project(const Manifest& manifest, const std::filesystem::path& root);

/// Artifact directory of one pipeline run:
///   minui.json    copy of the manifest the run used
///   project/      instrumented source snapshot (scan) and fix baseline
///   issues.json   scan results per (screen, device)
///   suggestions/<issueId>/plan<N>.json and .diff
///   log.jsonl     append-only event log
class RunStore {
  public:
    explicit RunStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    void save_manifest(const Manifest& manifest);
    Manifest manifest() const;  // ManifestError when the run has none

    void save_project(const Project& project);
    Project project() const;  // re-parses the snapshot under project/

    void save_issues(const nlohmann::ordered_json& reports);
    nlohmann::ordered_json issues() const;  // ManifestError when absent

    void save_suggestion(const FixSuggestion& suggestion);

    void log(nlohmann::ordered_json event);  // appends one jsonl line

  private:
    std::filesystem::path dir_;
    mutable std::mutex log_mutex_;
};

nlohmann::ordered_json suggestion_to_json(const FixSuggestion& suggestion);

struct ScanOptions {
    std::filesystem::path project_dir;  // directory containing minui.json
    std::filesystem::path out_dir;      // run store to create or reuse
};

struct ScanSummary {
    int screens = 0;  // (screen, device) pairs scanned
    int issues = 0;
    nlohmann::ordered_json reports;  // what issues.json holds
};

/// Loads, instruments, renders and scans every screen on every device and
/// fills the run store. Throws ManifestError / SyntaxError on bad input.
ScanSummary run_scan(const ScanOptions& options);

struct SuggestOptions {
    std::filesystem::path run_dir;
    BackendConfig backend;
    SuggestConfig config;
    std::vector<std::string> issue_filter;  // issue ids; empty means all
    bool rescan_all_screens = false;  // re-check every screen after a patch
    int jobs = 0;                     // worker threads; 0 = hardware pick
    std::filesystem::path prompts_dir;  // prompt overrides; empty = built-in
};

struct SuggestSummary {
    int issues = 0;       // issues worked on
    int suggestions = 0;  // (issue, plan) records written
    int plausible = 0;
    int issues_with_plausible = 0;
    bool backend_gave_up = false;  // a backend failure cut the run short
};

/// Runs the repair loop for the scanned issues and writes one artifact pair
/// per (issue, plan). A backend failure after the first artifact degrades to
/// a partial run; one before any artifact propagates as BackendError.
SuggestSummary run_suggest(const SuggestOptions& options);

struct ReportSummary {
    nlohmann::ordered_json json;
    std::string text;  // human-readable rendition of the same numbers
};

/// Aggregates issues.json and the suggestion artifacts into report.json
/// (written into the run) and a printable summary.
ReportSummary run_report(const std::filesystem::path& run_dir);

}  // namespace minia11y
