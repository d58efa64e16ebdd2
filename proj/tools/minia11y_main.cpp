#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minia11y/errors.hpp"
#include "minia11y/run.hpp"

namespace {

int do_scan(const std::filesystem::path& project_dir,
            const std::filesystem::path& out_dir, bool fail_on_issues,
            bool as_json) {
    minia11y::ScanOptions options;
    options.project_dir = project_dir;
    options.out_dir = out_dir;
    minia11y::ScanSummary summary = minia11y::run_scan(options);
    if (as_json) {
        std::cout << summary.reports.dump(2) << "\n";
    } else {
        std::cout << "scanned " << summary.screens << " screen(s), found "
                  << summary.issues << " issue(s)\n";
        std::cout << "run written to " << out_dir.string() << "\n";
    }
    return fail_on_issues && summary.issues > 0 ? 1 : 0;
}

int do_suggest(const minia11y::SuggestOptions& options) {
    minia11y::SuggestSummary summary = minia11y::run_suggest(options);
    std::cout << "worked on " << summary.issues << " issue(s), wrote "
              << summary.suggestions << " suggestion(s), " << summary.plausible
              << " plausible\n";
    std::cout << summary.issues_with_plausible << " of " << summary.issues
              << " issue(s) have at least one plausible fix\n";
    if (summary.backend_gave_up)
        std::cout << "warning: the backend failed part way; results are partial\n";
    return 0;
}

int do_report(const std::filesystem::path& run_dir, bool as_json) {
    minia11y::ReportSummary summary = minia11y::run_report(run_dir);
    if (as_json)
        std::cout << summary.json.dump(2) << "\n";
    else
        std::cout << summary.text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Accessibility scanner and fix suggester for MiniUI projects"};
    app.require_subcommand(1);

    std::string project_dir = ".";
    std::string scan_out = "minia11y-run";
    bool fail_on_issues = false;
    bool scan_json = false;
    CLI::App* scan = app.add_subcommand("scan", "Scan a project for issues");
    scan->add_option("project", project_dir, "Directory containing minui.json");
    scan->add_option("--out", scan_out, "Run directory to write");
    scan->add_flag("--fail-on-issues", fail_on_issues,
                   "Exit with status 1 when issues are found");
    scan->add_flag("--json", scan_json, "Print the issue reports as JSON");

    minia11y::SuggestOptions suggest_options;
    std::string run_dir = "minia11y-run";
    std::string prompts_dir;
    CLI::App* suggest =
        app.add_subcommand("suggest", "Generate and verify fix suggestions");
    suggest->add_option("--run", run_dir, "Run directory produced by scan");
    suggest->add_option("--backend", suggest_options.backend.spec,
                        "heuristic, scripted:<file> or a chat completions URL");
    suggest->add_option("--model", suggest_options.backend.model,
                        "Model name for HTTP backends");
    suggest->add_option("--api-key-env", suggest_options.backend.api_key_env,
                        "Environment variable holding the API key");
    suggest->add_option("--timeout", suggest_options.backend.timeout_seconds,
                        "HTTP timeout in seconds");
    suggest->add_option("--max-concurrent",
                        suggest_options.backend.max_concurrent,
                        "Concurrent requests an HTTP backend may issue");
    suggest->add_option("--plans", suggest_options.config.plans,
                        "Fix plans to request per issue");
    suggest->add_option("--iterations", suggest_options.config.iterations,
                        "Fix attempts per plan");
    suggest->add_option("--topk", suggest_options.config.topk,
                        "Candidate declarations kept for selection");
    suggest->add_option("--issue", suggest_options.issue_filter,
                        "Only work on this issue id (repeatable)");
    suggest->add_flag("--rescan-all-screens",
                      suggest_options.rescan_all_screens,
                      "Verify every screen of the project after each patch");
    suggest->add_option("--jobs", suggest_options.jobs,
                        "Issues repaired in parallel (0 = one per core)");
    suggest->add_option("--prompts", prompts_dir,
                        "Directory with prompt template overrides");

    std::string report_run = "minia11y-run";
    bool report_json = false;
    CLI::App* report = app.add_subcommand("report", "Summarize a finished run");
    report->add_option("--run", report_run, "Run directory to summarize");
    report->add_flag("--json", report_json, "Print the summary as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) return do_scan(project_dir, scan_out, fail_on_issues, scan_json);
        if (suggest->parsed()) {
            suggest_options.run_dir = run_dir;
            suggest_options.prompts_dir = prompts_dir;
            return do_suggest(suggest_options);
        }
        return do_report(report_run, report_json);
    } catch (const minia11y::BackendError& e) {
        std::cerr << e.what() << "\n";  // what() already says "backend error:"
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
