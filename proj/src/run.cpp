#include "minia11y/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>
#include <utility>

#include "minia11y/backends.hpp"
#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/patch.hpp"
#include "minia11y/printer.hpp"
#include "minia11y/prompts.hpp"

namespace minia11y {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ManifestError("cannot write " + path.string());
    out << text;
}

nlohmann::ordered_json read_json(const fs::path& path) {
    try {
        return nlohmann::ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(path.string() + " is not valid JSON: " + e.what());
    }
}

std::regex glob_regex(const std::string& glob) {
    static const std::string kEscaped = ".+()[]{}^$|\\";
    std::string rx = "^";
    for (std::size_t i = 0; i < glob.size(); ++i) {
        char c = glob[i];
        if (c == '*') {
            if (i + 1 < glob.size() && glob[i + 1] == '*') {
                if (i + 2 < glob.size() && glob[i + 2] == '/') {
                    rx += "(?:[^/]+/)*";
                    i += 2;
                } else {
                    rx += ".*";
                    ++i;
                }
            } else {
                rx += "[^/]*";
            }
        } else if (c == '?') {
            rx += "[^/]";
        } else if (kEscaped.find(c) != std::string::npos) {
            rx += '\\';
            rx += c;
        } else {
            rx += c;
        }
    }
    rx += "$";
    return std::regex(rx);
}

void check_view_references(const Project& project,
                           const std::map<std::string, std::string>& declared) {
    for (const SourceFile& file : project.files)
        for (const ViewDecl& decl : file.decls) {
            std::vector<const UiNode*> stack{&decl.body};
            while (!stack.empty()) {
                const UiNode* node = stack.back();
                stack.pop_back();
                if (node->kind == NodeKind::ViewRef && !declared.count(node->ref_name))
                    throw ManifestError("view " + decl.name + " in " + file.path +
                                        " references undeclared view " +
                                        node->ref_name);
                for (const UiNode& child : node->children) stack.push_back(&child);
            }
        }
}

Issue issue_from_json(const nlohmann::ordered_json& entry,
                      const std::string& root_view) {
    Issue issue;
    issue.id = entry.at("id");
    auto kind = issue_kind_from_name(entry.at("kind"));
    if (!kind)
        throw ManifestError("issues.json names unknown issue kind \"" +
                            std::string(entry.at("kind")) + "\"");
    issue.kind = *kind;
    issue.element = entry.at("element");
    issue.root_view = root_view;
    issue.description = entry.at("description");
    return issue;
}

long long now_millis() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

Manifest parse_manifest(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw ManifestError("the manifest must be a JSON object");
        Manifest manifest;
        if (!doc.contains("name") || !doc.at("name").is_string() ||
            doc.at("name").get<std::string>().empty())
            throw ManifestError("the manifest needs a non-empty \"name\"");
        manifest.name = doc.at("name");
        if (doc.contains("sourceGlob")) {
            if (!doc.at("sourceGlob").is_string())
                throw ManifestError("\"sourceGlob\" must be a string");
            manifest.source_glob = doc.at("sourceGlob");
        }
        if (!doc.contains("screens") || !doc.at("screens").is_array() ||
            doc.at("screens").empty())
            throw ManifestError("the manifest needs a non-empty \"screens\" array");
        std::set<std::string> screen_names;
        for (const auto& entry : doc.at("screens")) {
            if (!entry.is_object() || !entry.contains("rootView") ||
                !entry.at("rootView").is_string())
                throw ManifestError("every screen needs a \"rootView\" string");
            ScreenSpec spec;
            spec.root_view = entry.at("rootView");
            spec.name = entry.value("name", spec.root_view);
            if (spec.root_view.empty() || spec.name.empty())
                throw ManifestError("screen names and root views cannot be empty");
            if (!screen_names.insert(spec.name).second)
                throw ManifestError("duplicate screen name \"" + spec.name + "\"");
            manifest.screens.push_back(std::move(spec));
        }
        if (doc.contains("devices")) {
            if (!doc.at("devices").is_array() || doc.at("devices").empty())
                throw ManifestError("\"devices\" must be a non-empty array");
            manifest.devices.clear();
            std::set<std::string> device_names;
            for (const auto& entry : doc.at("devices")) {
                if (!entry.is_object())
                    throw ManifestError("every device must be an object");
                DeviceConfig device;
                device.name = entry.value("name", device.name);
                device.width = entry.value("width", device.width);
                device.height = entry.value("height", device.height);
                if (entry.contains("contentSize")) {
                    std::string size = entry.at("contentSize");
                    auto category = category_from_name(size);
                    if (!category)
                        throw ManifestError("unknown content size \"" + size + "\"");
                    device.category = *category;
                }
                if (device.width < 1.0 || device.height < 1.0)
                    throw ManifestError("device dimensions must be at least 1pt");
                if (!device_names.insert(device.name).second)
                    throw ManifestError("duplicate device name \"" + device.name +
                                        "\"");
                manifest.devices.push_back(std::move(device));
            }
        }
        return manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(std::string("malformed manifest: ") + e.what());
    }
}

Manifest load_manifest(const fs::path& path) { return parse_manifest(read_json(path)); }

nlohmann::ordered_json manifest_to_json(const Manifest& manifest) {
    nlohmann::ordered_json doc;
    doc["name"] = manifest.name;
    doc["sourceGlob"] = manifest.source_glob;
    doc["screens"] = nlohmann::ordered_json::array();
    for (const ScreenSpec& screen : manifest.screens)
        doc["screens"].push_back(
            {{"name", screen.name}, {"rootView", screen.root_view}});
    doc["devices"] = nlohmann::ordered_json::array();
    for (const DeviceConfig& device : manifest.devices)
        doc["devices"].push_back({{"name", device.name},
                                  {"width", device.width},
                                  {"height", device.height},
                                  {"contentSize", category_name(device.category)}});
    return doc;
}

std::vector<fs::path> glob_sources(const fs::path& root, const std::string& glob) {
    std::vector<fs::path> out;
    if (!fs::is_directory(root)) return out;
    std::regex rx = glob_regex(glob);
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), root).generic_string();
        if (std::regex_match(rel, rx)) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(), [&](const fs::path& a, const fs::path& b) {
        return fs::relative(a, root).generic_string() <
               fs::relative(b, root).generic_string();
    });
    return out;
}

Project load_project(const Manifest& manifest, const fs::path& root) {
    std::vector<fs::path> paths = glob_sources(root, manifest.source_glob);
    if (paths.empty())
        throw ManifestError("no sources under " + root.string() + " match \"" +
                            manifest.source_glob + "\"");
    Project project;
    project.root_dir = root;
    for (const fs::path& path : paths) {
        std::string rel = fs::relative(path, root).generic_string();
        project.files.push_back(parse_source(read_file(path), rel));
    }

    std::map<std::string, std::string> declared;  // view name -> file path
    for (const SourceFile& file : project.files)
        for (const ViewDecl& decl : file.decls) {
            auto [it, fresh] = declared.emplace(decl.name, file.path);
            if (!fresh)
                throw ManifestError("view " + decl.name + " is declared in both " +
                                    it->second + " and " + file.path);
        }
    check_view_references(project, declared);
    for (const ScreenSpec& screen : manifest.screens)
        if (!declared.count(screen.root_view))
            throw ManifestError("screen \"" + screen.name +
                                "\" names unknown root view " + screen.root_view);
    return project;
}

RunStore::RunStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

void RunStore::save_manifest(const Manifest& manifest) {
    write_file(dir_ / "minui.json", manifest_to_json(manifest).dump(2) + "\n");
}

Manifest RunStore::manifest() const { return load_manifest(dir_ / "minui.json"); }

void RunStore::save_project(const Project& project) {
    for (const SourceFile& file : project.files)
        write_file(dir_ / "project" / file.path, file.text);
}

Project RunStore::project() const {
    fs::path root = dir_ / "project";
    std::vector<fs::path> paths = glob_sources(root, "**/*.minui");
    if (paths.empty())
        throw ManifestError("run store " + dir_.string() +
                            " has no project snapshot; scan first");
    Project project;
    project.root_dir = root;
    for (const fs::path& path : paths)
        project.files.push_back(
            parse_source(read_file(path), fs::relative(path, root).generic_string()));
    return project;
}

void RunStore::save_issues(const nlohmann::ordered_json& reports) {
    write_file(dir_ / "issues.json", reports.dump(2) + "\n");
}

nlohmann::ordered_json RunStore::issues() const {
    fs::path path = dir_ / "issues.json";
    if (!fs::exists(path))
        throw ManifestError("run store " + dir_.string() +
                            " has no issues.json; scan first");
    return read_json(path);
}

nlohmann::ordered_json suggestion_to_json(const FixSuggestion& suggestion) {
    nlohmann::ordered_json doc;
    doc["schemaVersion"] = 1;
    doc["issue"] = {{"id", suggestion.issue.id},
                    {"kind", issue_kind_name(suggestion.issue.kind)},
                    {"element", suggestion.issue.element},
                    {"rootView", suggestion.issue.root_view},
                    {"description", suggestion.issue.description}};
    doc["plan"] = {{"index", suggestion.plan.index},
                   {"summary", suggestion.plan.summary},
                   {"rationale", suggestion.plan.rationale},
                   {"guideline", suggestion.plan.guideline}};
    nlohmann::ordered_json ratings = nlohmann::ordered_json::array();
    for (const SnippetRating& rating : suggestion.ratings)
        ratings.push_back({{"candidate", rating.candidate},
                           {"score", rating.score},
                           {"reasoning", rating.reasoning}});
    doc["location"] = {{"view", suggestion.view_name},
                       {"relation", snippet_relation_name(suggestion.relation)},
                       {"ratings", ratings}};
    nlohmann::ordered_json attempts = nlohmann::ordered_json::array();
    for (const FixAttempt& attempt : suggestion.attempts)
        attempts.push_back({{"number", attempt.number},
                            {"verdict", verdict_name(attempt.verdict)},
                            {"detail", attempt.detail},
                            {"explanation", attempt.draft.explanation}});
    doc["attempts"] = attempts;
    doc["verdict"] = verdict_name(suggestion.verdict);
    doc["detail"] = suggestion.detail;
    if (suggestion.verdict == Verdict::Plausible)
        doc["fixedView"] = suggestion.fixed_view;
    else
        doc["fixedView"] = nullptr;
    doc["alsoResolved"] = suggestion.also_resolved;
    return doc;
}

void RunStore::save_suggestion(const FixSuggestion& suggestion) {
    fs::path dir = dir_ / "suggestions" / suggestion.issue.id;
    std::string stem = "plan" + std::to_string(suggestion.plan.index);
    write_file(dir / (stem + ".json"), suggestion_to_json(suggestion).dump(2) + "\n");
    if (!suggestion.patch.empty())
        write_file(dir / (stem + ".diff"), patch_to_string(suggestion.patch));
}

void RunStore::log(nlohmann::ordered_json event) {
    event["t"] = now_millis();
    std::lock_guard<std::mutex> lock(log_mutex_);
    std::ofstream out(dir_ / "log.jsonl", std::ios::app);
    out << event.dump() << "\n";
}

ScanSummary run_scan(const ScanOptions& options) {
    Manifest manifest = load_manifest(options.project_dir / "minui.json");
    Project project =
        instrument(load_project(manifest, options.project_dir)).project;

    RunStore store(options.out_dir);
    store.save_manifest(manifest);
    store.save_project(project);
    store.log({{"event", "scanStarted"}, {"project", manifest.name}});

    ScanSummary summary;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const ScreenSpec& screen : manifest.screens) {
        UiHierarchy hierarchy = build_hierarchy(project, screen.root_view);
        for (const DeviceConfig& device : manifest.devices) {
            Scene scene = resolve_screen(project, hierarchy, device);
            std::vector<Issue> issues = scan_scene(scene);
            nlohmann::ordered_json entry;
            entry["screen"] = screen.name;
            entry["rootView"] = screen.root_view;
            entry["device"] = device.name;
            entry["issues"] = nlohmann::ordered_json::array();
            for (const Issue& issue : issues)
                entry["issues"].push_back({{"id", issue.id},
                                           {"kind", issue_kind_name(issue.kind)},
                                           {"element", issue.element},
                                           {"description", issue.description}});
            reports.push_back(std::move(entry));
            summary.screens += 1;
            summary.issues += static_cast<int>(issues.size());
            store.log({{"event", "scanned"},
                       {"screen", screen.name},
                       {"device", device.name},
                       {"issues", issues.size()}});
        }
    }
    nlohmann::ordered_json doc;
    doc["schemaVersion"] = 1;
    doc["project"] = manifest.name;
    doc["reports"] = std::move(reports);
    store.save_issues(doc);
    summary.reports = std::move(doc);
    return summary;
}

SuggestSummary run_suggest(const SuggestOptions& options) {
    RunStore store(options.run_dir);
    Manifest manifest = store.manifest();
    Project project = store.project();
    nlohmann::ordered_json issues_doc = store.issues();

    PromptSet prompts = options.prompts_dir.empty()
                            ? PromptSet::defaults()
                            : PromptSet::load(options.prompts_dir);
    std::shared_ptr<Backend> backend = make_backend(options.backend);

    std::map<std::string, DeviceConfig> devices;
    for (const DeviceConfig& device : manifest.devices) devices[device.name] = device;

    // The same issue id can show up on several devices; the first sighting
    // (manifest device order) wins and anchors the repair.
    struct WorkItem {
        ScreenRef screen;
        Issue issue;
    };
    std::vector<WorkItem> work;
    std::set<std::string> wanted(options.issue_filter.begin(),
                                 options.issue_filter.end());
    std::set<std::string> matched;
    std::set<std::string> seen;
    for (const auto& report : issues_doc.at("reports")) {
        std::string root_view = report.at("rootView");
        std::string device_name = report.at("device");
        auto device = devices.find(device_name);
        if (device == devices.end())
            throw ManifestError("issues.json names device \"" + device_name +
                                "\" which the manifest does not declare");
        for (const auto& entry : report.at("issues")) {
            Issue issue = issue_from_json(entry, root_view);
            if (!wanted.empty()) {
                if (!wanted.count(issue.id)) continue;
                matched.insert(issue.id);
            }
            if (!seen.insert(issue.id).second) continue;
            work.push_back(WorkItem{ScreenRef{root_view, device->second}, issue});
        }
    }
    for (const std::string& id : wanted)
        if (!matched.count(id))
            throw ManifestError("issue " + id + " is not part of this run");

    std::vector<ScreenRef> all_screens;
    if (options.rescan_all_screens)
        for (const ScreenSpec& screen : manifest.screens)
            for (const DeviceConfig& device : manifest.devices)
                all_screens.push_back(ScreenRef{screen.root_view, device});

    store.log({{"event", "suggestStarted"},
               {"backend", backend->name()},
               {"issues", work.size()}});

    SuggestSummary summary;
    summary.issues = static_cast<int>(work.size());
    std::mutex mutex;
    std::atomic<std::size_t> cursor{0};
    std::string first_error;

    auto worker = [&] {
        for (;;) {
            std::size_t index = cursor.fetch_add(1);
            if (index >= work.size()) return;
            const WorkItem& item = work[index];
            SuggestConfig config = options.config;
            config.rescan = all_screens;
            std::vector<FixSuggestion> got;
            try {
                got = suggest_fixes(*backend, prompts, project, item.screen,
                                    {item.issue}, config);
            } catch (const BackendError& e) {
                store.log({{"event", "backendError"},
                           {"issue", item.issue.id},
                           {"error", e.what()}});
                std::lock_guard<std::mutex> lock(mutex);
                summary.backend_gave_up = true;
                if (first_error.empty()) {
                    // BackendError::what() carries its prefix; keep the bare
                    // message so the rethrow below does not stack two.
                    std::string message = e.what();
                    constexpr std::string_view kPrefix = "backend error: ";
                    if (message.rfind(kPrefix, 0) == 0)
                        message = message.substr(kPrefix.size());
                    first_error = message;
                }
                continue;
            }
            bool any_plausible = false;
            for (const FixSuggestion& suggestion : got) {
                store.save_suggestion(suggestion);
                store.log({{"event", "suggestion"},
                           {"issue", suggestion.issue.id},
                           {"plan", suggestion.plan.index},
                           {"verdict", verdict_name(suggestion.verdict)},
                           {"attempts", suggestion.attempts.size()}});
                std::lock_guard<std::mutex> lock(mutex);
                summary.suggestions += 1;
                if (suggestion.verdict == Verdict::Plausible) {
                    summary.plausible += 1;
                    any_plausible = true;
                }
            }
            if (any_plausible) {
                std::lock_guard<std::mutex> lock(mutex);
                summary.issues_with_plausible += 1;
            }
        }
    };

    std::size_t jobs = options.jobs > 0
                           ? static_cast<std::size_t>(options.jobs)
                           : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, std::max<std::size_t>(work.size(), 1));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (std::thread& thread : pool) thread.join();
    }

    if (summary.suggestions == 0 && summary.backend_gave_up)
        throw BackendError(first_error);
    return summary;
}

ReportSummary run_report(const fs::path& run_dir) {
    RunStore store(run_dir);
    nlohmann::ordered_json issues_doc = store.issues();

    std::set<std::string> unique_ids;
    std::map<std::string, int> by_kind;
    std::map<std::string, int> by_screen;
    int reported = 0;
    for (const auto& report : issues_doc.at("reports")) {
        std::string where = std::string(report.at("screen")) + "@" +
                            std::string(report.at("device"));
        by_screen[where] = 0;
        for (const auto& entry : report.at("issues")) {
            reported += 1;
            unique_ids.insert(std::string(entry.at("id")));
            by_kind[entry.at("kind")] += 1;
            by_screen[where] += 1;
        }
    }

    int total_suggestions = 0;
    int plausible = 0;
    std::map<std::string, int> by_verdict;
    std::set<std::string> issues_with_suggestions;
    std::set<std::string> issues_with_plausible;
    fs::path suggestions_dir = run_dir / "suggestions";
    if (fs::is_directory(suggestions_dir)) {
        std::vector<fs::path> files = glob_sources(suggestions_dir, "*/plan*.json");
        for (const fs::path& file : files) {
            nlohmann::ordered_json doc = read_json(file);
            std::string id = doc.at("issue").at("id");
            std::string verdict = doc.at("verdict");
            total_suggestions += 1;
            by_verdict[verdict] += 1;
            issues_with_suggestions.insert(id);
            if (verdict == "Plausible") {
                plausible += 1;
                issues_with_plausible.insert(id);
            }
        }
    }

    nlohmann::ordered_json doc;
    doc["schemaVersion"] = 1;
    doc["project"] = issues_doc.value("project", std::string{});
    doc["issues"] = {{"unique", unique_ids.size()},
                     {"reported", reported},
                     {"byKind", by_kind},
                     {"byScreen", by_screen}};
    doc["suggestions"] = {{"total", total_suggestions},
                          {"plausible", plausible},
                          {"byVerdict", by_verdict},
                          {"issuesWithSuggestions", issues_with_suggestions.size()},
                          {"issuesWithPlausible", issues_with_plausible.size()}};
    write_file(run_dir / "report.json", doc.dump(2) + "\n");

    std::ostringstream text;
    text << "project: " << doc["project"].get<std::string>() << "\n";
    text << "issues: " << unique_ids.size() << " unique (" << reported
         << " reported across screens and devices)\n";
    for (const auto& [kind, count] : by_kind)
        text << "  " << kind << ": " << count << "\n";
    text << "suggestions: " << total_suggestions << ", " << plausible
         << " plausible\n";
    for (const auto& [verdict, count] : by_verdict)
        text << "  " << verdict << ": " << count << "\n";
    text << "issues with a plausible fix: " << issues_with_plausible.size() << " of "
         << unique_ids.size() << "\n";

    ReportSummary summary;
    summary.json = std::move(doc);
    summary.text = text.str();
    return summary;
}

}  // namespace minia11y
