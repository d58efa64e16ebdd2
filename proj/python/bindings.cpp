// Python bindings. JSON-shaped results cross the boundary as dump strings;
// the package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "minia11y/assessor.hpp"
#include "minia11y/backend.hpp"
#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/printer.hpp"
#include "minia11y/render.hpp"
#include "minia11y/run.hpp"
#include "minia11y/scanner.hpp"

namespace py = pybind11;
using namespace minia11y;

namespace {

DeviceConfig make_device(const std::string& name, double width, double height,
                         const std::string& content_size) {
    DeviceConfig device;
    device.name = name;
    device.width = width;
    device.height = height;
    auto category = category_from_name(content_size);
    if (!category)
        throw ManifestError("unknown content size category \"" + content_size + "\"");
    device.category = *category;
    return device;
}

Project single_file_project(const std::string& text, const std::string& path) {
    Project project;
    project.files.push_back(parse_source(text, path));
    return instrument(project).project;
}

nlohmann::ordered_json issue_to_json(const Issue& issue) {
    return {{"id", issue.id},
            {"kind", issue_kind_name(issue.kind)},
            {"element", issue.element},
            {"rootView", issue.root_view},
            {"description", issue.description}};
}

}  // namespace

PYBIND11_MODULE(_minia11y, m) {
    m.doc() = "Accessibility scanner and fix suggester for MiniUI sources";

    py::register_exception<ManifestError>(m, "ManifestError", PyExc_ValueError);
    py::register_exception<SyntaxError>(m, "SourceSyntaxError", PyExc_ValueError);
    py::register_exception<BackendError>(m, "BackendError", PyExc_RuntimeError);

    m.def(
        "reformat",
        [](const std::string& text, const std::string& path) {
            return print_source(parse_source(text, path));
        },
        py::arg("text"), py::arg("path") = "<memory>",
        "Parse a source file and print it back (byte exact for clean input).");

    m.def(
        "instrument_source",
        [](const std::string& text, const std::string& path) {
            return print_source(single_file_project(text, path).files.front());
        },
        py::arg("text"), py::arg("path") = "<memory>",
        "Give every element a stable axIdentifier and return the new text.");

    m.def(
        "hierarchy_json",
        [](const std::string& text, const std::string& root_view) {
            Project project = single_file_project(text, "<memory>");
            return hierarchy_to_json(build_hierarchy(project, root_view)).dump();
        },
        py::arg("text"), py::arg("root_view"),
        "Accessibility hierarchy of a single-file project, as a JSON string.");

    m.def(
        "render_json",
        [](const std::string& text, const std::string& root_view,
           const std::string& device, double width, double height,
           const std::string& content_size) {
            Project project = single_file_project(text, "<memory>");
            UiHierarchy hierarchy = build_hierarchy(project, root_view);
            Scene scene = resolve_screen(
                project, hierarchy, make_device(device, width, height, content_size));
            return scene_to_json(scene).dump();
        },
        py::arg("text"), py::arg("root_view"), py::arg("device") = "phone",
        py::arg("width") = 390.0, py::arg("height") = 844.0,
        py::arg("content_size") = "L",
        "Lay out a single-file project and return the scene as a JSON string.");

    m.def(
        "scan_source",
        [](const std::string& text, const std::string& root_view,
           const std::string& device, double width, double height,
           const std::string& content_size) {
            Project project = single_file_project(text, "<memory>");
            UiHierarchy hierarchy = build_hierarchy(project, root_view);
            Scene scene = resolve_screen(
                project, hierarchy, make_device(device, width, height, content_size));
            nlohmann::ordered_json issues = nlohmann::ordered_json::array();
            for (const Issue& issue : scan_scene(scene))
                issues.push_back(issue_to_json(issue));
            return issues.dump();
        },
        py::arg("text"), py::arg("root_view"), py::arg("device") = "phone",
        py::arg("width") = 390.0, py::arg("height") = 844.0,
        py::arg("content_size") = "L",
        "Scan one screen of a single-file project; issues as a JSON string.");

    m.def("relative_luminance", &relative_luminance, py::arg("color"),
          "Relative luminance of a #RRGGBB color, 0 (black) to 1 (white).");
    m.def("contrast_ratio", &contrast_ratio, py::arg("foreground"),
          py::arg("background"), "WCAG contrast ratio, 1.0 to 21.0.");
    m.def("required_contrast", &required_contrast, py::arg("font_pt"),
          "Required ratio for a font size: 4.5 under 18pt, 3.0 from 18pt.");

    m.def("issue_kinds", [] {
        std::vector<std::string> names;
        for (int k = 0; k <= static_cast<int>(IssueKind::HitAreaTooSmall); ++k)
            names.push_back(issue_kind_name(static_cast<IssueKind>(k)));
        return names;
    });

    m.def(
        "run_scan",
        [](const std::string& project_dir, const std::string& out_dir) {
            ScanOptions options;
            options.project_dir = project_dir;
            options.out_dir = out_dir;
            ScanSummary summary = run_scan(options);
            nlohmann::ordered_json doc{{"screens", summary.screens},
                                       {"issues", summary.issues},
                                       {"reports", summary.reports}};
            return doc.dump();
        },
        py::arg("project_dir"), py::arg("out_dir"),
        py::call_guard<py::gil_scoped_release>(),
        "Scan a project directory into a run store; summary as a JSON string.");

    m.def(
        "run_suggest",
        [](const std::string& run_dir, const std::string& backend,
           const std::string& model, int plans, int iterations, int topk,
           const std::vector<std::string>& issues, bool rescan_all_screens,
           int jobs, const std::string& prompts_dir) {
            SuggestOptions options;
            options.run_dir = run_dir;
            options.backend.spec = backend;
            options.backend.model = model;
            options.config.plans = plans;
            options.config.iterations = iterations;
            options.config.topk = topk;
            options.issue_filter = issues;
            options.rescan_all_screens = rescan_all_screens;
            options.jobs = jobs;
            options.prompts_dir = prompts_dir;
            SuggestSummary summary = run_suggest(options);
            nlohmann::ordered_json doc{
                {"issues", summary.issues},
                {"suggestions", summary.suggestions},
                {"plausible", summary.plausible},
                {"issuesWithPlausible", summary.issues_with_plausible},
                {"backendGaveUp", summary.backend_gave_up}};
            return doc.dump();
        },
        py::arg("run_dir"), py::arg("backend") = "heuristic",
        py::arg("model") = "gpt-4", py::arg("plans") = 3,
        py::arg("iterations") = 3, py::arg("topk") = 3,
        py::arg("issues") = std::vector<std::string>{},
        py::arg("rescan_all_screens") = false, py::arg("jobs") = 0,
        py::arg("prompts_dir") = "", py::call_guard<py::gil_scoped_release>(),
        "Run the repair loop over a scanned run; summary as a JSON string.");

    m.def(
        "run_report",
        [](const std::string& run_dir) {
            ReportSummary summary = run_report(run_dir);
            nlohmann::ordered_json doc{{"json", summary.json},
                                       {"text", summary.text}};
            return doc.dump();
        },
        py::arg("run_dir"), py::call_guard<py::gil_scoped_release>(),
        "Aggregate a run into report.json; returns it plus a printable text.");
}
