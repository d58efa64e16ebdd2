#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minia11y/render.hpp"

namespace minia11y {

enum class IssueKind {
    TextClipped,
    ContrastFailed,
    ContrastNearlyPassed,
    DynamicTypePartiallyUnsupported,
    DynamicTypeUnsupported,
    ElementHasNoDescription,
    LabelNotHumanReadable,
    PotentiallyInaccessibleText,
    HitAreaTooSmall,
};

const char* issue_kind_name(IssueKind kind);
std::optional<IssueKind> issue_kind_from_name(const std::string& name);

struct Issue {
    std::string id;  // 16 hex digits, stable across runs of the same project
    IssueKind kind = IssueKind::TextClipped;
    ElementId element;
    std::string root_view;
    std::string description;
};

/// Relative luminance of a #RRGGBB color, 0 (black) to 1 (white).
double relative_luminance(const std::string& color);

/// Symmetric contrast ratio between two colors, 1 to 21.
double contrast_ratio(const std::string& a, const std::string& b);

/// Minimum acceptable ratio: 4.5 for text under 18pt, 3.0 from 18pt up.
double required_contrast(double font_pt);

/// False for labels that read like identifiers: containing '_' or '.',
/// lowerCamelCase words, or digit runs longer than four characters.
bool is_human_readable(const std::string& label);

inline constexpr double kMinimumHitArea = 44.0;

/// FNV-1a of "kind|element|rootView"; survives re-renders and re-scans.
std::string issue_id(IssueKind kind, const ElementId& element, const std::string& root_view);

/// Runs every check against a resolved scene. Results are ordered by element
/// position in the scene, then by kind. Visual checks (clipping, contrast,
/// type scaling) apply to all rendered text; assistive checks (descriptions,
/// labels, hit areas) apply only to exposed elements, and the inaccessible
/// text check only to unexposed ones.
std::vector<Issue> scan_scene(const Scene& scene);

}  // namespace minia11y
