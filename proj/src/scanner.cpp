#include "minia11y/scanner.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "minia11y/errors.hpp"
#include "minia11y/text_util.hpp"

namespace minia11y {
namespace {

constexpr double kEps = 1e-9;

double channel(const std::string& color, int index) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (color.size() != 7 || color[0] != '#') throw BadColor(color);
    int hi = hex(color[1 + 2 * index]);
    int lo = hex(color[2 + 2 * index]);
    if (hi < 0 || lo < 0) throw BadColor(color);
    return (hi * 16 + lo) / 255.0;
}

double linearize(double c) {
    return c <= 0.03928 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

std::string format_ratio(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

bool has_text(const RenderedElement& e) {
    return (e.kind == NodeKind::Text || e.kind == NodeKind::Button ||
            e.kind == NodeKind::Toggle) &&
           !e.text.empty();
}

/// Steps out of the six category transitions on which the font grows.
int scaling_steps(const FontSpec& font) {
    const auto& cats = all_categories();
    int steps = 0;
    for (std::size_t i = 0; i + 1 < cats.size(); ++i) {
        double a = effective_font_size(font, cats[i]);
        double b = effective_font_size(font, cats[i + 1]);
        if (b > a + kEps) ++steps;
    }
    return steps;
}

}  // namespace

const char* issue_kind_name(IssueKind kind) {
    switch (kind) {
        case IssueKind::TextClipped: return "TextClipped";
        case IssueKind::ContrastFailed: return "ContrastFailed";
        case IssueKind::ContrastNearlyPassed: return "ContrastNearlyPassed";
        case IssueKind::DynamicTypePartiallyUnsupported:
            return "DynamicTypePartiallyUnsupported";
        case IssueKind::DynamicTypeUnsupported: return "DynamicTypeUnsupported";
        case IssueKind::ElementHasNoDescription: return "ElementHasNoDescription";
        case IssueKind::LabelNotHumanReadable: return "LabelNotHumanReadable";
        case IssueKind::PotentiallyInaccessibleText: return "PotentiallyInaccessibleText";
        case IssueKind::HitAreaTooSmall: return "HitAreaTooSmall";
    }
    return "";
}

std::optional<IssueKind> issue_kind_from_name(const std::string& name) {
    static const IssueKind kAll[] = {
        IssueKind::TextClipped,
        IssueKind::ContrastFailed,
        IssueKind::ContrastNearlyPassed,
        IssueKind::DynamicTypePartiallyUnsupported,
        IssueKind::DynamicTypeUnsupported,
        IssueKind::ElementHasNoDescription,
        IssueKind::LabelNotHumanReadable,
        IssueKind::PotentiallyInaccessibleText,
        IssueKind::HitAreaTooSmall,
    };
    for (IssueKind k : kAll)
        if (name == issue_kind_name(k)) return k;
    return std::nullopt;
}

double relative_luminance(const std::string& color) {
    double r = linearize(channel(color, 0));
    double g = linearize(channel(color, 1));
    double b = linearize(channel(color, 2));
    return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

double contrast_ratio(const std::string& a, const std::string& b) {
    double la = relative_luminance(a);
    double lb = relative_luminance(b);
    double hi = std::max(la, lb);
    double lo = std::min(la, lb);
    return (hi + 0.05) / (lo + 0.05);
}

double required_contrast(double font_pt) { return font_pt < 18.0 ? 4.5 : 3.0; }

bool is_human_readable(const std::string& label) {
    if (label.find('_') != std::string::npos) return false;
    if (label.find('.') != std::string::npos) return false;

    bool has_space = label.find(' ') != std::string::npos;
    if (!has_space && !label.empty() &&
        std::islower(static_cast<unsigned char>(label.front()))) {
        for (std::size_t i = 1; i < label.size(); ++i)
            if (std::isupper(static_cast<unsigned char>(label[i]))) return false;
    }

    for (const auto& token : split_whitespace(label)) {
        if (token.size() <= 4) continue;
        bool all_digits = true;
        for (char c : token)
            if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
        if (all_digits) return false;
    }
    return true;
}

std::string issue_id(IssueKind kind, const ElementId& element, const std::string& root_view) {
    std::string input =
        std::string(issue_kind_name(kind)) + "|" + element + "|" + root_view;
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : input) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<Issue> scan_scene(const Scene& scene) {
    std::vector<Issue> issues;
    auto report = [&](IssueKind kind, const RenderedElement& e, std::string description) {
        Issue issue;
        issue.kind = kind;
        issue.element = e.id;
        issue.root_view = scene.root_view;
        issue.description = std::move(description);
        issue.id = issue_id(kind, e.id, scene.root_view);
        issues.push_back(std::move(issue));
    };

    for (const auto& e : scene.elements) {
        // Kinds are checked in enum order so results sort by (element, kind).
        if (e.kind == NodeKind::Text && e.clipped)
            report(IssueKind::TextClipped, e,
                   "Text clipped: \"" + e.text + "\" is truncated in its " +
                       format_pt(e.frame.w) + "x" + format_pt(e.frame.h) + "pt frame");

        if (has_text(e)) {
            double ratio = contrast_ratio(e.foreground, e.background);
            double required = required_contrast(e.font_pt);
            std::string detail = "foreground " + e.foreground + " on background " +
                                 e.background + " has ratio " + format_ratio(ratio) +
                                 ", requires " + format_ratio(required);
            if (ratio < required - 1.0)
                report(IssueKind::ContrastFailed, e, "Contrast failed: " + detail);
            else if (ratio < required)
                report(IssueKind::ContrastNearlyPassed, e,
                       "Contrast nearly passed: " + detail);

            int steps = scaling_steps(e.font);
            if (steps == 0)
                report(IssueKind::DynamicTypeUnsupported, e,
                       "Dynamic type unsupported: \"" + e.text + "\" is fixed at " +
                           format_pt(e.font.base) +
                           "pt across all content size categories");
            else if (steps < 6)
                report(IssueKind::DynamicTypePartiallyUnsupported, e,
                       "Dynamic type partially unsupported: \"" + e.text +
                           "\" scales on only " + std::to_string(steps) +
                           " of 6 category steps");
        }

        if (e.exposed && e.label.empty() &&
            (e.kind == NodeKind::Image || e.kind == NodeKind::Button ||
             e.kind == NodeKind::Toggle)) {
            std::string what = e.kind == NodeKind::Image
                                   ? "Image \"" + e.asset_name + "\""
                                   : std::string(node_kind_name(e.kind));
            report(IssueKind::ElementHasNoDescription, e,
                   "Element has no description: " + what + " has no accessibility label");
        }

        if (e.exposed && !e.label.empty() && !is_human_readable(e.label))
            report(IssueKind::LabelNotHumanReadable, e,
                   "Label not human readable: \"" + e.label +
                       "\" looks like an identifier");

        if (!e.exposed && e.kind == NodeKind::Text && !e.text.empty())
            report(IssueKind::PotentiallyInaccessibleText, e,
                   "Potentially inaccessible text: \"" + e.text +
                       "\" is not reachable by assistive technology");

        if (e.exposed && is_interactive(e.kind) &&
            (e.frame.w < kMinimumHitArea - kEps || e.frame.h < kMinimumHitArea - kEps))
            report(IssueKind::HitAreaTooSmall, e,
                   "Hit area is too small: " + format_pt(e.frame.w) + "x" +
                       format_pt(e.frame.h) + "pt is below the " +
                       format_pt(kMinimumHitArea) + "pt minimum");
    }
    return issues;
}

}  // namespace minia11y
