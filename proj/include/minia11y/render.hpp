#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minia11y/ast.hpp"
#include "minia11y/hierarchy.hpp"

namespace minia11y {

/// Content size categories, smallest to largest. L is the default; the
/// multiplier scales style-based fonts.
enum class ContentSizeCategory { XS, S, M, L, XL, XXL, XXXL };

double category_multiplier(ContentSizeCategory category);
const char* category_name(ContentSizeCategory category);
std::optional<ContentSizeCategory> category_from_name(const std::string& name);
const std::vector<ContentSizeCategory>& all_categories();

struct DeviceConfig {
    std::string name = "phone";
    double width = 390.0;
    double height = 844.0;
    ContentSizeCategory category = ContentSizeCategory::L;
};

/// Resolved nominal font: the declared size before content-size scaling.
/// `.font(size: N)` pins a static size; `.font(style: S)` scales with the
/// category; `max` caps the scaled size.
struct FontSpec {
    bool dynamic = true;
    double base = 17.0;
    std::optional<double> max;

    bool operator==(const FontSpec&) const = default;
};

/// Point size of a text style at the default category (body 17, headline 20,
/// caption 12).
double style_size(const std::string& style);

double effective_font_size(const FontSpec& font, ContentSizeCategory category);

struct Rect {
    double x = 0;
    double y = 0;
    double w = 0;
    double h = 0;
};

struct RenderedElement {
    ElementId id;
    NodeKind kind = NodeKind::Spacer;
    std::string declared_in;
    Rect frame;              // absolute, includes padding
    std::string text;        // on-screen text: Text content or control label
    std::string label;       // what assistive tech announces; may be empty
    std::string action;      // interactive elements only
    std::string asset_name;  // images only
    FontSpec font;           // resolved nominal font
    double font_pt = 17.0;   // effective size after scaling and shrink
    double scale_factor = 1.0;
    int line_limit = 0;  // 0 = unlimited
    bool clipped = false;
    bool exposed = true;  // reachable by assistive tech
    std::string foreground = "#000000";
    std::string background = "#FFFFFF";
};

struct Scene {
    std::string root_view;
    DeviceConfig device;
    std::vector<RenderedElement> elements;  // hierarchy pre-order

    const RenderedElement* find(const ElementId& id) const;
    const RenderedElement& at(const ElementId& id) const;  // throws UnknownElement
};

/// Lays out one screen with deterministic text metrics: glyphs are
/// 0.6 x font-size wide and lines 1.2 x font-size tall. Text wraps only under
/// an explicit frame width and may shrink down to its minScaleFactor on a
/// 0.01 grid before it clips. Stacks use an 8pt default spacing; controls pad
/// their label by 12pt horizontally and 4pt vertically; images are 24x24.
Scene resolve_screen(const Project& project, const UiHierarchy& hierarchy,
                     const DeviceConfig& device);

nlohmann::ordered_json scene_to_json(const Scene& scene,
                                     const std::optional<ElementId>& highlight = std::nullopt);

}  // namespace minia11y
