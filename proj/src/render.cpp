#include "minia11y/render.hpp"

#include <cmath>

#include "minia11y/errors.hpp"
#include "minia11y/text_util.hpp"

namespace minia11y {
namespace {

constexpr double kGlyphWidthFactor = 0.6;
constexpr double kLineHeightFactor = 1.2;
constexpr double kControlPadH = 12.0;
constexpr double kControlPadV = 4.0;
constexpr double kImageSide = 24.0;
constexpr double kDefaultSpacing = 8.0;
constexpr double kEps = 1e-9;

FontSpec font_from_modifier(const Modifier& m) {
    FontSpec f;
    if (const Arg* size = m.arg_named("size")) {
        f.dynamic = false;
        f.base = size->value.number;
        return f;
    }
    f.dynamic = true;
    f.base = style_size(m.arg_named("style")->value.text);
    if (const Arg* max = m.arg_named("max")) f.max = max->value.number;
    return f;
}

/// Environment-style state flowing from ancestors to descendants.
struct Inherited {
    std::string declared_in;
    FontSpec font;
    std::string fg = "#000000";
    std::string bg = "#FFFFFF";
    bool hidden = false;      // axHidden; nearest modifier wins
    bool suppressed = false;  // some ancestor ignores its children; sticky
};

struct LayoutNode {
    RenderedElement element;  // frame.w/h filled in measure, x/y in place
    double pad = 0;
    double spacing = kDefaultSpacing;
    std::vector<LayoutNode> children;
};

struct TextFit {
    double font_pt = 0;
    int lines = 1;
    double scale = 1.0;
    bool clipped = false;
};

/// Wrap-and-shrink: scales walk a 0.01 grid from 1.00 down to `min_scale`
/// (which is always the last candidate) and the first fitting scale wins.
TextFit fit_text(std::size_t codepoints, double font, std::optional<double> box_w,
                 std::optional<double> box_h, int line_limit, double min_scale) {
    auto lines_at = [&](double f) -> int {
        if (!box_w) return 1;
        int cpl = static_cast<int>(std::floor(*box_w / (kGlyphWidthFactor * f) + kEps));
        if (cpl < 1) return -1;  // not even one glyph per line
        if (codepoints == 0) return 1;
        return static_cast<int>((codepoints + cpl - 1) / static_cast<std::size_t>(cpl));
    };
    auto fits = [&](double s, TextFit& out) -> bool {
        double f = font * s;
        int lines = lines_at(f);
        if (lines < 0) return false;
        if (line_limit > 0 && lines > line_limit) return false;
        if (box_h && kLineHeightFactor * f * lines > *box_h + kEps) return false;
        out = TextFit{f, lines, s, false};
        return true;
    };

    TextFit fit;
    for (int k = 0;; ++k) {
        double s = (100 - k) / 100.0;
        if (s <= min_scale + kEps) break;
        if (fits(s, fit)) return fit;
    }
    if (fits(min_scale, fit)) return fit;

    // Nothing fits: truncate at the smallest allowed scale.
    double f = font * min_scale;
    int lines = lines_at(f);
    if (lines < 0) lines = 1;
    if (line_limit > 0 && lines > line_limit) lines = line_limit;
    if (box_h) {
        int cap = static_cast<int>(std::floor(*box_h / (kLineHeightFactor * f) + kEps));
        if (cap < 1) cap = 1;
        if (lines > cap) lines = cap;
    }
    return TextFit{f, lines, min_scale, true};
}

class Renderer {
  public:
    Renderer(const Project& project, const DeviceConfig& device)
        : project_(project), device_(device) {}

    LayoutNode measure(const UiNode& node, Inherited inh) {
        if (const Modifier* m = node.modifier("font")) inh.font = font_from_modifier(*m);
        if (const Modifier* m = node.modifier("color"))
            inh.fg = m->arg_positional()->value.text;
        if (const Modifier* m = node.modifier("background"))
            inh.bg = m->arg_positional()->value.text;
        if (const Modifier* m = node.modifier("axHidden"))
            inh.hidden = m->arg_positional()->value.boolean;

        LayoutNode ln;
        RenderedElement& el = ln.element;
        el.id = element_identifier(node).value_or("");
        el.kind = node.kind;
        el.declared_in = inh.declared_in;
        el.font = inh.font;
        el.font_pt = effective_font_size(inh.font, device_.category);
        el.foreground = inh.fg;
        el.background = inh.bg;
        el.exposed = !inh.hidden && !inh.suppressed;
        if (const Modifier* m = node.modifier("axLabel"))
            el.label = m->arg_positional()->value.text;

        Inherited child_inh = inh;
        if (const Modifier* m = node.modifier("axElement"))
            if (m->arg_named("children")->value.text == "ignore") child_inh.suppressed = true;

        const Modifier* frame = node.modifier("frame");
        std::optional<double> frame_w, frame_h;
        if (frame) {
            if (const Arg* a = frame->arg_named("width")) frame_w = a->value.number;
            if (const Arg* a = frame->arg_named("height")) frame_h = a->value.number;
        }

        switch (node.kind) {
            case NodeKind::Text: {
                el.text = node.arg_positional()->value.text;
                if (el.label.empty()) el.label = el.text;
                if (const Modifier* m = node.modifier("lineLimit"))
                    el.line_limit = static_cast<int>(m->arg_positional()->value.number);
                double min_scale = 1.0;
                if (const Modifier* m = node.modifier("minScaleFactor"))
                    min_scale = m->arg_positional()->value.number;
                TextFit fit = fit_text(count_codepoints(el.text), el.font_pt, frame_w,
                                       frame_h, el.line_limit, min_scale);
                el.font_pt = fit.font_pt;
                el.scale_factor = fit.scale;
                el.clipped = fit.clipped;
                el.frame.w = frame_w ? *frame_w
                                     : kGlyphWidthFactor * fit.font_pt *
                                           static_cast<double>(count_codepoints(el.text));
                el.frame.h = frame_h ? *frame_h : kLineHeightFactor * fit.font_pt * fit.lines;
                break;
            }
            case NodeKind::Button:
            case NodeKind::Toggle: {
                el.text = node.arg_positional()->value.text;
                if (el.label.empty()) el.label = el.text;
                if (const Arg* a = node.arg_named("action")) el.action = a->value.text;
                double n = static_cast<double>(count_codepoints(el.text));
                el.frame.w = kGlyphWidthFactor * el.font_pt * n + 2 * kControlPadH;
                el.frame.h = kLineHeightFactor * el.font_pt + 2 * kControlPadV;
                if (frame_w) el.frame.w = *frame_w;
                if (frame_h) el.frame.h = *frame_h;
                break;
            }
            case NodeKind::Image: {
                el.asset_name = node.arg_positional()->value.text;
                el.frame.w = frame_w.value_or(kImageSide);
                el.frame.h = frame_h.value_or(kImageSide);
                break;
            }
            case NodeKind::Spacer:
                break;
            case NodeKind::ViewRef: {
                const ViewDecl* target = project_.decl(node.ref_name);
                if (!target) throw UnknownView(node.ref_name);
                Inherited ref_inh = child_inh;
                ref_inh.declared_in = node.ref_name;
                LayoutNode child = measure(target->body, ref_inh);
                el.frame.w = child.element.frame.w;
                el.frame.h = child.element.frame.h;
                ln.children.push_back(std::move(child));
                if (frame_w) el.frame.w = *frame_w;
                if (frame_h) el.frame.h = *frame_h;
                break;
            }
            case NodeKind::VStack:
            case NodeKind::HStack:
            case NodeKind::ZStack: {
                if (const Arg* a = node.arg_named("spacing")) ln.spacing = a->value.number;
                for (const auto& c : node.children) {
                    if (c.kind == NodeKind::Spacer) continue;
                    ln.children.push_back(measure(c, child_inh));
                }
                double w = 0, h = 0;
                std::size_t k = ln.children.size();
                for (const auto& c : ln.children) {
                    const Rect& r = c.element.frame;
                    if (node.kind == NodeKind::VStack) {
                        w = std::max(w, r.w);
                        h += r.h;
                    } else if (node.kind == NodeKind::HStack) {
                        w += r.w;
                        h = std::max(h, r.h);
                    } else {
                        w = std::max(w, r.w);
                        h = std::max(h, r.h);
                    }
                }
                if (k > 1 && node.kind == NodeKind::VStack)
                    h += ln.spacing * static_cast<double>(k - 1);
                if (k > 1 && node.kind == NodeKind::HStack)
                    w += ln.spacing * static_cast<double>(k - 1);
                el.frame.w = w;
                el.frame.h = h;
                if (frame_w) el.frame.w = *frame_w;
                if (frame_h) el.frame.h = *frame_h;
                break;
            }
        }

        if (const Modifier* m = node.modifier("padding")) {
            ln.pad = m->arg_positional()->value.number;
            el.frame.w += 2 * ln.pad;
            el.frame.h += 2 * ln.pad;
        }
        return ln;
    }

    void place(LayoutNode& ln, double x, double y, std::vector<RenderedElement>& out) {
        ln.element.frame.x = x;
        ln.element.frame.y = y;
        if (ln.element.kind != NodeKind::Spacer) out.push_back(ln.element);

        double cx = x + ln.pad;
        double cy = y + ln.pad;
        switch (ln.element.kind) {
            case NodeKind::VStack:
                for (auto& c : ln.children) {
                    place(c, cx, cy, out);
                    cy += c.element.frame.h + ln.spacing;
                }
                break;
            case NodeKind::HStack:
                for (auto& c : ln.children) {
                    place(c, cx, cy, out);
                    cx += c.element.frame.w + ln.spacing;
                }
                break;
            case NodeKind::ZStack: {
                double iw = ln.element.frame.w - 2 * ln.pad;
                double ih = ln.element.frame.h - 2 * ln.pad;
                for (auto& c : ln.children)
                    place(c, cx + (iw - c.element.frame.w) / 2,
                          cy + (ih - c.element.frame.h) / 2, out);
                break;
            }
            default:
                for (auto& c : ln.children) place(c, cx, cy, out);
                break;
        }
    }

  private:
    const Project& project_;
    const DeviceConfig& device_;
};

}  // namespace

double category_multiplier(ContentSizeCategory category) {
    switch (category) {
        case ContentSizeCategory::XS: return 0.82;
        case ContentSizeCategory::S: return 0.88;
        case ContentSizeCategory::M: return 0.94;
        case ContentSizeCategory::L: return 1.00;
        case ContentSizeCategory::XL: return 1.12;
        case ContentSizeCategory::XXL: return 1.24;
        case ContentSizeCategory::XXXL: return 1.35;
    }
    return 1.0;
}

const char* category_name(ContentSizeCategory category) {
    switch (category) {
        case ContentSizeCategory::XS: return "XS";
        case ContentSizeCategory::S: return "S";
        case ContentSizeCategory::M: return "M";
        case ContentSizeCategory::L: return "L";
        case ContentSizeCategory::XL: return "XL";
        case ContentSizeCategory::XXL: return "XXL";
        case ContentSizeCategory::XXXL: return "XXXL";
    }
    return "L";
}

std::optional<ContentSizeCategory> category_from_name(const std::string& name) {
    for (ContentSizeCategory c : all_categories())
        if (name == category_name(c)) return c;
    return std::nullopt;
}

const std::vector<ContentSizeCategory>& all_categories() {
    static const std::vector<ContentSizeCategory> kAll = {
        ContentSizeCategory::XS, ContentSizeCategory::S,  ContentSizeCategory::M,
        ContentSizeCategory::L,  ContentSizeCategory::XL, ContentSizeCategory::XXL,
        ContentSizeCategory::XXXL,
    };
    return kAll;
}

double style_size(const std::string& style) {
    if (style == "headline") return 20.0;
    if (style == "caption") return 12.0;
    return 17.0;  // body
}

double effective_font_size(const FontSpec& font, ContentSizeCategory category) {
    if (!font.dynamic) return font.base;
    double size = font.base * category_multiplier(category);
    if (font.max && size > *font.max) size = *font.max;
    return size;
}

const RenderedElement* Scene::find(const ElementId& id) const {
    for (const auto& e : elements)
        if (e.id == id) return &e;
    return nullptr;
}

const RenderedElement& Scene::at(const ElementId& id) const {
    const RenderedElement* e = find(id);
    if (!e) throw UnknownElement(id);
    return *e;
}

Scene resolve_screen(const Project& project, const UiHierarchy& hierarchy,
                     const DeviceConfig& device) {
    const ViewDecl* decl = project.decl(hierarchy.root_view);
    if (!decl) throw UnknownView(hierarchy.root_view);

    Scene scene;
    scene.root_view = hierarchy.root_view;
    scene.device = device;

    Inherited inh;
    inh.declared_in = hierarchy.root_view;
    Renderer renderer(project, device);
    LayoutNode root = renderer.measure(decl->body, inh);
    renderer.place(root, 0, 0, scene.elements);
    return scene;
}

nlohmann::ordered_json scene_to_json(const Scene& scene,
                                     const std::optional<ElementId>& highlight) {
    nlohmann::ordered_json doc;
    doc["schemaVersion"] = 1;
    doc["rootView"] = scene.root_view;
    doc["device"] = {{"name", scene.device.name},
                     {"width", scene.device.width},
                     {"height", scene.device.height},
                     {"category", category_name(scene.device.category)}};
    doc["elements"] = nlohmann::ordered_json::array();
    for (const auto& e : scene.elements) {
        nlohmann::ordered_json el;
        el["id"] = e.id;
        el["kind"] = node_kind_name(e.kind);
        el["declaredIn"] = e.declared_in;
        el["frame"] = {{"x", e.frame.x}, {"y", e.frame.y}, {"width", e.frame.w},
                       {"height", e.frame.h}};
        el["exposed"] = e.exposed;
        el["text"] = e.text;
        el["label"] = e.label;
        el["action"] = e.action;
        el["asset"] = e.asset_name;
        el["font"] = {{"dynamic", e.font.dynamic}, {"base", e.font.base}};
        if (e.font.max)
            el["font"]["max"] = *e.font.max;
        else
            el["font"]["max"] = nullptr;
        el["fontPt"] = e.font_pt;
        el["scaleFactor"] = e.scale_factor;
        el["lineLimit"] = e.line_limit;
        el["clipped"] = e.clipped;
        el["foreground"] = e.foreground;
        el["background"] = e.background;
        if (highlight && *highlight == e.id) el["highlighted"] = true;
        doc["elements"].push_back(std::move(el));
    }
    return doc;
}

}  // namespace minia11y
