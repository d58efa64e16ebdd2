#include "minia11y/backends.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <httplib.h>

#include "minia11y/errors.hpp"
#include "minia11y/hierarchy.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/printer.hpp"
#include "minia11y/render.hpp"
#include "minia11y/scanner.hpp"
#include "minia11y/text_util.hpp"

namespace minia11y {

// -- scripted -----------------------------------------------------------------

ScriptedBackend::ScriptedBackend(const nlohmann::json& script) {
    if (!script.is_object() || !script.contains("responses") ||
        !script["responses"].is_array())
        throw BackendError("script must be an object with a \"responses\" array");
    for (const auto& item : script["responses"]) {
        Entry e;
        e.role = item.value("role", "");
        e.match = item.value("match", "");
        if (!item.contains("reply") || !item["reply"].is_string())
            throw BackendError("script entry without a string \"reply\"");
        e.reply = item["reply"].get<std::string>();
        entries_.push_back(std::move(e));
    }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BackendError("cannot read script " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw BackendError("script " + path.string() + " is not valid JSON: " + e.what());
    }
    return std::make_shared<ScriptedBackend>(doc);
}

ChatResponse ScriptedBackend::complete(const std::vector<ChatMessage>& messages,
                                       const ChatContext& context) {
    std::string user_text;
    for (const auto& m : messages)
        if (m.role == ChatRole::User) user_text += m.text;

    for (const auto& e : entries_) {
        if (!e.role.empty() && e.role != context.role) continue;
        if (!e.match.empty() && user_text.find(e.match) == std::string::npos) continue;
        return ChatResponse{e.reply, 0, 0};
    }
    throw BackendError("no scripted response matches a \"" + context.role + "\" request");
}

// -- heuristic ----------------------------------------------------------------

namespace {

struct PlanRow {
    const char* keyword;  // lowercase dispatch token looked up in summaries
    const char* summary;
    const char* rationale;
    const char* guideline;
};

const std::vector<PlanRow>& plan_rows(IssueKind kind) {
    static const std::vector<PlanRow> kClipped = {
        {"minscalefactor", "Allow the text to shrink by setting minScaleFactor(0.5)",
         "A smaller minimum scale lets the line fit inside its fixed frame instead of "
         "truncating.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"frame", "Remove the fixed frame so the text uses its intrinsic width",
         "Without the hard width the text lays out at full size and nothing is cut off.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"linelimit", "Remove the lineLimit so the text can wrap",
         "Allowing more lines lets the full string render inside the available width.",
         "WCAG 2.1 1.4.4 Resize Text"},
    };
    static const std::vector<PlanRow> kContrast = {
        {"darken", "Darken the foreground color until the contrast ratio passes",
         "A darker foreground raises the luminance difference against the light "
         "background.",
         "WCAG 2.1 1.4.3 Contrast (Minimum)"},
        {"background", "Adjust the background color behind the text",
         "Lightening the backdrop increases the ratio without touching the text color.",
         "WCAG 2.1 1.4.3 Contrast (Minimum)"},
        {"font", "Increase the font size to the headline style",
         "Text at 18pt or larger only needs a 3.0 contrast ratio.",
         "WCAG 2.1 1.4.3 Contrast (Minimum)"},
    };
    static const std::vector<PlanRow> kFixedFont = {
        {"nearest", "Replace the fixed font size with the nearest text style",
         "Text styles scale with the user's content size setting.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"body", "Use the body text style",
         "The default body style fully supports dynamic type.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"cap", "Use the nearest text style with a maximum size cap",
         "A capped style still scales through the common categories while limiting "
         "layout shift.",
         "WCAG 2.1 1.4.4 Resize Text"},
    };
    static const std::vector<PlanRow> kCappedFont = {
        {"remove", "Remove the maximum size cap from the font",
         "Uncapped styles scale through every content size category.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"raise", "Raise the maximum size cap above the largest category",
         "A cap above the largest category size no longer blocks scaling.",
         "WCAG 2.1 1.4.4 Resize Text"},
        {"body", "Use the plain body text style",
         "The uncapped body style fully supports dynamic type.",
         "WCAG 2.1 1.4.4 Resize Text"},
    };
    static const std::vector<PlanRow> kNoDescription = {
        {"derived", "Add an accessibility label derived from the asset name",
         "A spoken label tells assistive technology users what the element shows.",
         "WCAG 2.1 1.1.1 Non-text Content"},
        {"hide", "Hide the decorative element from assistive technology",
         "Purely decorative images should be skipped rather than announced as "
         "unlabeled.",
         "WCAG 2.1 1.1.1 Non-text Content"},
        {"naming", "Add an accessibility label naming the element",
         "Any concise name is better than an unlabeled element.",
         "WCAG 2.1 4.1.2 Name, Role, Value"},
    };
    static const std::vector<PlanRow> kBadLabel = {
        {"plain words", "Rewrite the label in plain words",
         "Labels are read aloud; identifiers and file names sound like noise.",
         "WCAG 2.1 4.1.2 Name, Role, Value"},
        {"hide", "Hide the element from assistive technology",
         "If the element is decorative it should not be announced at all.",
         "WCAG 2.1 1.1.1 Non-text Content"},
        {"shorten", "Shorten the label to its key word",
         "A single descriptive word reads cleanly and avoids identifier syntax.",
         "WCAG 2.1 4.1.2 Name, Role, Value"},
    };
    static const std::vector<PlanRow> kUnreachable = {
        {"contain", "Expose the group as a single container element",
         "Changing the grouping from ignore to contain makes the text reachable again.",
         "WCAG 2.1 1.3.1 Info and Relationships"},
        {"grouping override", "Remove the grouping override so children are exposed",
         "Dropping the ignore override restores the default element tree.",
         "WCAG 2.1 1.3.1 Info and Relationships"},
        {"unhide", "Unhide the text for assistive technology",
         "Text that conveys information must be reachable by screen readers.",
         "WCAG 2.1 1.3.1 Info and Relationships"},
    };
    static const std::vector<PlanRow> kHitArea = {
        {"44", "Give the control an explicit 44pt frame",
         "44x44 points is the minimum comfortable touch target.",
         "WCAG 2.1 2.5.5 Target Size"},
        {"merge", "Merge the control with its sibling text into one labeled control",
         "One large labeled control is easier to hit and to announce than a tiny "
         "button beside text.",
         "WCAG 2.1 2.5.5 Target Size"},
        {"padding", "Add padding around the control to grow its hit area",
         "Padding enlarges the tappable region without changing the visible glyph.",
         "WCAG 2.1 2.5.5 Target Size"},
    };
    switch (kind) {
        case IssueKind::TextClipped: return kClipped;
        case IssueKind::ContrastFailed:
        case IssueKind::ContrastNearlyPassed: return kContrast;
        case IssueKind::DynamicTypeUnsupported: return kFixedFont;
        case IssueKind::DynamicTypePartiallyUnsupported: return kCappedFont;
        case IssueKind::ElementHasNoDescription: return kNoDescription;
        case IssueKind::LabelNotHumanReadable: return kBadLabel;
        case IssueKind::PotentiallyInaccessibleText: return kUnreachable;
        case IssueKind::HitAreaTooSmall: return kHitArea;
    }
    return kClipped;
}

Arg pos_arg(Literal v) { return Arg{"", std::move(v)}; }
Arg named_arg(std::string name, Literal v) { return Arg{std::move(name), std::move(v)}; }

Modifier make_mod(std::string name, std::vector<Arg> args) {
    Modifier m;
    m.name = std::move(name);
    m.args = std::move(args);
    return m;
}

/// Root-to-target chain of nodes, empty when absent.
bool find_path(const UiNode& node, const std::string& id,
               std::vector<const UiNode*>& path) {
    path.push_back(&node);
    if (auto own = element_identifier(node); own && *own == id) return true;
    for (const auto& c : node.children)
        if (find_path(c, id, path)) return true;
    path.pop_back();
    return false;
}

bool node_is(const UiNode& node, const std::string& id) {
    auto own = element_identifier(node);
    return own && *own == id;
}

ViewDecl edit_target(const ViewDecl& decl, const std::string& id,
                     const std::function<UiNode(const UiNode&)>& edit) {
    ViewDecl out = decl;
    bool changed = false;
    out.body = transform_node(
        decl.body,
        [&](const UiNode& n) -> std::optional<UiNode> {
            if (!node_is(n, id)) return std::nullopt;
            return edit(n);
        },
        &changed);
    if (changed) out.source = nullptr;
    return out;
}

int channel_of(const std::string& color, int index) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return 0;
    };
    return hex(color[1 + 2 * index]) * 16 + hex(color[2 + 2 * index]);
}

std::string to_color(int r, int g, int b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", r, g, b);
    return buf;
}

std::string darken(const std::string& color, double factor) {
    auto scale = [&](int c) { return static_cast<int>(std::lround(c * factor)); };
    return to_color(scale(channel_of(color, 0)), scale(channel_of(color, 1)),
                    scale(channel_of(color, 2)));
}

std::string lighten(const std::string& color, double factor) {
    auto scale = [&](int c) {
        return 255 - static_cast<int>(std::lround((255 - c) * factor));
    };
    return to_color(scale(channel_of(color, 0)), scale(channel_of(color, 1)),
                    scale(channel_of(color, 2)));
}

/// Nearest modifier of that name on the target or its ancestors.
const Modifier* inherited_modifier(const std::vector<const UiNode*>& path,
                                   const std::string& name) {
    for (auto it = path.rbegin(); it != path.rend(); ++it)
        if (const Modifier* m = (*it)->modifier(name)) return m;
    return nullptr;
}

std::string nearest_style(double size) {
    const std::pair<const char*, double> styles[] = {
        {"body", 17.0}, {"headline", 20.0}, {"caption", 12.0}};
    std::string best = "body";
    double best_d = 1e9;
    for (const auto& [name, pt] : styles) {
        double d = std::fabs(size - pt);
        if (d < best_d) {
            best_d = d;
            best = name;
        }
    }
    return best;
}

std::string target_label(const UiNode& node) {
    if (const Modifier* m = node.modifier("axLabel"))
        if (const Arg* a = m->arg_positional()) return a->value.text;
    if (const Arg* a = node.arg_positional()) return a->value.text;
    return "";
}

std::string last_word(const std::string& text) {
    auto words = split_whitespace(text);
    return words.empty() ? text : words.back();
}

/// The issue-kind specific rewrite. `row` is the dispatched plan table row
/// index (0-based); `attempt` starts at 1 and widens the color steps.
ViewDecl apply_plan(const ViewDecl& decl, IssueKind kind, int row,
                    const std::string& element, int attempt) {
    std::vector<const UiNode*> path;
    if (!find_path(decl.body, element, path)) return decl;  // honest no-op
    const UiNode& target = *path.back();

    switch (kind) {
        case IssueKind::TextClipped: {
            if (row == 0)
                return edit_target(decl, element, [](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "minScaleFactor",
                        make_mod("minScaleFactor", {pos_arg(Literal::num(0.5))}));
                });
            if (row == 1)
                return edit_target(decl, element, [](const UiNode& n) {
                    return with_modifier_removed(n, "frame");
                });
            return edit_target(decl, element, [](const UiNode& n) {
                return with_modifier_removed(n, "lineLimit");
            });
        }
        case IssueKind::ContrastFailed:
        case IssueKind::ContrastNearlyPassed: {
            double factor = std::pow(0.8, attempt);
            if (row == 0) {
                const Modifier* m = inherited_modifier(path, "color");
                std::string fg = m ? m->arg_positional()->value.text : "#000000";
                std::string next = darken(fg, factor);
                return edit_target(decl, element, [&](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "color", make_mod("color", {pos_arg(Literal::color(next))}));
                });
            }
            if (row == 1) {
                const Modifier* m = inherited_modifier(path, "background");
                std::string bg = m ? m->arg_positional()->value.text : "#FFFFFF";
                std::string next = lighten(bg, factor);
                return edit_target(decl, element, [&](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "background",
                        make_mod("background", {pos_arg(Literal::color(next))}));
                });
            }
            return edit_target(decl, element, [](const UiNode& n) {
                return with_modifier_replaced(
                    n, "font",
                    make_mod("font", {named_arg("style", Literal::word("headline"))}));
            });
        }
        case IssueKind::DynamicTypeUnsupported: {
            const Modifier* m = inherited_modifier(path, "font");
            double size = 17.0;
            if (m)
                if (const Arg* a = m->arg_named("size")) size = a->value.number;
            std::string style = nearest_style(size);
            std::vector<Arg> args;
            if (row == 1) {
                args = {named_arg("style", Literal::word("body"))};
            } else if (row == 2) {
                args = {named_arg("style", Literal::word(style)),
                        named_arg("max", Literal::num(static_cast<double>(
                                             std::lround(size * 1.35))))};
            } else {
                args = {named_arg("style", Literal::word(style))};
            }
            return edit_target(decl, element, [&](const UiNode& n) {
                return with_modifier_replaced(n, "font", make_mod("font", args));
            });
        }
        case IssueKind::DynamicTypePartiallyUnsupported: {
            const Modifier* m = inherited_modifier(path, "font");
            std::string style = "body";
            if (m)
                if (const Arg* a = m->arg_named("style")) style = a->value.text;
            std::vector<Arg> args;
            if (row == 1) {
                double cap = static_cast<double>(std::lround(style_size(style) * 1.35));
                args = {named_arg("style", Literal::word(style)),
                        named_arg("max", Literal::num(cap))};
            } else if (row == 2) {
                args = {named_arg("style", Literal::word("body"))};
            } else {
                args = {named_arg("style", Literal::word(style))};
            }
            return edit_target(decl, element, [&](const UiNode& n) {
                return with_modifier_replaced(n, "font", make_mod("font", args));
            });
        }
        case IssueKind::ElementHasNoDescription: {
            std::string base;
            if (target.kind == NodeKind::Image) {
                base = target.arg_positional() ? target.arg_positional()->value.text : "";
            } else if (const Arg* a = target.arg_named("action")) {
                base = a->value.text;
            }
            if (row == 1)
                return edit_target(decl, element, [](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "axHidden",
                        make_mod("axHidden", {pos_arg(Literal::boolean_value(true))}));
                });
            std::string label = row == 2 ? base : humanize_identifier(base);
            return edit_target(decl, element, [&](const UiNode& n) {
                return with_modifier_replaced(
                    n, "axLabel", make_mod("axLabel", {pos_arg(Literal::str(label))}));
            });
        }
        case IssueKind::LabelNotHumanReadable: {
            std::string current = target_label(target);
            if (row == 1)
                return edit_target(decl, element, [](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "axHidden",
                        make_mod("axHidden", {pos_arg(Literal::boolean_value(true))}));
                });
            std::string humane = humanize_identifier(current);
            std::string label = row == 2 ? last_word(humane) : humane;
            return edit_target(decl, element, [&](const UiNode& n) {
                return with_modifier_replaced(
                    n, "axLabel", make_mod("axLabel", {pos_arg(Literal::str(label))}));
            });
        }
        case IssueKind::PotentiallyInaccessibleText: {
            // The override usually sits on an ancestor; take the nearest.
            const UiNode* carrier = nullptr;
            for (auto it = path.rbegin(); it != path.rend() && !carrier; ++it)
                if ((*it)->has_modifier("axElement")) carrier = *it;
            const UiNode* hidden_carrier = nullptr;
            for (auto it = path.rbegin(); it != path.rend() && !hidden_carrier; ++it) {
                const Modifier* m = (*it)->modifier("axHidden");
                if (m && m->arg_positional()->value.boolean) hidden_carrier = *it;
            }
            if (row == 2 && hidden_carrier) {
                std::string carrier_id = element_identifier(*hidden_carrier).value_or("");
                return edit_target(decl, carrier_id, [](const UiNode& n) {
                    return with_modifier_removed(n, "axHidden");
                });
            }
            if (!carrier) return decl;
            std::string carrier_id = element_identifier(*carrier).value_or("");
            if (row == 1)
                return edit_target(decl, carrier_id, [](const UiNode& n) {
                    return with_modifier_removed(n, "axElement");
                });
            return edit_target(decl, carrier_id, [](const UiNode& n) {
                return with_modifier_replaced(
                    n, "axElement",
                    make_mod("axElement", {named_arg("children", Literal::word("contain"))}));
            });
        }
        case IssueKind::HitAreaTooSmall: {
            if (row == 1 && path.size() >= 2 &&
                is_container(path[path.size() - 2]->kind)) {
                const UiNode& parent = *path[path.size() - 2];
                std::string parent_id = element_identifier(parent).value_or("");
                std::string label;
                for (const auto& sibling : parent.children) {
                    if (sibling.kind != NodeKind::Text) continue;
                    if (const Arg* a = sibling.arg_positional()) {
                        if (!label.empty()) label += " ";
                        label += a->value.text;
                    }
                }
                std::string own = target.arg_positional()
                                      ? target.arg_positional()->value.text
                                      : "";
                if (!own.empty()) {
                    if (!label.empty()) label += " ";
                    label += own;
                }
                std::string action;
                if (const Arg* a = target.arg_named("action")) action = a->value.text;

                UiNode merged;
                merged.kind = target.kind;
                merged.args = {pos_arg(Literal::str(label)),
                               named_arg("action", Literal::word(action))};
                merged.modifiers = {
                    make_mod("padding", {pos_arg(Literal::num(12))}),
                    make_mod("axIdentifier", {pos_arg(Literal::str(element))}),
                };
                ViewDecl out = decl;
                bool changed = false;
                out.body = transform_node(
                    decl.body,
                    [&](const UiNode& n) -> std::optional<UiNode> {
                        if (!node_is(n, parent_id)) return std::nullopt;
                        return merged;
                    },
                    &changed);
                if (changed) out.source = nullptr;
                return out;
            }
            if (row == 2 || row == 1)
                return edit_target(decl, element, [](const UiNode& n) {
                    return with_modifier_replaced(
                        n, "padding", make_mod("padding", {pos_arg(Literal::num(8))}));
                });
            return edit_target(decl, element, [](const UiNode& n) {
                return with_modifier_replaced(
                    n, "frame",
                    make_mod("frame", {named_arg("width", Literal::num(44)),
                                       named_arg("height", Literal::num(44))}));
            });
        }
    }
    return decl;
}

int dispatch_row(IssueKind kind, int plan_index, const std::string& summary) {
    const auto& rows = plan_rows(kind);
    std::string lower = to_lower(summary);
    // Own plan summaries round-trip verbatim; match those before keywords.
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (lower.find(to_lower(rows[i].summary)) != std::string::npos)
            return static_cast<int>(i);
    // Later rows carry the more specific keywords ("cap" vs "nearest").
    for (std::size_t i = rows.size(); i-- > 0;)
        if (lower.find(rows[i].keyword) != std::string::npos)
            return static_cast<int>(i);
    if (plan_index >= 1 && plan_index <= static_cast<int>(rows.size()))
        return plan_index - 1;
    return 0;
}

}  // namespace

ChatResponse HeuristicBackend::complete(const std::vector<ChatMessage>&,
                                        const ChatContext& context) {
    const auto& payload = context.payload;
    try {
        if (context.role == "plan") {
            auto kind = issue_kind_from_name(payload.at("issue").at("kind"));
            if (!kind) throw BackendError("heuristic planner: unknown issue kind");
            int count = payload.value("count", 3);
            const auto& rows = plan_rows(*kind);
            std::string out;
            for (int i = 0; i < count; ++i) {
                const PlanRow& row = rows[static_cast<std::size_t>(i) % rows.size()];
                out += std::to_string(i + 1) + ". " + row.summary + "\n";
                out += std::string("   Rationale: ") + row.rationale + "\n";
                out += std::string("   Guideline: ") + row.guideline + "\n";
            }
            return ChatResponse{out, 0, 0};
        }
        if (context.role == "rate") {
            std::string element = payload.at("issue").at("element");
            std::string snippet = payload.at("snippet").at("text");
            std::string relation = payload.at("snippet").at("relation");
            std::string summary = payload.at("plan").at("summary");
            int score = 0;
            bool holds = snippet.find("\"" + element + "\"") != std::string::npos;
            if (holds) score += 60;
            static const char* kModifiers[] = {
                "minscalefactor", "linelimit", "axlabel",  "axelement", "axhidden",
                "padding",        "frame",     "font",     "color",     "background"};
            std::string lower_plan = to_lower(summary);
            std::string lower_snippet = to_lower(snippet);
            for (const char* mod : kModifiers)
                if (lower_plan.find(mod) != std::string::npos &&
                    lower_snippet.find(mod) != std::string::npos) {
                    score += 25;
                    break;
                }
            if (relation == "self") score += 15;
            if (score > 100) score = 100;
            std::string out = "SCORE: " + std::to_string(score) + "\n";
            out += std::string("REASONING: the declaration ") +
                   (holds ? "contains" : "does not contain") + " element " + element +
                   " and is its " + relation + " declaration.\n";
            return ChatResponse{out, 0, 0};
        }
        if (context.role == "compare") {
            const auto& candidates = payload.at("candidates");
            std::string best;
            double best_score = -1;
            for (const auto& c : candidates) {
                double score = c.value("score", 0.0);
                if (score > best_score) {
                    best_score = score;
                    best = c.at("viewName").get<std::string>();
                }
            }
            if (best.empty()) throw BackendError("heuristic compare: no candidates");
            return ChatResponse{"CHOICE: " + best + "\n", 0, 0};
        }
        if (context.role == "fix") {
            auto kind = issue_kind_from_name(payload.at("issue").at("kind"));
            if (!kind) throw BackendError("heuristic fixer: unknown issue kind");
            std::string element = payload.at("issue").at("element");
            std::string snippet = payload.at("snippet").at("text");
            int plan_index = payload.at("plan").value("index", 1);
            std::string summary = payload.at("plan").value("summary", "");
            int attempt = payload.value("attempt", 1);

            ViewDecl decl = parse_view_decl(snippet);
            int row = dispatch_row(*kind, plan_index, summary);
            ViewDecl fixed = apply_plan(decl, *kind, row, element, attempt);

            std::string out = "EXPLANATION: " +
                              (summary.empty()
                                   ? std::string(plan_rows(*kind)[static_cast<std::size_t>(
                                         row)].summary)
                                   : summary) +
                              " on " + element + ".\n";
            out += "```minui\n" + print_decl(fixed) + "\n```\n";
            return ChatResponse{out, 0, 0};
        }
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("heuristic backend: malformed context: ") +
                           e.what());
    } catch (const SyntaxError& e) {
        throw BackendError(std::string("heuristic backend: snippet does not parse: ") +
                           e.what());
    }
    throw BackendError("heuristic backend: unknown request kind \"" + context.role +
                       "\"");
}

// -- http ---------------------------------------------------------------------

HttpBackend::HttpBackend(std::string base_url, std::string model, std::string api_key,
                         int max_concurrent, int timeout_seconds)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds),
      free_slots_(max_concurrent > 0 ? max_concurrent : 1) {}

ChatResponse HttpBackend::complete(const std::vector<ChatMessage>& messages,
                                   const ChatContext&) {
    struct Slot {
        HttpBackend& b;
        explicit Slot(HttpBackend& backend) : b(backend) {
            std::unique_lock<std::mutex> lock(b.mutex_);
            b.slots_available_.wait(lock, [&] { return b.free_slots_ > 0; });
            --b.free_slots_;
        }
        ~Slot() {
            {
                std::lock_guard<std::mutex> lock(b.mutex_);
                ++b.free_slots_;
            }
            b.slots_available_.notify_one();
        }
    } slot(*this);

    nlohmann::ordered_json body;
    body["model"] = model_;
    body["temperature"] = 0;
    body["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : messages)
        body["messages"].push_back(
            {{"role", m.role == ChatRole::System ? "system" : "user"},
             {"content", m.text}});

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res)
        throw BackendError("cannot reach " + base_url_ + ": " +
                           httplib::to_string(res.error()));
    if (res->status != 200)
        throw BackendError("HTTP " + std::to_string(res->status) + " from " + base_url_ +
                           ": " + res->body.substr(0, 200));

    try {
        auto doc = nlohmann::json::parse(res->body);
        ChatResponse out;
        out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        if (doc.contains("usage") && doc["usage"].is_object()) {
            out.prompt_tokens = doc["usage"].value("prompt_tokens", 0L);
            out.completion_tokens = doc["usage"].value("completion_tokens", 0L);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("malformed completion response: ") + e.what());
    }
}

// -- factory ------------------------------------------------------------------

std::shared_ptr<Backend> make_backend(const BackendConfig& config) {
    if (config.spec == "heuristic") return std::make_shared<HeuristicBackend>();
    if (starts_with(config.spec, "scripted:"))
        return ScriptedBackend::from_file(config.spec.substr(9));
    if (starts_with(config.spec, "http://") || starts_with(config.spec, "https://")) {
        const char* key = std::getenv(config.api_key_env.c_str());
        return std::make_shared<HttpBackend>(config.spec, config.model,
                                             key ? key : "", config.max_concurrent,
                                             config.timeout_seconds);
    }
    throw BackendError("unknown backend \"" + config.spec +
                       "\"; use heuristic, scripted:<file.json> or an http(s) URL");
}

}  // namespace minia11y
