#include "minia11y/ast.hpp"

namespace minia11y {

Literal Literal::str(std::string value) {
    Literal l;
    l.kind = LiteralKind::String;
    l.text = std::move(value);
    return l;
}

Literal Literal::num(double value) {
    Literal l;
    l.kind = LiteralKind::Number;
    l.number = value;
    return l;
}

Literal Literal::color(std::string rrggbb) {
    Literal l;
    l.kind = LiteralKind::Color;
    l.text = std::move(rrggbb);
    return l;
}

Literal Literal::boolean_value(bool value) {
    Literal l;
    l.kind = LiteralKind::Bool;
    l.boolean = value;
    return l;
}

Literal Literal::word(std::string value) {
    Literal l;
    l.kind = LiteralKind::Word;
    l.text = std::move(value);
    return l;
}

bool operator==(const Literal& a, const Literal& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case LiteralKind::Number: return a.number == b.number;
        case LiteralKind::Bool: return a.boolean == b.boolean;
        default: return a.text == b.text;
    }
}

bool operator==(const Arg& a, const Arg& b) {
    return a.name == b.name && a.value == b.value;
}

const Arg* Modifier::arg_named(const std::string& n) const {
    for (const auto& a : args)
        if (a.name == n) return &a;
    return nullptr;
}

const Arg* Modifier::arg_positional(std::size_t index) const {
    std::size_t seen = 0;
    for (const auto& a : args) {
        if (!a.name.empty()) continue;
        if (seen == index) return &a;
        ++seen;
    }
    return nullptr;
}

bool structurally_equal(const Modifier& a, const Modifier& b) {
    return a.name == b.name && a.args == b.args;
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::VStack: return "VStack";
        case NodeKind::HStack: return "HStack";
        case NodeKind::ZStack: return "ZStack";
        case NodeKind::Text: return "Text";
        case NodeKind::Image: return "Image";
        case NodeKind::Button: return "Button";
        case NodeKind::Toggle: return "Toggle";
        case NodeKind::Spacer: return "Spacer";
        case NodeKind::ViewRef: return "ViewRef";
    }
    return "?";
}

bool is_container(NodeKind kind) {
    return kind == NodeKind::VStack || kind == NodeKind::HStack || kind == NodeKind::ZStack;
}

bool is_interactive(NodeKind kind) {
    return kind == NodeKind::Button || kind == NodeKind::Toggle;
}

const Modifier* UiNode::modifier(const std::string& name) const {
    const Modifier* found = nullptr;
    for (const auto& m : modifiers)
        if (m.name == name) found = &m;
    return found;
}

bool UiNode::has_modifier(const std::string& name) const { return modifier(name) != nullptr; }

const Arg* UiNode::arg_named(const std::string& n) const {
    for (const auto& a : args)
        if (a.name == n) return &a;
    return nullptr;
}

const Arg* UiNode::arg_positional(std::size_t index) const {
    std::size_t seen = 0;
    for (const auto& a : args) {
        if (!a.name.empty()) continue;
        if (seen == index) return &a;
        ++seen;
    }
    return nullptr;
}

bool structurally_equal(const UiNode& a, const UiNode& b) {
    if (a.kind != b.kind || a.ref_name != b.ref_name || !(a.args == b.args))
        return false;
    if (a.children.size() != b.children.size() || a.modifiers.size() != b.modifiers.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    for (std::size_t i = 0; i < a.modifiers.size(); ++i)
        if (!structurally_equal(a.modifiers[i], b.modifiers[i])) return false;
    return true;
}

bool structurally_equal(const ViewDecl& a, const ViewDecl& b) {
    return a.name == b.name && structurally_equal(a.body, b.body);
}

bool structurally_equal(const SourceFile& a, const SourceFile& b) {
    if (a.path != b.path || a.decls.size() != b.decls.size()) return false;
    for (std::size_t i = 0; i < a.decls.size(); ++i)
        if (!structurally_equal(a.decls[i], b.decls[i])) return false;
    return true;
}

const SourceFile* Project::file(const std::string& path) const {
    for (const auto& f : files)
        if (f.path == path) return &f;
    return nullptr;
}

const ViewDecl* Project::decl(const std::string& view_name) const {
    for (const auto& f : files)
        for (const auto& d : f.decls)
            if (d.name == view_name) return &d;
    return nullptr;
}

std::string Project::decl_path(const std::string& view_name) const {
    for (const auto& f : files)
        for (const auto& d : f.decls)
            if (d.name == view_name) return f.path;
    return {};
}

UiNode with_appended_modifier(const UiNode& node, Modifier m) {
    UiNode out = node;
    out.modifiers.push_back(std::move(m));
    out.source = nullptr;
    return out;
}

UiNode with_modifier_removed(const UiNode& node, const std::string& name) {
    UiNode out = node;
    out.modifiers.clear();
    for (const auto& m : node.modifiers)
        if (m.name != name) out.modifiers.push_back(m);
    out.source = nullptr;
    return out;
}

UiNode with_modifier_replaced(const UiNode& node, const std::string& name, Modifier m) {
    UiNode out = node;
    out.modifiers.clear();
    bool placed = false;
    for (const auto& existing : node.modifiers) {
        if (existing.name == name) {
            if (!placed) {
                out.modifiers.push_back(m);
                placed = true;
            }
            continue;
        }
        out.modifiers.push_back(existing);
    }
    if (!placed) out.modifiers.push_back(std::move(m));
    out.source = nullptr;
    return out;
}

UiNode transform_node(const UiNode& node,
                      const std::function<std::optional<UiNode>(const UiNode&)>& fn,
                      bool* changed) {
    if (auto replacement = fn(node)) {
        if (changed) *changed = true;
        return *replacement;
    }
    UiNode out = node;
    bool any_child_changed = false;
    for (auto& child : out.children) {
        bool child_changed = false;
        child = transform_node(child, fn, &child_changed);
        any_child_changed = any_child_changed || child_changed;
    }
    if (any_child_changed) {
        out.source = nullptr;
        if (changed) *changed = true;
    }
    return out;
}

}  // namespace minia11y
