#include "minia11y/hierarchy.hpp"

#include <algorithm>
#include <set>

#include "minia11y/errors.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/printer.hpp"

namespace minia11y {
namespace {

constexpr const char* kIdentifierModifier = "axIdentifier";

std::optional<std::string> node_identifier(const UiNode& node) {
    return element_identifier(node);
}

void collect_existing_ids(const UiNode& node, const std::string& path,
                          std::set<std::string>& taken) {
    if (auto id = node_identifier(node)) {
        if (!taken.insert(*id).second)
            throw SyntaxError(path, node.span.start_line,
                              "duplicate axIdentifier \"" + *id + "\"");
    }
    for (const auto& child : node.children) collect_existing_ids(child, path, taken);
}

UiNode assign_ids(const UiNode& node, std::set<std::string>& taken, int& counter,
                  bool& changed) {
    UiNode out = node;
    bool dirty = false;
    if (node.kind != NodeKind::Spacer && !node_identifier(node)) {
        std::string id = "ax_" + std::to_string(counter);
        while (taken.count(id)) id = "ax_" + std::to_string(++counter);
        ++counter;
        taken.insert(id);
        Modifier m;
        m.name = kIdentifierModifier;
        m.args.push_back(Arg{"", Literal::str(id)});
        out.modifiers.push_back(std::move(m));
        dirty = true;
    }
    for (std::size_t i = 0; i < out.children.size(); ++i) {
        bool child_dirty = false;
        out.children[i] = assign_ids(node.children[i], taken, counter, child_dirty);
        dirty = dirty || child_dirty;
    }
    if (dirty) out.source = nullptr;
    changed = changed || dirty;
    return out;
}

void collect_spans(const UiNode& node, std::map<ElementId, SourceSpan>& spans) {
    if (auto id = node_identifier(node)) spans[*id] = node.span;
    for (const auto& child : node.children) collect_spans(child, spans);
}

const UiNode* find_in_node(const UiNode& node, const ElementId& id) {
    if (auto own = node_identifier(node); own && *own == id) return &node;
    for (const auto& child : node.children)
        if (const UiNode* hit = find_in_node(child, id)) return hit;
    return nullptr;
}

struct Expander {
    const Project& project;
    UiHierarchy hierarchy;
    std::vector<std::string> stack;  // views currently being expanded
    std::set<std::string> expanded;  // views used anywhere in this screen

    std::optional<ElementId> walk(const UiNode& node, const std::string& declared_in,
                                  const std::optional<ElementId>& parent) {
        if (node.kind == NodeKind::Spacer) return std::nullopt;
        auto id = node_identifier(node);
        if (!id)
            throw MissingIdentifier(std::string(node_kind_name(node.kind)) + " in view '" +
                                    declared_in + "'");
        if (hierarchy.elements.count(*id))
            throw SyntaxError(project.decl_path(declared_in), node.span.start_line,
                              "duplicate axIdentifier \"" + *id + "\"");

        ElementRef ref;
        ref.id = *id;
        ref.kind = node.kind;
        ref.declared_in = declared_in;
        ref.span = node.span;
        ref.parent = parent;
        hierarchy.preorder.push_back(*id);
        hierarchy.elements.emplace(*id, std::move(ref));

        if (node.kind == NodeKind::ViewRef) {
            const ViewDecl* target = project.decl(node.ref_name);
            if (!target) throw UnknownView(node.ref_name);
            if (std::find(stack.begin(), stack.end(), node.ref_name) != stack.end()) {
                std::string chain;
                for (const auto& s : stack) chain += s + " -> ";
                throw RecursionError(chain + node.ref_name);
            }
            if (!expanded.insert(node.ref_name).second)
                throw MultipleReferenceError(node.ref_name);
            stack.push_back(node.ref_name);
            auto child = walk(target->body, node.ref_name, *id);
            stack.pop_back();
            if (child) hierarchy.elements.at(*id).children.push_back(*child);
        } else {
            for (const auto& c : node.children) {
                auto child = walk(c, declared_in, *id);
                if (child) hierarchy.elements.at(*id).children.push_back(*child);
            }
        }
        return *id;
    }
};

}  // namespace

const ElementRef& UiHierarchy::at(const ElementId& id) const {
    auto it = elements.find(id);
    if (it == elements.end()) throw UnknownElement(id);
    return it->second;
}

std::vector<ElementId> UiHierarchy::subtree(const ElementId& id) const {
    std::vector<ElementId> out;
    std::vector<ElementId> pending{id};
    while (!pending.empty()) {
        ElementId cur = pending.back();
        pending.pop_back();
        const ElementRef& ref = at(cur);
        out.push_back(cur);
        // Reverse so the stack pops children in declaration order.
        for (auto it = ref.children.rbegin(); it != ref.children.rend(); ++it)
            pending.push_back(*it);
    }
    return out;
}

InstrumentResult instrument(const Project& project) {
    Project out = project;
    std::sort(out.files.begin(), out.files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });

    std::set<std::string> taken;
    for (const auto& file : out.files)
        for (const auto& decl : file.decls) collect_existing_ids(decl.body, file.path, taken);

    int counter = 0;
    for (auto& file : out.files) {
        bool file_changed = false;
        for (auto& decl : file.decls) {
            bool changed = false;
            UiNode body = assign_ids(decl.body, taken, counter, changed);
            if (changed) {
                decl.body = std::move(body);
                decl.source = nullptr;
                file_changed = true;
            }
        }
        if (file_changed) {
            std::string text = print_source(file);
            file = parse_source(text, file.path);
        }
    }

    InstrumentResult result;
    result.project = std::move(out);
    for (const auto& file : result.project.files)
        for (const auto& decl : file.decls) collect_spans(decl.body, result.spans);
    return result;
}

UiHierarchy build_hierarchy(const Project& project, const std::string& root_view) {
    const ViewDecl* decl = project.decl(root_view);
    if (!decl) throw UnknownView(root_view);
    Expander e{project};
    e.hierarchy.root_view = root_view;
    e.expanded.insert(root_view);
    e.stack.push_back(root_view);
    auto root = e.walk(decl->body, root_view, std::nullopt);
    e.hierarchy.root = root.value_or("");
    return std::move(e.hierarchy);
}

std::optional<std::string> element_identifier(const UiNode& node) {
    const Modifier* m = node.modifier(kIdentifierModifier);
    if (!m) return std::nullopt;
    const Arg* a = m->arg_positional();
    if (!a) return std::nullopt;
    return a->value.text;
}

const UiNode* find_node_by_id(const Project& project, const ElementId& id) {
    for (const auto& file : project.files)
        for (const auto& decl : file.decls)
            if (const UiNode* hit = find_in_node(decl.body, id)) return hit;
    return nullptr;
}

const char* snippet_relation_name(SnippetRelation relation) {
    switch (relation) {
        case SnippetRelation::Self: return "self";
        case SnippetRelation::Parent: return "parent";
        case SnippetRelation::Descendant: return "descendant";
    }
    return "";
}

std::vector<CandidateSnippet> candidate_snippets(const Project& project,
                                                 const UiHierarchy& hierarchy,
                                                 const ElementId& target) {
    const ElementRef& ref = hierarchy.at(target);

    std::vector<std::string> names;
    auto add = [&names](const std::string& name) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            names.push_back(name);
    };

    add(ref.declared_in);
    std::optional<std::string> parent_view;
    if (ref.parent) {
        const std::string& p = hierarchy.at(*ref.parent).declared_in;
        if (p != ref.declared_in) {
            parent_view = p;
            add(p);
        }
    }
    for (const auto& id : hierarchy.subtree(target)) {
        if (id == target) continue;
        add(hierarchy.at(id).declared_in);
    }

    std::vector<CandidateSnippet> out;
    for (const auto& name : names) {
        const ViewDecl* decl = project.decl(name);
        if (!decl) throw UnknownView(name);
        CandidateSnippet snippet;
        snippet.view_name = name;
        snippet.relation = name == ref.declared_in ? SnippetRelation::Self
                           : parent_view && name == *parent_view
                               ? SnippetRelation::Parent
                               : SnippetRelation::Descendant;
        snippet.text = print_decl(*decl);
        snippet.span = decl->span;
        out.push_back(std::move(snippet));
    }
    return out;
}

nlohmann::ordered_json hierarchy_to_json(const UiHierarchy& hierarchy) {
    nlohmann::ordered_json doc;
    doc["schemaVersion"] = 1;
    doc["rootView"] = hierarchy.root_view;
    doc["root"] = hierarchy.root;
    doc["elements"] = nlohmann::ordered_json::array();
    for (const auto& id : hierarchy.preorder) {
        const ElementRef& e = hierarchy.at(id);
        nlohmann::ordered_json el;
        el["id"] = e.id;
        el["kind"] = node_kind_name(e.kind);
        el["declaredIn"] = e.declared_in;
        if (e.parent)
            el["parent"] = *e.parent;
        else
            el["parent"] = nullptr;
        el["children"] = e.children;
        el["span"] = {{"file", e.span.file},
                      {"startByte", e.span.start_byte},
                      {"endByte", e.span.end_byte},
                      {"startLine", e.span.start_line},
                      {"endLine", e.span.end_line}};
        doc["elements"].push_back(std::move(el));
    }
    return doc;
}

}  // namespace minia11y
