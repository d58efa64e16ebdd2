#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minia11y/ast.hpp"

namespace minia11y {

/// Accessibility element identifier, "ax_<n>" when auto-assigned.
using ElementId = std::string;

/// One element of an expanded screen hierarchy. `declared_in` names the view
/// declaration whose source lexically contains the node; across a ViewRef
/// boundary it differs from the parent's.
struct ElementRef {
    ElementId id;
    NodeKind kind = NodeKind::Spacer;
    std::string declared_in;
    SourceSpan span;
    std::optional<ElementId> parent;
    std::vector<ElementId> children;
};

/// Expansion tree of one screen: every ViewRef is inlined into its target
/// declaration's subtree. Spacers carry no accessibility surface and are not
/// elements.
struct UiHierarchy {
    std::string root_view;
    ElementId root;
    std::vector<ElementId> preorder;
    std::map<ElementId, ElementRef> elements;

    const ElementRef& at(const ElementId& id) const;
    /// Pre-order ids of the subtree rooted at `id` (inclusive).
    std::vector<ElementId> subtree(const ElementId& id) const;
};

struct InstrumentResult {
    Project project;
    std::map<ElementId, SourceSpan> spans;
};

/// Appends `.axIdentifier("ax_<n>")` to every node except Spacer that lacks
/// one. Numbering is pre-order per declaration, declarations in file order,
/// files in lexicographic path order; nodes with a user-supplied identifier
/// keep it and consume no number. Idempotent; re-running on the result is the
/// identity. The returned spans index into the instrumented project's text.
InstrumentResult instrument(const Project& project);

/// Expands `root_view` into a hierarchy. Throws UnknownView for unresolved
/// references, RecursionError for reference cycles, MultipleReferenceError
/// when one screen would expand the same declaration twice, and
/// MissingIdentifier when a non-Spacer node has no axIdentifier (instrument
/// first).
UiHierarchy build_hierarchy(const Project& project, const std::string& root_view);

/// The instrumented node carrying `id`, or null. Unique after instrument().
const UiNode* find_node_by_id(const Project& project, const ElementId& id);

/// Value of the node's axIdentifier modifier, when present.
std::optional<std::string> element_identifier(const UiNode& node);

enum class SnippetRelation { Self, Parent, Descendant };

const char* snippet_relation_name(SnippetRelation relation);

/// One candidate location for a fix: a whole view declaration.
struct CandidateSnippet {
    std::string view_name;
    SnippetRelation relation = SnippetRelation::Self;
    std::string text;  // parses to a single ViewDecl
    SourceSpan span;
};

/// Candidate fix locations for `target`: the declaration containing it
/// (Self), the declaration of its parent element when that differs (Parent),
/// and every distinct declaration reached through ViewRef expansion beneath
/// it (Descendants, pre-order). Deduplicated by view name.
std::vector<CandidateSnippet> candidate_snippets(const Project& project,
                                                 const UiHierarchy& hierarchy,
                                                 const ElementId& target);

/// {schemaVersion, rootView, root, elements: [...]} in pre-order.
nlohmann::ordered_json hierarchy_to_json(const UiHierarchy& hierarchy);

}  // namespace minia11y
