#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minia11y/source_span.hpp"

namespace minia11y {

enum class LiteralKind { String, Number, Color, Bool, Word };

/// A literal argument value. `raw` holds the exact source token when the
/// literal came from the parser so re-printing is byte-faithful; synthetic
/// literals leave it empty and print canonically.
struct Literal {
    LiteralKind kind = LiteralKind::Word;
    std::string text;     // string value (unescaped), word, or #RRGGBB
    double number = 0.0;  // Number only
    bool boolean = false; // Bool only
    std::string raw;

    static Literal str(std::string value);
    static Literal num(double value);
    static Literal color(std::string rrggbb);
    static Literal boolean_value(bool value);
    static Literal word(std::string value);
};

bool operator==(const Literal& a, const Literal& b);

/// One argument, positional when `name` is empty.
struct Arg {
    std::string name;
    Literal value;
};

bool operator==(const Arg& a, const Arg& b);

/// Postfix `.name(args)` chained after a node. `source` is the file text the
/// modifier was parsed from; a null source means the modifier is synthetic
/// and prints canonically.
struct Modifier {
    std::string name;
    std::vector<Arg> args;
    SourceSpan span;
    std::shared_ptr<const std::string> source;

    const Arg* arg_named(const std::string& n) const;
    const Arg* arg_positional(std::size_t index = 0) const;
};

/// Structural comparison (spans, sources and raw token spellings ignored).
bool structurally_equal(const Modifier& a, const Modifier& b);

enum class NodeKind {
    VStack,
    HStack,
    ZStack,
    Text,
    Image,
    Button,
    Toggle,
    Spacer,
    ViewRef,
};

const char* node_kind_name(NodeKind kind);
bool is_container(NodeKind kind);
bool is_interactive(NodeKind kind);

struct UiNode {
    NodeKind kind = NodeKind::Spacer;
    std::string ref_name;          // ViewRef target declaration name
    std::vector<Arg> args;         // constructor arguments
    std::vector<UiNode> children;  // containers only
    std::vector<Modifier> modifiers;
    SourceSpan span;
    std::shared_ptr<const std::string> source;

    /// Last modifier of that name, or null. The last occurrence wins, like
    /// the outermost application in the modeled UI framework.
    const Modifier* modifier(const std::string& name) const;
    bool has_modifier(const std::string& name) const;
    const Arg* arg_named(const std::string& n) const;
    const Arg* arg_positional(std::size_t index = 0) const;
};

bool structurally_equal(const UiNode& a, const UiNode& b);

struct ViewDecl {
    std::string name;
    UiNode body;
    SourceSpan span;
    std::shared_ptr<const std::string> source;
};

bool structurally_equal(const ViewDecl& a, const ViewDecl& b);

/// One parsed source file. `text` keeps the exact input bytes; declaration
/// spans index into it.
struct SourceFile {
    std::string path;  // project-relative
    std::string text;
    std::vector<ViewDecl> decls;
};

bool structurally_equal(const SourceFile& a, const SourceFile& b);

/// A set of parsed source files, ordered by path. View names are unique
/// across the project and every ViewRef resolves (enforced on load).
struct Project {
    std::filesystem::path root_dir;  // empty for in-memory projects
    std::vector<SourceFile> files;

    const SourceFile* file(const std::string& path) const;
    const ViewDecl* decl(const std::string& view_name) const;
    /// Path of the file declaring `view_name`, or empty.
    std::string decl_path(const std::string& view_name) const;
};

// -- structural editing ------------------------------------------------------

/// Copy of `node` with `m` appended. The result prints canonically (its
/// pristine source link is dropped); untouched children keep theirs.
UiNode with_appended_modifier(const UiNode& node, Modifier m);

/// Copy of `node` with every modifier named `name` removed.
UiNode with_modifier_removed(const UiNode& node, const std::string& name);

/// Copy with modifiers named `name` removed and `m` appended in their place
/// (at the position of the first removed one, or the end).
UiNode with_modifier_replaced(const UiNode& node, const std::string& name, Modifier m);

/// Applies `fn` to every node in pre-order. When `fn` returns a replacement
/// the subtree is substituted and not descended into. Parents of changed
/// children lose their pristine source link so they re-print canonically.
UiNode transform_node(const UiNode& node,
                      const std::function<std::optional<UiNode>(const UiNode&)>& fn,
                      bool* changed = nullptr);

}  // namespace minia11y
