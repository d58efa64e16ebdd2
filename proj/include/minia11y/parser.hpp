#pragma once

#include <string>

#include "minia11y/ast.hpp"

namespace minia11y {

/// Parses a whole source file. Throws SyntaxError with a 1-based line number
/// on malformed input, unknown node kinds, unknown modifiers, or invalid
/// modifier arguments (e.g. mixing `size:` and `style:` in `font`).
SourceFile parse_source(const std::string& text, const std::string& path);

/// Parses text that must contain exactly one view declaration (a fix
/// snippet). Trailing content other than whitespace is an error.
ViewDecl parse_view_decl(const std::string& text, const std::string& path = "<snippet>");

/// Parses a bare node expression (no `view` wrapper). Used by tests to check
/// span soundness; input must be exactly one node plus optional whitespace.
UiNode parse_node_snippet(const std::string& text, const std::string& path = "<node>");

}  // namespace minia11y
