#pragma once

#include <string>

#include "minia11y/ast.hpp"

namespace minia11y {

/// Prints a file back to text. Parsed, unmodified declarations are emitted
/// byte-for-byte from their original spans (including the whitespace between
/// them), so print_source(parse_source(t)) == t. Declarations whose subtree
/// was edited re-print canonically; untouched descendants still contribute
/// their original bytes.
std::string print_source(const SourceFile& file);

/// One declaration, original bytes when pristine, canonical otherwise.
/// No trailing newline.
std::string print_decl(const ViewDecl& decl);

/// One node at the given indent depth (2 spaces per level). The first line
/// carries no leading indentation; the caller places it.
std::string print_node(const UiNode& node, int indent = 0);

}  // namespace minia11y
