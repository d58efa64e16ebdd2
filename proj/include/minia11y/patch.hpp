#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "minia11y/ast.hpp"

namespace minia11y {

enum class PatchLineKind { Context, Remove, Add };

struct PatchLine {
    PatchLineKind kind = PatchLineKind::Context;
    std::string text;
};

/// One unified-diff hunk. Starts are 1-based; a count of 0 means the range is
/// empty and the start names the line after which material is inserted
/// (0 = top of file), following the unified diff convention.
struct Hunk {
    std::size_t old_start = 0;
    std::size_t old_count = 0;
    std::size_t new_start = 0;
    std::size_t new_count = 0;
    std::vector<PatchLine> lines;
};

/// A change to exactly one file. `provenance` is free in-memory text (plan /
/// attempt bookkeeping) and is not part of the serialized diff.
struct Patch {
    std::string file;
    std::vector<Hunk> hunks;
    std::string provenance;

    bool empty() const { return hunks.empty(); }
};

/// Minimal line diff between two line sequences, grouped into hunks with
/// `context` lines of surrounding context (hunks closer than 2*context lines
/// merge).
std::vector<Hunk> compute_hunks(const std::vector<std::string>& old_lines,
                                const std::vector<std::string>& new_lines,
                                std::size_t context = 3);

/// Replaces the lines of the declaration named `target_decl` inside
/// `original` with `modified_snippet` and returns the resulting patch.
/// An identical snippet gives an empty patch. Throws UnknownView when the
/// declaration is absent, SnippetParseError when the snippet does not parse
/// as a single declaration, and NameMismatch when it renames the view.
Patch compute_patch(const SourceFile& original, const std::string& modified_snippet,
                    const std::string& target_decl);

/// Applies `patch` to raw text. Context and removed lines must match exactly;
/// otherwise ContextMismatch.
std::string apply_patch_text(const std::string& text, const Patch& patch);

/// Applies `patch` to the project file it names and re-parses that file.
/// The input project is untouched; the result is a new project value.
Project apply_patch(const Project& project, const Patch& patch);

/// Swaps additions and removals so that applying the result to a patched
/// text restores the original: apply(invert(p), apply(p, t)) == t.
Patch invert_patch(const Patch& patch);

/// Unified diff serialization with `--- a/<path>` / `+++ b/<path>` headers.
std::string patch_to_string(const Patch& patch);

/// Parses the serialization produced by patch_to_string (tolerates plain
/// paths without a/ b/ prefixes). Throws ContextMismatch on malformed input.
Patch parse_patch(const std::string& diff_text);

}  // namespace minia11y
