#include "minia11y/patch.hpp"

#include <algorithm>

#include "minia11y/errors.hpp"
#include "minia11y/parser.hpp"
#include "minia11y/text_util.hpp"

namespace minia11y {
namespace {

struct Edit {
    enum Type { Keep, Del, Ins } type;
    std::size_t old_index = 0;  // Keep/Del
    std::size_t new_index = 0;  // Keep/Ins
};

/// Myers O(ND) shortest edit script over lines.
std::vector<Edit> diff_edits(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max = n + m;
    std::vector<Edit> edits;
    if (max == 0) return edits;

    std::vector<std::vector<int>> trace;
    std::vector<int> v(static_cast<std::size_t>(2 * max + 1), 0);
    auto at = [&](std::vector<int>& vv, int k) -> int& { return vv[static_cast<std::size_t>(k + max)]; };

    int d_final = -1;
    for (int d = 0; d <= max && d_final < 0; ++d) {
        trace.push_back(v);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && at(v, k - 1) < at(v, k + 1)))
                x = at(v, k + 1);
            else
                x = at(v, k - 1) + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            at(v, k) = x;
            if (x >= n && y >= m) {
                d_final = d;
                break;
            }
        }
    }

    // Backtrack from (n, m) through the recorded rounds.
    int x = n, y = m;
    for (int d = d_final; d > 0; --d) {
        auto& prev = trace[static_cast<std::size_t>(d)];
        int k = x - y;
        int prev_k;
        if (k == -d || (k != d && at(prev, k - 1) < at(prev, k + 1)))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        int prev_x = at(prev, prev_k);
        int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            edits.push_back({Edit::Keep, static_cast<std::size_t>(x - 1), static_cast<std::size_t>(y - 1)});
            --x;
            --y;
        }
        if (x == prev_x) {
            edits.push_back({Edit::Ins, 0, static_cast<std::size_t>(prev_y)});
        } else {
            edits.push_back({Edit::Del, static_cast<std::size_t>(prev_x), 0});
        }
        x = prev_x;
        y = prev_y;
    }
    while (x > 0 && y > 0) {
        edits.push_back({Edit::Keep, static_cast<std::size_t>(x - 1), static_cast<std::size_t>(y - 1)});
        --x;
        --y;
    }
    std::reverse(edits.begin(), edits.end());
    return edits;
}

}  // namespace

std::vector<Hunk> compute_hunks(const std::vector<std::string>& old_lines,
                                const std::vector<std::string>& new_lines,
                                std::size_t context) {
    std::vector<Edit> edits = diff_edits(old_lines, new_lines);
    std::vector<Hunk> hunks;

    // Indices into `edits` of non-Keep entries, grouped into hunks whenever
    // the run of Keep lines between changes is at most 2*context long.
    std::vector<std::pair<std::size_t, std::size_t>> groups;  // [first, last] edit index
    for (std::size_t i = 0; i < edits.size(); ++i) {
        if (edits[i].type == Edit::Keep) continue;
        if (!groups.empty()) {
            std::size_t keeps_between = 0;
            for (std::size_t j = groups.back().second + 1; j < i; ++j)
                if (edits[j].type == Edit::Keep) ++keeps_between;
            if (keeps_between <= 2 * context) {
                groups.back().second = i;
                continue;
            }
        }
        groups.push_back({i, i});
    }

    for (auto [first, last] : groups) {
        // Extend with up to `context` Keep edits on each side.
        std::size_t begin = first;
        std::size_t taken = 0;
        while (begin > 0 && taken < context && edits[begin - 1].type == Edit::Keep) {
            --begin;
            ++taken;
        }
        std::size_t end = last;
        taken = 0;
        while (end + 1 < edits.size() && taken < context && edits[end + 1].type == Edit::Keep) {
            ++end;
            ++taken;
        }

        Hunk hunk;
        bool old_started = false, new_started = false;
        for (std::size_t i = begin; i <= end; ++i) {
            const Edit& e = edits[i];
            PatchLine line;
            switch (e.type) {
                case Edit::Keep:
                    line = {PatchLineKind::Context, old_lines[e.old_index]};
                    if (!old_started) { hunk.old_start = e.old_index + 1; old_started = true; }
                    if (!new_started) { hunk.new_start = e.new_index + 1; new_started = true; }
                    ++hunk.old_count;
                    ++hunk.new_count;
                    break;
                case Edit::Del:
                    line = {PatchLineKind::Remove, old_lines[e.old_index]};
                    if (!old_started) { hunk.old_start = e.old_index + 1; old_started = true; }
                    ++hunk.old_count;
                    break;
                case Edit::Ins:
                    line = {PatchLineKind::Add, new_lines[e.new_index]};
                    if (!new_started) { hunk.new_start = e.new_index + 1; new_started = true; }
                    ++hunk.new_count;
                    break;
            }
            hunk.lines.push_back(std::move(line));
        }
        // Empty ranges use the "line after which" convention.
        if (!old_started) {
            std::size_t before = 0;
            for (std::size_t i = 0; i < begin; ++i)
                if (edits[i].type != Edit::Ins) ++before;
            hunk.old_start = before;
        }
        if (!new_started) {
            std::size_t before = 0;
            for (std::size_t i = 0; i < begin; ++i)
                if (edits[i].type != Edit::Del) ++before;
            hunk.new_start = before;
        }
        hunks.push_back(std::move(hunk));
    }
    return hunks;
}

Patch compute_patch(const SourceFile& original, const std::string& modified_snippet,
                    const std::string& target_decl) {
    const ViewDecl* target = nullptr;
    for (const auto& d : original.decls)
        if (d.name == target_decl) target = &d;
    if (!target) throw UnknownView(target_decl);

    ViewDecl replacement;
    try {
        replacement = parse_view_decl(modified_snippet);
    } catch (const SyntaxError& e) {
        throw SnippetParseError(e.what());
    }
    if (replacement.name != target_decl) throw NameMismatch(target_decl, replacement.name);

    std::vector<std::string> old_lines = split_lines(original.text);
    std::vector<std::string> snippet_lines = split_lines(modified_snippet);
    std::vector<std::string> new_lines;
    new_lines.reserve(old_lines.size() + snippet_lines.size());
    const auto first = static_cast<std::size_t>(target->span.start_line);  // 1-based
    const auto last = static_cast<std::size_t>(target->span.end_line);
    for (std::size_t i = 0; i + 1 < first; ++i) new_lines.push_back(old_lines[i]);
    for (auto& l : snippet_lines) new_lines.push_back(l);
    for (std::size_t i = last; i < old_lines.size(); ++i) new_lines.push_back(old_lines[i]);

    Patch patch;
    patch.file = original.path;
    patch.hunks = compute_hunks(old_lines, new_lines);
    return patch;
}

std::string apply_patch_text(const std::string& text, const Patch& patch) {
    std::vector<std::string> old_lines = split_lines(text);
    std::vector<std::string> out;
    out.reserve(old_lines.size());
    std::size_t cursor = 0;  // 0-based into old_lines

    for (const auto& hunk : patch.hunks) {
        std::size_t hunk_begin =
            hunk.old_count == 0 ? hunk.old_start : hunk.old_start - 1;
        if (hunk_begin < cursor || hunk_begin > old_lines.size())
            throw ContextMismatch("hunk at line " + std::to_string(hunk.old_start) +
                                  " does not fit the file");
        while (cursor < hunk_begin) out.push_back(old_lines[cursor++]);
        for (const auto& line : hunk.lines) {
            switch (line.kind) {
                case PatchLineKind::Context:
                    if (cursor >= old_lines.size() || old_lines[cursor] != line.text)
                        throw ContextMismatch("expected context line '" + line.text + "'");
                    out.push_back(old_lines[cursor++]);
                    break;
                case PatchLineKind::Remove:
                    if (cursor >= old_lines.size() || old_lines[cursor] != line.text)
                        throw ContextMismatch("expected removed line '" + line.text + "'");
                    ++cursor;
                    break;
                case PatchLineKind::Add:
                    out.push_back(line.text);
                    break;
            }
        }
    }
    while (cursor < old_lines.size()) out.push_back(old_lines[cursor++]);

    bool trailing = ends_with_newline(text) && !out.empty();
    if (text.empty() && !out.empty()) trailing = true;
    return join_lines(out, trailing);
}

Project apply_patch(const Project& project, const Patch& patch) {
    const SourceFile* target = project.file(patch.file);
    if (!target) throw ContextMismatch("no such file '" + patch.file + "'");
    std::string patched = apply_patch_text(target->text, patch);
    SourceFile reparsed = parse_source(patched, patch.file);
    Project out = project;
    for (auto& f : out.files)
        if (f.path == patch.file) f = std::move(reparsed);
    return out;
}

Patch invert_patch(const Patch& patch) {
    Patch out;
    out.file = patch.file;
    out.provenance = patch.provenance;
    for (const auto& hunk : patch.hunks) {
        Hunk inv;
        inv.old_start = hunk.new_start;
        inv.old_count = hunk.new_count;
        inv.new_start = hunk.old_start;
        inv.new_count = hunk.old_count;
        for (const auto& line : hunk.lines) {
            PatchLine flipped = line;
            if (line.kind == PatchLineKind::Remove) flipped.kind = PatchLineKind::Add;
            else if (line.kind == PatchLineKind::Add) flipped.kind = PatchLineKind::Remove;
            inv.lines.push_back(std::move(flipped));
        }
        out.hunks.push_back(std::move(inv));
    }
    return out;
}

namespace {

std::string range_text(std::size_t start, std::size_t count) {
    std::string out = std::to_string(start);
    if (count != 1) out += "," + std::to_string(count);
    return out;
}

}  // namespace

std::string patch_to_string(const Patch& patch) {
    std::string out = "--- a/" + patch.file + "\n+++ b/" + patch.file + "\n";
    for (const auto& hunk : patch.hunks) {
        out += "@@ -" + range_text(hunk.old_start, hunk.old_count) + " +" +
               range_text(hunk.new_start, hunk.new_count) + " @@\n";
        for (const auto& line : hunk.lines) {
            char prefix = line.kind == PatchLineKind::Context ? ' '
                          : line.kind == PatchLineKind::Remove ? '-'
                                                               : '+';
            out += prefix;
            out += line.text;
            out += '\n';
        }
    }
    return out;
}

namespace {

std::string strip_diff_path(const std::string& header, const std::string& marker) {
    std::string rest = trim(header.substr(marker.size()));
    if (starts_with(rest, "a/") || starts_with(rest, "b/")) rest = rest.substr(2);
    return rest;
}

bool parse_range(const std::string& token, std::size_t& start, std::size_t& count) {
    std::size_t comma = token.find(',');
    try {
        if (comma == std::string::npos) {
            start = std::stoul(token);
            count = 1;
        } else {
            start = std::stoul(token.substr(0, comma));
            count = std::stoul(token.substr(comma + 1));
        }
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace

Patch parse_patch(const std::string& diff_text) {
    Patch patch;
    std::vector<std::string> lines = split_lines(diff_text);
    std::size_t i = 0;
    while (i < lines.size() && !starts_with(lines[i], "--- ")) ++i;
    if (i >= lines.size()) {
        if (trim(diff_text).empty()) return patch;  // empty patch
        throw ContextMismatch("diff has no '---' header");
    }
    std::string old_path = strip_diff_path(lines[i], "--- ");
    ++i;
    if (i >= lines.size() || !starts_with(lines[i], "+++ "))
        throw ContextMismatch("diff has no '+++' header");
    patch.file = strip_diff_path(lines[i], "+++ ");
    if (patch.file.empty()) patch.file = old_path;
    ++i;

    while (i < lines.size()) {
        const std::string& line = lines[i];
        if (line.empty()) {
            ++i;
            continue;
        }
        if (!starts_with(line, "@@ "))
            throw ContextMismatch("expected a hunk header, got '" + line + "'");
        std::size_t at2 = line.find(" @@", 3);
        if (at2 == std::string::npos) throw ContextMismatch("malformed hunk header");
        std::vector<std::string> parts = split_whitespace(line.substr(3, at2 - 3));
        if (parts.size() != 2 || parts[0].empty() || parts[1].empty() ||
            parts[0][0] != '-' || parts[1][0] != '+')
            throw ContextMismatch("malformed hunk header");
        Hunk hunk;
        if (!parse_range(parts[0].substr(1), hunk.old_start, hunk.old_count) ||
            !parse_range(parts[1].substr(1), hunk.new_start, hunk.new_count))
            throw ContextMismatch("malformed hunk range");
        ++i;
        std::size_t old_seen = 0, new_seen = 0;
        while (i < lines.size() && old_seen + new_seen <
                                       hunk.old_count + hunk.new_count) {
            const std::string& body = lines[i];
            if (starts_with(body, "\\")) {
                ++i;  // "\ No newline at end of file"
                continue;
            }
            if (body.empty())
                throw ContextMismatch("unexpected blank line inside a hunk");
            char prefix = body[0];
            PatchLine pl;
            pl.text = body.substr(1);
            if (prefix == ' ') {
                pl.kind = PatchLineKind::Context;
                ++old_seen;
                ++new_seen;
            } else if (prefix == '-') {
                pl.kind = PatchLineKind::Remove;
                ++old_seen;
            } else if (prefix == '+') {
                pl.kind = PatchLineKind::Add;
                ++new_seen;
            } else {
                throw ContextMismatch("unexpected line prefix '" + std::string(1, prefix) + "'");
            }
            hunk.lines.push_back(std::move(pl));
            ++i;
        }
        if (old_seen != hunk.old_count || new_seen != hunk.new_count)
            throw ContextMismatch("hunk body does not match its header counts");
        patch.hunks.push_back(std::move(hunk));
    }
    return patch;
}

}  // namespace minia11y
