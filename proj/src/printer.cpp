#include "minia11y/printer.hpp"

#include "minia11y/text_util.hpp"

namespace minia11y {
namespace {

bool pristine(const SourceSpan& span, const std::shared_ptr<const std::string>& source) {
    return source != nullptr && span.valid() && span.end_byte <= source->size();
}

std::string original_bytes(const SourceSpan& span,
                           const std::shared_ptr<const std::string>& source) {
    return source->substr(span.start_byte, span.end_byte - span.start_byte);
}

std::string indent_str(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string escape_string(const std::string& value) {
    std::string out = "\"";
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string literal_text(const Literal& l) {
    if (!l.raw.empty()) return l.raw;
    switch (l.kind) {
        case LiteralKind::String: return escape_string(l.text);
        case LiteralKind::Number: return format_number(l.number);
        case LiteralKind::Color: return l.text;
        case LiteralKind::Bool: return l.boolean ? "true" : "false";
        case LiteralKind::Word: return l.text;
    }
    return {};
}

std::string args_text(const std::vector<Arg>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        if (!args[i].name.empty()) out += args[i].name + ": ";
        out += literal_text(args[i].value);
    }
    out += ')';
    return out;
}

std::string modifier_text(const Modifier& m) {
    if (pristine(m.span, m.source)) return original_bytes(m.span, m.source);
    return "." + m.name + args_text(m.args);
}

}  // namespace

std::string print_node(const UiNode& node, int indent) {
    if (pristine(node.span, node.source)) return original_bytes(node.span, node.source);

    std::string out;
    if (node.kind == NodeKind::ViewRef) {
        out = node.ref_name + "()";
    } else if (node.kind == NodeKind::Spacer) {
        out = "Spacer";
    } else if (is_container(node.kind)) {
        out = node_kind_name(node.kind);
        if (!node.args.empty()) out += args_text(node.args);
        out += " {";
        for (const auto& child : node.children) {
            out += '\n';
            out += indent_str(indent + 1);
            out += print_node(child, indent + 1);
        }
        out += '\n';
        out += indent_str(indent);
        out += '}';
    } else {
        out = node_kind_name(node.kind);
        out += args_text(node.args);
    }
    for (const auto& m : node.modifiers) out += modifier_text(m);
    return out;
}

std::string print_decl(const ViewDecl& decl) {
    if (pristine(decl.span, decl.source)) return original_bytes(decl.span, decl.source);
    std::string out = "view " + decl.name + " {\n";
    out += indent_str(1);
    out += print_node(decl.body, 1);
    out += "\n}";
    return out;
}

std::string print_source(const SourceFile& file) {
    // Fast path: nothing was edited, the original text is the answer. This
    // also covers whitespace-only files with no declarations.
    bool all_pristine = true;
    for (const auto& d : file.decls)
        if (!pristine(d.span, d.source)) all_pristine = false;
    if (all_pristine && !file.decls.empty()) {
        // Spans index into the parse-time text; emit it with the gaps.
        std::string out;
        std::size_t cursor = 0;
        for (const auto& d : file.decls) {
            out += file.text.substr(cursor, d.span.start_byte - cursor);
            out += original_bytes(d.span, d.source);
            cursor = d.span.end_byte;
        }
        out += file.text.substr(cursor);
        return out;
    }
    if (file.decls.empty()) return file.text;

    std::string out;
    std::size_t cursor = 0;
    for (const auto& d : file.decls) {
        if (d.span.valid() && d.span.start_byte >= cursor &&
            d.span.end_byte <= file.text.size()) {
            out += file.text.substr(cursor, d.span.start_byte - cursor);
            out += print_decl(d);
            cursor = d.span.end_byte;
        } else {
            // Appended declaration without a position in the original text.
            if (!out.empty() && out.back() != '\n') out += '\n';
            if (!out.empty()) out += '\n';
            out += print_decl(d);
            out += '\n';
        }
    }
    if (cursor < file.text.size()) out += file.text.substr(cursor);
    return out;
}

}  // namespace minia11y
