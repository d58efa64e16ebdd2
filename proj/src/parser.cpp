#include "minia11y/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>

#include "minia11y/errors.hpp"

namespace minia11y {
namespace {

bool is_word_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)); }

struct Parser {
    const std::string& text;
    std::string path;
    std::shared_ptr<const std::string> source;
    std::vector<std::size_t> line_starts;
    std::size_t pos = 0;

    Parser(const std::string& text_, std::string path_)
        : text(text_), path(std::move(path_)),
          source(std::make_shared<std::string>(text_)) {
        line_starts.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i)
            if (text[i] == '\n') line_starts.push_back(i + 1);
    }

    int line_of(std::size_t byte) const {
        auto it = std::upper_bound(line_starts.begin(), line_starts.end(), byte);
        return static_cast<int>(it - line_starts.begin());
    }

    [[noreturn]] void fail(std::size_t at, const std::string& message) const {
        throw SyntaxError(path, line_of(std::min(at, text.size() ? text.size() - 1 : 0)),
                          message);
    }

    SourceSpan span_from(std::size_t start) const {
        SourceSpan s;
        s.file = path;
        s.start_byte = start;
        s.end_byte = pos;
        s.start_line = line_of(start);
        s.end_line = line_of(pos == 0 ? 0 : pos - 1);
        return s;
    }

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }

    void expect(char c, const std::string& what) {
        if (peek() != c) fail(pos, "expected '" + std::string(1, c) + "' " + what);
        ++pos;
    }

    std::string parse_word() {
        if (pos >= text.size() || !is_word_start(text[pos]))
            fail(pos, "expected an identifier");
        std::size_t start = pos;
        while (pos < text.size() && is_word_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }

    Literal parse_literal() {
        std::size_t start = pos;
        char c = peek();
        if (c == '"') return parse_string(start);
        if (c == '#') return parse_color(start);
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number(start);
        if (is_word_start(c)) {
            std::string w = parse_word();
            Literal l;
            if (w == "true" || w == "false") {
                l = Literal::boolean_value(w == "true");
            } else {
                l = Literal::word(w);
            }
            l.raw = text.substr(start, pos - start);
            return l;
        }
        fail(pos, "expected a literal value");
    }

    Literal parse_string(std::size_t start) {
        ++pos;  // opening quote
        std::string value;
        while (true) {
            if (pos >= text.size()) fail(start, "unterminated string literal");
            char c = text[pos];
            if (c == '"') {
                ++pos;
                break;
            }
            if (c == '\n') fail(pos, "newline in string literal");
            if (c == '\\') {
                ++pos;
                if (pos >= text.size()) fail(start, "unterminated string literal");
                char e = text[pos];
                if (e == '"') value += '"';
                else if (e == '\\') value += '\\';
                else if (e == 'n') value += '\n';
                else if (e == 't') value += '\t';
                else fail(pos, std::string("unknown escape '\\") + e + "'");
                ++pos;
                continue;
            }
            value += c;
            ++pos;
        }
        Literal l = Literal::str(value);
        l.raw = text.substr(start, pos - start);
        return l;
    }

    Literal parse_color(std::size_t start) {
        ++pos;  // '#'
        std::size_t digits = 0;
        while (pos < text.size() && is_hex(text[pos])) {
            ++pos;
            ++digits;
        }
        if (digits != 6) fail(start, "color literal must be #RRGGBB");
        std::string tok = text.substr(start, pos - start);
        std::string upper = tok;
        for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        Literal l = Literal::color(upper);
        l.raw = tok;
        return l;
    }

    Literal parse_number(std::size_t start) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
                fail(start, "malformed number");
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        std::string tok = text.substr(start, pos - start);
        Literal l = Literal::num(std::stod(tok));
        l.raw = tok;
        return l;
    }

    std::vector<Arg> parse_arg_list(const std::string& owner) {
        std::vector<Arg> args;
        expect('(', "after '" + owner + "'");
        skip_ws();
        if (peek() == ')') {
            ++pos;
            return args;
        }
        while (true) {
            skip_ws();
            Arg arg;
            std::size_t arg_start = pos;
            if (is_word_start(peek())) {
                // Either "name: value" or a bare word literal.
                std::size_t save = pos;
                std::string w = parse_word();
                skip_ws();
                if (peek() == ':') {
                    ++pos;
                    skip_ws();
                    arg.name = w;
                    arg.value = parse_literal();
                } else {
                    pos = save;
                    arg.value = parse_literal();
                }
            } else {
                arg.value = parse_literal();
            }
            for (const auto& existing : args)
                if (!arg.name.empty() && existing.name == arg.name)
                    fail(arg_start, "duplicate argument '" + arg.name + "'");
            args.push_back(std::move(arg));
            skip_ws();
            if (peek() == ',') {
                ++pos;
                continue;
            }
            expect(')', "to close the argument list");
            break;
        }
        return args;
    }

    // -- validation ----------------------------------------------------------

    void require_single_positional(const std::vector<Arg>& args, LiteralKind kind,
                                   std::size_t at, const std::string& owner,
                                   const std::string& what) {
        if (args.size() != 1 || !args[0].name.empty() || args[0].value.kind != kind)
            fail(at, owner + " takes exactly one " + what);
    }

    void validate_node_args(NodeKind kind, const std::vector<Arg>& args, std::size_t at) {
        switch (kind) {
            case NodeKind::VStack:
            case NodeKind::HStack:
            case NodeKind::ZStack:
                for (const auto& a : args) {
                    if (a.name != "spacing" || a.value.kind != LiteralKind::Number)
                        fail(at, "stacks accept only 'spacing: <number>'");
                }
                if (args.size() > 1) fail(at, "stacks accept only 'spacing: <number>'");
                break;
            case NodeKind::Text:
                require_single_positional(args, LiteralKind::String, at, "Text",
                                          "string argument");
                break;
            case NodeKind::Image:
                require_single_positional(args, LiteralKind::String, at, "Image",
                                          "string argument");
                break;
            case NodeKind::Button:
            case NodeKind::Toggle: {
                const char* owner = kind == NodeKind::Button ? "Button" : "Toggle";
                if (args.size() != 2 || !args[0].name.empty() ||
                    args[0].value.kind != LiteralKind::String || args[1].name != "action" ||
                    args[1].value.kind != LiteralKind::Word)
                    fail(at, std::string(owner) +
                                 " takes a label string and 'action: <name>'");
                break;
            }
            case NodeKind::Spacer:
            case NodeKind::ViewRef:
                if (!args.empty()) fail(at, "no arguments allowed here");
                break;
        }
    }

    void validate_modifier(const Modifier& m, std::size_t at) {
        const std::string& n = m.name;
        auto named_only = [&](std::initializer_list<const char*> allowed) {
            for (const auto& a : m.args) {
                if (a.name.empty()) fail(at, "'" + n + "' takes named arguments only");
                bool ok = false;
                for (const char* w : allowed)
                    if (a.name == w) ok = true;
                if (!ok) fail(at, "unknown argument '" + a.name + "' for '" + n + "'");
            }
        };
        if (n == "font") {
            named_only({"size", "style", "max"});
            const Arg* size = m.arg_named("size");
            const Arg* style = m.arg_named("style");
            const Arg* max = m.arg_named("max");
            if (size && style) fail(at, "mutually exclusive font arguments 'size' and 'style'");
            if (!size && !style) fail(at, "font needs 'size:' or 'style:'");
            if (max && !style) fail(at, "font 'max:' requires 'style:'");
            if (size && (size->value.kind != LiteralKind::Number || size->value.number <= 0))
                fail(at, "font 'size:' must be a positive number");
            if (max && (max->value.kind != LiteralKind::Number || max->value.number <= 0))
                fail(at, "font 'max:' must be a positive number");
            if (style) {
                if (style->value.kind != LiteralKind::Word ||
                    (style->value.text != "body" && style->value.text != "headline" &&
                     style->value.text != "caption"))
                    fail(at, "unknown font style '" + style->value.text +
                                 "' (body, headline, caption)");
            }
        } else if (n == "color" || n == "background") {
            require_single_positional(m.args, LiteralKind::Color, at, n, "#RRGGBB color");
        } else if (n == "frame") {
            named_only({"width", "height"});
            if (m.args.empty()) fail(at, "frame needs 'width:' and/or 'height:'");
            for (const auto& a : m.args)
                if (a.value.kind != LiteralKind::Number || a.value.number <= 0)
                    fail(at, "frame dimensions must be positive numbers");
        } else if (n == "padding") {
            require_single_positional(m.args, LiteralKind::Number, at, n, "number");
            if (m.args[0].value.number < 0) fail(at, "padding must be non-negative");
        } else if (n == "lineLimit") {
            require_single_positional(m.args, LiteralKind::Number, at, n, "integer");
            double v = m.args[0].value.number;
            if (v < 1 || v != std::floor(v)) fail(at, "lineLimit must be an integer >= 1");
        } else if (n == "minScaleFactor") {
            require_single_positional(m.args, LiteralKind::Number, at, n, "number");
            double v = m.args[0].value.number;
            if (v <= 0 || v > 1) fail(at, "minScaleFactor must be in (0, 1]");
        } else if (n == "axLabel" || n == "axIdentifier") {
            require_single_positional(m.args, LiteralKind::String, at, n, "string");
        } else if (n == "axElement") {
            named_only({"children"});
            const Arg* ch = m.arg_named("children");
            if (!ch || ch->value.kind != LiteralKind::Word ||
                (ch->value.text != "contain" && ch->value.text != "ignore"))
                fail(at, "axElement takes 'children: contain' or 'children: ignore'");
        } else if (n == "axHidden") {
            require_single_positional(m.args, LiteralKind::Bool, at, n, "boolean");
        } else {
            fail(at, "unknown modifier '." + n + "'");
        }
    }

    // -- grammar -------------------------------------------------------------

    std::vector<Modifier> parse_modifiers() {
        std::vector<Modifier> mods;
        while (true) {
            std::size_t save = pos;
            skip_ws();
            if (peek() != '.') {
                pos = save;
                break;
            }
            std::size_t start = pos;
            ++pos;  // '.'
            Modifier m;
            m.name = parse_word();
            m.args = parse_arg_list("." + m.name);
            m.span = span_from(start);
            m.source = source;
            validate_modifier(m, start);
            mods.push_back(std::move(m));
        }
        return mods;
    }

    UiNode parse_node() {
        skip_ws();
        std::size_t start = pos;
        std::string word = parse_word();
        UiNode node;
        if (word == "VStack") node.kind = NodeKind::VStack;
        else if (word == "HStack") node.kind = NodeKind::HStack;
        else if (word == "ZStack") node.kind = NodeKind::ZStack;
        else if (word == "Text") node.kind = NodeKind::Text;
        else if (word == "Image") node.kind = NodeKind::Image;
        else if (word == "Button") node.kind = NodeKind::Button;
        else if (word == "Toggle") node.kind = NodeKind::Toggle;
        else if (word == "Spacer") node.kind = NodeKind::Spacer;
        else if (word == "view")
            fail(start, "unexpected 'view' inside a node");
        else {
            node.kind = NodeKind::ViewRef;
            node.ref_name = word;
        }

        if (is_container(node.kind)) {
            skip_ws();
            if (peek() == '(') node.args = parse_arg_list(word);
            validate_node_args(node.kind, node.args, start);
            skip_ws();
            expect('{', "to open the container body");
            while (true) {
                skip_ws();
                if (peek() == '}') {
                    ++pos;
                    break;
                }
                if (pos >= text.size()) fail(start, "unterminated container body");
                node.children.push_back(parse_node());
            }
        } else if (node.kind == NodeKind::Spacer) {
            // Bare keyword leaf; nothing to consume.
        } else if (node.kind == NodeKind::ViewRef) {
            skip_ws();
            node.args = parse_arg_list(word);
            validate_node_args(node.kind, node.args, start);
        } else {
            skip_ws();
            node.args = parse_arg_list(word);
            validate_node_args(node.kind, node.args, start);
        }

        node.modifiers = parse_modifiers();
        node.span = span_from(start);
        node.source = source;
        return node;
    }

    ViewDecl parse_decl() {
        skip_ws();
        std::size_t start = pos;
        std::string kw = parse_word();
        if (kw != "view") fail(start, "expected 'view'");
        skip_ws();
        ViewDecl decl;
        decl.name = parse_word();
        skip_ws();
        expect('{', "to open the view body");
        decl.body = parse_node();
        skip_ws();
        expect('}', "to close the view body");
        decl.span = span_from(start);
        decl.source = source;
        return decl;
    }

    SourceFile parse_file() {
        SourceFile file;
        file.path = path;
        file.text = text;
        while (!at_end()) file.decls.push_back(parse_decl());
        return file;
    }
};

}  // namespace

SourceFile parse_source(const std::string& text, const std::string& path) {
    Parser p(text, path);
    return p.parse_file();
}

ViewDecl parse_view_decl(const std::string& text, const std::string& path) {
    Parser p(text, path);
    if (p.at_end()) p.fail(0, "expected a view declaration");
    ViewDecl decl = p.parse_decl();
    if (!p.at_end()) p.fail(p.pos, "expected exactly one view declaration");
    return decl;
}

UiNode parse_node_snippet(const std::string& text, const std::string& path) {
    Parser p(text, path);
    if (p.at_end()) p.fail(0, "expected a node");
    UiNode node = p.parse_node();
    if (!p.at_end()) p.fail(p.pos, "expected exactly one node");
    return node;
}

}  // namespace minia11y
