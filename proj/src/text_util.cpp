#include "minia11y/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace minia11y {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            return lines;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

bool ends_with_newline(const std::string& text) {
    return text.empty() || text.back() == '\n';
}

std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size()) out += '\n';
    }
    if (trailing_newline && !lines.empty()) out += '\n';
    return out;
}

std::size_t count_codepoints(const std::string& text) {
    std::size_t n = 0;
    for (unsigned char c : text)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

std::string format_number(double value) {
    if (std::isfinite(value) && value == std::floor(value) &&
        std::abs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", value);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string format_pt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return buf;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool icontains(const std::string& haystack, const std::string& needle) {
    return contains(to_lower(haystack), to_lower(needle));
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string humanize_identifier(const std::string& raw) {
    std::string base = raw;
    // Final extension only: "icon_pin.png" keeps "icon_pin".
    std::size_t dot = base.rfind('.');
    if (dot != std::string::npos && dot > 0 && dot + 1 < base.size()) {
        bool ext_alnum = true;
        for (std::size_t i = dot + 1; i < base.size(); ++i)
            if (!std::isalnum(static_cast<unsigned char>(base[i]))) ext_alnum = false;
        if (ext_alnum && base.size() - dot <= 5) base = base.substr(0, dot);
    }
    std::vector<std::string> words;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) words.push_back(cur);
        cur.clear();
    };
    for (std::size_t i = 0; i < base.size(); ++i) {
        char c = base[i];
        if (c == '_' || c == '-' || c == '.' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c)) && !cur.empty() &&
            std::islower(static_cast<unsigned char>(cur.back())))
            flush();
        cur += c;
    }
    flush();
    std::string out;
    for (auto& w : words) {
        if (!out.empty()) out += ' ';
        w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        for (std::size_t i = 1; i < w.size(); ++i)
            w[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(w[i])));
        out += w;
    }
    return out;
}

std::vector<std::string> split_whitespace(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace minia11y
