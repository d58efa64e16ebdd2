#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace minia11y {

/// Logical lines of `text` without their terminators. A trailing newline does
/// not create an empty final line; "a\nb\n" and "a\nb" both give {"a","b"}.
std::vector<std::string> split_lines(const std::string& text);

/// True when `text` is empty or ends with '\n'.
bool ends_with_newline(const std::string& text);

/// Joins `lines` with '\n'; appends a final '\n' when `trailing_newline`.
std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline);

/// Number of UTF-8 code points (continuation bytes are not counted).
/// Malformed bytes count as one code point each.
std::size_t count_codepoints(const std::string& text);

/// Formats a double the way source literals are written: integral values
/// without a decimal point, otherwise the shortest fixed form ("0.5", "19.04").
std::string format_number(double value);

/// Fixed one-decimal formatting used in issue descriptions ("28.4").
std::string format_pt(double value);

bool starts_with(const std::string& s, const std::string& prefix);
bool contains(const std::string& haystack, const std::string& needle);
bool icontains(const std::string& haystack, const std::string& needle);
std::string to_lower(const std::string& s);
std::string trim(const std::string& s);

/// "icon_pin.png" -> "Icon Pin": drops a final file extension, splits on
/// '_', '-', '.', whitespace and lowerCamel humps, then title-cases words.
std::string humanize_identifier(const std::string& raw);

/// Whitespace-separated tokens.
std::vector<std::string> split_whitespace(const std::string& s);

}  // namespace minia11y
