#pragma once

#include <cstddef>
#include <string>

namespace minia11y {

/// Byte range inside one source file. Offsets are half-open [start_byte,
/// end_byte); lines are 1-based and inclusive. A default-constructed span is
/// invalid and marks synthetic nodes that were built in memory rather than
/// parsed from text.
struct SourceSpan {
    std::string file;
    std::size_t start_byte = 0;
    std::size_t end_byte = 0;
    int start_line = 0;
    int end_line = 0;

    bool valid() const { return end_byte > start_byte; }
};

inline bool operator==(const SourceSpan& a, const SourceSpan& b) {
    return a.file == b.file && a.start_byte == b.start_byte &&
           a.end_byte == b.end_byte && a.start_line == b.start_line &&
           a.end_line == b.end_line;
}

}  // namespace minia11y
