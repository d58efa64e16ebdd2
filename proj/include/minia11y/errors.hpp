#pragma once

#include <stdexcept>
#include <string>

namespace minia11y {

/// Source text could not be parsed. `line` is 1-based; 0 when unknown.
struct SyntaxError : std::runtime_error {
    std::string path;
    int line;
    SyntaxError(std::string path_, int line_, const std::string& message)
        : std::runtime_error(path_.empty()
                                 ? "line " + std::to_string(line_) + ": " + message
                                 : path_ + ":" + std::to_string(line_) + ": " + message),
          path(std::move(path_)),
          line(line_) {}
};

/// A fix draft's snippet did not parse as a single view declaration.
struct SnippetParseError : std::runtime_error {
    explicit SnippetParseError(const std::string& message)
        : std::runtime_error("snippet parse error: " + message) {}
};

/// A fix draft renamed the declaration it was supposed to modify.
struct NameMismatch : std::runtime_error {
    std::string expected;
    std::string got;
    NameMismatch(std::string expected_, std::string got_)
        : std::runtime_error("declaration name mismatch: expected '" + expected_ +
                             "', got '" + got_ + "'"),
          expected(std::move(expected_)),
          got(std::move(got_)) {}
};

/// A patch no longer matches the text it is applied to.
struct ContextMismatch : std::runtime_error {
    explicit ContextMismatch(const std::string& message)
        : std::runtime_error("patch context mismatch: " + message) {}
};

/// A view reference (or requested root view) has no declaration.
struct UnknownView : std::runtime_error {
    std::string name;
    explicit UnknownView(std::string name_)
        : std::runtime_error("unknown view '" + name_ + "'"), name(std::move(name_)) {}
};

/// View references form a cycle; the hierarchy cannot be expanded.
struct RecursionError : std::runtime_error {
    explicit RecursionError(const std::string& chain)
        : std::runtime_error("recursive view reference: " + chain) {}
};

/// One screen expands the same view declaration twice, which would duplicate
/// element identifiers inside the hierarchy.
struct MultipleReferenceError : std::runtime_error {
    explicit MultipleReferenceError(const std::string& view)
        : std::runtime_error("view '" + view + "' is expanded more than once in one screen") {}
};

/// An element id was expected in an instrumented project but is absent.
struct MissingIdentifier : std::runtime_error {
    explicit MissingIdentifier(const std::string& where)
        : std::runtime_error("element without axIdentifier: " + where) {}
};

/// An element id does not exist in the hierarchy or scene it was used with.
struct UnknownElement : std::runtime_error {
    std::string id;
    explicit UnknownElement(std::string id_)
        : std::runtime_error("unknown element '" + id_ + "'"), id(std::move(id_)) {}
};

/// A color string is not of the form #RRGGBB.
struct BadColor : std::runtime_error {
    explicit BadColor(const std::string& value)
        : std::runtime_error("bad color '" + value + "', expected #RRGGBB") {}
};

/// A model backend could not produce a response (transport failure, HTTP
/// error status, or an unmatched scripted request).
struct BackendError : std::runtime_error {
    explicit BackendError(const std::string& message)
        : std::runtime_error("backend error: " + message) {}
};

/// The planner response could not be turned into the requested plans.
struct PlanParseError : std::runtime_error {
    explicit PlanParseError(const std::string& message)
        : std::runtime_error("plan parse error: " + message) {}
};

/// A localization rating response had no usable integer score.
struct RatingParseError : std::runtime_error {
    explicit RatingParseError(const std::string& message)
        : std::runtime_error("rating parse error: " + message) {}
};

/// A snippet comparison response named no known candidate.
struct SelectionParseError : std::runtime_error {
    explicit SelectionParseError(const std::string& message)
        : std::runtime_error("selection parse error: " + message) {}
};

/// The project manifest is missing, malformed, or inconsistent.
struct ManifestError : std::runtime_error {
    explicit ManifestError(const std::string& message)
        : std::runtime_error("manifest error: " + message) {}
};

}  // namespace minia11y
