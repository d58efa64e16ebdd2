#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace minia11y {

/// The four prompt templates driving the repair agents. Placeholders use
/// {name} syntax and unknown placeholders are left untouched.
struct PromptSet {
    std::string planner;
    std::string rater;
    std::string comparer;
    std::string fixer;
    std::string system;

    static PromptSet defaults();
    /// Reads planner.txt, rater.txt, comparer.txt, fixer.txt and system.txt
    /// from `dir`; missing files keep their built-in text.
    static PromptSet load(const std::filesystem::path& dir);
};

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);

}  // namespace minia11y
