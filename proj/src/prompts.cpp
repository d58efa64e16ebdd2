#include "minia11y/prompts.hpp"

#include <fstream>
#include <sstream>

namespace minia11y {
namespace {

const char* kSystem =
    "You repair accessibility defects in a small declarative UI language. "
    "Views are declared as `view Name { ... }` with VStack/HStack/ZStack "
    "containers, Text/Image/Button/Toggle/Spacer leaves and postfix "
    "modifiers such as .font, .color, .background, .frame, .padding, "
    ".lineLimit, .minScaleFactor, .axLabel, .axIdentifier, .axElement and "
    ".axHidden. Respond exactly in the format each request asks for.";

const char* kPlanner =
    "An accessibility scan of screen {root_view} reported this issue on "
    "element {element}:\n"
    "  {issue_description}\n"
    "Issue kind: {issue_kind}\n"
    "\n"
    "Rendered element:\n"
    "{element_json}\n"
    "\n"
    "Declaration containing the element:\n"
    "{snippet}\n"
    "\n"
    "Propose {count} alternative plans to fix the issue by editing the UI "
    "source. Plans must stand alone; do not suggest third-party tools, "
    "external testing services or manual verification. Answer with a "
    "numbered list, one plan per entry, in exactly this shape:\n"
    "1. <one-line summary of the change>\n"
    "   Rationale: <why this resolves the issue>\n"
    "   Guideline: <the accessibility guideline the fix serves>\n";

const char* kRater =
    "Issue under repair:\n"
    "  {issue_description}\n"
    "Fix plan:\n"
    "  {plan_summary}\n"
    "\n"
    "Candidate location ({relation} declaration {view_name}):\n"
    "{snippet}\n"
    "\n"
    "Rate from 0 to 100 how likely a correct fix for this plan belongs in "
    "this declaration. Answer in exactly this shape:\n"
    "SCORE: <integer 0-100>\n"
    "REASONING: <one sentence>\n";

const char* kComparer =
    "Issue under repair:\n"
    "  {issue_description}\n"
    "Fix plan:\n"
    "  {plan_summary}\n"
    "\n"
    "Candidate declarations:\n"
    "{candidates}\n"
    "\n"
    "Pick the declaration the fix should edit. Answer in exactly this "
    "shape:\n"
    "CHOICE: <declaration name>\n";

const char* kFixer =
    "Issue on element {element} of screen {root_view}:\n"
    "  {issue_description}\n"
    "Issue kind: {issue_kind}\n"
    "Fix plan to implement:\n"
    "  {plan_summary}\n"
    "\n"
    "Current declaration {view_name}:\n"
    "```minui\n"
    "{snippet}\n"
    "```\n"
    "{feedback}"
    "This is attempt {attempt}. Rewrite the declaration so the issue is "
    "resolved while keeping every interaction and all visible text intact. "
    "Answer in exactly this shape:\n"
    "EXPLANATION: <one sentence>\n"
    "```minui\n"
    "<the full rewritten declaration>\n"
    "```\n";

std::string read_or(const std::filesystem::path& path, const std::string& fallback) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fallback;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

PromptSet PromptSet::defaults() {
    PromptSet p;
    p.system = kSystem;
    p.planner = kPlanner;
    p.rater = kRater;
    p.comparer = kComparer;
    p.fixer = kFixer;
    return p;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
    PromptSet p = defaults();
    p.system = read_or(dir / "system.txt", p.system);
    p.planner = read_or(dir / "planner.txt", p.planner);
    p.rater = read_or(dir / "rater.txt", p.rater);
    p.comparer = read_or(dir / "comparer.txt", p.comparer);
    p.fixer = read_or(dir / "fixer.txt", p.fixer);
    return p;
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        std::size_t close = tmpl.find('}', open + 1);
        if (close == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        out.append(tmpl, pos, open - pos);
        std::string key = tmpl.substr(open + 1, close - open - 1);
        auto it = values.find(key);
        if (it != values.end()) {
            out += it->second;
        } else {
            out.append(tmpl, open, close - open + 1);
        }
        pos = close + 1;
    }
    return out;
}

}  // namespace minia11y
