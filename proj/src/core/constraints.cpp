#include "core/constraints.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>

namespace prindt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    fail(ErrorCode::parse, "rule file line " + std::to_string(line_no) + ": " + what);
}

ExclusionRule parse_rule_line(std::string_view line, std::size_t line_no) {
    ExclusionRule rule;

    const std::size_t eq = line.find("==");
    const std::size_t tog = line.find("!together");
    std::size_t op_pos, op_len;
    if (eq != std::string_view::npos && (tog == std::string_view::npos || eq < tog)) {
        rule.kind = ExclusionRule::Kind::exact_set;
        op_pos = eq;
        op_len = 2;
    } else if (tog != std::string_view::npos) {
        rule.kind = ExclusionRule::Kind::never_together;
        op_pos = tog;
        op_len = 9;
    } else {
        parse_fail(line_no, "expected '==' or '!together'");
    }

    const std::string_view var = trim(line.substr(0, op_pos));
    if (var.empty()) parse_fail(line_no, "missing variable name");
    rule.variable = std::string(var);

    std::string_view rest = trim(line.substr(op_pos + op_len));
    if (rest.size() < 2 || rest.front() != '{' || rest.back() != '}')
        parse_fail(line_no, "expected a level set like {a, b}");
    rest = rest.substr(1, rest.size() - 2);

    std::size_t start = 0;
    while (true) {
        const std::size_t comma = rest.find(',', start);
        const std::string_view raw =
            comma == std::string_view::npos ? rest.substr(start) : rest.substr(start, comma - start);
        const std::string_view value = trim(raw);
        if (value.empty()) parse_fail(line_no, "empty level name in set");
        if (std::find(rule.levels.begin(), rule.levels.end(), value) != rule.levels.end())
            parse_fail(line_no, "duplicate level '" + std::string(value) + "' in set");
        rule.levels.emplace_back(value);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (rule.kind == ExclusionRule::Kind::never_together && rule.levels.size() < 2)
        parse_fail(line_no, "!together needs at least two levels");
    return rule;
}

} // namespace

std::string ExclusionRule::text() const {
    std::string out = variable;
    out += kind == Kind::exact_set ? " == {" : " !together {";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i) out += ", ";
        out += levels[i];
    }
    out += "}";
    return out;
}

std::vector<ExclusionRule> parse_rules(std::string_view text) {
    std::vector<ExclusionRule> rules;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        const std::string_view line = trim(raw);
        if (!line.empty() && line.front() != '#') rules.push_back(parse_rule_line(line, line_no));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return rules;
}

std::vector<ExclusionRule> parse_rules_file(const std::string& path) {
    return parse_rules(read_text_file(path));
}

namespace {

// Branch level-name set, sorted for set comparison.
std::vector<std::string> branch_names(const std::vector<std::int32_t>& codes,
                                      const std::vector<std::string>& levels) {
    std::vector<std::string> names;
    names.reserve(codes.size());
    for (const std::int32_t c : codes) names.push_back(levels[c]);
    std::sort(names.begin(), names.end());
    return names;
}

bool is_subset(const std::vector<std::string>& sub, const std::vector<std::string>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

} // namespace

InterpretabilityVerdict check_tree(const Tree& tree, const std::vector<VariableSchema>& schema,
                                   const std::vector<ExclusionRule>& rules) {
    InterpretabilityVerdict verdict;
    if (rules.empty()) return verdict;

    std::vector<std::vector<std::string>> rule_sets(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        rule_sets[i] = rules[i].levels;
        std::sort(rule_sets[i].begin(), rule_sets[i].end());
    }

    for (const Split& split : tree.collect_splits()) {
        if (split.numeric) continue;
        const VariableSchema& var = schema[split.variable];
        const auto left = branch_names(split.left_levels, var.levels);
        const auto right = branch_names(split.right_levels, var.levels);
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (rules[i].variable != var.name) continue;
            const auto& set = rule_sets[i];
            const bool hit = rules[i].kind == ExclusionRule::Kind::exact_set
                                 ? set == left || set == right
                                 : is_subset(set, left) || is_subset(set, right);
            if (hit) verdict.violations.push_back(Violation{i, split});
        }
    }
    verdict.interpretable = verdict.violations.empty();
    return verdict;
}

} // namespace prindt
