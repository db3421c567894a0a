#pragma once

#include "core/dataset.hpp"
#include "core/tree.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace prindt {

/// A forbidden grouping of categorical levels.
///   exact_set      - a branch whose level set equals `levels` is forbidden
///   never_together - any branch containing all of `levels` is forbidden
struct ExclusionRule {
    enum class Kind { exact_set, never_together };

    Kind kind = Kind::exact_set;
    std::string variable;
    std::vector<std::string> levels; // duplicate-free, as written

    std::string text() const; // canonical rule-file syntax

    bool operator==(const ExclusionRule&) const = default;
};

// Rule file syntax, one rule per line, '#' comments:
//   VAR == {v1, v2, ...}         exact_set
//   VAR !together {v1, v2, ...}  never_together
std::vector<ExclusionRule> parse_rules(std::string_view text);
std::vector<ExclusionRule> parse_rules_file(const std::string& path);

struct Violation {
    std::size_t rule_index;
    Split split;
};

struct InterpretabilityVerdict {
    bool interpretable = true;
    std::vector<Violation> violations;
};

// Matches every rule against every categorical split's branch level sets.
// exact_set matches either branch exactly; never_together matches when all
// its levels fall inside one branch. Numeric splits never match.
InterpretabilityVerdict check_tree(const Tree& tree, const std::vector<VariableSchema>& schema,
                                   const std::vector<ExclusionRule>& rules);

} // namespace prindt
