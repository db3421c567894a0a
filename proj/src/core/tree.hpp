#pragma once

#include "core/dataset.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prindt {

struct TreeParams {
    double alpha = 0.01;
    std::size_t min_split = 20;
    std::size_t min_bucket = 7;
    // Categorical split search enumerates 2^(r-1)-1 partitions; variables with
    // more observed levels than this are not considered for splitting.
    std::size_t max_levels_for_split_search = 20;

    void validate() const;
};

/// One binary decision. Categorical rules carry the level codes observed at
/// the node, partitioned into the two branches; numeric rules send
/// value <= threshold to the left.
struct Split {
    std::size_t variable = 0;
    bool numeric = false;
    double threshold = 0.0;
    std::vector<std::int32_t> left_levels;  // ascending codes
    std::vector<std::int32_t> right_levels; // ascending codes
    double p_adjusted = 0.0;

    bool operator==(const Split&) const = default;
};

struct TreeNode {
    bool is_leaf = true;
    Split split;                           // meaningful when !is_leaf
    std::int32_t left = -1, right = -1;    // child node indices
    std::array<std::int64_t, 2> counts{};  // [small, large] training rows
    std::array<double, 2> freqs{};         // counts normalized
    ClassCode predicted = 0;               // argmax frequency, tie -> small

    bool operator==(const TreeNode&) const = default;
};

// Significance-based variable selection: tests every usable predictor against
// the class (contingency chi-square for categorical, rank-sum for numeric),
// Bonferroni-adjusts over the tested count, and returns the best variable if
// its adjusted p-value clears alpha. Ties break by schema order.
std::optional<std::pair<std::size_t, double>> select_variable(const Dataset& ds,
                                                              std::span<const std::size_t> rows,
                                                              const TreeParams& params);

// Best binary partition of `variable` at this node by Pearson chi-square of
// the induced side-by-class table, among candidates obeying min_bucket.
// p_adjusted is left unset. nullopt when no valid candidate exists.
std::optional<Split> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                std::size_t variable, const TreeParams& params);

/// Immutable conditional inference tree. Nodes are stored preorder; the root
/// is node 0.
class Tree {
public:
    Tree() = default;
    explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    static Tree grow(const Dataset& ds, std::span<const std::size_t> rows,
                     const TreeParams& params);

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t leaf_count() const;

    // Routes the row to a leaf. Categorical codes not in the left branch set
    // (including -1 for unseen levels) go right.
    std::size_t route(const std::vector<Column>& columns, std::size_t row) const;
    std::pair<ClassCode, std::array<double, 2>> predict(const std::vector<Column>& columns,
                                                        std::size_t row) const;

    std::vector<Split> collect_splits() const; // preorder

    std::string to_dot(const std::vector<VariableSchema>& schema, const ClassSpec& cls) const;

    bool operator==(const Tree&) const = default;

private:
    std::vector<TreeNode> nodes_;
};

} // namespace prindt
