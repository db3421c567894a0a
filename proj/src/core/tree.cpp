#include "core/tree.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cstdio>

namespace prindt {

void TreeParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(ErrorCode::invalid_argument, "alpha must lie in (0,1)");
    if (min_bucket < 1) fail(ErrorCode::invalid_argument, "min_bucket must be >= 1");
    if (min_split < 2 * min_bucket)
        fail(ErrorCode::invalid_argument, "min_split must be >= 2 * min_bucket");
    if (max_levels_for_split_search < 2)
        fail(ErrorCode::invalid_argument, "max_levels_for_split_search must be >= 2");
}

namespace {

struct LevelCount {
    std::int32_t code;
    std::int64_t per_class[2];
};

// Observed levels at the node (ascending code order) with per-class counts.
std::vector<LevelCount> observed_levels(const Dataset& ds, std::span<const std::size_t> rows,
                                        std::size_t variable) {
    const Column& col = ds.column(variable);
    const std::size_t n_levels = ds.schema()[variable].levels.size();
    std::vector<std::array<std::int64_t, 2>> counts(n_levels, {0, 0});
    for (const std::size_t r : rows)
        ++counts[col.codes[r]][ds.class_of(r)];
    std::vector<LevelCount> out;
    for (std::size_t code = 0; code < n_levels; ++code)
        if (counts[code][0] + counts[code][1] > 0)
            out.push_back(LevelCount{static_cast<std::int32_t>(code),
                                     {counts[code][0], counts[code][1]}});
    return out;
}

double pearson_2x2(double a, double b, double c, double d) {
    const double n = a + b + c + d;
    const double r0 = a + b, r1 = c + d, c0 = a + c, c1 = b + d;
    double stat = 0.0;
    const double e[4] = {r0 * c0 / n, r0 * c1 / n, r1 * c0 / n, r1 * c1 / n};
    const double o[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i) {
        const double diff = o[i] - e[i];
        stat += diff * diff / e[i];
    }
    return stat;
}

} // namespace

std::optional<std::pair<std::size_t, double>> select_variable(const Dataset& ds,
                                                              std::span<const std::size_t> rows,
                                                              const TreeParams& params) {
    if (rows.empty()) fail(ErrorCode::invalid_argument, "select_variable: empty row set");

    std::int64_t class_total[2] = {0, 0};
    for (const std::size_t r : rows) ++class_total[ds.class_of(r)];

    std::vector<std::pair<std::size_t, double>> tested; // (variable, raw p)
    for (std::size_t v = 0; v < ds.schema().size(); ++v) {
        const Column& col = ds.column(v);
        if (col.kind == VariableKind::categorical) {
            const auto levels = observed_levels(ds, rows, v);
            if (levels.size() < 2 || levels.size() > params.max_levels_for_split_search)
                continue;
            if (class_total[0] == 0 || class_total[1] == 0) continue; // pure node
            std::vector<std::array<std::int64_t, 2>> table;
            table.reserve(levels.size());
            for (const auto& lc : levels)
                table.push_back({lc.per_class[0], lc.per_class[1]});
            tested.emplace_back(v, chi_square_test(table).p_value);
        } else {
            std::vector<double> values;
            std::vector<std::uint8_t> group;
            values.reserve(rows.size());
            group.reserve(rows.size());
            for (const std::size_t r : rows) {
                values.push_back(col.values[r]);
                group.push_back(static_cast<std::uint8_t>(ds.class_of(r)));
            }
            const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
            if (*mn == *mx) continue;
            if (class_total[0] == 0 || class_total[1] == 0) continue;
            tested.emplace_back(v, rank_sum_test(values, group).p_value);
        }
    }
    if (tested.empty()) return std::nullopt;

    const int m = static_cast<int>(tested.size());
    std::optional<std::pair<std::size_t, double>> best;
    for (const auto& [v, p] : tested) {
        const double adj = bonferroni(p, m);
        if (!best || adj < best->second) best = {v, adj};
    }
    if (best->second <= params.alpha) return best;
    return std::nullopt;
}

std::optional<Split> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                std::size_t variable, const TreeParams& params) {
    if (rows.empty()) fail(ErrorCode::invalid_argument, "best_split: empty row set");
    const Column& col = ds.column(variable);

    std::int64_t class_total[2] = {0, 0};
    for (const std::size_t r : rows) ++class_total[ds.class_of(r)];
    if (class_total[0] == 0 || class_total[1] == 0) return std::nullopt; // pure node

    const auto total = static_cast<std::int64_t>(rows.size());

    if (col.kind == VariableKind::categorical) {
        const auto levels = observed_levels(ds, rows, variable);
        const std::size_t r = levels.size();
        if (r < 2 || r > params.max_levels_for_split_search) return std::nullopt;

        // Canonical orientation: the left branch holds the observed level with
        // the smallest code; masks enumerate subsets of the remaining levels.
        double best_stat = -1.0;
        std::vector<std::int32_t> best_left;
        const std::uint64_t full = (std::uint64_t{1} << (r - 1)) - 1;
        std::vector<std::int32_t> left;
        for (std::uint64_t mask = 0; mask < full; ++mask) {
            std::int64_t left0 = levels[0].per_class[0];
            std::int64_t left1 = levels[0].per_class[1];
            left.clear();
            left.push_back(levels[0].code);
            for (std::size_t i = 1; i < r; ++i) {
                if (mask >> (i - 1) & 1) {
                    left0 += levels[i].per_class[0];
                    left1 += levels[i].per_class[1];
                    left.push_back(levels[i].code);
                }
            }
            const std::int64_t n_left = left0 + left1;
            const std::int64_t n_right = total - n_left;
            if (n_left < static_cast<std::int64_t>(params.min_bucket) ||
                n_right < static_cast<std::int64_t>(params.min_bucket))
                continue;
            const double stat =
                pearson_2x2(static_cast<double>(left0), static_cast<double>(left1),
                            static_cast<double>(class_total[0] - left0),
                            static_cast<double>(class_total[1] - left1));
            if (stat > best_stat || (stat == best_stat && left < best_left)) {
                best_stat = stat;
                best_left = left;
            }
        }
        if (best_stat < 0.0) return std::nullopt;

        Split split;
        split.variable = variable;
        split.numeric = false;
        split.left_levels = best_left;
        for (const auto& lc : levels)
            if (!std::binary_search(best_left.begin(), best_left.end(), lc.code))
                split.right_levels.push_back(lc.code);
        return split;
    }

    // Numeric: candidate thresholds are midpoints between consecutive
    // distinct sorted values.
    std::vector<std::pair<double, ClassCode>> sorted;
    sorted.reserve(rows.size());
    for (const std::size_t r : rows) sorted.emplace_back(col.values[r], ds.class_of(r));
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double best_stat = -1.0;
    double best_threshold = 0.0;
    std::int64_t left0 = 0, left1 = 0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].second == 0) ++left0;
        else ++left1;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::int64_t n_left = left0 + left1;
        const std::int64_t n_right = total - n_left;
        if (n_left < static_cast<std::int64_t>(params.min_bucket) ||
            n_right < static_cast<std::int64_t>(params.min_bucket))
            continue;
        const double stat = pearson_2x2(static_cast<double>(left0), static_cast<double>(left1),
                                        static_cast<double>(class_total[0] - left0),
                                        static_cast<double>(class_total[1] - left1));
        if (stat > best_stat) {
            best_stat = stat;
            best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        }
    }
    if (best_stat < 0.0) return std::nullopt;

    Split split;
    split.variable = variable;
    split.numeric = true;
    split.threshold = best_threshold;
    return split;
}

namespace {

struct Grower {
    const Dataset& ds;
    const TreeParams& params;
    std::vector<TreeNode> nodes;

    std::int32_t build(const std::vector<std::size_t>& rows) {
        const auto index = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        {
            TreeNode& node = nodes.back();
            for (const std::size_t r : rows) ++node.counts[ds.class_of(r)];
            const double total = static_cast<double>(rows.size());
            node.freqs = {static_cast<double>(node.counts[0]) / total,
                          static_cast<double>(node.counts[1]) / total};
            node.predicted = node.freqs[0] >= node.freqs[1] ? 0 : 1;
        }

        if (rows.size() < params.min_split) return index;
        if (nodes[index].counts[0] == 0 || nodes[index].counts[1] == 0) return index;

        const auto selected = select_variable(ds, rows, params);
        if (!selected) return index;
        auto split = best_split(ds, rows, selected->first, params);
        if (!split) return index;
        split->p_adjusted = selected->second;

        std::vector<std::size_t> left_rows, right_rows;
        const Column& col = ds.column(split->variable);
        for (const std::size_t r : rows) {
            const bool goes_left =
                split->numeric
                    ? col.values[r] <= split->threshold
                    : std::binary_search(split->left_levels.begin(), split->left_levels.end(),
                                         col.codes[r]);
            (goes_left ? left_rows : right_rows).push_back(r);
        }

        nodes[index].is_leaf = false;
        nodes[index].split = std::move(*split);
        const std::int32_t left = build(left_rows);
        nodes[index].left = left;
        const std::int32_t right = build(right_rows);
        nodes[index].right = right;
        return index;
    }
};

} // namespace

Tree Tree::grow(const Dataset& ds, std::span<const std::size_t> rows, const TreeParams& params) {
    params.validate();
    if (rows.empty()) fail(ErrorCode::invalid_argument, "grow: empty row subset");
    for (const std::size_t r : rows)
        if (r >= ds.n_rows()) fail(ErrorCode::invalid_argument, "grow: row index out of range");
    Grower grower{ds, params, {}};
    grower.build(std::vector<std::size_t>(rows.begin(), rows.end()));
    return Tree(std::move(grower.nodes));
}

std::size_t Tree::leaf_count() const {
    std::size_t n = 0;
    for (const TreeNode& node : nodes_) n += node.is_leaf;
    return n;
}

std::size_t Tree::route(const std::vector<Column>& columns, std::size_t row) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf) {
        const Split& split = nodes_[i].split;
        const Column& col = columns[split.variable];
        const bool goes_left =
            split.numeric ? col.values[row] <= split.threshold
                          : std::binary_search(split.left_levels.begin(),
                                               split.left_levels.end(), col.codes[row]);
        i = static_cast<std::size_t>(goes_left ? nodes_[i].left : nodes_[i].right);
    }
    return i;
}

std::pair<ClassCode, std::array<double, 2>> Tree::predict(const std::vector<Column>& columns,
                                                          std::size_t row) const {
    const TreeNode& leaf = nodes_[route(columns, row)];
    return {leaf.predicted, leaf.freqs};
}

std::vector<Split> Tree::collect_splits() const {
    std::vector<Split> out;
    for (const TreeNode& node : nodes_)
        if (!node.is_leaf) out.push_back(node.split);
    return out;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", p);
    return buf;
}

std::string format_freq(double f) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", f);
    return buf;
}

std::string level_set(const std::vector<std::int32_t>& codes,
                      const std::vector<std::string>& levels) {
    std::string out = "{";
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (i) out += ", ";
        out += levels[codes[i]];
    }
    out += "}";
    return out;
}

} // namespace

std::string Tree::to_dot(const std::vector<VariableSchema>& schema, const ClassSpec& cls) const {
    std::string out = "digraph tree {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const TreeNode& node = nodes_[i];
        const std::string id = "n" + std::to_string(i);
        if (node.is_leaf) {
            out += "  " + id + " [label=\"n=" + std::to_string(node.counts[0] + node.counts[1]) +
                   "\\n" + dot_escape(cls.small_label) + ": " + format_freq(node.freqs[0]) +
                   "\\n" + dot_escape(cls.large_label) + ": " + format_freq(node.freqs[1]) +
                   "\"];\n";
            continue;
        }
        const Split& split = node.split;
        const VariableSchema& var = schema[split.variable];
        out += "  " + id + " [label=\"" + dot_escape(var.name) + "\\np=" +
               format_p(split.p_adjusted) + "\"];\n";
        std::string left_label, right_label;
        if (split.numeric) {
            left_label = "<= " + format_double(split.threshold);
            right_label = "> " + format_double(split.threshold);
        } else {
            left_label = dot_escape(level_set(split.left_levels, var.levels));
            right_label = dot_escape(level_set(split.right_levels, var.levels));
        }
        out += "  " + id + " -> n" + std::to_string(node.left) + " [label=\"" + left_label +
               "\"];\n";
        out += "  " + id + " -> n" + std::to_string(node.right) + " [label=\"" + right_label +
               "\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace prindt
