#include "core/model_io.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace prindt {

using json = nlohmann::ordered_json;

namespace {

json schema_to_json(const std::vector<VariableSchema>& schema) {
    json out = json::array();
    for (const VariableSchema& var : schema) {
        json j;
        j["name"] = var.name;
        if (var.kind == VariableKind::numeric) {
            j["kind"] = "numeric";
        } else {
            j["kind"] = "categorical";
            j["levels"] = var.levels;
        }
        out.push_back(std::move(j));
    }
    return out;
}

json node_to_json(const Tree& tree, std::size_t index, const TrainedModel& model) {
    const TreeNode& node = tree.node(index);
    json j;
    if (node.is_leaf) {
        j["kind"] = "leaf";
        j["counts"] = {node.counts[0], node.counts[1]};
        j["freqs"] = {node.freqs[0], node.freqs[1]};
        j["predicted"] = node.predicted == 0 ? model.class_spec.small_label
                                             : model.class_spec.large_label;
        return j;
    }
    const Split& split = node.split;
    const VariableSchema& var = model.schema[split.variable];
    j["kind"] = "split";
    j["variable"] = var.name;
    json rule;
    if (split.numeric) {
        rule["type"] = "numeric";
        rule["threshold"] = split.threshold;
    } else {
        rule["type"] = "categorical";
        json left = json::array(), right = json::array();
        for (const std::int32_t c : split.left_levels) left.push_back(var.levels[c]);
        for (const std::int32_t c : split.right_levels) right.push_back(var.levels[c]);
        rule["left"] = std::move(left);
        rule["right"] = std::move(right);
    }
    j["rule"] = std::move(rule);
    j["p_adjusted"] = split.p_adjusted;
    j["left"] = node_to_json(tree, static_cast<std::size_t>(node.left), model);
    j["right"] = node_to_json(tree, static_cast<std::size_t>(node.right), model);
    return j;
}

} // namespace

std::string model_to_json(const TrainedModel& model) {
    json j;
    j["schema"] = schema_to_json(model.schema);
    j["class_spec"] = {
        {"column", model.class_spec.column},
        {"labels", {model.class_spec.small_label, model.class_spec.large_label}},
        {"small_label", model.class_spec.small_label},
    };
    j["params"] = {
        {"alpha", model.tree_params.alpha},
        {"min_split", model.tree_params.min_split},
        {"min_bucket", model.tree_params.min_bucket},
        {"max_levels_for_split_search", model.tree_params.max_levels_for_split_search},
        {"fraction", model.res_params.fraction},
        {"reps", model.res_params.reps},
        {"seed", model.res_params.master_seed},
    };
    json trees = json::array();
    for (const TreeRecord& rec : model.records) {
        if (!rec.interpretable) continue;
        json t;
        t["rep"] = rec.rep_index;
        t["balanced_accuracy"] = rec.balanced_accuracy;
        t["interpretable"] = rec.interpretable;
        t["root"] = node_to_json(rec.tree, 0, model);
        trees.push_back(std::move(t));
    }
    j["trees"] = std::move(trees);
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad_model(const std::string& what) {
    fail(ErrorCode::parse, "model file: " + what);
}

const json& expect(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) bad_model(std::string("missing key '") + key + "'");
    return *it;
}

std::int32_t level_code(const VariableSchema& var, const std::string& name) {
    for (std::size_t i = 0; i < var.levels.size(); ++i)
        if (var.levels[i] == name) return static_cast<std::int32_t>(i);
    bad_model("unknown level '" + name + "' for variable '" + var.name + "'");
}

std::int32_t node_from_json(const json& j, const TrainedModel& model,
                            std::vector<TreeNode>& nodes) {
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    const std::string kind = expect(j, "kind").get<std::string>();
    if (kind == "leaf") {
        TreeNode& node = nodes.back();
        const auto counts = expect(j, "counts");
        const auto freqs = expect(j, "freqs");
        if (!counts.is_array() || counts.size() != 2 || !freqs.is_array() || freqs.size() != 2)
            bad_model("leaf counts/freqs must be pairs");
        node.counts = {counts[0].get<std::int64_t>(), counts[1].get<std::int64_t>()};
        node.freqs = {freqs[0].get<double>(), freqs[1].get<double>()};
        const std::string predicted = expect(j, "predicted").get<std::string>();
        if (predicted == model.class_spec.small_label) node.predicted = 0;
        else if (predicted == model.class_spec.large_label) node.predicted = 1;
        else bad_model("leaf predicts unknown class '" + predicted + "'");
        return index;
    }
    if (kind != "split") bad_model("node kind must be 'split' or 'leaf'");

    Split split;
    const std::string var_name = expect(j, "variable").get<std::string>();
    std::size_t variable = model.schema.size();
    for (std::size_t i = 0; i < model.schema.size(); ++i)
        if (model.schema[i].name == var_name) variable = i;
    if (variable == model.schema.size()) bad_model("split on unknown variable '" + var_name + "'");
    split.variable = variable;
    split.p_adjusted = expect(j, "p_adjusted").get<double>();

    const json& rule = expect(j, "rule");
    const std::string type = expect(rule, "type").get<std::string>();
    const VariableSchema& var = model.schema[variable];
    if (type == "numeric") {
        if (var.kind != VariableKind::numeric)
            bad_model("numeric rule on categorical variable '" + var_name + "'");
        split.numeric = true;
        split.threshold = expect(rule, "threshold").get<double>();
    } else if (type == "categorical") {
        if (var.kind != VariableKind::categorical)
            bad_model("categorical rule on numeric variable '" + var_name + "'");
        split.numeric = false;
        for (const auto& lvl : expect(rule, "left"))
            split.left_levels.push_back(level_code(var, lvl.get<std::string>()));
        for (const auto& lvl : expect(rule, "right"))
            split.right_levels.push_back(level_code(var, lvl.get<std::string>()));
        std::sort(split.left_levels.begin(), split.left_levels.end());
        std::sort(split.right_levels.begin(), split.right_levels.end());
        if (split.left_levels.empty()) bad_model("categorical rule with empty left branch");
    } else {
        bad_model("rule type must be 'numeric' or 'categorical'");
    }

    nodes[index].is_leaf = false;
    nodes[index].split = std::move(split);
    const std::int32_t left = node_from_json(expect(j, "left"), model, nodes);
    nodes[index].left = left;
    const std::int32_t right = node_from_json(expect(j, "right"), model, nodes);
    nodes[index].right = right;

    // Inner-node counts are derivable; keep them so invariants hold on load.
    nodes[index].counts = {nodes[left].counts[0] + nodes[right].counts[0],
                           nodes[left].counts[1] + nodes[right].counts[1]};
    const double total =
        static_cast<double>(nodes[index].counts[0] + nodes[index].counts[1]);
    if (total > 0)
        nodes[index].freqs = {static_cast<double>(nodes[index].counts[0]) / total,
                              static_cast<double>(nodes[index].counts[1]) / total};
    nodes[index].predicted = nodes[index].freqs[0] >= nodes[index].freqs[1] ? 0 : 1;
    return index;
}

TrainedModel model_from_json_impl(const std::string& text);

} // namespace

TrainedModel model_from_json(const std::string& text) {
    try {
        return model_from_json_impl(text);
    } catch (const json::exception& e) {
        bad_model(e.what()); // wrong value types surface as parse errors
    }
}

namespace {

TrainedModel model_from_json_impl(const std::string& text) {
    const json j = json::parse(text);

    TrainedModel model;
    for (const json& var_json : expect(j, "schema")) {
        VariableSchema var;
        var.name = expect(var_json, "name").get<std::string>();
        const std::string kind = expect(var_json, "kind").get<std::string>();
        if (kind == "numeric") {
            var.kind = VariableKind::numeric;
        } else if (kind == "categorical") {
            var.kind = VariableKind::categorical;
            for (const auto& lvl : expect(var_json, "levels"))
                var.levels.push_back(lvl.get<std::string>());
            if (var.levels.empty()) bad_model("categorical variable with no levels");
        } else {
            bad_model("variable kind must be 'numeric' or 'categorical'");
        }
        model.schema.push_back(std::move(var));
    }

    const json& cls = expect(j, "class_spec");
    const json& labels = expect(cls, "labels");
    if (!labels.is_array() || labels.size() != 2) bad_model("class labels must be a pair");
    model.class_spec.column = expect(cls, "column").get<std::string>();
    model.class_spec.small_label = expect(cls, "small_label").get<std::string>();
    const std::string l0 = labels[0].get<std::string>();
    const std::string l1 = labels[1].get<std::string>();
    if (model.class_spec.small_label == l0) model.class_spec.large_label = l1;
    else if (model.class_spec.small_label == l1) model.class_spec.large_label = l0;
    else bad_model("small_label is not one of the class labels");

    const json& params = expect(j, "params");
    model.tree_params.alpha = expect(params, "alpha").get<double>();
    model.tree_params.min_split = expect(params, "min_split").get<std::size_t>();
    model.tree_params.min_bucket = expect(params, "min_bucket").get<std::size_t>();
    model.tree_params.max_levels_for_split_search =
        expect(params, "max_levels_for_split_search").get<std::size_t>();
    model.res_params.fraction = expect(params, "fraction").get<double>();
    model.res_params.reps = expect(params, "reps").get<std::size_t>();
    model.res_params.master_seed = expect(params, "seed").get<std::uint64_t>();
    model.tree_params.validate();
    model.res_params.validate();

    for (const json& tree_json : expect(j, "trees")) {
        TreeRecord rec;
        rec.rep_index = expect(tree_json, "rep").get<std::size_t>();
        rec.balanced_accuracy = expect(tree_json, "balanced_accuracy").get<double>();
        rec.interpretable = expect(tree_json, "interpretable").get<bool>();
        std::vector<TreeNode> nodes;
        node_from_json(expect(tree_json, "root"), model, nodes);
        rec.tree = Tree(std::move(nodes));
        rec.violations = 0;
        model.records.push_back(std::move(rec));
    }
    if (model.records.empty()) bad_model("no trees");
    model.complete = model.records.size() == model.res_params.reps;
    return model;
}

} // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model));
}

TrainedModel load_model(const std::string& path) {
    return model_from_json(read_text_file(path));
}

} // namespace prindt
