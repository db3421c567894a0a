#include "prindt/prindt.h"

#include "core/constraints.hpp"
#include "core/csv.hpp"
#include "core/dataset.hpp"
#include "core/ensemble.hpp"
#include "core/error.hpp"
#include "core/evaluate.hpp"
#include "core/model_io.hpp"
#include "core/resample.hpp"
#include "core/tree.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace prindt;

struct prindt_dataset {
    Dataset ds;
};

struct prindt_rules {
    std::vector<ExclusionRule> rules;
};

struct prindt_model {
    TrainedModel model;
};

struct prindt_ensemble {
    Ensemble ensemble;
    std::vector<VariableSchema> schema;
    ClassSpec class_spec;
};

struct prindt_predictions {
    std::vector<std::string> labels;
};

namespace {

thread_local std::string g_last_error;

prindt_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::io: return PRINDT_ERR_IO;
    case ErrorCode::parse: return PRINDT_ERR_PARSE;
    case ErrorCode::invalid_argument: return PRINDT_ERR_INVALID_ARGUMENT;
    case ErrorCode::schema_mismatch: return PRINDT_ERR_SCHEMA_MISMATCH;
    case ErrorCode::degenerate: return PRINDT_ERR_DEGENERATE;
    case ErrorCode::empty_ensemble: return PRINDT_ERR_EMPTY_ENSEMBLE;
    case ErrorCode::internal: return PRINDT_ERR_INTERNAL;
    }
    return PRINDT_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::string> to_strings(const char* const* items, size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (!items[i]) fail(ErrorCode::invalid_argument, "null string in argument list");
        out.emplace_back(items[i]);
    }
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorCode::invalid_argument, what);
}

} // namespace

#define PRINDT_WRAP(...)                                                                  \
    try {                                                                                 \
        __VA_ARGS__;                                                                       \
        return PRINDT_OK;                                                                  \
    } catch (const Error& e) {                                                             \
        g_last_error = e.what();                                                           \
        return status_of(e.code());                                                        \
    } catch (const std::exception& e) {                                                    \
        g_last_error = e.what();                                                           \
        return PRINDT_ERR_INTERNAL;                                                        \
    }

extern "C" {

const char* prindt_last_error(void) { return g_last_error.c_str(); }

void prindt_string_free(char* s) { delete[] s; }

/* ---------------- datasets ---------------- */

prindt_status prindt_dataset_load(const char* csv_path, const char* class_column,
                                  const char* small_label, const char* const* categorical,
                                  size_t n_categorical, const char* const* numeric,
                                  size_t n_numeric, const char* const* predictors,
                                  size_t n_predictors, prindt_dataset** out) {
    PRINDT_WRAP({
        require(csv_path && class_column && out, "null required argument");
        ClassRequest request;
        request.column = class_column;
        if (small_label) request.small_label = small_label;
        KindOverrides overrides;
        if (n_categorical) overrides.categorical = to_strings(categorical, n_categorical);
        if (n_numeric) overrides.numeric = to_strings(numeric, n_numeric);
        Dataset ds = Dataset::load_csv(csv_path, request, overrides);
        if (predictors) ds = ds.select_predictors(to_strings(predictors, n_predictors));
        *out = new prindt_dataset{std::move(ds)};
    })
}

void prindt_dataset_free(prindt_dataset* ds) { delete ds; }

size_t prindt_dataset_n_rows(const prindt_dataset* ds) { return ds->ds.n_rows(); }

size_t prindt_dataset_n_predictors(const prindt_dataset* ds) { return ds->ds.schema().size(); }

void prindt_dataset_class_counts(const prindt_dataset* ds, size_t* small, size_t* large) {
    const auto [s, l] = ds->ds.class_counts();
    if (small) *small = s;
    if (large) *large = l;
}

const char* prindt_dataset_small_label(const prindt_dataset* ds) {
    return ds->ds.class_spec().small_label.c_str();
}

const char* prindt_dataset_large_label(const prindt_dataset* ds) {
    return ds->ds.class_spec().large_label.c_str();
}

/* ---------------- rules ---------------- */

prindt_status prindt_rules_load(const char* path, prindt_rules** out) {
    PRINDT_WRAP({
        require(path && out, "null required argument");
        *out = new prindt_rules{parse_rules_file(path)};
    })
}

prindt_status prindt_rules_parse(const char* text, prindt_rules** out) {
    PRINDT_WRAP({
        require(text && out, "null required argument");
        *out = new prindt_rules{parse_rules(text)};
    })
}

void prindt_rules_free(prindt_rules* rules) { delete rules; }

size_t prindt_rules_count(const prindt_rules* rules) { return rules->rules.size(); }

const char* prindt_rules_variable(const prindt_rules* rules, size_t index) {
    if (index >= rules->rules.size()) return nullptr;
    return rules->rules[index].variable.c_str();
}

prindt_status prindt_rules_describe(const prindt_rules* rules, size_t index, char** out) {
    PRINDT_WRAP({
        require(out != nullptr, "null output argument");
        require(index < rules->rules.size(), "rule index out of range");
        *out = dup_string(rules->rules[index].text());
    })
}

/* ---------------- training ---------------- */

void prindt_train_params_defaults(prindt_train_params* params) {
    params->fraction = 0.09;
    params->reps = 1001;
    params->seed = 0;
    params->alpha = 0.01;
    params->min_split = 20;
    params->min_bucket = 7;
    params->max_levels_for_split_search = 20;
    params->threads = 0;
}

prindt_status prindt_train(const prindt_dataset* ds, const prindt_rules* rules,
                           const prindt_train_params* params, prindt_model** out) {
    PRINDT_WRAP({
        require(ds && params && out, "null required argument");
        TreeParams tree_params;
        tree_params.alpha = params->alpha;
        tree_params.min_split = params->min_split;
        tree_params.min_bucket = params->min_bucket;
        tree_params.max_levels_for_split_search = params->max_levels_for_split_search;
        ResampleParams res_params;
        res_params.fraction = params->fraction;
        res_params.reps = params->reps;
        res_params.master_seed = params->seed;

        static const std::vector<ExclusionRule> no_rules;
        TrainedModel model;
        model.schema = ds->ds.schema();
        model.class_spec = ds->ds.class_spec();
        model.tree_params = tree_params;
        model.res_params = res_params;
        model.records = run_prindt(ds->ds, tree_params, res_params,
                                   rules ? rules->rules : no_rules, params->threads);
        model.complete = true;
        *out = new prindt_model{std::move(model)};
    })
}

/* ---------------- models ---------------- */

size_t prindt_model_n_records(const prindt_model* model) { return model->model.records.size(); }

prindt_status prindt_model_record_info(const prindt_model* model, size_t index,
                                       prindt_record_info* out) {
    PRINDT_WRAP({
        require(out != nullptr, "null output argument");
        require(index < model->model.records.size(), "record index out of range");
        const TreeRecord& rec = model->model.records[index];
        out->rep = rec.rep_index;
        out->balanced_accuracy = rec.balanced_accuracy;
        out->interpretable = rec.interpretable ? 1 : 0;
        out->violation_count = static_cast<uint32_t>(rec.violations);
        out->node_count = static_cast<uint32_t>(rec.tree.size());
        out->leaf_count = static_cast<uint32_t>(rec.tree.leaf_count());
    })
}

prindt_status prindt_model_tree_dot(const prindt_model* model, size_t index, char** out) {
    PRINDT_WRAP({
        require(out != nullptr, "null output argument");
        require(index < model->model.records.size(), "record index out of range");
        *out = dup_string(model->model.records[index].tree.to_dot(model->model.schema,
                                                                  model->model.class_spec));
    })
}

prindt_status prindt_model_accuracy_stats(const prindt_model* model, double* min, double* max,
                                          double* median) {
    PRINDT_WRAP({
        std::vector<double> ba;
        ba.reserve(model->model.records.size());
        for (const TreeRecord& rec : model->model.records) ba.push_back(rec.balanced_accuracy);
        const Histogram h = histogram(ba, 1);
        if (min) *min = h.min;
        if (max) *max = h.max;
        if (median) *median = h.median;
    })
}

prindt_status prindt_model_histogram(const prindt_model* model, size_t bins, double* lows,
                                     double* highs, uint64_t* counts) {
    PRINDT_WRAP({
        require(lows && highs && counts, "null output argument");
        std::vector<double> ba;
        ba.reserve(model->model.records.size());
        for (const TreeRecord& rec : model->model.records) ba.push_back(rec.balanced_accuracy);
        const Histogram h = histogram(ba, bins);
        for (size_t b = 0; b < bins; ++b) {
            lows[b] = h.bins[b].low;
            highs[b] = h.bins[b].high;
            counts[b] = h.bins[b].count;
        }
    })
}

prindt_status prindt_model_save(const prindt_model* model, const char* path) {
    PRINDT_WRAP({
        require(path != nullptr, "null path");
        save_model(model->model, path);
    })
}

prindt_status prindt_model_load(const char* path, prindt_model** out) {
    PRINDT_WRAP({
        require(path && out, "null required argument");
        *out = new prindt_model{load_model(path)};
    })
}

void prindt_model_free(prindt_model* model) { delete model; }

size_t prindt_model_n_variables(const prindt_model* model) { return model->model.schema.size(); }

const char* prindt_model_variable_name(const prindt_model* model, size_t index) {
    if (index >= model->model.schema.size()) return nullptr;
    return model->model.schema[index].name.c_str();
}

prindt_status prindt_model_check_tree(const prindt_model* model, size_t index,
                                      const prindt_rules* rules, int* interpretable,
                                      uint32_t* n_violations, char** details) {
    PRINDT_WRAP({
        require(rules != nullptr, "null rules");
        require(index < model->model.records.size(), "record index out of range");
        const auto verdict =
            check_tree(model->model.records[index].tree, model->model.schema, rules->rules);
        if (interpretable) *interpretable = verdict.interpretable ? 1 : 0;
        if (n_violations) *n_violations = static_cast<uint32_t>(verdict.violations.size());
        if (details) {
            std::string text;
            for (const Violation& v : verdict.violations) {
                const VariableSchema& var = model->model.schema[v.split.variable];
                text += "rule '" + rules->rules[v.rule_index].text() + "' matches split on " +
                        var.name + " with branches {";
                for (size_t i = 0; i < v.split.left_levels.size(); ++i) {
                    if (i) text += ", ";
                    text += var.levels[v.split.left_levels[i]];
                }
                text += "} | {";
                for (size_t i = 0; i < v.split.right_levels.size(); ++i) {
                    if (i) text += ", ";
                    text += var.levels[v.split.right_levels[i]];
                }
                text += "}\n";
            }
            *details = dup_string(text);
        }
    })
}

/* ---------------- ensembles ---------------- */

prindt_status prindt_ensemble_build(const prindt_model* model, prindt_selector_kind kind,
                                    double value, prindt_ensemble** out) {
    PRINDT_WRAP({
        require(model && out, "null required argument");
        EnsembleSelector selector;
        switch (kind) {
        case PRINDT_SELECT_TOP_K:
            require(value >= 1.0 && value <= 1e15 && value == std::floor(value),
                    "top_k selector needs an integer k >= 1");
            selector = EnsembleSelector::top(static_cast<size_t>(value));
            break;
        case PRINDT_SELECT_ALL_INTERPRETABLE:
            selector = EnsembleSelector::all();
            break;
        case PRINDT_SELECT_ABOVE_THRESHOLD:
            selector = EnsembleSelector::above(value);
            break;
        case PRINDT_SELECT_ABOVE_MEDIAN:
            selector = EnsembleSelector::above();
            break;
        default:
            fail(ErrorCode::invalid_argument, "unknown selector kind");
        }
        auto ensemble = build_ensemble(model->model.records, selector);
        *out = new prindt_ensemble{std::move(ensemble), model->model.schema,
                                   model->model.class_spec};
    })
}

void prindt_ensemble_free(prindt_ensemble* ensemble) { delete ensemble; }

size_t prindt_ensemble_size(const prindt_ensemble* ensemble) {
    return ensemble->ensemble.members.size();
}

prindt_status prindt_ensemble_member_rep(const prindt_ensemble* ensemble, size_t index,
                                         uint64_t* rep) {
    PRINDT_WRAP({
        require(rep != nullptr, "null output argument");
        require(index < ensemble->ensemble.members.size(), "member index out of range");
        *rep = ensemble->ensemble.members[index].rep_index;
    })
}

prindt_status prindt_ensemble_member_dot(const prindt_ensemble* ensemble, size_t index,
                                         char** out) {
    PRINDT_WRAP({
        require(out != nullptr, "null output argument");
        require(index < ensemble->ensemble.members.size(), "member index out of range");
        *out = dup_string(ensemble->ensemble.members[index].tree.to_dot(ensemble->schema,
                                                                        ensemble->class_spec));
    })
}

prindt_status prindt_ensemble_accuracy(const prindt_ensemble* ensemble, const prindt_dataset* ds,
                                       double* out) {
    PRINDT_WRAP({
        require(ds && out, "null required argument");
        if (ds->ds.schema() != ensemble->schema)
            fail(ErrorCode::schema_mismatch,
                 "dataset schema differs from the schema the model was trained on");
        if (ds->ds.class_spec() != ensemble->class_spec)
            fail(ErrorCode::schema_mismatch,
                 "dataset class labels differ from the model's class labels");
        *out = ensemble_accuracy(ensemble->ensemble, ds->ds);
    })
}

prindt_status prindt_ensemble_predict_file(const prindt_ensemble* ensemble, const char* csv_path,
                                           prindt_predictions** out) {
    PRINDT_WRAP({
        require(csv_path && out, "null required argument");
        const Frame frame = load_frame_csv(csv_path, ensemble->schema);
        auto preds = new prindt_predictions;
        preds->labels.reserve(frame.n_rows);
        for (size_t r = 0; r < frame.n_rows; ++r) {
            const ClassCode c = ensemble_predict(ensemble->ensemble, frame.columns, r);
            preds->labels.push_back(c == 0 ? ensemble->class_spec.small_label
                                           : ensemble->class_spec.large_label);
        }
        *out = preds;
    })
}

size_t prindt_predictions_count(const prindt_predictions* preds) { return preds->labels.size(); }

const char* prindt_predictions_label(const prindt_predictions* preds, size_t row) {
    if (row >= preds->labels.size()) return nullptr;
    return preds->labels[row].c_str();
}

void prindt_predictions_free(prindt_predictions* preds) { delete preds; }

} // extern "C"
