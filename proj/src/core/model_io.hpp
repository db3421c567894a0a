#pragma once

#include "core/dataset.hpp"
#include "core/ensemble.hpp"
#include "core/resample.hpp"
#include "core/tree.hpp"

#include <string>
#include <vector>

namespace prindt {

/// A finished training run: the schema and parameters it used plus the
/// per-repetition records. In memory a run holds every record; a model file
/// persists only the interpretable trees.
struct TrainedModel {
    std::vector<VariableSchema> schema;
    ClassSpec class_spec;
    TreeParams tree_params;
    ResampleParams res_params;
    std::vector<TreeRecord> records;
    // True when `records` covers every repetition of the run (fresh training);
    // false after loading a model file, which stores interpretable trees only.
    bool complete = true;
};

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

} // namespace prindt
