#pragma once

#include "core/dataset.hpp"
#include "core/resample.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prindt {

/// Member selection over the records of a training run. Only interpretable
/// records are ever eligible.
struct EnsembleSelector {
    enum class Kind { top_k, all_interpretable, above_threshold };

    Kind kind = Kind::all_interpretable;
    std::size_t k = 0;
    // above_threshold: explicit cutoff, or (when absent) the median balanced
    // accuracy over ALL records, interpretable or not.
    std::optional<double> threshold;

    static EnsembleSelector top(std::size_t k);
    static EnsembleSelector all();
    static EnsembleSelector above(std::optional<double> threshold = std::nullopt);

    std::string describe() const;
};

struct Ensemble {
    std::vector<TreeRecord> members; // non-empty, all interpretable
    EnsembleSelector selector;
    double threshold_used = 0.0; // resolved cutoff for above_threshold
};

Ensemble build_ensemble(const std::vector<TreeRecord>& records, const EnsembleSelector& selector);

// Per-row majority vote of member predictions; exact tie -> small class.
ClassCode ensemble_predict(const Ensemble& e, const std::vector<Column>& columns,
                           std::size_t row);

// Balanced accuracy of the majority vote over every dataset row.
double ensemble_accuracy(const Ensemble& e, const Dataset& ds);

} // namespace prindt
