#pragma once

#include "core/constraints.hpp"
#include "core/dataset.hpp"
#include "core/tree.hpp"

#include <cstdint>
#include <vector>

namespace prindt {

struct ResampleParams {
    double fraction = 0.09;    // share of the large class sampled per repetition
    std::size_t reps = 1001;   // B
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// One undersampling repetition: all small-class rows plus a random sample of
/// the large class for training; the unsampled large-class rows are the
/// hold-out. Row index lists are ascending.
struct RepetitionPlan {
    std::size_t rep_index = 0;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> holdout_rows;
};

// Samples round-half-up(fraction * N_large) large-class rows without
// replacement, seeded by repetition_seed(master_seed, rep_index) so plans are
// reproducible and independent of execution order.
RepetitionPlan undersample_plan(const Dataset& ds, const ResampleParams& params,
                                std::size_t rep_index);

struct TreeRecord {
    std::size_t rep_index = 0;
    Tree tree;
    double balanced_accuracy = 0.0;
    bool interpretable = true;
    std::size_t violations = 0;
};

// Full training loop: per repetition, plan -> grow -> score -> constraint
// check. Records come back ordered by rep_index regardless of thread count.
// threads == 0 picks the hardware concurrency.
std::vector<TreeRecord> run_prindt(const Dataset& ds, const TreeParams& tree_params,
                                   const ResampleParams& res_params,
                                   const std::vector<ExclusionRule>& rules,
                                   unsigned threads = 1);

} // namespace prindt
