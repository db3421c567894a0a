#include "core/resample.hpp"

#include "core/error.hpp"
#include "core/evaluate.hpp"
#include "core/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace prindt {

void ResampleParams::validate() const {
    if (!(fraction > 0.0 && fraction <= 1.0))
        fail(ErrorCode::invalid_argument, "fraction must lie in (0,1]");
    if (reps < 1) fail(ErrorCode::invalid_argument, "reps must be >= 1");
}

RepetitionPlan undersample_plan(const Dataset& ds, const ResampleParams& params,
                                std::size_t rep_index) {
    params.validate();
    if (rep_index >= params.reps)
        fail(ErrorCode::invalid_argument, "rep_index " + std::to_string(rep_index) +
                                              " out of range for reps = " +
                                              std::to_string(params.reps));

    std::vector<std::size_t> small_rows, large_rows;
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        (ds.class_of(r) == 0 ? small_rows : large_rows).push_back(r);

    const auto sample_size = static_cast<std::size_t>(
        std::floor(params.fraction * static_cast<double>(large_rows.size()) + 0.5));
    if (sample_size == 0)
        fail(ErrorCode::invalid_argument,
             "fraction " + std::to_string(params.fraction) + " samples zero rows from " +
                 std::to_string(large_rows.size()) + " large-class rows");

    Rng rng(repetition_seed(params.master_seed, rep_index));
    const auto picks = sample_without_replacement(large_rows.size(), sample_size, rng);

    std::vector<bool> sampled(large_rows.size(), false);
    for (const std::size_t p : picks) sampled[p] = true;

    RepetitionPlan plan;
    plan.rep_index = rep_index;
    plan.train_rows = small_rows;
    for (std::size_t i = 0; i < large_rows.size(); ++i)
        (sampled[i] ? plan.train_rows : plan.holdout_rows).push_back(large_rows[i]);
    std::sort(plan.train_rows.begin(), plan.train_rows.end());
    return plan;
}

namespace {

TreeRecord run_one(const Dataset& ds, const TreeParams& tree_params,
                   const ResampleParams& res_params, const std::vector<ExclusionRule>& rules,
                   std::size_t rep) {
    const RepetitionPlan plan = undersample_plan(ds, res_params, rep);
    TreeRecord record;
    record.rep_index = rep;
    record.tree = Tree::grow(ds, plan.train_rows, tree_params);
    record.balanced_accuracy = prindt_accuracy(record.tree, ds);
    const auto verdict = check_tree(record.tree, ds.schema(), rules);
    record.interpretable = verdict.interpretable;
    record.violations = verdict.violations.size();
    return record;
}

} // namespace

std::vector<TreeRecord> run_prindt(const Dataset& ds, const TreeParams& tree_params,
                                   const ResampleParams& res_params,
                                   const std::vector<ExclusionRule>& rules, unsigned threads) {
    tree_params.validate();
    res_params.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, res_params.reps));

    std::vector<TreeRecord> records(res_params.reps);

    // First failing repetition wins, by rep index, so errors are
    // deterministic too.
    std::mutex error_mutex;
    std::size_t error_rep = res_params.reps;
    std::exception_ptr error;

    const auto worker = [&](std::atomic<std::size_t>& next) {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= res_params.reps) return;
            try {
                records[rep] = run_one(ds, tree_params, res_params, rules, rep);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (rep < error_rep) {
                    error_rep = rep;
                    error = std::current_exception();
                }
            }
        }
    };

    std::atomic<std::size_t> next{0};
    if (threads <= 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { worker(next); });
        for (auto& t : pool) t.join();
    }

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const Error& e) {
            fail(e.code(), "repetition " + std::to_string(error_rep) + ": " + e.what());
        } catch (const std::exception& e) {
            fail(ErrorCode::internal, "repetition " + std::to_string(error_rep) + ": " + e.what());
        }
    }
    return records;
}

} // namespace prindt
