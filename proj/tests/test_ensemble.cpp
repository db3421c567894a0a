#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/dataset.hpp"
#include "core/ensemble.hpp"
#include "core/error.hpp"
#include "core/evaluate.hpp"
#include "core/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace prindt;

namespace {

Dataset load(const std::string& text, const char* small = nullptr) {
    ClassRequest request;
    request.column = "CLS";
    if (small) request.small_label = small;
    return Dataset::from_csv_text(text, request);
}

Tree constant_tree(ClassCode label) {
    TreeNode leaf;
    leaf.counts = {label == 0 ? 5 : 1, label == 0 ? 1 : 5};
    leaf.freqs = {label == 0 ? 5.0 / 6 : 1.0 / 6, label == 0 ? 1.0 / 6 : 5.0 / 6};
    leaf.predicted = label;
    return Tree({leaf});
}

Tree threshold_tree(std::size_t variable, double threshold, ClassCode left_label) {
    TreeNode root, l, r;
    root.is_leaf = false;
    root.split.variable = variable;
    root.split.numeric = true;
    root.split.threshold = threshold;
    root.split.p_adjusted = 0.001;
    root.left = 1;
    root.right = 2;
    root.counts = {6, 6};
    root.freqs = {0.5, 0.5};
    l.predicted = left_label;
    l.counts = {3, 3};
    l.freqs = {0.5, 0.5};
    r.predicted = static_cast<ClassCode>(1 - left_label);
    r.counts = {3, 3};
    r.freqs = {0.5, 0.5};
    return Tree({root, l, r});
}

TreeRecord record(std::size_t rep, Tree tree, double ba, bool interpretable = true) {
    TreeRecord rec;
    rec.rep_index = rep;
    rec.tree = std::move(tree);
    rec.balanced_accuracy = ba;
    rec.interpretable = interpretable;
    rec.violations = interpretable ? 0 : 1;
    return rec;
}

// Five synthetic records with accuracies .6 .6 .7 .8 .9.
std::vector<TreeRecord> five_records() {
    std::vector<TreeRecord> records;
    const double ba[] = {0.6, 0.6, 0.7, 0.8, 0.9};
    for (std::size_t i = 0; i < 5; ++i) records.push_back(record(i, constant_tree(0), ba[i]));
    return records;
}

} // namespace

TEST_CASE("top_k keeps the best interpretable trees with rep-order ties") {
    auto records = five_records();
    records[4].interpretable = false; // best record drops out
    records.push_back(record(5, constant_tree(1), 0.8));

    const auto ensemble = build_ensemble(records, EnsembleSelector::top(3));
    REQUIRE(ensemble.members.size() == 3);
    CHECK(ensemble.members[0].balanced_accuracy == 0.8);
    CHECK(ensemble.members[0].rep_index == 3); // tie with rep 5 -> lower rep first
    CHECK(ensemble.members[1].rep_index == 5);
    CHECK(ensemble.members[2].balanced_accuracy == 0.7);
    for (const auto& m : ensemble.members) CHECK(m.interpretable);
}

TEST_CASE("all_interpretable keeps exactly the interpretable records") {
    auto records = five_records();
    records[1].interpretable = false;
    records[3].interpretable = false;
    const auto ensemble = build_ensemble(records, EnsembleSelector::all());
    REQUIRE(ensemble.members.size() == 3);
    for (const auto& m : ensemble.members) CHECK(m.interpretable);
    CHECK(ensemble.members[0].rep_index == 0);
    CHECK(ensemble.members[1].rep_index == 2);
    CHECK(ensemble.members[2].rep_index == 4);
}

TEST_CASE("above_threshold with the default all-records median") {
    const auto records = five_records();
    // median of {.6 .6 .7 .8 .9} = .7; strictly greater leaves two.
    const auto ensemble = build_ensemble(records, EnsembleSelector::above());
    CHECK(ensemble.threshold_used == 0.7);
    REQUIRE(ensemble.members.size() == 2);
    CHECK(ensemble.members[0].balanced_accuracy == 0.8);
    CHECK(ensemble.members[1].balanced_accuracy == 0.9);

    // The default median counts uninterpretable records too.
    auto mixed = five_records();
    mixed[0].interpretable = false;
    mixed[1].interpretable = false;
    const auto e2 = build_ensemble(mixed, EnsembleSelector::above());
    CHECK(e2.threshold_used == 0.7);
    CHECK(e2.members.size() == 2);
}

TEST_CASE("above_threshold is monotone in the cutoff") {
    const auto records = five_records();
    std::size_t prev = records.size();
    for (const double c : {0.0, 0.6, 0.65, 0.7, 0.8}) {
        const auto e = build_ensemble(records, EnsembleSelector::above(c));
        CHECK(e.members.size() <= prev);
        prev = e.members.size();
        for (const auto& m : e.members) CHECK(m.balanced_accuracy > c);
    }
    CHECK_THROWS_AS((void)build_ensemble(records, EnsembleSelector::above(0.9)), Error);
}

TEST_CASE("top_k with k beyond the pool equals all_interpretable") {
    auto records = five_records();
    records[2].interpretable = false;
    const auto top = build_ensemble(records, EnsembleSelector::top(1000));
    const auto all = build_ensemble(records, EnsembleSelector::all());
    REQUIRE(top.members.size() == all.members.size());
    // Same member set (orders differ: by accuracy vs by repetition).
    auto reps_of = [](const Ensemble& e) {
        std::vector<std::size_t> reps;
        for (const auto& m : e.members) reps.push_back(m.rep_index);
        std::sort(reps.begin(), reps.end());
        return reps;
    };
    CHECK(reps_of(top) == reps_of(all));
}

TEST_CASE("empty selections fail with the filter chain") {
    auto records = five_records();
    for (auto& rec : records) rec.interpretable = false;
    try {
        (void)build_ensemble(records, EnsembleSelector::all());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::empty_ensemble);
        CHECK(std::string(e.what()).find("0 interpretable") != std::string::npos);
    }
}

TEST_CASE("majority vote with ties to the small class") {
    const auto ds = load("CLS,X\ns,1\nl,2\n", "s");

    Ensemble three;
    three.members = {record(0, constant_tree(0), 0.6), record(1, constant_tree(1), 0.6),
                     record(2, constant_tree(0), 0.6)};
    CHECK(ensemble_predict(three, ds.columns(), 0) == 0);

    Ensemble tied;
    tied.members = {record(0, constant_tree(0), 0.6), record(1, constant_tree(1), 0.6)};
    CHECK(ensemble_predict(tied, ds.columns(), 0) == 0); // exact tie -> small

    Ensemble solo;
    solo.members = {record(0, constant_tree(1), 0.6)};
    CHECK(ensemble_predict(solo, ds.columns(), 0) == 1);
}

TEST_CASE("vote outcome ignores member order") {
    const auto ds = load("CLS,V\ns,1\ns,2\ns,3\nl,4\nl,5\nl,6\n", "s");
    Ensemble e;
    e.members = {record(0, threshold_tree(0, 2.5, 0), 0.6),
                 record(1, threshold_tree(0, 4.5, 0), 0.7),
                 record(2, constant_tree(1), 0.5)};
    std::vector<ClassCode> base;
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        base.push_back(ensemble_predict(e, ds.columns(), r));

    std::vector<std::size_t> perm = {2, 0, 1};
    Ensemble shuffled;
    for (const std::size_t i : perm) shuffled.members.push_back(e.members[i]);
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        CHECK(ensemble_predict(shuffled, ds.columns(), r) == base[r]);
}

TEST_CASE("unanimous ensembles score like their single tree") {
    const auto ds = load(fixtures::eth_constraint_csv(200, 37), "zero");
    std::vector<std::size_t> rows(ds.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    const auto tree = Tree::grow(ds, rows, TreeParams{});
    Ensemble e;
    e.members = {record(0, tree, 0.0), record(1, tree, 0.0), record(2, tree, 0.0)};
    CHECK(ensemble_accuracy(e, ds) == doctest::Approx(prindt_accuracy(tree, ds)).epsilon(1e-15));

    Ensemble majority;
    majority.members = {record(0, constant_tree(1), 0.5)};
    CHECK(ensemble_accuracy(majority, ds) == 0.5);
}

TEST_CASE("three depth-1 trees against a hand-tallied vote oracle") {
    const auto ds = load("CLS,V\ns,1\ns,2\ns,3\ns,4\nl,5\nl,6\nl,7\nl,8\nl,9\nl,10\nl,11\nl,12\n",
                         "s");
    Ensemble e;
    e.members = {record(0, threshold_tree(0, 4.5, 0), 0.6),
                 record(1, threshold_tree(0, 6.5, 0), 0.6),
                 record(2, threshold_tree(0, 2.5, 0), 0.6)};

    std::size_t correct[2] = {0, 0}, seen[2] = {0, 0};
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const double v = ds.column(0).values[r];
        std::vector<int> votes = {v <= 4.5 ? 0 : 1, v <= 6.5 ? 0 : 1, v <= 2.5 ? 0 : 1};
        const int expected = oracles::plurality_vote(votes);
        CHECK(ensemble_predict(e, ds.columns(), r) == expected);
        const ClassCode t = ds.class_of(r);
        ++seen[t];
        correct[t] += expected == t;
    }
    const double oracle_ba = 0.5 * (static_cast<double>(correct[0]) / seen[0] +
                                    static_cast<double>(correct[1]) / seen[1]);
    CHECK(ensemble_accuracy(e, ds) == doctest::Approx(oracle_ba).epsilon(1e-15));
}

TEST_CASE("random odd ensembles match brute-force plurality on every row") {
    Rng rng(2718);
    const auto ds = load(fixtures::eth_constraint_csv(50, 5), "zero");
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t size = 1 + 2 * rng.bounded(4); // 1, 3, 5, 7
        Ensemble e;
        for (std::size_t m = 0; m < size; ++m) {
            if (rng.bounded(2)) {
                e.members.push_back(record(m, constant_tree(static_cast<ClassCode>(rng.bounded(2))),
                                           0.5));
            } else {
                e.members.push_back(record(
                    m, threshold_tree(1, static_cast<double>(rng.bounded(1000)),
                                      static_cast<ClassCode>(rng.bounded(2))),
                    0.5));
            }
        }
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            std::vector<int> votes;
            for (const auto& m : e.members)
                votes.push_back(m.tree.predict(ds.columns(), r).first);
            CHECK(ensemble_predict(e, ds.columns(), r) == oracles::plurality_vote(votes));
        }
    }
}

TEST_CASE("selector validation") {
    const auto records = five_records();
    CHECK_THROWS_AS((void)build_ensemble(records, EnsembleSelector::top(0)), Error);
    CHECK_THROWS_AS((void)build_ensemble(records, EnsembleSelector::above(1.5)), Error);
    CHECK_THROWS_AS((void)build_ensemble({}, EnsembleSelector::all()), Error);
}
