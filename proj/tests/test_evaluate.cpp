#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/evaluate.hpp"
#include "core/rng.hpp"
#include "core/tree.hpp"
#include "support/fixtures.hpp"

#include <numeric>

using namespace prindt;

namespace {

Dataset load(const std::string& text, const char* small = nullptr,
             const char* class_col = "CLS") {
    ClassRequest request;
    request.column = class_col;
    if (small) request.small_label = small;
    return Dataset::from_csv_text(text, request);
}

std::vector<Prediction> constant_predictions(const Dataset& ds, ClassCode label) {
    std::vector<Prediction> preds;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) preds.push_back({r, label});
    return preds;
}

std::vector<Prediction> truth(const Dataset& ds) {
    std::vector<Prediction> preds;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) preds.push_back({r, ds.class_of(r)});
    return preds;
}

} // namespace

TEST_CASE("overall accuracy of the majority predictor mirrors the imbalance") {
    const auto ds = load(fixtures::corpus_noise_csv(7), "zero", "PRN01");
    const auto majority = constant_predictions(ds, 1);
    CHECK(overall_accuracy(majority, ds) == doctest::Approx(5618.0 / 6146.0).epsilon(1e-15));
    CHECK(overall_accuracy(truth(ds), ds) == 1.0);

    auto wrong = truth(ds);
    for (auto& p : wrong) p.predicted = static_cast<ClassCode>(1 - p.predicted);
    CHECK(overall_accuracy(wrong, ds) == 0.0);

    CHECK_THROWS_AS((void)overall_accuracy({}, ds), Error);
}

TEST_CASE("balanced accuracy of the majority predictor is one half") {
    const auto ds = load(fixtures::corpus_noise_csv(7), "zero", "PRN01");
    CHECK(balanced_accuracy(constant_predictions(ds, 1), ds) == 0.5);
    CHECK(balanced_accuracy(truth(ds), ds) == 1.0);
}

TEST_CASE("balanced accuracy averages per-class accuracies") {
    // 4 small + 8 large; predictor right on exactly half of each class.
    const auto ds = load("CLS,X\ns,1\ns,2\ns,3\ns,4\nl,1\nl,2\nl,3\nl,4\nl,5\nl,6\nl,7\nl,8\n");
    std::vector<Prediction> preds;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const ClassCode t = ds.class_of(r);
        preds.push_back({r, (r % 2 == 0) ? t : static_cast<ClassCode>(1 - t)});
    }
    // Unequal per-class split of hits would break this; rebuild exactly.
    std::size_t hit[2] = {0, 0}, seen[2] = {0, 0};
    for (auto& p : preds) {
        const ClassCode t = ds.class_of(p.row);
        ++seen[t];
        p.predicted = (hit[t] * 2 < seen[t]) ? t : static_cast<ClassCode>(1 - t);
        hit[t] += p.predicted == t;
    }
    CHECK(balanced_accuracy(preds, ds) == 0.5);
}

TEST_CASE("balanced accuracy needs coverage of both classes") {
    const auto ds = load("CLS,X\ns,1\nl,2\nl,3\n");
    const std::vector<Prediction> only_large = {{1, 1}, {2, 1}};
    CHECK_THROWS_AS((void)balanced_accuracy(only_large, ds), Error);
    CHECK_THROWS_AS((void)overall_accuracy(std::vector<Prediction>{{1, 1}, {1, 1}}, ds), Error);
}

TEST_CASE("duplicating large-class rows moves overall but not balanced accuracy") {
    // Tree predicts small for X <= 2: small accuracy 2/3, large 3/4.
    const std::string base = "CLS,X\ns,1\ns,2\ns,5\nl,1\nl,3\nl,4\nl,6\n";
    TreeNode root, l, r;
    root.is_leaf = false;
    root.split.variable = 0;
    root.split.numeric = true;
    root.split.threshold = 2.5;
    root.left = 1;
    root.right = 2;
    l.predicted = 0;
    l.counts = {2, 1};
    l.freqs = {2.0 / 3, 1.0 / 3};
    r.predicted = 1;
    r.counts = {1, 3};
    r.freqs = {0.25, 0.75};
    const Tree tree({root, l, r});

    const auto ds = load(base, "s");
    std::string doubled = base;
    for (const char* row : {"l,1\n", "l,3\n", "l,4\n", "l,6\n"}) doubled += row;
    const auto ds2 = load(doubled, "s");

    const double ba1 = prindt_accuracy(tree, ds);
    const double ba2 = prindt_accuracy(tree, ds2);
    CHECK(ba1 == doctest::Approx((2.0 / 3 + 3.0 / 4) / 2).epsilon(1e-15));
    CHECK(ba1 == doctest::Approx(ba2).epsilon(1e-12));

    const double oa1 = overall_accuracy(predict_all(tree, ds), ds);
    const double oa2 = overall_accuracy(predict_all(tree, ds2), ds2);
    CHECK(oa1 != doctest::Approx(oa2).epsilon(1e-9));
}

TEST_CASE("overall equals balanced under equal class counts with full coverage") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::string csv = "CLS,X\n";
        for (int i = 0; i < 12; ++i)
            csv += std::string(i % 2 ? "s" : "l") + "," + std::to_string(i) + "\n";
        const auto ds = load(csv, "s");
        std::vector<Prediction> preds;
        for (std::size_t r = 0; r < ds.n_rows(); ++r)
            preds.push_back({r, static_cast<ClassCode>(rng.bounded(2))});
        CHECK(overall_accuracy(preds, ds) ==
              doctest::Approx(balanced_accuracy(preds, ds)).epsilon(1e-15));
    }
}

TEST_CASE("prindt accuracy is the full-dataset balanced accuracy") {
    const auto ds = load(fixtures::noise_csv(20, 60, 13), "zero");
    std::vector<std::size_t> rows(ds.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    const auto tree = Tree::grow(ds, rows, TreeParams{});
    CHECK(prindt_accuracy(tree, ds) == 0.5); // root-only majority tree

    // Hand-scored depth-1 fixture: routing every row through the rule.
    const auto planted = load("CLS,V\ns,1\ns,2\ns,3\ns,9\nl,1\nl,4\nl,5\nl,6\nl,7\nl,8\n", "s");
    TreeNode root, l, r;
    root.is_leaf = false;
    root.split.variable = 0;
    root.split.numeric = true;
    root.split.threshold = 3.5;
    root.left = 1;
    root.right = 2;
    l.predicted = 0;
    l.counts = {3, 1};
    l.freqs = {0.75, 0.25};
    r.predicted = 1;
    r.counts = {1, 5};
    r.freqs = {1.0 / 6, 5.0 / 6};
    const Tree manual({root, l, r});
    // small: rows 1,2,3 left (correct), 9 right (wrong) -> 3/4
    // large: 1 left (wrong), 4..8 right (correct) -> 5/6
    CHECK(prindt_accuracy(manual, planted) ==
          doctest::Approx((3.0 / 4 + 5.0 / 6) / 2).epsilon(1e-15));

    // A perfectly separating tree scores 1.
    const auto separable = load("CLS,V\ns,1\ns,2\nl,5\nl,6\nl,7\n", "s");
    TreeNode proot = root, pl = l, pr = r;
    proot.split.threshold = 3.0;
    const Tree perfect({proot, pl, pr});
    CHECK(prindt_accuracy(perfect, separable) == 1.0);
}

TEST_CASE("histogram bins, stats, and edge cases") {
    const std::vector<double> values = {0.6755, 0.68, 0.69, 0.6904, 0.70, 0.7021};
    const auto h = histogram(values, 4);
    CHECK(h.min == 0.6755);
    CHECK(h.max == 0.7021);
    CHECK(h.bins.size() == 4);
    std::size_t total = 0;
    for (const auto& bin : h.bins) total += bin.count;
    CHECK(total == values.size());
    CHECK(h.bins.front().low == 0.6755);
    CHECK(h.bins.back().high == 0.7021);
    // Even count: median is the lower of the two central order statistics.
    CHECK(h.median == 0.69);

    const auto constant = histogram(std::vector<double>{0.5, 0.5, 0.5}, 5);
    std::size_t occupied = 0;
    for (const auto& bin : constant.bins) occupied += bin.count > 0;
    CHECK(occupied == 1);

    CHECK(histogram(std::vector<double>{0.1, 0.2, 0.3}, 1).median == 0.2);
    CHECK(median_lower(std::vector<double>{0.1, 0.2, 0.3, 0.4}) == 0.2);

    CHECK_THROWS_AS((void)histogram(values, 0), Error);
    CHECK_THROWS_AS((void)histogram(std::vector<double>{}, 3), Error);
}

TEST_CASE("histogram counts sum to the number of values on random inputs") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.bounded(200);
        std::vector<double> values(n);
        for (auto& v : values) v = static_cast<double>(rng.bounded(1000)) / 999.0;
        const auto h = histogram(values, 1 + rng.bounded(12));
        std::size_t total = 0;
        for (const auto& bin : h.bins) total += bin.count;
        CHECK(total == n);
        CHECK(h.min <= h.median);
        CHECK(h.median <= h.max);
    }
}
