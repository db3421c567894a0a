#include "core/evaluate.hpp"

#include "core/error.hpp"

#include <algorithm>

namespace prindt {

namespace {

void check_coverage(std::span<const Prediction> preds, const Dataset& ds) {
    if (preds.empty()) fail(ErrorCode::degenerate, "accuracy is undefined for zero predictions");
    std::vector<bool> seen(ds.n_rows(), false);
    for (const Prediction& p : preds) {
        if (p.row >= ds.n_rows())
            fail(ErrorCode::invalid_argument, "prediction row index out of range");
        if (seen[p.row]) fail(ErrorCode::invalid_argument, "duplicate prediction row index");
        seen[p.row] = true;
    }
}

} // namespace

double overall_accuracy(std::span<const Prediction> preds, const Dataset& ds) {
    check_coverage(preds, ds);
    std::size_t correct = 0;
    for (const Prediction& p : preds) correct += p.predicted == ds.class_of(p.row);
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double balanced_accuracy(std::span<const Prediction> preds, const Dataset& ds) {
    check_coverage(preds, ds);
    std::size_t covered[2] = {0, 0};
    std::size_t correct[2] = {0, 0};
    for (const Prediction& p : preds) {
        const ClassCode truth = ds.class_of(p.row);
        ++covered[truth];
        correct[truth] += p.predicted == truth;
    }
    if (covered[0] == 0 || covered[1] == 0)
        fail(ErrorCode::degenerate, "balanced accuracy needs covered rows of both classes");
    const double acc_small = static_cast<double>(correct[0]) / static_cast<double>(covered[0]);
    const double acc_large = static_cast<double>(correct[1]) / static_cast<double>(covered[1]);
    return 0.5 * (acc_small + acc_large);
}

std::vector<Prediction> predict_all(const Tree& tree, const Dataset& ds) {
    std::vector<Prediction> preds;
    preds.reserve(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        preds.push_back(Prediction{r, tree.predict(ds.columns(), r).first});
    return preds;
}

double prindt_accuracy(const Tree& tree, const Dataset& ds) {
    return balanced_accuracy(predict_all(tree, ds), ds);
}

double median_lower(std::span<const double> values) {
    if (values.empty()) fail(ErrorCode::invalid_argument, "median of no values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted[(sorted.size() - 1) / 2];
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
    if (bins == 0) fail(ErrorCode::invalid_argument, "histogram needs at least one bin");
    if (values.empty()) fail(ErrorCode::invalid_argument, "histogram of no values");

    Histogram h;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    h.min = *mn;
    h.max = *mx;
    h.median = median_lower(values);

    const double width = (h.max - h.min) / static_cast<double>(bins);
    h.bins.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        h.bins[b].low = h.min + width * static_cast<double>(b);
        h.bins[b].high = b + 1 == bins ? h.max : h.min + width * static_cast<double>(b + 1);
        h.bins[b].count = 0;
    }
    for (const double v : values) {
        std::size_t b;
        if (v >= h.max) {
            b = bins - 1; // right-closed last bin; also handles zero range
        } else {
            b = static_cast<std::size_t>((v - h.min) / width);
            if (b >= bins) b = bins - 1;
            // Guard against landing one bin high/low from rounding.
            while (b > 0 && v < h.bins[b].low) --b;
            while (b + 1 < bins && v >= h.bins[b].high) ++b;
        }
        ++h.bins[b].count;
    }
    return h;
}

} // namespace prindt
