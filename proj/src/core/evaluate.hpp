#pragma once

#include "core/dataset.hpp"
#include "core/tree.hpp"

#include <span>
#include <vector>

namespace prindt {

struct Prediction {
    std::size_t row;
    ClassCode predicted;
};

// Fraction of predictions matching the true class.
double overall_accuracy(std::span<const Prediction> preds, const Dataset& ds);

// Mean of the per-class accuracies. Requires at least one covered row of
// each class.
double balanced_accuracy(std::span<const Prediction> preds, const Dataset& ds);

// Balanced accuracy of the tree over every row of the dataset. When the tree
// was trained on all small-class rows plus a sample of the large class, this
// scores the small class as fit and the large class as fit plus hold-out.
double prindt_accuracy(const Tree& tree, const Dataset& ds);

std::vector<Prediction> predict_all(const Tree& tree, const Dataset& ds);

struct HistogramBin {
    double low;
    double high;
    std::size_t count;
};

struct Histogram {
    std::vector<HistogramBin> bins;
    double min = 0.0;
    double max = 0.0;
    double median = 0.0; // even n: lower of the two central order statistics
};

// Equal-width bins over [min, max]; the last bin is right-closed.
Histogram histogram(std::span<const double> values, std::size_t bins);

// Lower-middle median convention used throughout.
double median_lower(std::span<const double> values);

} // namespace prindt
