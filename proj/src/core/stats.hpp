#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace prindt {

struct TestResult {
    double statistic = 0.0;
    std::optional<int> dof; // present for the contingency test only
    double p_value = 1.0;
};

// Upper-tail probability of the chi-square distribution with `dof` degrees of
// freedom, via the regularized incomplete gamma function Q(dof/2, x/2).
double chi_square_sf(double x, int dof);

// Pearson chi-square test of independence on an r x 2 table of counts.
// No continuity correction; dof = r - 1. Every row and both columns must
// have a positive total (drop empty levels before calling).
TestResult chi_square_test(const std::vector<std::array<std::int64_t, 2>>& table);

// Wilcoxon rank-sum with mid-ranks for ties and tie-corrected variance.
// statistic = |z|; two-sided p = 2 * Phi(-|z|). All values identical
// (zero variance) yields statistic 0, p = 1.
TestResult rank_sum_test(std::span<const double> values, std::span<const std::uint8_t> group);

// min(1, m * p).
double bonferroni(double p, int m);

} // namespace prindt
