#include "core/stats.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prindt {

namespace {

// Lower regularized incomplete gamma P(a, x) by series, for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction
// (modified Lentz), for x >= a + 1.
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double chi_square_sf(double x, int dof) {
    if (dof < 1) fail(ErrorCode::invalid_argument, "chi_square_sf: dof must be >= 1");
    if (!(x >= 0.0)) fail(ErrorCode::invalid_argument, "chi_square_sf: x must be >= 0");
    if (x == 0.0) return 1.0;
    const double a = 0.5 * dof;
    const double t = 0.5 * x;
    const double q = t < a + 1.0 ? 1.0 - gamma_p_series(a, t) : gamma_q_cf(a, t);
    return std::clamp(q, 0.0, 1.0);
}

TestResult chi_square_test(const std::vector<std::array<std::int64_t, 2>>& table) {
    const std::size_t r = table.size();
    if (r < 2) fail(ErrorCode::invalid_argument, "chi_square_test: need at least 2 rows");

    std::int64_t col0 = 0, col1 = 0;
    for (const auto& row : table) {
        if (row[0] < 0 || row[1] < 0)
            fail(ErrorCode::invalid_argument, "chi_square_test: negative count");
        if (row[0] + row[1] == 0)
            fail(ErrorCode::degenerate, "chi_square_test: empty row margin");
        col0 += row[0];
        col1 += row[1];
    }
    if (col0 == 0 || col1 == 0)
        fail(ErrorCode::degenerate, "chi_square_test: empty column margin");

    const double n = static_cast<double>(col0 + col1);
    double stat = 0.0;
    for (const auto& row : table) {
        const double row_total = static_cast<double>(row[0] + row[1]);
        const double e0 = row_total * static_cast<double>(col0) / n;
        const double e1 = row_total * static_cast<double>(col1) / n;
        const double d0 = static_cast<double>(row[0]) - e0;
        const double d1 = static_cast<double>(row[1]) - e1;
        stat += d0 * d0 / e0 + d1 * d1 / e1;
    }
    const int dof = static_cast<int>(r) - 1;
    return TestResult{stat, dof, chi_square_sf(stat, dof)};
}

TestResult rank_sum_test(std::span<const double> values, std::span<const std::uint8_t> group) {
    const std::size_t n = values.size();
    if (group.size() != n)
        fail(ErrorCode::invalid_argument, "rank_sum_test: values/group size mismatch");
    std::size_t n1 = 0;
    for (const std::uint8_t g : group) n1 += g != 0;
    const std::size_t n2 = n - n1;
    if (n1 == 0 || n2 == 0)
        fail(ErrorCode::invalid_argument, "rank_sum_test: both groups must be non-empty");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // Mid-ranks plus the tie term sum(t^3 - t) over tie groups.
    std::vector<double> ranks(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }

    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (group[i] != 0) w += ranks[i];

    const double dn = static_cast<double>(n);
    const double mean = static_cast<double>(n1) * (dn + 1.0) / 2.0;
    const double variance = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                            ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (variance <= 0.0) return TestResult{0.0, std::nullopt, 1.0};

    const double z = std::abs(w - mean) / std::sqrt(variance);
    const double p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return TestResult{z, std::nullopt, p};
}

double bonferroni(double p, int m) {
    if (m < 1) fail(ErrorCode::invalid_argument, "bonferroni: m must be >= 1");
    if (p < 0.0 || p > 1.0) fail(ErrorCode::invalid_argument, "bonferroni: p must be in [0,1]");
    return std::min(1.0, static_cast<double>(m) * p);
}

} // namespace prindt
