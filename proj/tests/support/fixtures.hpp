#pragma once

// Deterministic synthetic corpora shared by the unit and acceptance suites.
// All generators are pure functions of their arguments.

#include <cstdint>
#include <string>

namespace fixtures {

// 6146 rows, 528 "zero" / 5618 "realized", five predictors carrying no
// signal: ETH (6 levels), PRN (7 levels), SEX (2 levels), MLU (1/2/3/OL),
// AGE (numeric months).
std::string corpus_noise_csv(std::uint64_t seed);

// n rows with n_small of class "zero". Predictor X in {a, b} with
// P(X=a | zero) = 0.9 and P(X=a | realized) = 0.1; NOISE_CAT (3 levels) and
// NOISE_NUM carry nothing.
std::string planted_signal_csv(std::size_t n, std::size_t n_small, std::uint64_t seed);

// ETH in {E/a, E/m, S/C, S/I} with per-level small-class rates
// 0.7 / 0.3 / 0.5 / 0.3, so the best categorical split wobbles between the
// forbidden {E/a, S/C} grouping and cleaner ones across undersamples, plus a
// shifted numeric channel SIG. Class labels "zero"/"realized".
std::string eth_constraint_csv(std::size_t n, std::uint64_t seed);

// n_small + n_large rows with two noise predictors (C3 categorical, N
// numeric). Class labels "zero"/"realized".
std::string noise_csv(std::size_t n_small, std::size_t n_large, std::uint64_t seed);

// The excluded groupings of the running linguistic example.
std::string example_rules_text();

} // namespace fixtures
