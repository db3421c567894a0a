#include "support/fixtures.hpp"

#include "core/rng.hpp"

#include <vector>

namespace fixtures {

using prindt::Rng;

namespace {

// n_small zeros then n_large ones, shuffled.
std::vector<int> shuffled_classes(std::size_t n_small, std::size_t n_large, Rng& rng) {
    std::vector<int> cls(n_small + n_large, 1);
    for (std::size_t i = 0; i < n_small; ++i) cls[i] = 0;
    for (std::size_t i = cls.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(cls[i - 1], cls[j]);
    }
    return cls;
}

const char* class_name(int c) { return c == 0 ? "zero" : "realized"; }

} // namespace

std::string corpus_noise_csv(std::uint64_t seed) {
    Rng rng(seed);
    const auto cls = shuffled_classes(528, 5618, rng);

    static const char* eth[] = {"E/a", "E/m", "E/migr", "S/C", "S/I", "S/m"};
    static const char* prn[] = {"he", "I", "it", "she", "they", "we", "you"};
    static const char* mlu[] = {"1", "2", "3", "OL"};

    std::string csv = "PRN01,ETH,PRN,SEX,MLU,AGE\n";
    for (std::size_t r = 0; r < cls.size(); ++r) {
        csv += class_name(cls[r]);
        csv += ",";
        csv += eth[rng.bounded(6)];
        csv += ",";
        csv += prn[rng.bounded(7)];
        csv += ",";
        csv += rng.bounded(2) ? "m" : "f";
        csv += ",";
        csv += mlu[rng.bounded(4)];
        csv += ",";
        csv += std::to_string(20 + rng.bounded(80)); // months
        csv += "\n";
    }
    return csv;
}

std::string planted_signal_csv(std::size_t n, std::size_t n_small, std::uint64_t seed) {
    Rng rng(seed);
    const auto cls = shuffled_classes(n_small, n - n_small, rng);

    static const char* noise_cat[] = {"u", "v", "w"};

    std::string csv = "CLS,X,NOISE_CAT,NOISE_NUM\n";
    for (std::size_t r = 0; r < n; ++r) {
        const bool a_side = rng.bounded(10) < (cls[r] == 0 ? 9u : 1u);
        csv += class_name(cls[r]);
        csv += ",";
        csv += a_side ? "a" : "b";
        csv += ",";
        csv += noise_cat[rng.bounded(3)];
        csv += ",";
        csv += std::to_string(rng.bounded(1000));
        csv += "\n";
    }
    return csv;
}

std::string eth_constraint_csv(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);

    static const char* eth[] = {"E/a", "E/m", "S/C", "S/I"};
    // Small-class rate per level, in tenths.
    static const unsigned rate[] = {7, 3, 5, 3};

    std::vector<int> cls(n);
    std::vector<std::size_t> level(n);
    std::vector<std::uint64_t> base(n);
    std::size_t zeros = 0;
    for (std::size_t r = 0; r < n; ++r) {
        level[r] = rng.bounded(4);
        cls[r] = rng.bounded(10) < rate[level[r]] ? 0 : 1;
        base[r] = rng.bounded(1000);
        zeros += cls[r] == 0;
    }
    // Guarantee "zero" stays the strict minority even on small draws.
    for (std::size_t r = n; r-- > 0 && 2 * zeros >= n;) {
        if (cls[r] == 0) {
            cls[r] = 1;
            --zeros;
        }
    }

    std::string csv = "CLS,ETH,SIG\n";
    for (std::size_t r = 0; r < n; ++r) {
        csv += class_name(cls[r]);
        csv += ",";
        csv += eth[level[r]];
        csv += ",";
        // Shifted numeric channel so accuracies vary within both the
        // forbidden-split and clean-split tree shapes.
        csv += std::to_string(base[r] + (cls[r] == 0 ? 250 : 0));
        csv += "\n";
    }
    return csv;
}

std::string noise_csv(std::size_t n_small, std::size_t n_large, std::uint64_t seed) {
    Rng rng(seed);
    const auto cls = shuffled_classes(n_small, n_large, rng);

    static const char* c3[] = {"p", "q", "r"};

    std::string csv = "CLS,C3,N\n";
    for (std::size_t r = 0; r < cls.size(); ++r) {
        csv += class_name(cls[r]);
        csv += ",";
        csv += c3[rng.bounded(3)];
        csv += ",";
        csv += std::to_string(rng.bounded(1000));
        csv += "\n";
    }
    return csv;
}

std::string example_rules_text() {
    return "# excluded groupings\n"
           "ETH == {E/a, S/C}\n"
           "ETH == {E/a, E/m, S/C}\n"
           "ETH == {E/a, E/migr, S/C}\n"
           "ETH == {E/a, E/m, E/migr, S/C}\n"
           "ETH == {E/a, E/m, E/migr, S/C, S/I}\n"
           "ETH == {E/a, E/m, E/migr, S/C, S/m}\n"
           "ETH == {E/a, E/m, S/C, S/I}\n"
           "ETH == {E/a, E/migr, S/C, S/I}\n"
           "ETH == {E/a, S/C, S/I}\n"
           "MLU == {1, 3}\n";
}

} // namespace fixtures
