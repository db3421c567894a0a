#include "core/ensemble.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/evaluate.hpp"

#include <algorithm>
#include <numeric>

namespace prindt {

EnsembleSelector EnsembleSelector::top(std::size_t k) {
    EnsembleSelector s;
    s.kind = Kind::top_k;
    s.k = k;
    return s;
}

EnsembleSelector EnsembleSelector::all() {
    EnsembleSelector s;
    s.kind = Kind::all_interpretable;
    return s;
}

EnsembleSelector EnsembleSelector::above(std::optional<double> threshold) {
    EnsembleSelector s;
    s.kind = Kind::above_threshold;
    s.threshold = threshold;
    return s;
}

std::string EnsembleSelector::describe() const {
    switch (kind) {
    case Kind::top_k: return "top_" + std::to_string(k);
    case Kind::all_interpretable: return "all_interpretable";
    case Kind::above_threshold:
        return threshold ? "above_" + format_double(*threshold) : "above_median";
    }
    return "?";
}

Ensemble build_ensemble(const std::vector<TreeRecord>& records,
                        const EnsembleSelector& selector) {
    if (records.empty()) fail(ErrorCode::invalid_argument, "build_ensemble: no records");
    if (selector.kind == EnsembleSelector::Kind::top_k && selector.k < 1)
        fail(ErrorCode::invalid_argument, "top_k selector needs k >= 1");
    if (selector.threshold && !(*selector.threshold >= 0.0 && *selector.threshold <= 1.0))
        fail(ErrorCode::invalid_argument, "selector threshold must lie in [0,1]");

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].interpretable) eligible.push_back(i);

    Ensemble out;
    out.selector = selector;

    switch (selector.kind) {
    case EnsembleSelector::Kind::top_k: {
        std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
            if (records[a].balanced_accuracy != records[b].balanced_accuracy)
                return records[a].balanced_accuracy > records[b].balanced_accuracy;
            return records[a].rep_index < records[b].rep_index;
        });
        if (eligible.size() > selector.k) eligible.resize(selector.k);
        break;
    }
    case EnsembleSelector::Kind::all_interpretable:
        break;
    case EnsembleSelector::Kind::above_threshold: {
        double cutoff;
        if (selector.threshold) {
            cutoff = *selector.threshold;
        } else {
            std::vector<double> all_ba;
            all_ba.reserve(records.size());
            for (const TreeRecord& rec : records) all_ba.push_back(rec.balanced_accuracy);
            cutoff = median_lower(all_ba);
        }
        out.threshold_used = cutoff;
        std::erase_if(eligible, [&](std::size_t i) {
            return !(records[i].balanced_accuracy > cutoff);
        });
        break;
    }
    }

    if (eligible.empty()) {
        std::string chain = std::to_string(records.size()) + " records -> " +
                            std::to_string(std::count_if(records.begin(), records.end(),
                                                         [](const TreeRecord& r) {
                                                             return r.interpretable;
                                                         })) +
                            " interpretable -> selector " + selector.describe();
        if (selector.kind == EnsembleSelector::Kind::above_threshold)
            chain += " (cutoff " + format_double(out.threshold_used) + ")";
        fail(ErrorCode::empty_ensemble, "empty ensemble: " + chain + " -> 0 members");
    }

    out.members.reserve(eligible.size());
    for (const std::size_t i : eligible) out.members.push_back(records[i]);
    return out;
}

ClassCode ensemble_predict(const Ensemble& e, const std::vector<Column>& columns,
                           std::size_t row) {
    std::size_t votes[2] = {0, 0};
    for (const TreeRecord& member : e.members)
        ++votes[member.tree.predict(columns, row).first];
    if (votes[0] == votes[1]) return 0;
    return votes[0] > votes[1] ? 0 : 1;
}

double ensemble_accuracy(const Ensemble& e, const Dataset& ds) {
    std::vector<Prediction> preds;
    preds.reserve(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        preds.push_back(Prediction{r, ensemble_predict(e, ds.columns(), r)});
    return balanced_accuracy(preds, ds);
}

} // namespace prindt
