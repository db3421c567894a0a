// Batch front end for the prindt library. Talks to the core exclusively
// through the C API in prindt/prindt.h.

#include <prindt/prindt.h>

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Failure {
    std::string message;
};

[[noreturn]] void die(const std::string& message) { throw Failure{message}; }

void check(prindt_status status) {
    if (status != PRINDT_OK) die(prindt_last_error());
}

// Shortest decimal form that parses back to the same double.
std::string fmt(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string item =
            comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<const char*> c_ptrs(const std::vector<std::string>& items) {
    std::vector<const char*> out;
    out.reserve(items.size());
    for (const auto& s : items) out.push_back(s.c_str());
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) die("cannot write " + path.string());
    out << contents;
    if (!out) die("error writing " + path.string());
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    prindt_string_free(s);
    return out;
}

struct DatasetDeleter {
    void operator()(prindt_dataset* p) const { prindt_dataset_free(p); }
};
struct RulesDeleter {
    void operator()(prindt_rules* p) const { prindt_rules_free(p); }
};
struct ModelDeleter {
    void operator()(prindt_model* p) const { prindt_model_free(p); }
};
struct EnsembleDeleter {
    void operator()(prindt_ensemble* p) const { prindt_ensemble_free(p); }
};
struct PredictionsDeleter {
    void operator()(prindt_predictions* p) const { prindt_predictions_free(p); }
};

using DatasetPtr = std::unique_ptr<prindt_dataset, DatasetDeleter>;
using RulesPtr = std::unique_ptr<prindt_rules, RulesDeleter>;
using ModelPtr = std::unique_ptr<prindt_model, ModelDeleter>;
using EnsemblePtr = std::unique_ptr<prindt_ensemble, EnsembleDeleter>;
using PredictionsPtr = std::unique_ptr<prindt_predictions, PredictionsDeleter>;

struct TrainOptions {
    std::string data;
    std::string class_col;
    std::string small_class;
    std::string predictors;
    std::string categorical;
    std::string numeric;
    std::string constraints;
    std::string out_dir;
    double fraction = 0.09;
    std::uint64_t reps = 1001;
    double alpha = 0.01;
    std::uint32_t min_split = 20;
    std::uint32_t min_bucket = 7;
    std::uint32_t max_levels = 20;
    std::uint64_t seed = 0;
    std::uint32_t threads = 0;
    std::size_t bins = 20;
};

DatasetPtr open_dataset(const TrainOptions& opt) {
    const auto cats = split_commas(opt.categorical);
    const auto nums = split_commas(opt.numeric);
    const auto preds = split_commas(opt.predictors);
    const auto cat_ptrs = c_ptrs(cats);
    const auto num_ptrs = c_ptrs(nums);
    const auto pred_ptrs = c_ptrs(preds);
    prindt_dataset* ds = nullptr;
    check(prindt_dataset_load(opt.data.c_str(), opt.class_col.c_str(),
                              opt.small_class.empty() ? nullptr : opt.small_class.c_str(),
                              cat_ptrs.empty() ? nullptr : cat_ptrs.data(), cat_ptrs.size(),
                              num_ptrs.empty() ? nullptr : num_ptrs.data(), num_ptrs.size(),
                              pred_ptrs.empty() ? nullptr : pred_ptrs.data(), pred_ptrs.size(),
                              &ds));
    return DatasetPtr(ds);
}

EnsemblePtr build(const prindt_model* model, prindt_selector_kind kind, double value) {
    prindt_ensemble* e = nullptr;
    check(prindt_ensemble_build(model, kind, value, &e));
    return EnsemblePtr(e);
}

int cmd_train(const TrainOptions& opt) {
    // Load and validate every input before producing any output.
    DatasetPtr ds = open_dataset(opt);

    RulesPtr rules;
    if (!opt.constraints.empty()) {
        prindt_rules* r = nullptr;
        check(prindt_rules_load(opt.constraints.c_str(), &r));
        rules.reset(r);
    }

    prindt_train_params params;
    prindt_train_params_defaults(&params);
    params.fraction = opt.fraction;
    params.reps = opt.reps;
    params.seed = opt.seed;
    params.alpha = opt.alpha;
    params.min_split = opt.min_split;
    params.min_bucket = opt.min_bucket;
    params.max_levels_for_split_search = opt.max_levels;
    params.threads = opt.threads;

    prindt_model* model_raw = nullptr;
    check(prindt_train(ds.get(), rules.get(), &params, &model_raw));
    ModelPtr model(model_raw);

    const std::size_t n_records = prindt_model_n_records(model.get());

    std::string records_csv = "rep,balanced_accuracy,interpretable,n_nodes,n_leaves\n";
    std::size_t interpretable_count = 0;
    for (std::size_t i = 0; i < n_records; ++i) {
        prindt_record_info info;
        check(prindt_model_record_info(model.get(), i, &info));
        interpretable_count += info.interpretable != 0;
        records_csv += std::to_string(info.rep) + "," + fmt(info.balanced_accuracy) + "," +
                       (info.interpretable ? "true" : "false") + "," +
                       std::to_string(info.node_count) + "," + std::to_string(info.leaf_count) +
                       "\n";
    }

    EnsemblePtr ens_a = build(model.get(), PRINDT_SELECT_TOP_K, 3.0);
    EnsemblePtr ens_b = build(model.get(), PRINDT_SELECT_ALL_INTERPRETABLE, 0.0);
    EnsemblePtr ens_c = build(model.get(), PRINDT_SELECT_ABOVE_MEDIAN, 0.0);

    std::string ensembles_csv = "selector,n_trees,balanced_accuracy\n";
    const prindt_ensemble* ensembles[3] = {ens_a.get(), ens_b.get(), ens_c.get()};
    const char* names[3] = {"a", "b", "c"};
    for (int i = 0; i < 3; ++i) {
        double accuracy = 0.0;
        check(prindt_ensemble_accuracy(ensembles[i], ds.get(), &accuracy));
        ensembles_csv += std::string(names[i]) + "," +
                         std::to_string(prindt_ensemble_size(ensembles[i])) + "," +
                         fmt(accuracy) + "\n";
    }

    std::vector<double> lows(opt.bins), highs(opt.bins);
    std::vector<std::uint64_t> counts(opt.bins);
    check(prindt_model_histogram(model.get(), opt.bins, lows.data(), highs.data(),
                                 counts.data()));
    double ba_min = 0.0, ba_max = 0.0, ba_median = 0.0;
    check(prindt_model_accuracy_stats(model.get(), &ba_min, &ba_max, &ba_median));

    std::string histogram_csv = "bin_low,bin_high,count\n";
    for (std::size_t b = 0; b < opt.bins; ++b)
        histogram_csv +=
            fmt(lows[b]) + "," + fmt(highs[b]) + "," + std::to_string(counts[b]) + "\n";
    histogram_csv +=
        "# min=" + fmt(ba_min) + " max=" + fmt(ba_max) + " median=" + fmt(ba_median) + "\n";

    std::string report = "reps: " + std::to_string(n_records) + "\n" +
                         "interpretable: " + std::to_string(interpretable_count) + "\n" +
                         "uninterpretable: " + std::to_string(n_records - interpretable_count) +
                         "\n" + "balanced_accuracy_min: " + fmt(ba_min) + "\n" +
                         "balanced_accuracy_max: " + fmt(ba_max) + "\n" +
                         "balanced_accuracy_median: " + fmt(ba_median) + "\n";

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path out(opt.out_dir);
    write_file(out / "records.csv", records_csv);
    write_file(out / "ensembles.csv", ensembles_csv);
    write_file(out / "histogram.csv", histogram_csv);
    write_file(out / "report.txt", report);
    check(prindt_model_save(model.get(), (out / "model.json").string().c_str()));
    for (std::size_t i = 0; i < prindt_ensemble_size(ens_a.get()); ++i) {
        char* dot = nullptr;
        check(prindt_ensemble_member_dot(ens_a.get(), i, &dot));
        write_file(out / ("tree_top" + std::to_string(i + 1) + ".dot"), take_string(dot));
    }
    return 0;
}

struct SelectorSpec {
    prindt_selector_kind kind;
    double value;
};

SelectorSpec parse_selector(const std::string& text) {
    if (text == "all") return {PRINDT_SELECT_ALL_INTERPRETABLE, 0.0};
    if (text.rfind("top:", 0) == 0) {
        const std::string arg = text.substr(4);
        std::size_t k = 0;
        const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), k);
        if (res.ec != std::errc() || res.ptr != arg.data() + arg.size() || k < 1)
            die("selector 'top:' needs a positive integer, got '" + arg + "'");
        return {PRINDT_SELECT_TOP_K, static_cast<double>(k)};
    }
    if (text.rfind("above:", 0) == 0) {
        const std::string arg = text.substr(6);
        if (arg == "median") return {PRINDT_SELECT_ABOVE_MEDIAN, 0.0};
        double c = 0.0;
        const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), c);
        if (res.ec != std::errc() || res.ptr != arg.data() + arg.size())
            die("selector 'above:' needs a number or 'median', got '" + arg + "'");
        return {PRINDT_SELECT_ABOVE_THRESHOLD, c};
    }
    die("unknown selector '" + text + "' (expected top:<k>, all, above:<c>, or above:median)");
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& selector_text, const std::string& out_path) {
    prindt_model* model_raw = nullptr;
    check(prindt_model_load(model_path.c_str(), &model_raw));
    ModelPtr model(model_raw);

    const SelectorSpec selector = parse_selector(selector_text);
    EnsemblePtr ensemble = build(model.get(), selector.kind, selector.value);

    prindt_predictions* preds_raw = nullptr;
    check(prindt_ensemble_predict_file(ensemble.get(), data_path.c_str(), &preds_raw));
    PredictionsPtr preds(preds_raw);

    std::string csv = "row,predicted_class\n";
    const std::size_t n = prindt_predictions_count(preds.get());
    for (std::size_t r = 0; r < n; ++r)
        csv += std::to_string(r) + "," + prindt_predictions_label(preds.get(), r) + "\n";
    write_file(out_path, csv);
    return 0;
}

int cmd_check(const std::string& model_path, const std::string& constraints_path) {
    prindt_model* model_raw = nullptr;
    check(prindt_model_load(model_path.c_str(), &model_raw));
    ModelPtr model(model_raw);

    prindt_rules* rules_raw = nullptr;
    check(prindt_rules_load(constraints_path.c_str(), &rules_raw));
    RulesPtr rules(rules_raw);

    // Rules naming variables outside the schema can never match; say so.
    const std::size_t n_vars = prindt_model_n_variables(model.get());
    for (std::size_t i = 0; i < prindt_rules_count(rules.get()); ++i) {
        const std::string var = prindt_rules_variable(rules.get(), i);
        bool known = false;
        for (std::size_t v = 0; v < n_vars; ++v)
            known = known || var == prindt_model_variable_name(model.get(), v);
        if (!known)
            std::cerr << "warning: rule " << i + 1 << " references unknown variable '" << var
                      << "'\n";
    }

    std::size_t n_violating = 0;
    const std::size_t n_records = prindt_model_n_records(model.get());
    for (std::size_t i = 0; i < n_records; ++i) {
        prindt_record_info info;
        check(prindt_model_record_info(model.get(), i, &info));
        int interpretable = 0;
        std::uint32_t n_violations = 0;
        char* details = nullptr;
        check(prindt_model_check_tree(model.get(), i, rules.get(), &interpretable, &n_violations,
                                      &details));
        std::cout << "tree " << i << " (rep " << info.rep << "): "
                  << (interpretable ? "interpretable"
                                    : std::to_string(n_violations) + " violation(s)")
                  << "\n";
        const std::string text = take_string(details);
        if (!text.empty()) {
            std::size_t start = 0;
            while (start < text.size()) {
                const std::size_t nl = text.find('\n', start);
                std::cout << "  " << text.substr(start, nl - start) << "\n";
                if (nl == std::string::npos) break;
                start = nl + 1;
            }
        }
        n_violating += interpretable ? 0 : 1;
    }
    std::cout << n_records - n_violating << " of " << n_records << " trees interpretable\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PrInDT: interpretable conditional inference trees for unbalanced two-class "
                 "data via repeated undersampling"};
    app.require_subcommand(1);

    TrainOptions train;
    CLI::App* train_cmd =
        app.add_subcommand("train", "run the undersampling loop and write all outputs");
    train_cmd->add_option("--data", train.data, "training CSV")->required();
    train_cmd->add_option("--class-col", train.class_col, "name of the class column")->required();
    train_cmd->add_option("--small-class", train.small_class,
                          "label of the smaller class (required on exact count ties)");
    train_cmd->add_option("--predictors", train.predictors,
                          "comma list of predictor columns (default: all non-class columns)");
    train_cmd->add_option("--categorical", train.categorical,
                          "comma list of columns to force categorical");
    train_cmd->add_option("--numeric", train.numeric, "comma list of columns to force numeric");
    train_cmd->add_option("--fraction", train.fraction,
                          "share of the large class sampled per repetition")
        ->capture_default_str();
    train_cmd->add_option("--reps", train.reps, "number of undersampling repetitions")
        ->capture_default_str();
    train_cmd->add_option("--alpha", train.alpha, "significance limit for splits")
        ->capture_default_str();
    train_cmd->add_option("--min-split", train.min_split, "minimum node size to try a split")
        ->capture_default_str();
    train_cmd->add_option("--min-bucket", train.min_bucket, "minimum child node size")
        ->capture_default_str();
    train_cmd->add_option("--max-levels", train.max_levels,
                          "categorical cardinality cap for split search")
        ->capture_default_str();
    train_cmd->add_option("--constraints", train.constraints, "interpretability rule file");
    train_cmd->add_option("--seed", train.seed, "master seed for undersampling")->required();
    train_cmd->add_option("--out", train.out_dir, "output directory")->required();
    train_cmd->add_option("--threads", train.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    train_cmd->add_option("--bins", train.bins, "histogram bin count")->capture_default_str();

    std::string model_path, data_path, selector = "all", out_path;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "predict new data with a stored ensemble");
    predict_cmd->add_option("--model", model_path, "model.json from train")->required();
    predict_cmd->add_option("--data", data_path, "CSV to predict")->required();
    predict_cmd->add_option("--selector", selector,
                            "ensemble selector: top:<k>, all, above:<c>, above:median")
        ->capture_default_str();
    predict_cmd->add_option("--out", out_path, "output predictions CSV")->required();

    std::string check_model, check_constraints;
    CLI::App* check_cmd =
        app.add_subcommand("check", "re-audit stored trees against a rule file");
    check_cmd->add_option("--model", check_model, "model.json from train")->required();
    check_cmd->add_option("--constraints", check_constraints, "interpretability rule file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed()) return cmd_train(train);
        if (predict_cmd->parsed()) return cmd_predict(model_path, data_path, selector, out_path);
        if (check_cmd->parsed()) return cmd_check(check_model, check_constraints);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
