/*
 * prindt - conditional inference trees under repeated undersampling with
 * interpretability constraints and majority-vote ensembles.
 *
 * C API over the C++ core. All handles are opaque; every fallible call
 * returns a prindt_status and leaves a message for prindt_last_error().
 * Handles are not thread-safe individually, but distinct handles may be
 * used from distinct threads, and any handle may be shared for reads.
 */

#ifndef PRINDT_H
#define PRINDT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prindt_status {
    PRINDT_OK = 0,
    PRINDT_ERR_IO = 1,
    PRINDT_ERR_PARSE = 2,
    PRINDT_ERR_INVALID_ARGUMENT = 3,
    PRINDT_ERR_SCHEMA_MISMATCH = 4,
    PRINDT_ERR_DEGENERATE = 5,
    PRINDT_ERR_EMPTY_ENSEMBLE = 6,
    PRINDT_ERR_INTERNAL = 7
} prindt_status;

/* Message describing the most recent failure on this thread. */
const char* prindt_last_error(void);

/* Frees strings returned through char** out-parameters. */
void prindt_string_free(char* s);

typedef struct prindt_dataset prindt_dataset;
typedef struct prindt_rules prindt_rules;
typedef struct prindt_model prindt_model;
typedef struct prindt_ensemble prindt_ensemble;
typedef struct prindt_predictions prindt_predictions;

/* ------------------------------------------------------------------ */
/* Datasets                                                           */
/* ------------------------------------------------------------------ */

/*
 * Loads a CSV corpus (header row required, no missing cells). class_column
 * must hold exactly two labels; the label with the strictly smaller count
 * becomes the small class. small_label may be NULL (infer from counts;
 * a tie is then an error), or name the expected small class (required on
 * ties, validated otherwise). Column kinds are inferred (all-numeric cells
 * -> numeric) unless listed in the categorical/numeric override arrays.
 * predictors, when non-NULL, restricts the usable predictor columns.
 */
prindt_status prindt_dataset_load(const char* csv_path,
                                  const char* class_column,
                                  const char* small_label,
                                  const char* const* categorical, size_t n_categorical,
                                  const char* const* numeric, size_t n_numeric,
                                  const char* const* predictors, size_t n_predictors,
                                  prindt_dataset** out);

void prindt_dataset_free(prindt_dataset* ds);

size_t prindt_dataset_n_rows(const prindt_dataset* ds);
size_t prindt_dataset_n_predictors(const prindt_dataset* ds);
void prindt_dataset_class_counts(const prindt_dataset* ds, size_t* small, size_t* large);
const char* prindt_dataset_small_label(const prindt_dataset* ds);
const char* prindt_dataset_large_label(const prindt_dataset* ds);

/* ------------------------------------------------------------------ */
/* Interpretability rules                                             */
/* ------------------------------------------------------------------ */

/*
 * Rule files hold one rule per line ('#' starts a comment):
 *   VAR == {v1, v2, ...}         forbid a branch equal to the set
 *   VAR !together {v1, v2, ...}  forbid any branch containing all of them
 */
prindt_status prindt_rules_load(const char* path, prindt_rules** out);
prindt_status prindt_rules_parse(const char* text, prindt_rules** out);
void prindt_rules_free(prindt_rules* rules);

size_t prindt_rules_count(const prindt_rules* rules);
const char* prindt_rules_variable(const prindt_rules* rules, size_t index);
prindt_status prindt_rules_describe(const prindt_rules* rules, size_t index, char** out);

/* ------------------------------------------------------------------ */
/* Training                                                           */
/* ------------------------------------------------------------------ */

typedef struct prindt_train_params {
    double fraction;     /* share of the large class sampled per repetition */
    uint64_t reps;       /* number of undersampling repetitions (B) */
    uint64_t seed;       /* master seed; repetitions derive their own */
    double alpha;        /* significance limit for splits */
    uint32_t min_split;  /* smallest node size eligible for a split */
    uint32_t min_bucket; /* smallest child size a split may create */
    uint32_t max_levels_for_split_search;
    uint32_t threads;    /* worker threads; 0 = hardware default */
} prindt_train_params;

/* fraction 0.09, reps 1001, seed 0, alpha 0.01, min_split 20, min_bucket 7,
 * max_levels 20, threads 0. */
void prindt_train_params_defaults(prindt_train_params* params);

/*
 * Runs the full loop: for each repetition, train a tree on all small-class
 * rows plus a seeded random sample of the large class, score it by balanced
 * accuracy over the full dataset, and check it against the rules (rules may
 * be NULL for none). Output is deterministic for fixed inputs and seed,
 * independent of the thread count.
 */
prindt_status prindt_train(const prindt_dataset* ds,
                           const prindt_rules* rules,
                           const prindt_train_params* params,
                           prindt_model** out);

/* ------------------------------------------------------------------ */
/* Models                                                             */
/* ------------------------------------------------------------------ */

typedef struct prindt_record_info {
    uint64_t rep;
    double balanced_accuracy;
    int interpretable;
    uint32_t violation_count;
    uint32_t node_count;
    uint32_t leaf_count;
} prindt_record_info;

size_t prindt_model_n_records(const prindt_model* model);
prindt_status prindt_model_record_info(const prindt_model* model, size_t index,
                                       prindt_record_info* out);

/* Graphviz DOT rendering of one tree. */
prindt_status prindt_model_tree_dot(const prindt_model* model, size_t index, char** out);

/* Min, max and median (lower-middle for even counts) of the balanced
 * accuracies over all records. Any output pointer may be NULL. */
prindt_status prindt_model_accuracy_stats(const prindt_model* model,
                                          double* min, double* max, double* median);

/* Equal-width histogram of record balanced accuracies over [min, max];
 * the last bin is right-closed. Arrays must hold `bins` elements. */
prindt_status prindt_model_histogram(const prindt_model* model, size_t bins,
                                     double* lows, double* highs, uint64_t* counts);

/* Model files persist the schema, parameters and all interpretable trees. */
prindt_status prindt_model_save(const prindt_model* model, const char* path);
prindt_status prindt_model_load(const char* path, prindt_model** out);
void prindt_model_free(prindt_model* model);

size_t prindt_model_n_variables(const prindt_model* model);
const char* prindt_model_variable_name(const prindt_model* model, size_t index);

/* Re-audits one stored tree against a (possibly new) rule set. details, when
 * non-NULL, receives a human-readable violation listing (empty string when
 * interpretable). */
prindt_status prindt_model_check_tree(const prindt_model* model, size_t index,
                                      const prindt_rules* rules,
                                      int* interpretable, uint32_t* n_violations,
                                      char** details);

/* ------------------------------------------------------------------ */
/* Ensembles                                                          */
/* ------------------------------------------------------------------ */

typedef enum prindt_selector_kind {
    PRINDT_SELECT_TOP_K = 0,          /* value = k */
    PRINDT_SELECT_ALL_INTERPRETABLE = 1,
    PRINDT_SELECT_ABOVE_THRESHOLD = 2, /* value = cutoff in [0,1] */
    PRINDT_SELECT_ABOVE_MEDIAN = 3     /* cutoff = median accuracy of the
                                          model's records */
} prindt_selector_kind;

/* Members are the interpretable records passing the selector; an empty
 * selection is an error. */
prindt_status prindt_ensemble_build(const prindt_model* model, prindt_selector_kind kind,
                                    double value, prindt_ensemble** out);
void prindt_ensemble_free(prindt_ensemble* ensemble);

size_t prindt_ensemble_size(const prindt_ensemble* ensemble);

/* Repetition index and DOT rendering of one member tree. Members are ordered
 * by descending balanced accuracy for top-k selectors, by repetition
 * otherwise. */
prindt_status prindt_ensemble_member_rep(const prindt_ensemble* ensemble, size_t index,
                                         uint64_t* rep);
prindt_status prindt_ensemble_member_dot(const prindt_ensemble* ensemble, size_t index,
                                         char** out);

/* Balanced accuracy of the per-row majority vote over the dataset, which
 * must carry the schema the model was trained on. */
prindt_status prindt_ensemble_accuracy(const prindt_ensemble* ensemble,
                                       const prindt_dataset* ds, double* out);

/*
 * Majority-vote predictions for a CSV that has every model predictor column
 * (extra columns ignored, class column not needed). Categorical levels
 * unseen in training route right at each split.
 */
prindt_status prindt_ensemble_predict_file(const prindt_ensemble* ensemble,
                                           const char* csv_path,
                                           prindt_predictions** out);

size_t prindt_predictions_count(const prindt_predictions* preds);
const char* prindt_predictions_label(const prindt_predictions* preds, size_t row);
void prindt_predictions_free(prindt_predictions* preds);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PRINDT_H */
