#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prindt {

struct CsvTable;

enum class VariableKind { categorical, numeric };

struct VariableSchema {
    std::string name;
    VariableKind kind = VariableKind::categorical;
    std::vector<std::string> levels; // categorical: first-appearance order

    bool operator==(const VariableSchema&) const = default;
};

/// Binary class variable with the designated smaller class. Resolved from the
/// observed counts at load time; labels are stored as (small, large).
struct ClassSpec {
    std::string column;
    std::string small_label;
    std::string large_label;

    bool operator==(const ClassSpec&) const = default;
};

/// Load-time request: which column holds the class, and optionally which label
/// the caller expects (or forces, on an exact count tie) to be the small one.
struct ClassRequest {
    std::string column;
    std::optional<std::string> small_label;
};

struct KindOverrides {
    std::vector<std::string> categorical;
    std::vector<std::string> numeric;
};

/// One predictor column. Categorical cells are level codes into the schema's
/// level list; code -1 marks a level unseen during training (prediction
/// frames only, never inside a Dataset).
struct Column {
    VariableKind kind = VariableKind::categorical;
    std::vector<std::int32_t> codes;
    std::vector<double> values;

    bool operator==(const Column&) const = default;
};

// Class codes: 0 = small class, 1 = large class.
using ClassCode = std::int8_t;

/// Validated immutable table: predictor columns plus the binary class column.
/// Safe to share read-only across threads.
class Dataset {
public:
    static Dataset load_csv(const std::string& path, const ClassRequest& request,
                            const KindOverrides& overrides = {});
    static Dataset from_csv_text(std::string_view text, const ClassRequest& request,
                                 const KindOverrides& overrides = {});

    std::size_t n_rows() const { return n_rows_; }
    const std::vector<VariableSchema>& schema() const { return schema_; }
    const ClassSpec& class_spec() const { return class_spec_; }
    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(std::size_t i) const { return columns_[i]; }
    ClassCode class_of(std::size_t row) const { return class_codes_[row]; }
    const std::string& class_label(ClassCode c) const {
        return c == 0 ? class_spec_.small_label : class_spec_.large_label;
    }

    // (small, large); always sums to n_rows().
    std::pair<std::size_t, std::size_t> class_counts() const;

    // New Dataset keeping only the named predictors (schema order preserved).
    Dataset select_predictors(const std::vector<std::string>& names) const;

    // Columns in original file order, suitable for reloading with the same
    // class request and overrides.
    std::string to_csv() const;

    bool operator==(const Dataset&) const = default;

private:
    static Dataset build(const CsvTable& table, const ClassRequest& request,
                         const KindOverrides& overrides);

    std::vector<VariableSchema> schema_;
    ClassSpec class_spec_;
    std::vector<Column> columns_;
    std::vector<ClassCode> class_codes_;
    std::size_t n_rows_ = 0;
    // Original file column order as indices into schema_, with -1 for the
    // class column. Preserved so to_csv round-trips.
    std::vector<std::int32_t> file_order_;
};

/// Predictor columns aligned to a training schema, for prediction on data
/// that may contain categorical levels unseen during training (coded -1).
struct Frame {
    std::vector<Column> columns;
    std::size_t n_rows = 0;
};

// Reads a CSV whose columns must include every schema variable (extra columns
// are ignored; a class column, if present, is not needed). Unknown categorical
// levels map to -1; numeric cells must parse to finite values.
Frame load_frame_csv(const std::string& path, const std::vector<VariableSchema>& schema);
Frame frame_from_csv_text(std::string_view text, const std::vector<VariableSchema>& schema);

// A Dataset viewed through its own schema (codes are already aligned).
Frame frame_of(const Dataset& ds);

} // namespace prindt
