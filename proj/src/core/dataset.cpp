#include "core/dataset.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace prindt {

namespace {

bool parse_finite_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string row_col(std::size_t row, const std::string& col) {
    return "row " + std::to_string(row + 1) + ", column '" + col + "'";
}

} // namespace

Dataset Dataset::load_csv(const std::string& path, const ClassRequest& request,
                          const KindOverrides& overrides) {
    return build(read_csv_file(path), request, overrides);
}

Dataset Dataset::from_csv_text(std::string_view text, const ClassRequest& request,
                               const KindOverrides& overrides) {
    return build(parse_csv(text), request, overrides);
}

Dataset Dataset::build(const CsvTable& table, const ClassRequest& request,
                       const KindOverrides& overrides) {
    const std::size_t n_cols = table.header.size();
    const std::size_t n_rows = table.rows.size();

    {
        std::unordered_set<std::string> seen;
        for (const auto& name : table.header)
            if (!seen.insert(name).second)
                fail(ErrorCode::parse, "duplicate column name '" + name + "' in CSV header");
    }

    std::size_t class_col = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (table.header[c] == request.column) class_col = c;
    if (class_col == n_cols)
        fail(ErrorCode::parse, "class column '" + request.column + "' not found in CSV header");

    if (n_rows == 0) fail(ErrorCode::parse, "CSV has a header but no data rows");

    // Reject missing cells up front so later passes can assume dense data.
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < n_cols; ++c)
            if (table.rows[r][c].empty())
                fail(ErrorCode::parse, "missing value at " + row_col(r, table.header[c]));

    // Class column: exactly two observed labels, in first-appearance order.
    std::vector<std::string> labels;
    std::vector<std::size_t> label_counts;
    std::vector<std::uint8_t> label_index(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& v = table.rows[r][class_col];
        std::size_t idx = labels.size();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == v) idx = i;
        if (idx == labels.size()) {
            if (labels.size() == 2)
                fail(ErrorCode::parse, "class column '" + request.column +
                                           "' has more than two labels (third: '" + v + "')");
            labels.push_back(v);
            label_counts.push_back(0);
        }
        label_index[r] = static_cast<std::uint8_t>(idx);
        ++label_counts[idx];
    }
    if (labels.size() < 2)
        fail(ErrorCode::parse, "class column '" + request.column + "' has a single label '" +
                                   labels[0] + "'; two classes are required");

    std::size_t small_idx;
    if (label_counts[0] != label_counts[1]) {
        small_idx = label_counts[0] < label_counts[1] ? 0 : 1;
        if (request.small_label && *request.small_label != labels[small_idx]) {
            if (*request.small_label != labels[0] && *request.small_label != labels[1])
                fail(ErrorCode::invalid_argument, "small-class label '" + *request.small_label +
                                                      "' does not occur in column '" +
                                                      request.column + "'");
            fail(ErrorCode::invalid_argument,
                 "small-class label '" + *request.small_label + "' has the larger count (" +
                     std::to_string(label_counts[1 - small_idx]) + " vs " +
                     std::to_string(label_counts[small_idx]) + ")");
        }
    } else {
        if (!request.small_label)
            fail(ErrorCode::invalid_argument,
                 "class counts are tied (" + std::to_string(label_counts[0]) +
                     " each); choose the small class explicitly");
        if (*request.small_label == labels[0]) small_idx = 0;
        else if (*request.small_label == labels[1]) small_idx = 1;
        else
            fail(ErrorCode::invalid_argument, "small-class label '" + *request.small_label +
                                                  "' does not occur in column '" + request.column +
                                                  "'");
    }

    Dataset ds;
    ds.n_rows_ = n_rows;
    ds.class_spec_ = ClassSpec{request.column, labels[small_idx], labels[1 - small_idx]};
    ds.class_codes_.resize(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r)
        ds.class_codes_[r] = label_index[r] == small_idx ? 0 : 1;

    const auto listed = [](const std::vector<std::string>& list, const std::string& name) {
        return std::find(list.begin(), list.end(), name) != list.end();
    };
    for (const auto& name : overrides.categorical)
        if (listed(overrides.numeric, name))
            fail(ErrorCode::invalid_argument,
                 "column '" + name + "' overridden as both categorical and numeric");

    ds.file_order_.reserve(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c == class_col) {
            ds.file_order_.push_back(-1);
            continue;
        }
        const std::string& name = table.header[c];
        const bool force_cat = listed(overrides.categorical, name);
        const bool force_num = listed(overrides.numeric, name);

        std::vector<double> parsed(n_rows);
        bool all_numeric = true;
        std::size_t first_bad = 0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            if (!parse_finite_double(table.rows[r][c], parsed[r])) {
                all_numeric = false;
                first_bad = r;
                break;
            }
        }

        VariableSchema var;
        var.name = name;
        Column col;
        if (force_num || (all_numeric && !force_cat)) {
            if (!all_numeric)
                fail(ErrorCode::parse, "cannot parse '" + table.rows[first_bad][c] +
                                           "' as a number at " + row_col(first_bad, name));
            var.kind = VariableKind::numeric;
            col.kind = VariableKind::numeric;
            col.values = std::move(parsed);
        } else {
            var.kind = VariableKind::categorical;
            col.kind = VariableKind::categorical;
            col.codes.resize(n_rows);
            std::unordered_map<std::string, std::int32_t> code_of;
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& v = table.rows[r][c];
                auto it = code_of.find(v);
                if (it == code_of.end()) {
                    const auto code = static_cast<std::int32_t>(var.levels.size());
                    var.levels.push_back(v);
                    it = code_of.emplace(v, code).first;
                }
                col.codes[r] = it->second;
            }
        }
        ds.file_order_.push_back(static_cast<std::int32_t>(ds.schema_.size()));
        ds.schema_.push_back(std::move(var));
        ds.columns_.push_back(std::move(col));
    }
    return ds;
}

std::pair<std::size_t, std::size_t> Dataset::class_counts() const {
    std::size_t small = 0;
    for (const ClassCode c : class_codes_)
        if (c == 0) ++small;
    return {small, n_rows_ - small};
}

Dataset Dataset::select_predictors(const std::vector<std::string>& names) const {
    Dataset out;
    out.class_spec_ = class_spec_;
    out.class_codes_ = class_codes_;
    out.n_rows_ = n_rows_;
    for (const auto& name : names) {
        if (name == class_spec_.column)
            fail(ErrorCode::invalid_argument,
                 "'" + name + "' is the class column, not a predictor");
        bool found = false;
        for (std::size_t i = 0; i < schema_.size(); ++i) {
            if (schema_[i].name == name) {
                if (std::find_if(out.schema_.begin(), out.schema_.end(), [&](const auto& v) {
                        return v.name == name;
                    }) != out.schema_.end())
                    fail(ErrorCode::invalid_argument, "predictor '" + name + "' listed twice");
                out.schema_.push_back(schema_[i]);
                out.columns_.push_back(columns_[i]);
                found = true;
                break;
            }
        }
        if (!found)
            fail(ErrorCode::invalid_argument, "unknown predictor column '" + name + "'");
    }
    if (out.schema_.empty()) fail(ErrorCode::invalid_argument, "no predictors selected");
    out.file_order_.push_back(-1); // class first; original order is not preserved
    for (std::size_t i = 0; i < out.schema_.size(); ++i)
        out.file_order_.push_back(static_cast<std::int32_t>(i));
    return out;
}

std::string Dataset::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < file_order_.size(); ++i) {
        if (i) out.push_back(',');
        const std::int32_t idx = file_order_[i];
        out += csv_escape(idx < 0 ? class_spec_.column : schema_[idx].name);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < n_rows_; ++r) {
        for (std::size_t i = 0; i < file_order_.size(); ++i) {
            if (i) out.push_back(',');
            const std::int32_t idx = file_order_[i];
            if (idx < 0) {
                out += csv_escape(class_label(class_codes_[r]));
            } else {
                const Column& col = columns_[idx];
                if (col.kind == VariableKind::numeric)
                    out += format_double(col.values[r]);
                else
                    out += csv_escape(schema_[idx].levels[col.codes[r]]);
            }
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

Frame build_frame(const CsvTable& table, const std::vector<VariableSchema>& schema) {
    Frame frame;
    frame.n_rows = table.rows.size();
    if (frame.n_rows == 0) fail(ErrorCode::parse, "CSV has a header but no data rows");

    for (const auto& var : schema) {
        std::size_t col_idx = table.header.size();
        for (std::size_t c = 0; c < table.header.size(); ++c)
            if (table.header[c] == var.name) col_idx = c;
        if (col_idx == table.header.size())
            fail(ErrorCode::schema_mismatch, "data is missing column '" + var.name + "'");

        Column col;
        col.kind = var.kind;
        if (var.kind == VariableKind::numeric) {
            col.values.resize(frame.n_rows);
            for (std::size_t r = 0; r < frame.n_rows; ++r) {
                if (!parse_finite_double(table.rows[r][col_idx], col.values[r]))
                    fail(ErrorCode::schema_mismatch,
                         "cannot parse '" + table.rows[r][col_idx] + "' as a number at " +
                             row_col(r, var.name));
            }
        } else {
            col.codes.resize(frame.n_rows);
            std::unordered_map<std::string, std::int32_t> code_of;
            for (std::size_t i = 0; i < var.levels.size(); ++i)
                code_of.emplace(var.levels[i], static_cast<std::int32_t>(i));
            for (std::size_t r = 0; r < frame.n_rows; ++r) {
                const auto it = code_of.find(table.rows[r][col_idx]);
                col.codes[r] = it == code_of.end() ? -1 : it->second;
            }
        }
        frame.columns.push_back(std::move(col));
    }
    return frame;
}

} // namespace

Frame load_frame_csv(const std::string& path, const std::vector<VariableSchema>& schema) {
    return build_frame(read_csv_file(path), schema);
}

Frame frame_from_csv_text(std::string_view text, const std::vector<VariableSchema>& schema) {
    return build_frame(parse_csv(text), schema);
}

Frame frame_of(const Dataset& ds) {
    return Frame{ds.columns(), ds.n_rows()};
}

} // namespace prindt
