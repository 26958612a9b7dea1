#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmrbench/matrix.hpp"

namespace fmrbench {

// Input/ingestion problems the CLI maps to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ColumnStats {
    double mean = 0.0;
    double sd = 1.0;
};

struct Standardization {
    std::vector<ColumnStats> features;   // aligned with feature_names
    std::vector<ColumnStats> responses;  // aligned with response_names
};

// Grouped tabular dataset: feature matrix, named responses, one group id per
// row. Missing feature cells are tracked in `observed` (empty mask == fully
// observed); responses and group ids must be complete.
struct Dataset {
    Matrix x;  // n x p
    std::vector<std::vector<double>> responses;
    std::vector<std::string> response_names;
    std::vector<std::string> feature_names;
    std::vector<std::string> group_of;  // length n
    std::vector<std::string> header;    // original column order, for re-emission
    std::vector<std::uint8_t> observed; // n*p row-major; empty == all observed
    std::string group_col;
    std::optional<Standardization> standardization;

    std::size_t n_rows() const { return x.rows(); }
    std::size_t n_features() const { return x.cols(); }
    bool is_observed(std::size_t i, std::size_t j) const {
        return observed.empty() || observed[i * x.cols() + j] != 0;
    }
    bool has_missing() const;
    std::size_t response_index(const std::string& name) const;
};

struct GroupIndex {
    std::vector<std::string> ids;                 // first-appearance order
    std::vector<std::vector<std::size_t>> rows;   // partition of 0..n-1

    std::size_t group_count() const { return ids.size(); }
    std::size_t group_size(std::size_t g) const { return rows[g].size(); }
};

struct HoldoutSplit {
    std::vector<std::vector<std::size_t>> train_rows;  // per group, non-empty
    std::vector<std::vector<std::size_t>> test_rows;   // per group, may be empty
    double holdout_fraction = 0.0;
};

struct CsvSchema {
    std::string group_col;
    std::vector<std::string> response_cols;
    std::vector<std::string> feature_cols;  // empty => all remaining columns
};

struct LoadedCsv {
    Dataset ds;
    GroupIndex gi;
};

GroupIndex build_group_index(const std::vector<std::string>& group_of);

// Comma-separated, dot decimal, first row header. Empty feature cells become
// missing entries; empty group/response cells are errors.
LoadedCsv load_csv(const std::string& path, const CsvSchema& schema);

// Re-emits the dataset in original header order.
std::string dataset_to_csv(const Dataset& ds);

// Transforms every feature and response column to mean 0, sd 1 (sample sd,
// n-1 denominator) and records the per-column (mean, sd).
Dataset standardize(const Dataset& ds);

std::vector<double> standardize_vector(const std::vector<double>& raw,
                                       const std::vector<ColumnStats>& stats);
std::vector<double> destandardize_vector(const std::vector<double>& standardized,
                                         const std::vector<ColumnStats>& stats);

// Per group, floor(fraction * n_i) rows go to test, the rest to train.
// Deterministic per seed; train is never empty.
HoldoutSplit grouped_holdout(const GroupIndex& gi, double fraction, std::uint64_t seed);

// Evaluation rows of group g: its holdout rows when present, else all rows.
const std::vector<std::size_t>& eval_rows(const GroupIndex& gi, const HoldoutSplit& split,
                                          std::size_t g);

std::string standardization_to_json(const Dataset& ds);
Standardization standardization_from_json(const std::string& text,
                                          const std::vector<std::string>& feature_names,
                                          const std::vector<std::string>& response_names);

}  // namespace fmrbench
