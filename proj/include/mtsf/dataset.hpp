#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mtsf/series_matrix.hpp"

namespace mtsf {

enum class MissingPolicy {
    Drop,        ///< drop every column that has a missing cell
    ForwardFill, ///< carry the last observed value forward; columns with leading gaps are dropped
};

MissingPolicy parse_missing_policy(const std::string& name);
std::string to_string(MissingPolicy policy);

struct CsvSchema {
    /// Header name of the timestamp column. Unset means every column is a value column.
    std::optional<std::string> timestamp_column;
    /// Value columns to keep, in output order. Empty keeps every non-timestamp column.
    std::vector<std::string> value_columns;
    MissingPolicy missing_policy = MissingPolicy::Drop;
    /// Treat exact zeros as missing (sensor drop-outs recorded as 0).
    bool zero_is_missing = false;
    std::string resolution;
};

/// Reads a wide CSV file (header row of series identifiers, one observation per line).
/// Missing cells are empty or "NaN"; columns are filtered per the schema's policy.
SeriesMatrix load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Same as load_csv but parses from an in-memory buffer; `source` names it in diagnostics.
SeriesMatrix parse_csv(const std::string& text, const CsvSchema& schema = {},
                       const std::string& source = "<memory>");

/// Writes the matrix as a wide CSV (optional timestamp column first). Output
/// uses shortest round-trip formatting so load_csv reproduces the values.
void write_csv(const SeriesMatrix& m, const std::filesystem::path& path);
std::string format_csv(const SeriesMatrix& m);

/// Non-overlapping group means of `group_size` consecutive rows; a trailing partial group is dropped.
SeriesMatrix resample_mean(const SeriesMatrix& m, std::size_t group_size);
/// Non-overlapping group sums of `group_size` consecutive rows; a trailing partial group is dropped.
SeriesMatrix resample_sum(const SeriesMatrix& m, std::size_t group_size);

/// Rows [start, start + length - 1] (1-based, inclusive).
SeriesMatrix slice_window(const SeriesMatrix& m, std::size_t start, std::size_t length);

/// Keeps the named columns in the given order.
SeriesMatrix select_columns(const SeriesMatrix& m, const std::vector<std::string>& ids);

/// Per-column min-max scaling parameters.
struct ScalingTransform {
    RowVector mins;
    RowVector maxs;
    std::set<std::size_t> degenerate_columns;

    std::size_t size() const noexcept { return static_cast<std::size_t>(mins.size()); }
};

ScalingTransform fit_scaler(const Matrix& values);
inline ScalingTransform fit_scaler(const SeriesMatrix& m) { return fit_scaler(m.values()); }

/// (x - min) / (max - min) per column; constant columns map to 0. No clipping.
Matrix apply_scaler(const Matrix& values, const ScalingTransform& t);
SeriesMatrix apply_scaler(const SeriesMatrix& m, const ScalingTransform& t);

/// Maps a scaled row back to original units; constant columns return their min.
RowVector invert_scaler(const RowVector& row, const ScalingTransform& t);

} // namespace mtsf
