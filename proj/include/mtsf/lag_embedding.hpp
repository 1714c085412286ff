#pragma once

#include <cstddef>
#include <optional>

#include "mtsf/series_matrix.hpp"

namespace mtsf {

/// Supervised samples (y[l-p .. l-1] -> y[l]) drawn from the columns of a history matrix.
struct LagSamples {
    Matrix features; ///< samples x p, oldest lag first
    Vector targets;
};

/// Pools the samples of every column (global model), or of `series` alone.
/// Sample count is (rows - p) * N when pooled. Throws if p >= rows.
LagSamples build_lag_samples(const Matrix& history, std::size_t lags,
                             std::optional<Eigen::Index> series = std::nullopt);

/// Forecast inputs: the last p values of each column, one row per series (N x p).
Matrix lag_inputs(const Matrix& history, std::size_t lags);

} // namespace mtsf
