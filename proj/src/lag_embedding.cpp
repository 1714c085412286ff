#include "mtsf/lag_embedding.hpp"

#include <string>

#include "mtsf/error.hpp"

namespace mtsf {

LagSamples build_lag_samples(const Matrix& history, std::size_t lags, std::optional<Eigen::Index> series) {
    const auto rows = history.rows();
    const auto p = static_cast<Eigen::Index>(lags);
    if (p < 1 || p >= rows) {
        throw ModelError("lag order p=" + std::to_string(lags) + " needs 1 <= p < rows=" + std::to_string(rows));
    }
    const Eigen::Index first_col = series ? *series : 0;
    const Eigen::Index n_cols = series ? 1 : history.cols();
    const Eigen::Index per_series = rows - p;

    LagSamples out{Matrix(per_series * n_cols, p), Vector(per_series * n_cols)};
    Eigen::Index i = 0;
    for (Eigen::Index c = first_col; c < first_col + n_cols; ++c) {
        for (Eigen::Index l = p; l < rows; ++l, ++i) {
            out.features.row(i) = history.col(c).segment(l - p, p).transpose();
            out.targets(i) = history(l, c);
        }
    }
    return out;
}

Matrix lag_inputs(const Matrix& history, std::size_t lags) {
    const auto p = static_cast<Eigen::Index>(lags);
    if (p < 1 || p > history.rows()) {
        throw ModelError("lag order p=" + std::to_string(lags) + " exceeds history of " +
                         std::to_string(history.rows()) + " rows");
    }
    return history.bottomRows(p).transpose();
}

} // namespace mtsf
