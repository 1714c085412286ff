#include "mtsf/models/ridge_ar.hpp"

#include "mtsf/lag_embedding.hpp"

namespace mtsf {

RidgeAutoregressor::RidgeAutoregressor(RidgeArParams params) : params_(params) {
    if (params_.lags < 1) {
        throw ConfigError("ridge AR: lag order must be at least 1");
    }
    if (!(params_.lambda >= 0.0)) {
        throw ConfigError("ridge AR: lambda must be non-negative");
    }
}

void RidgeAutoregressor::fit(const Matrix& history) {
    if (!history.allFinite()) {
        throw ModelError("ridge AR: non-finite history");
    }
    solutions_.clear();
    if (params_.pooling == Pooling::Global) {
        const auto samples = build_lag_samples(history, params_.lags);
        solutions_.push_back(solve_ridge(samples.features, samples.targets, params_.lambda));
    } else {
        for (Eigen::Index n = 0; n < history.cols(); ++n) {
            const auto samples = build_lag_samples(history, params_.lags, n);
            solutions_.push_back(solve_ridge(samples.features, samples.targets, params_.lambda));
        }
    }
}

RowVector RidgeAutoregressor::predict(const Matrix& history) const {
    if (!fitted()) {
        throw ModelError("ridge AR: predict called before fit");
    }
    const Matrix inputs = lag_inputs(history, params_.lags);
    if (params_.pooling == Pooling::Global) {
        return solutions_.front().predict(inputs).transpose();
    }
    if (static_cast<std::size_t>(inputs.rows()) != solutions_.size()) {
        throw ModelError("ridge AR: fitted on " + std::to_string(solutions_.size()) + " series, got " +
                         std::to_string(inputs.rows()));
    }
    RowVector out(inputs.rows());
    for (Eigen::Index n = 0; n < inputs.rows(); ++n) {
        out(n) = solutions_[static_cast<std::size_t>(n)].predict(inputs.row(n))(0, 0);
    }
    return out;
}

} // namespace mtsf
