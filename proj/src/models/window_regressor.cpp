#include "mtsf/models/window_regressor.hpp"

#include <string>

#include "mtsf/error.hpp"

namespace mtsf {

RowVector flatten_window(const Matrix& window) {
    RowVector out(window.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < window.rows(); ++r) {
        for (Eigen::Index c = 0; c < window.cols(); ++c) {
            out(k++) = window(r, c);
        }
    }
    return out;
}

WindowRegressor::WindowRegressor(double lambda) : lambda_(lambda) {
    if (!(lambda_ >= 0.0)) {
        throw ConfigError("window regressor: lambda must be non-negative");
    }
}

void WindowRegressor::fit(const WindowStack& stack) {
    if (stack.windows.empty()) {
        throw ModelError("window regressor: empty training stack");
    }
    if (static_cast<Eigen::Index>(stack.windows.size()) != stack.targets.rows()) {
        throw ModelError("window regressor: " + std::to_string(stack.windows.size()) + " windows vs " +
                         std::to_string(stack.targets.rows()) + " targets");
    }
    const auto rows = stack.windows.front().rows();
    const auto cols = stack.windows.front().cols();
    if (stack.targets.cols() != cols) {
        throw ModelError("window regressor: target width differs from window width");
    }
    Matrix X(static_cast<Eigen::Index>(stack.windows.size()), rows * cols);
    for (std::size_t i = 0; i < stack.windows.size(); ++i) {
        const auto& w = stack.windows[i];
        if (w.rows() != rows || w.cols() != cols) {
            throw ModelError("window regressor: windows in a stack must share one shape");
        }
        X.row(static_cast<Eigen::Index>(i)) = flatten_window(w);
    }
    solution_ = solve_ridge(X, stack.targets, lambda_);
    window_rows_ = rows;
    series_ = cols;
}

RowVector WindowRegressor::predict(const Matrix& window) const {
    if (!fitted()) {
        throw ModelError("window regressor: predict called before fit");
    }
    if (window.rows() != window_rows_ || window.cols() != series_) {
        throw ModelError("window regressor: fitted on " + std::to_string(window_rows_) + "x" +
                         std::to_string(series_) + " windows, got " + std::to_string(window.rows()) + "x" +
                         std::to_string(window.cols()));
    }
    return solution_.predict(flatten_window(window));
}

} // namespace mtsf
