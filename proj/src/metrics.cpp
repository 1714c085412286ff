#include "mtsf/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mtsf {

namespace {

void check_pair(const RowVector& actual, const RowVector& predicted) {
    if (actual.size() != predicted.size()) {
        throw DataError("forecast pair length mismatch: " + std::to_string(actual.size()) + " vs " +
                        std::to_string(predicted.size()));
    }
    if (actual.size() == 0) {
        throw DataError("forecast pair is empty");
    }
}

} // namespace

double smape(const RowVector& actual, const RowVector& predicted) {
    check_pair(actual, predicted);
    double total = 0.0;
    for (Eigen::Index n = 0; n < actual.size(); ++n) {
        const double denom = std::abs(actual(n)) + std::abs(predicted(n));
        if (denom > 0.0) {
            total += 2.0 * std::abs(actual(n) - predicted(n)) / denom;
        }
    }
    return total / static_cast<double>(actual.size());
}

double maape(const RowVector& actual, const RowVector& predicted) {
    check_pair(actual, predicted);
    double total = 0.0;
    for (Eigen::Index n = 0; n < actual.size(); ++n) {
        const double err = std::abs(actual(n) - predicted(n));
        if (actual(n) == 0.0) {
            total += err == 0.0 ? 0.0 : std::numbers::pi / 2.0;
        } else {
            total += std::atan(err / std::abs(actual(n)));
        }
    }
    return total / static_cast<double>(actual.size());
}

std::optional<double> mase(const RowVector& actual, const RowVector& predicted, const Matrix& history) {
    check_pair(actual, predicted);
    if (history.rows() < 2) {
        throw DataError("MASE needs at least 2 history rows, got " + std::to_string(history.rows()));
    }
    if (history.cols() != actual.size()) {
        throw DataError("MASE history has " + std::to_string(history.cols()) + " columns, pair has " +
                        std::to_string(actual.size()));
    }
    const Eigen::Index L = history.rows();
    double total = 0.0;
    Eigen::Index used = 0;
    for (Eigen::Index n = 0; n < actual.size(); ++n) {
        const double scale =
            (history.col(n).tail(L - 1) - history.col(n).head(L - 1)).cwiseAbs().sum() / static_cast<double>(L - 1);
        const double err = std::abs(actual(n) - predicted(n));
        if (scale > 0.0) {
            total += err / scale;
            ++used;
        } else if (err == 0.0) {
            ++used;
        }
    }
    if (used == 0) {
        return std::nullopt;
    }
    return total / static_cast<double>(used);
}

} // namespace mtsf
