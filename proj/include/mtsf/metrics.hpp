#pragma once

#include <optional>

#include "mtsf/series_matrix.hpp"

namespace mtsf {

/// Actual and forecast values of the next observation row, one entry per series.
struct ForecastPair {
    RowVector actual;
    RowVector predicted;
};

/// Symmetric MAPE averaged over series, in [0, 2]. A series whose actual and
/// forecast are both zero contributes 0.
double smape(const RowVector& actual, const RowVector& predicted);

/// Mean arctangent absolute percentage error, in [0, pi/2]. A zero actual
/// contributes pi/2 unless the forecast is also zero.
double maape(const RowVector& actual, const RowVector& predicted);

/// Mean absolute scaled error against the in-sample one-step naive forecast
/// over `history` (L x N, L >= 2, same space as the pair).
///
/// Series with a flat history (zero naive error) contribute 0 when forecast
/// exactly, otherwise they are skipped. Returns nullopt when every series is skipped.
std::optional<double> mase(const RowVector& actual, const RowVector& predicted, const Matrix& history);

/// Validation objective used during tuning (sMAPE).
inline double cv_objective(const RowVector& actual, const RowVector& predicted) {
    return smape(actual, predicted);
}

inline double smape(const ForecastPair& p) { return smape(p.actual, p.predicted); }
inline double maape(const ForecastPair& p) { return maape(p.actual, p.predicted); }
inline std::optional<double> mase(const ForecastPair& p, const Matrix& history) {
    return mase(p.actual, p.predicted, history);
}
inline double cv_objective(const ForecastPair& p) { return cv_objective(p.actual, p.predicted); }

} // namespace mtsf
