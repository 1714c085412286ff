#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mtsf/hyper_grid.hpp"
#include "mtsf/rolling_cv.hpp"

namespace mtsf {

/// A forecasting model family: its cross-validation scheme, its default
/// hyper-parameter grid, and a fresh fit-and-forecast for one fold.
class ForecastFamily {
public:
    virtual ~ForecastFamily() = default;

    virtual std::string name() const = 0;
    virtual Scheme scheme() const = 0;
    virtual HyperGrid default_grid() const = 0;

    /// Fits a new model on the fold's training material and forecasts
    /// `fold.target_row`. `data` must not extend past fold.last_visible_row().
    /// Returns a finite row with one entry per column of `data`.
    RowVector forecast(const Matrix& data, const Fold& fold, const Assignment& theta, std::uint64_t seed) const;

protected:
    virtual RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                                  std::uint64_t seed) const = 0;
};

/// Registered families: naive, ridge_ar, ridge_ar_window, linear_svr,
/// random_forest, window_ridge, esn.
std::unique_ptr<ForecastFamily> make_family(const std::string& name);
std::vector<std::string> family_names();

/// Rows of a 1-based inclusive range; throws if the range leaves `data`.
Matrix rows_of(const Matrix& data, const RowRange& range);

} // namespace mtsf
