#pragma once

#include <cstddef>
#include <vector>

#include "mtsf/ridge.hpp"

namespace mtsf {

/// Training stack of (S x N window -> next 1 x N row) pairs.
struct WindowStack {
    std::vector<Matrix> windows;
    Matrix targets; ///< one row per window
};

/// Row-major flattening of an S x N window: row 1 of all series, then row 2, ...
RowVector flatten_window(const Matrix& window);

/// Linear direct regressor from a flattened S x N window (plus intercept) to
/// the next row. Occupies the slot of sequence networks in the
/// multi-dimensional windowing scheme.
class WindowRegressor {
public:
    explicit WindowRegressor(double lambda);

    void fit(const WindowStack& stack);
    RowVector predict(const Matrix& window) const;

    bool fitted() const noexcept { return window_rows_ > 0; }
    const RidgeSolution& solution() const noexcept { return solution_; }

private:
    double lambda_;
    Eigen::Index window_rows_ = 0;
    Eigen::Index series_ = 0;
    RidgeSolution solution_;
};

} // namespace mtsf
