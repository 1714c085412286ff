#pragma once

#include "mtsf/series_matrix.hpp"

namespace mtsf {

/// Linear map Y ~ X * weights + intercept.
struct RidgeSolution {
    Matrix weights;      ///< features x outputs
    RowVector intercept; ///< one entry per output

    Matrix predict(const Matrix& X) const;
};

/// Multi-output ridge regression with an unpenalized intercept:
/// minimizes ||Y - X W - 1 b||^2 + lambda ||W||^2 on centered data.
/// Uses the primal normal equations when features <= samples and the
/// kernel (dual) form otherwise. lambda = 0 gives the minimum-norm
/// least-squares solution, so a rank-deficient design is not an error.
RidgeSolution solve_ridge(const Matrix& X, const Matrix& Y, double lambda);

} // namespace mtsf
