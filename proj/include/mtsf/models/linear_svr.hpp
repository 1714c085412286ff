#pragma once

#include <cstddef>
#include <vector>

#include "mtsf/models/pooling.hpp"
#include "mtsf/series_matrix.hpp"

namespace mtsf {

/// Result of the epsilon-insensitive dual coordinate descent.
///
/// Dual problem (minimized): f(beta) = 1/2 beta' X X' beta - y' beta + eps ||beta||_1,
/// subject to -C <= beta_i <= C; primal weights w = X' beta.
struct SvrDualSolution {
    Vector weights;
    Vector beta;
    double dual_objective = 0.0;
    double max_violation = 0.0; ///< largest projected-gradient KKT violation at exit
    std::size_t epochs = 0;
    bool converged = false;
};

/// Deterministic dual coordinate descent, visiting samples in index order.
/// Stops when the maximum KKT violation falls below `tolerance` or after
/// `max_epochs` full passes.
SvrDualSolution solve_svr_dual(const Matrix& X, const Vector& y, double C, double epsilon, double tolerance,
                               std::size_t max_epochs);

/// f(beta) for a given design; exposed for diagnostics.
double svr_dual_objective(const Matrix& X, const Vector& y, const Vector& beta, double epsilon);

struct LinearSvrParams {
    std::size_t lags = 1;
    double C = 1.0;
    double epsilon = 0.0;
    Pooling pooling = Pooling::Global;
    double tolerance = 1e-6;
};

/// Linear epsilon-SVR on the lag embedding. The bias enters as a constant
/// feature of value 1 and is regularized with the weights.
class LinearSvr {
public:
    explicit LinearSvr(LinearSvrParams params);

    void fit(const Matrix& history);
    RowVector predict(const Matrix& history) const;

    bool fitted() const noexcept { return !solutions_.empty(); }
    /// Weights (lags..., bias); index selects the series under per-series pooling.
    const SvrDualSolution& solution(std::size_t series = 0) const { return solutions_.at(series); }

private:
    LinearSvrParams params_;
    std::vector<SvrDualSolution> solutions_;
};

} // namespace mtsf
