#include "mtsf/models/linear_svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mtsf/lag_embedding.hpp"

namespace mtsf {

namespace {

// Projected-gradient violation of the one-variable subproblem at beta_i, given
// gradient g = (Q beta)_i - y_i of the smooth part.
double kkt_violation(double beta, double g, double C, double epsilon) {
    const double gp = g + epsilon;
    const double gn = g - epsilon;
    if (beta == 0.0) {
        if (gp < 0.0) {
            return -gp;
        }
        if (gn > 0.0) {
            return gn;
        }
        return 0.0;
    }
    if (beta >= C) {
        return std::max(gp, 0.0);
    }
    if (beta <= -C) {
        return std::max(-gn, 0.0);
    }
    return beta > 0.0 ? std::abs(gp) : std::abs(gn);
}

} // namespace

double svr_dual_objective(const Matrix& X, const Vector& y, const Vector& beta, double epsilon) {
    const Vector w = X.transpose() * beta;
    return 0.5 * w.squaredNorm() - y.dot(beta) + epsilon * beta.lpNorm<1>();
}

SvrDualSolution solve_svr_dual(const Matrix& X, const Vector& y, double C, double epsilon, double tolerance,
                               std::size_t max_epochs) {
    if (X.rows() != y.size() || X.rows() < 1) {
        throw ModelError("linear SVR: design and target sizes differ or are empty");
    }
    if (!(C > 0.0) || !(epsilon >= 0.0)) {
        throw ModelError("linear SVR: needs C > 0 and epsilon >= 0");
    }
    const Eigen::Index n = X.rows();
    SvrDualSolution s;
    s.beta = Vector::Zero(n);
    s.weights = Vector::Zero(X.cols());
    const Vector diag = X.rowwise().squaredNorm();
    const double inf = std::numeric_limits<double>::infinity();

    // Active-set shrinking: a variable stuck at a bound whose gradient points
    // further outward than last sweep's worst violation leaves the sweep; all
    // variables return once the active set meets the tolerance.
    std::vector<Eigen::Index> index(static_cast<std::size_t>(n));
    std::iota(index.begin(), index.end(), Eigen::Index{0});
    std::size_t active = index.size();
    double bound = inf;

    for (s.epochs = 0; s.epochs < max_epochs; ++s.epochs) {
        double worst = 0.0;
        for (std::size_t k = 0; k < active; ++k) {
            const Eigen::Index i = index[k];
            const double g = X.row(i).dot(s.weights) - y(i);
            const double gp = g + epsilon;
            const double gn = g - epsilon;
            const double beta = s.beta(i);
            bool shrink = false;
            if (beta == 0.0) {
                shrink = gp > bound && gn < -bound;
            } else if (beta >= C) {
                shrink = gp < -bound;
            } else if (beta <= -C) {
                shrink = gn > bound;
            }
            if (shrink) {
                --active;
                std::swap(index[k], index[active]);
                --k;
                continue;
            }
            worst = std::max(worst, kkt_violation(beta, g, C, epsilon));

            const double h = diag(i);
            if (h <= 0.0) {
                continue;
            }
            double step;
            if (gp < h * beta) {
                step = -gp / h;
            } else if (gn > h * beta) {
                step = -gn / h;
            } else {
                step = -beta;
            }
            const double updated = std::clamp(beta + step, -C, C);
            const double delta = updated - beta;
            if (delta != 0.0) {
                s.beta(i) = updated;
                s.weights.noalias() += delta * X.row(i).transpose();
            }
        }
        s.max_violation = worst;
        if (worst < tolerance) {
            if (active == index.size()) {
                s.converged = true;
                ++s.epochs;
                break;
            }
            active = index.size();
            bound = inf;
            continue;
        }
        bound = worst;
    }
    s.dual_objective = svr_dual_objective(X, y, s.beta, epsilon);
    if (!s.weights.allFinite()) {
        throw ModelError("linear SVR: solution is not finite");
    }
    return s;
}

LinearSvr::LinearSvr(LinearSvrParams params) : params_(params) {
    if (params_.lags < 1) {
        throw ConfigError("linear SVR: lag order must be at least 1");
    }
    if (!(params_.C > 0.0) || !(params_.epsilon >= 0.0)) {
        throw ConfigError("linear SVR: needs C > 0 and epsilon >= 0");
    }
}

namespace {

SvrDualSolution fit_one(const LagSamples& samples, const LinearSvrParams& p) {
    Matrix X(samples.features.rows(), samples.features.cols() + 1);
    X.leftCols(samples.features.cols()) = samples.features;
    X.col(samples.features.cols()).setOnes();
    const auto cap = 10 * static_cast<std::size_t>(X.rows()) * static_cast<std::size_t>(X.cols());
    return solve_svr_dual(X, samples.targets, p.C, p.epsilon, p.tolerance, cap);
}

double apply(const SvrDualSolution& s, const Eigen::Ref<const RowVector>& lags) {
    const auto p = lags.size();
    return lags.dot(s.weights.head(p).transpose()) + s.weights(p);
}

} // namespace

void LinearSvr::fit(const Matrix& history) {
    if (!history.allFinite()) {
        throw ModelError("linear SVR: non-finite history");
    }
    solutions_.clear();
    if (params_.pooling == Pooling::Global) {
        solutions_.push_back(fit_one(build_lag_samples(history, params_.lags), params_));
    } else {
        for (Eigen::Index n = 0; n < history.cols(); ++n) {
            solutions_.push_back(fit_one(build_lag_samples(history, params_.lags, n), params_));
        }
    }
}

RowVector LinearSvr::predict(const Matrix& history) const {
    if (!fitted()) {
        throw ModelError("linear SVR: predict called before fit");
    }
    const Matrix inputs = lag_inputs(history, params_.lags);
    if (params_.pooling == Pooling::PerSeries && static_cast<std::size_t>(inputs.rows()) != solutions_.size()) {
        throw ModelError("linear SVR: fitted on " + std::to_string(solutions_.size()) + " series, got " +
                         std::to_string(inputs.rows()));
    }
    RowVector out(inputs.rows());
    for (Eigen::Index n = 0; n < inputs.rows(); ++n) {
        const auto& s = params_.pooling == Pooling::Global ? solutions_.front() : solutions_[static_cast<std::size_t>(n)];
        out(n) = apply(s, inputs.row(n));
    }
    return out;
}

} // namespace mtsf
