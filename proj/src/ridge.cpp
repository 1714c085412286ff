#include "mtsf/ridge.hpp"

#include <string>

#include "mtsf/error.hpp"

namespace mtsf {

Matrix RidgeSolution::predict(const Matrix& X) const {
    return (X * weights).rowwise() + intercept;
}

RidgeSolution solve_ridge(const Matrix& X, const Matrix& Y, double lambda) {
    if (X.rows() != Y.rows()) {
        throw ModelError("ridge: " + std::to_string(X.rows()) + " feature rows vs " + std::to_string(Y.rows()) +
                         " target rows");
    }
    if (X.rows() < 1) {
        throw ModelError("ridge: no training samples");
    }
    if (!(lambda >= 0.0)) {
        throw ModelError("ridge: penalty must be non-negative");
    }
    if (!X.allFinite() || !Y.allFinite()) {
        throw ModelError("ridge: non-finite training data");
    }

    const RowVector x_mean = X.colwise().mean();
    const RowVector y_mean = Y.colwise().mean();
    const Matrix Xc = X.rowwise() - x_mean;
    const Matrix Yc = Y.rowwise() - y_mean;

    Matrix W;
    if (lambda == 0.0) {
        W = Xc.completeOrthogonalDecomposition().solve(Yc);
    } else if (Xc.cols() <= Xc.rows()) {
        Matrix gram = Xc.transpose() * Xc;
        gram.diagonal().array() += lambda;
        W = gram.ldlt().solve(Xc.transpose() * Yc);
    } else {
        Matrix kernel = Xc * Xc.transpose();
        kernel.diagonal().array() += lambda;
        W = Xc.transpose() * kernel.ldlt().solve(Yc);
    }
    if (!W.allFinite()) {
        throw ModelError("ridge: solution is not finite");
    }
    RidgeSolution sol{std::move(W), {}};
    sol.intercept = y_mean - x_mean * sol.weights;
    return sol;
}

} // namespace mtsf
