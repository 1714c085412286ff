#include "mtsf/models/echo_state_network.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "mtsf/error.hpp"

namespace mtsf {

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ModelError("spectral radius of a non-square matrix");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw ModelError("eigenvalue decomposition did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EchoStateNetwork::EchoStateNetwork(EsnParams params) : params_(params) {
    if (params_.reservoir < 1) {
        throw ConfigError("ESN: reservoir size must be at least 1");
    }
    if (!(params_.leak_rate > 0.0 && params_.leak_rate <= 1.0)) {
        throw ConfigError("ESN: leak rate must lie in (0, 1]");
    }
    if (!(params_.spectral_radius >= 0.0)) {
        throw ConfigError("ESN: spectral radius must be non-negative");
    }
    if (!(params_.lambda >= 0.0)) {
        throw ConfigError("ESN: lambda must be non-negative");
    }
}

void EchoStateNetwork::initialize(Eigen::Index series) {
    const auto r = static_cast<Eigen::Index>(params_.reservoir);
    std::mt19937_64 rng(params_.seed);
    auto uniform = [&rng] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };

    input_weights_.resize(r, series + 1);
    for (Eigen::Index j = 0; j < input_weights_.cols(); ++j) {
        for (Eigen::Index i = 0; i < r; ++i) {
            input_weights_(i, j) = params_.input_scaling * uniform();
        }
    }
    recurrent_weights_.resize(r, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) {
            recurrent_weights_(i, j) = uniform();
        }
    }
    const double radius = spectral_radius(recurrent_weights_);
    if (radius > 0.0) {
        recurrent_weights_ *= params_.spectral_radius / radius;
    }
}

Vector EchoStateNetwork::step(const Vector& state, const Eigen::Ref<const RowVector>& input) const {
    const Vector pre = input_weights_.col(0) + input_weights_.rightCols(input.size()) * input.transpose() +
                       recurrent_weights_ * state;
    Vector next = (1.0 - params_.leak_rate) * state + params_.leak_rate * pre.array().tanh().matrix();
    if (!next.allFinite()) {
        throw ModelError("ESN: non-finite reservoir activation (spectral radius " +
                         std::to_string(params_.spectral_radius) + ")");
    }
    return next;
}

RowVector EchoStateNetwork::read(const Vector& state, const Eigen::Ref<const RowVector>& input) const {
    RowVector features(state.size() + input.size());
    features << state.transpose(), input;
    return readout_.predict(features);
}

Matrix EchoStateNetwork::run(const Matrix& inputs, const Vector& initial) const {
    if (input_weights_.size() == 0) {
        throw ModelError("ESN: reservoir not initialized");
    }
    if (inputs.cols() + 1 != input_weights_.cols()) {
        throw ModelError("ESN: reservoir expects " + std::to_string(input_weights_.cols() - 1) + " inputs, got " +
                         std::to_string(inputs.cols()));
    }
    Matrix states(inputs.rows(), recurrent_weights_.rows());
    Vector x = initial;
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        x = step(x, inputs.row(t));
        states.row(t) = x.transpose();
    }
    return states;
}

void EchoStateNetwork::fit(const std::vector<SequencePair>& pairs) {
    if (pairs.empty()) {
        throw ModelError("ESN: no training pairs");
    }
    const auto series = pairs.front().input.cols();
    Eigen::Index total = 0;
    for (const auto& p : pairs) {
        if (p.input.cols() != series || p.target.cols() != series || p.input.rows() != p.target.rows() ||
            p.input.rows() < 1) {
            throw ModelError("ESN: training pairs must be non-empty with matching shapes");
        }
        total += p.input.rows();
    }
    if (input_weights_.cols() != series + 1) {
        initialize(series);
    }
    const auto r = recurrent_weights_.rows();
    Matrix features(total, r + series);
    Matrix targets(total, series);
    Eigen::Index row = 0;
    for (const auto& p : pairs) {
        const Matrix states = run(p.input, Vector::Zero(r));
        const auto len = p.input.rows();
        features.block(row, 0, len, r) = states;
        features.block(row, r, len, series) = p.input;
        targets.middleRows(row, len) = p.target;
        row += len;
    }
    readout_ = solve_ridge(features, targets, params_.lambda);
    fitted_ = true;
}

RowVector EchoStateNetwork::predict(const SequencePair& warmup) const {
    if (!fitted_) {
        throw ModelError("ESN: predict called before fit");
    }
    if (warmup.input.rows() < 1 || warmup.target.rows() < 1) {
        throw ModelError("ESN: empty warm-up pair");
    }
    Vector x = Vector::Zero(recurrent_weights_.rows());
    for (Eigen::Index t = 0; t < warmup.input.rows(); ++t) {
        x = step(x, warmup.input.row(t));
    }
    const RowVector last = warmup.target.bottomRows(1);
    x = step(x, last);
    RowVector out = read(x, last);
    if (!out.allFinite()) {
        throw ModelError("ESN: non-finite forecast");
    }
    return out;
}

} // namespace mtsf
