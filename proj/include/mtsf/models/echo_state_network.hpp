#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mtsf/ridge.hpp"

namespace mtsf {

struct EsnParams {
    std::size_t reservoir = 100;
    double spectral_radius = 0.9;
    double leak_rate = 1.0;
    double lambda = 1e-6;
    /// Multiplier applied to the uniform [-1, 1] input weights.
    double input_scaling = 1.0;
    std::uint64_t seed = 0;
};

/// Input sequence and the same sequence advanced by one row (both S x N).
struct SequencePair {
    Matrix input;
    Matrix target;
};

/// Leaky-integrator echo state network with a ridge readout from
/// [state; input; 1] to the next observation row.
///
/// State update: x' = (1 - a) x + a tanh(W_in [1; u] + W x).
class EchoStateNetwork {
public:
    explicit EchoStateNetwork(EsnParams params);

    /// Teacher-forced fit; the state is reset to zero at the start of every pair.
    void fit(const std::vector<SequencePair>& pairs);

    /// Drives the reservoir over the warm-up pair's inputs followed by the
    /// last row of its target, then reads out the row after that.
    RowVector predict(const SequencePair& warmup) const;

    /// States after each row of `inputs`, starting from `initial` (R entries).
    Matrix run(const Matrix& inputs, const Vector& initial) const;

    /// Lazily draws the weights for `series` inputs; fit does this automatically.
    void initialize(Eigen::Index series);

    const Matrix& input_weights() const noexcept { return input_weights_; }
    const Matrix& recurrent_weights() const noexcept { return recurrent_weights_; }
    const RidgeSolution& readout() const noexcept { return readout_; }
    bool fitted() const noexcept { return fitted_; }

private:
    Vector step(const Vector& state, const Eigen::Ref<const RowVector>& input) const;
    RowVector read(const Vector& state, const Eigen::Ref<const RowVector>& input) const;

    EsnParams params_;
    Matrix input_weights_;     ///< R x (N + 1), bias column first
    Matrix recurrent_weights_; ///< R x R
    RidgeSolution readout_;
    bool fitted_ = false;
};

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& m);

} // namespace mtsf
