#pragma once

#include <cstddef>
#include <vector>

#include "mtsf/models/pooling.hpp"
#include "mtsf/ridge.hpp"

namespace mtsf {

struct RidgeArParams {
    std::size_t lags = 1;
    double lambda = 0.0;
    Pooling pooling = Pooling::Global;
};

/// Autoregressor on the lag embedding of every series: y[l] ~ w . y[l-p..l-1] + b.
class RidgeAutoregressor {
public:
    explicit RidgeAutoregressor(RidgeArParams params);

    void fit(const Matrix& history);
    /// Next-row forecast from the last p rows of `history`.
    RowVector predict(const Matrix& history) const;

    bool fitted() const noexcept { return !solutions_.empty(); }
    /// Fitted map; index selects the series when pooling is per-series.
    const RidgeSolution& solution(std::size_t series = 0) const { return solutions_.at(series); }
    const RidgeArParams& params() const noexcept { return params_; }

private:
    RidgeArParams params_;
    std::vector<RidgeSolution> solutions_;
};

} // namespace mtsf
