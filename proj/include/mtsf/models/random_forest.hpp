#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mtsf/models/pooling.hpp"
#include "mtsf/series_matrix.hpp"

namespace mtsf {

struct TreeOptions {
    std::optional<std::size_t> max_depth; ///< unset = grow until leaves are pure or too small
    std::size_t min_leaf = 1;
    double feature_fraction = 1.0; ///< share of features examined at each node
};

/// CART regression tree with variance-reduction splits.
class RegressionTree {
public:
    struct Node {
        int feature = -1; ///< -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    /// Grows the tree on the rows of X listed in `samples` (repeats allowed).
    void fit(const Matrix& X, const Vector& y, std::vector<Eigen::Index> samples, const TreeOptions& options,
             std::uint64_t seed);
    double predict(const Eigen::Ref<const RowVector>& x) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const noexcept { return depth_; }

private:
    std::vector<Node> nodes_;
    std::size_t depth_ = 0;
};

struct RandomForestParams {
    std::size_t trees = 100;
    std::optional<std::size_t> max_depth;
    std::size_t min_leaf = 1;
    double feature_fraction = 1.0;
    std::size_t lags = 1;
    bool bootstrap = true;
    Pooling pooling = Pooling::Global;
    std::uint64_t seed = 0;
};

/// Bagged regression trees on the lag embedding; the forecast is the mean over trees.
class RandomForest {
public:
    explicit RandomForest(RandomForestParams params);

    /// Fits directly on a design matrix (used by the lag-embedding fit and by tests).
    void fit_samples(const Matrix& X, const Vector& y);
    double predict_sample(const Eigen::Ref<const RowVector>& x) const;

    void fit(const Matrix& history);
    RowVector predict(const Matrix& history) const;

    bool fitted() const noexcept { return !forests_.empty(); }
    const std::vector<RegressionTree>& trees(std::size_t series = 0) const { return forests_.at(series); }

private:
    std::vector<RegressionTree> grow(const Matrix& X, const Vector& y, std::uint64_t seed) const;

    RandomForestParams params_;
    std::vector<std::vector<RegressionTree>> forests_;
};

} // namespace mtsf
