#include "mtsf/models/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mtsf/lag_embedding.hpp"
#include "mtsf/seed.hpp"

namespace mtsf {

namespace {

// Uniform index in [0, n) from the top 53 bits; identical on every standard library.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::min(static_cast<std::size_t>(u * static_cast<double>(n)), n - 1);
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = -1.0;
    std::size_t left_count = 0;
};

} // namespace

void RegressionTree::fit(const Matrix& X, const Vector& y, std::vector<Eigen::Index> samples,
                         const TreeOptions& options, std::uint64_t seed) {
    if (samples.empty()) {
        throw ModelError("regression tree: no training samples");
    }
    if (options.min_leaf < 1) {
        throw ConfigError("regression tree: min_leaf must be at least 1");
    }
    nodes_.clear();
    depth_ = 0;
    std::mt19937_64 rng(seed);

    const auto n_features = static_cast<std::size_t>(X.cols());
    const auto mtry = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(options.feature_fraction * static_cast<double>(n_features))), 1,
        n_features);
    std::vector<std::size_t> features(n_features);
    std::iota(features.begin(), features.end(), 0);

    struct Task {
        int node;
        std::size_t begin;
        std::size_t end;
        std::size_t depth;
    };
    std::vector<Task> stack;
    nodes_.emplace_back();
    stack.push_back({0, 0, samples.size(), 0});
    std::vector<Eigen::Index> order;

    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        depth_ = std::max(depth_, task.depth);
        const std::size_t count = task.end - task.begin;
        const auto first = samples.begin() + static_cast<std::ptrdiff_t>(task.begin);
        const auto last = samples.begin() + static_cast<std::ptrdiff_t>(task.end);

        double sum = 0.0;
        double lo = y(*first);
        double hi = lo;
        for (auto it = first; it != last; ++it) {
            sum += y(*it);
            lo = std::min(lo, y(*it));
            hi = std::max(hi, y(*it));
        }
        nodes_[static_cast<std::size_t>(task.node)].value = sum / static_cast<double>(count);

        const bool depth_exhausted = options.max_depth && task.depth >= *options.max_depth;
        if (depth_exhausted || count < 2 * options.min_leaf || lo == hi) {
            continue;
        }

        // Partial Fisher-Yates: the first mtry entries become this node's candidate features.
        for (std::size_t i = 0; i < mtry; ++i) {
            std::swap(features[i], features[i + uniform_index(rng, n_features - i)]);
        }

        Split best;
        for (std::size_t fi = 0; fi < mtry; ++fi) {
            const auto f = static_cast<Eigen::Index>(features[fi]);
            order.assign(first, last);
            std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return X(a, f) < X(b, f) || (X(a, f) == X(b, f) && a < b);
            });
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < count; ++i) {
                left_sum += y(order[i]);
                const std::size_t nl = i + 1;
                const std::size_t nr = count - nl;
                const double xa = X(order[i], f);
                const double xb = X(order[i + 1], f);
                if (nl < options.min_leaf || nr < options.min_leaf || !(xa < xb)) {
                    continue;
                }
                const double right_sum = sum - left_sum;
                const double score =
                    left_sum * left_sum / static_cast<double>(nl) + right_sum * right_sum / static_cast<double>(nr);
                if (score > best.score) {
                    double mid = 0.5 * (xa + xb);
                    if (!(mid < xb)) {
                        mid = xa;
                    }
                    best = Split{static_cast<int>(f), mid, score, nl};
                }
            }
        }
        if (best.feature < 0) {
            continue;
        }

        const auto f = static_cast<Eigen::Index>(best.feature);
        const auto mid = std::stable_partition(first, last, [&](Eigen::Index s) { return X(s, f) <= best.threshold; });
        const auto split_at = task.begin + static_cast<std::size_t>(mid - first);

        const int left = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const int right = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        auto& node = nodes_[static_cast<std::size_t>(task.node)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        stack.push_back({right, split_at, task.end, task.depth + 1});
        stack.push_back({left, task.begin, split_at, task.depth + 1});
    }
}

double RegressionTree::predict(const Eigen::Ref<const RowVector>& x) const {
    if (nodes_.empty()) {
        throw ModelError("regression tree: predict called before fit");
    }
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        i = static_cast<std::size_t>(x(nodes_[i].feature) <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right);
    }
    return nodes_[i].value;
}

RandomForest::RandomForest(RandomForestParams params) : params_(params) {
    if (params_.trees < 1) {
        throw ConfigError("random forest: needs at least one tree");
    }
    if (params_.lags < 1) {
        throw ConfigError("random forest: lag order must be at least 1");
    }
    if (params_.min_leaf < 1) {
        throw ConfigError("random forest: min_leaf must be at least 1");
    }
    if (!(params_.feature_fraction > 0.0 && params_.feature_fraction <= 1.0)) {
        throw ConfigError("random forest: feature fraction must lie in (0, 1]");
    }
}

std::vector<RegressionTree> RandomForest::grow(const Matrix& X, const Vector& y, std::uint64_t seed) const {
    if (!X.allFinite() || !y.allFinite()) {
        throw ModelError("random forest: non-finite training data");
    }
    const auto n = static_cast<std::size_t>(X.rows());
    if (n < 2 && params_.bootstrap) {
        throw ModelError("random forest: bootstrap needs at least 2 training samples");
    }
    const TreeOptions options{params_.max_depth, params_.min_leaf, params_.feature_fraction};
    std::vector<RegressionTree> trees(params_.trees);
    std::vector<Eigen::Index> samples(n);
    for (std::size_t t = 0; t < params_.trees; ++t) {
        const std::uint64_t tree_seed = derive_seed(seed, {t});
        if (params_.bootstrap) {
            std::mt19937_64 rng(derive_seed(tree_seed, {0xB007}));
            for (auto& s : samples) {
                s = static_cast<Eigen::Index>(uniform_index(rng, n));
            }
        } else {
            std::iota(samples.begin(), samples.end(), Eigen::Index{0});
        }
        trees[t].fit(X, y, samples, options, tree_seed);
    }
    return trees;
}

void RandomForest::fit_samples(const Matrix& X, const Vector& y) {
    forests_.clear();
    forests_.push_back(grow(X, y, params_.seed));
}

double RandomForest::predict_sample(const Eigen::Ref<const RowVector>& x) const {
    if (!fitted()) {
        throw ModelError("random forest: predict called before fit");
    }
    double total = 0.0;
    for (const auto& tree : forests_.front()) {
        total += tree.predict(x);
    }
    return total / static_cast<double>(forests_.front().size());
}

void RandomForest::fit(const Matrix& history) {
    forests_.clear();
    if (params_.pooling == Pooling::Global) {
        const auto samples = build_lag_samples(history, params_.lags);
        forests_.push_back(grow(samples.features, samples.targets, params_.seed));
    } else {
        for (Eigen::Index n = 0; n < history.cols(); ++n) {
            const auto samples = build_lag_samples(history, params_.lags, n);
            forests_.push_back(grow(samples.features, samples.targets,
                                    derive_seed(params_.seed, {0x5E41E5, static_cast<std::uint64_t>(n)})));
        }
    }
}

RowVector RandomForest::predict(const Matrix& history) const {
    if (!fitted()) {
        throw ModelError("random forest: predict called before fit");
    }
    const Matrix inputs = lag_inputs(history, params_.lags);
    if (params_.pooling == Pooling::PerSeries && static_cast<std::size_t>(inputs.rows()) != forests_.size()) {
        throw ModelError("random forest: fitted on " + std::to_string(forests_.size()) + " series, got " +
                         std::to_string(inputs.rows()));
    }
    RowVector out(inputs.rows());
    for (Eigen::Index n = 0; n < inputs.rows(); ++n) {
        const auto& forest =
            params_.pooling == Pooling::Global ? forests_.front() : forests_[static_cast<std::size_t>(n)];
        double total = 0.0;
        for (const auto& tree : forest) {
            total += tree.predict(inputs.row(n));
        }
        out(n) = total / static_cast<double>(forest.size());
    }
    return out;
}

} // namespace mtsf
