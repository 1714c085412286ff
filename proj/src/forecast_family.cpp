#include "mtsf/forecast_family.hpp"

#include <functional>
#include <map>

#include "mtsf/error.hpp"
#include "mtsf/models/echo_state_network.hpp"
#include "mtsf/models/linear_svr.hpp"
#include "mtsf/models/naive.hpp"
#include "mtsf/models/random_forest.hpp"
#include "mtsf/models/ridge_ar.hpp"
#include "mtsf/models/window_regressor.hpp"

namespace mtsf {

Matrix rows_of(const Matrix& data, const RowRange& range) {
    if (range.first < 1 || range.last < range.first || range.last > static_cast<std::size_t>(data.rows())) {
        throw ModelError("rows " + range.str() + " outside the visible 1.." + std::to_string(data.rows()));
    }
    return data.middleRows(static_cast<Eigen::Index>(range.first - 1), static_cast<Eigen::Index>(range.length()));
}

RowVector ForecastFamily::forecast(const Matrix& data, const Fold& fold, const Assignment& theta,
                                   std::uint64_t seed) const {
    if (static_cast<std::size_t>(data.rows()) > fold.last_visible_row()) {
        throw ModelError(name() + ": data extends past row " + std::to_string(fold.last_visible_row()) +
                         " visible to fold " + std::to_string(fold.index));
    }
    RowVector out = fit_predict(data, fold, theta, seed);
    if (out.size() != data.cols()) {
        throw ModelError(name() + ": forecast has " + std::to_string(out.size()) + " entries, expected " +
                         std::to_string(data.cols()));
    }
    if (!out.allFinite()) {
        throw ModelError(name() + ": non-finite forecast");
    }
    return out;
}

namespace {

std::size_t positive(const Assignment& theta, const std::string& key, std::int64_t fallback) {
    const auto v = theta.get_int(key, fallback);
    if (v < 1) {
        throw ConfigError("hyper-parameter '" + key + "' must be positive, got " + std::to_string(v));
    }
    return static_cast<std::size_t>(v);
}

// Rows spanned by a lag-embedding fold: training input through training target.
RowRange lag_training_rows(const Fold& fold) {
    const auto& pair = fold.training.front();
    return RowRange{pair.input.first, pair.target ? pair.target->last : pair.input.last};
}

GridAxis axis(std::string name, std::vector<ParamValue> values) {
    return GridAxis{std::move(name), std::move(values)};
}

class NaiveFamily final : public ForecastFamily {
public:
    std::string name() const override { return "naive"; }
    Scheme scheme() const override { return Scheme::MatrixPairs; }
    HyperGrid default_grid() const override { return HyperGrid{}; }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment&, std::uint64_t) const override {
        return naive_last(rows_of(data, fold.validation_input.input));
    }
};

class RidgeArFamily final : public ForecastFamily {
public:
    explicit RidgeArFamily(Scheme scheme) : scheme_(scheme) {}
    std::string name() const override { return scheme_ == Scheme::MatrixPairs ? "ridge_ar" : "ridge_ar_window"; }
    Scheme scheme() const override { return scheme_; }
    HyperGrid default_grid() const override {
        return HyperGrid({axis("p", {std::int64_t{1}, std::int64_t{2}, std::int64_t{4}, std::int64_t{8}}),
                          axis("lambda", {1e-3, 1e-1, 10.0})});
    }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                          std::uint64_t) const override {
        RidgeAutoregressor model({positive(theta, "p", 1), theta.get_real("lambda", 0.0),
                                  parse_pooling(theta.get_string("pooling", "global"))});
        model.fit(rows_of(data, lag_training_rows(fold)));
        return model.predict(rows_of(data, fold.validation_input.input));
    }

private:
    Scheme scheme_;
};

class LinearSvrFamily final : public ForecastFamily {
public:
    std::string name() const override { return "linear_svr"; }
    Scheme scheme() const override { return Scheme::MatrixPairs; }
    HyperGrid default_grid() const override {
        return HyperGrid({axis("p", {std::int64_t{1}, std::int64_t{2}, std::int64_t{4}}), axis("C", {0.1, 1.0}),
                          axis("epsilon", {0.0, 0.01})});
    }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                          std::uint64_t) const override {
        LinearSvrParams params;
        params.lags = positive(theta, "p", 1);
        params.C = theta.get_real("C", 1.0);
        params.epsilon = theta.get_real("epsilon", 0.0);
        params.pooling = parse_pooling(theta.get_string("pooling", "global"));
        LinearSvr model(params);
        model.fit(rows_of(data, lag_training_rows(fold)));
        return model.predict(rows_of(data, fold.validation_input.input));
    }
};

class RandomForestFamily final : public ForecastFamily {
public:
    std::string name() const override { return "random_forest"; }
    Scheme scheme() const override { return Scheme::MatrixPairs; }
    HyperGrid default_grid() const override {
        return HyperGrid({axis("trees", {std::int64_t{30}}), axis("max_depth", {std::int64_t{6}, std::int64_t{10}}),
                          axis("min_leaf", {std::int64_t{5}}), axis("feature_frac", {1.0}),
                          axis("p", {std::int64_t{2}, std::int64_t{4}})});
    }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                          std::uint64_t seed) const override {
        RandomForestParams params;
        params.trees = positive(theta, "trees", 100);
        const auto depth = theta.get_int("max_depth", -1);
        if (depth >= 0) {
            params.max_depth = static_cast<std::size_t>(depth);
        }
        params.min_leaf = positive(theta, "min_leaf", 1);
        params.feature_fraction = theta.get_real("feature_frac", 1.0);
        params.lags = positive(theta, "p", 1);
        params.bootstrap = theta.get_string("bootstrap", "true") == "true";
        params.pooling = parse_pooling(theta.get_string("pooling", "global"));
        params.seed = seed;
        RandomForest model(params);
        model.fit(rows_of(data, lag_training_rows(fold)));
        return model.predict(rows_of(data, fold.validation_input.input));
    }
};

class WindowRidgeFamily final : public ForecastFamily {
public:
    std::string name() const override { return "window_ridge"; }
    Scheme scheme() const override { return Scheme::MultiDimWindow; }
    HyperGrid default_grid() const override {
        return HyperGrid({axis("S", {std::int64_t{2}, std::int64_t{4}, std::int64_t{8}}),
                          axis("lambda", {0.1, 1.0, 10.0})});
    }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                          std::uint64_t) const override {
        WindowStack stack;
        stack.targets.resize(static_cast<Eigen::Index>(fold.training.size()), data.cols());
        for (std::size_t i = 0; i < fold.training.size(); ++i) {
            stack.windows.push_back(rows_of(data, fold.training[i].input));
            stack.targets.row(static_cast<Eigen::Index>(i)) = rows_of(data, *fold.training[i].target);
        }
        WindowRegressor model(theta.get_real("lambda", 1.0));
        model.fit(stack);
        return model.predict(rows_of(data, fold.validation_input.input));
    }
};

class EsnFamily final : public ForecastFamily {
public:
    std::string name() const override { return "esn"; }
    Scheme scheme() const override { return Scheme::MatrixList; }
    HyperGrid default_grid() const override {
        return HyperGrid({axis("S", {std::int64_t{8}, std::int64_t{16}}), axis("R", {std::int64_t{100}}),
                          axis("rho", {0.5, 0.9}), axis("alpha", {0.5, 1.0}), axis("lambda", {1e-2, 1.0}),
                          axis("input_scaling", {0.1})});
    }

protected:
    RowVector fit_predict(const Matrix& data, const Fold& fold, const Assignment& theta,
                          std::uint64_t seed) const override {
        EsnParams params;
        params.reservoir = positive(theta, "R", 100);
        params.spectral_radius = theta.get_real("rho", 0.9);
        params.leak_rate = theta.get_real("alpha", 1.0);
        params.lambda = theta.get_real("lambda", 1e-6);
        params.input_scaling = theta.get_real("input_scaling", 1.0);
        params.seed = seed;
        std::vector<SequencePair> pairs;
        pairs.reserve(fold.training.size());
        for (const auto& p : fold.training) {
            pairs.push_back({rows_of(data, p.input), rows_of(data, *p.target)});
        }
        EchoStateNetwork model(params);
        model.fit(pairs);
        return model.predict(
            {rows_of(data, fold.validation_input.input), rows_of(data, *fold.validation_input.target)});
    }
};

using Maker = std::function<std::unique_ptr<ForecastFamily>()>;

const std::map<std::string, Maker>& registry() {
    static const std::map<std::string, Maker> families = {
        {"naive", [] { return std::make_unique<NaiveFamily>(); }},
        {"ridge_ar", [] { return std::make_unique<RidgeArFamily>(Scheme::MatrixPairs); }},
        {"ridge_ar_window", [] { return std::make_unique<RidgeArFamily>(Scheme::MatrixFullWindow); }},
        {"linear_svr", [] { return std::make_unique<LinearSvrFamily>(); }},
        {"random_forest", [] { return std::make_unique<RandomForestFamily>(); }},
        {"window_ridge", [] { return std::make_unique<WindowRidgeFamily>(); }},
        {"esn", [] { return std::make_unique<EsnFamily>(); }},
    };
    return families;
}

} // namespace

std::unique_ptr<ForecastFamily> make_family(const std::string& name) {
    const auto& families = registry();
    auto it = families.find(name);
    if (it == families.end()) {
        std::string known;
        for (const auto& [k, v] : families) {
            known += (known.empty() ? "" : ", ") + k;
        }
        throw ConfigError("unknown model family '" + name + "' (known: " + known + ")");
    }
    return it->second();
}

std::vector<std::string> family_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) {
        out.push_back(k);
    }
    return out;
}

} // namespace mtsf
