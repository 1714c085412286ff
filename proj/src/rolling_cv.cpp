#include "mtsf/rolling_cv.hpp"

#include <cmath>
#include <sstream>

#include "mtsf/error.hpp"
#include "mtsf/forecast_family.hpp"
#include "mtsf/metrics.hpp"
#include "mtsf/seed.hpp"

namespace mtsf {

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::MatrixPairs:
        return "matrix-pairs";
    case Scheme::MatrixFullWindow:
        return "matrix-full-window";
    case Scheme::MultiDimWindow:
        return "multidim-window";
    case Scheme::MatrixList:
        return "matrix-list";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "matrix-pairs" || name == "matrix") {
        return Scheme::MatrixPairs;
    }
    if (name == "matrix-full-window" || name == "full-window") {
        return Scheme::MatrixFullWindow;
    }
    if (name == "multidim-window" || name == "multidim") {
        return Scheme::MultiDimWindow;
    }
    if (name == "matrix-list" || name == "list") {
        return Scheme::MatrixList;
    }
    throw ConfigError("unknown scheme '" + name +
                      "' (expected matrix-pairs, matrix-full-window, multidim-window or matrix-list)");
}

bool scheme_uses_window(Scheme scheme) {
    return scheme == Scheme::MultiDimWindow || scheme == Scheme::MatrixList;
}

std::string RowRange::str() const {
    return first == last ? std::to_string(first) : std::to_string(first) + ":" + std::to_string(last);
}

SamplePair SamplePair::shifted(std::size_t by) const {
    SamplePair out{input.shifted(by), std::nullopt};
    if (target) {
        out.target = target->shifted(by);
    }
    return out;
}

std::string SamplePair::str() const {
    return target ? input.str() + "->" + target->str() : input.str();
}

SplitConfig SplitConfig::from_fraction(std::size_t length, double train_fraction, std::optional<std::size_t> window) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie in (0, 1)");
    }
    // The epsilon keeps products such as 0.8 * 90 from landing one below the integer.
    const auto train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(length) + 1e-9));
    return SplitConfig{length, train, window};
}

void SplitConfig::validate(Scheme scheme) const {
    const std::string tag = "split L=" + std::to_string(length) + " L_tr=" + std::to_string(train_length);
    if (train_length >= length) {
        throw ConfigError(tag + ": validation length L - L_tr must be at least 1");
    }
    if (train_length < 1) {
        throw ConfigError(tag + ": training length must be at least 1");
    }
    switch (scheme) {
    case Scheme::MatrixPairs:
        if (train_length < 2) {
            throw ConfigError(tag + ": matrix-pairs needs L_tr >= 2 (training input rows 1..L_tr-1)");
        }
        break;
    case Scheme::MatrixFullWindow:
        break;
    case Scheme::MultiDimWindow:
    case Scheme::MatrixList:
        if (!window) {
            throw ConfigError(tag + ": scheme " + to_string(scheme) + " needs a window length S");
        }
        if (*window < 1 || *window >= train_length) {
            throw ConfigError(tag + ": window length S=" + std::to_string(*window) + " must satisfy 1 <= S < L_tr");
        }
        break;
    }
}

namespace {

FoldPlan translate_folds(Scheme scheme, const SplitConfig& cfg, StackMode stack, const Fold& first) {
    FoldPlan plan{scheme, cfg, stack, {}};
    for (std::size_t k = 1; k <= cfg.validation_length(); ++k) {
        const std::size_t by = k - 1;
        Fold fold;
        fold.index = k;
        if (stack == StackMode::Fixed) {
            fold.training = first.training;
        } else {
            for (const auto& pair : first.training) {
                fold.training.push_back(pair.shifted(by));
            }
        }
        fold.validation_input = first.validation_input.shifted(by);
        fold.target_row = first.target_row + by;
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

} // namespace

FoldPlan plan_matrix_pairs(const SplitConfig& cfg) {
    cfg.validate(Scheme::MatrixPairs);
    const auto tr = cfg.train_length;
    Fold first;
    first.training = {SamplePair{{1, tr - 1}, RowRange{tr, tr}}};
    first.validation_input = SamplePair{{1, tr}, std::nullopt};
    first.target_row = tr + 1;
    return translate_folds(Scheme::MatrixPairs, cfg, StackMode::Rolling, first);
}

FoldPlan plan_matrix_full_window(const SplitConfig& cfg) {
    cfg.validate(Scheme::MatrixFullWindow);
    const auto tr = cfg.train_length;
    Fold first;
    first.training = {SamplePair{{1, tr}, std::nullopt}};
    first.validation_input = SamplePair{{1, tr}, std::nullopt};
    first.target_row = tr + 1;
    return translate_folds(Scheme::MatrixFullWindow, cfg, StackMode::Rolling, first);
}

FoldPlan plan_multidim_window(const SplitConfig& cfg, StackMode stack) {
    cfg.validate(Scheme::MultiDimWindow);
    const auto tr = cfg.train_length;
    const auto s = *cfg.window;
    Fold first;
    for (std::size_t j = 1; j + s <= tr; ++j) {
        first.training.push_back(SamplePair{{j, j + s - 1}, RowRange{j + s, j + s}});
    }
    first.validation_input = SamplePair{{tr - s + 1, tr}, std::nullopt};
    first.target_row = tr + 1;
    return translate_folds(Scheme::MultiDimWindow, cfg, stack, first);
}

FoldPlan plan_matrix_list(const SplitConfig& cfg, StackMode stack) {
    cfg.validate(Scheme::MatrixList);
    const auto tr = cfg.train_length;
    const auto s = *cfg.window;
    Fold first;
    for (std::size_t j = 1; j + s <= tr; ++j) {
        first.training.push_back(SamplePair{{j, j + s - 1}, RowRange{j + 1, j + s}});
    }
    first.validation_input = SamplePair{{tr - s, tr - 1}, RowRange{tr - s + 1, tr}};
    first.target_row = tr + 1;
    return translate_folds(Scheme::MatrixList, cfg, stack, first);
}

FoldPlan make_plan(Scheme scheme, const SplitConfig& cfg, StackMode stack) {
    switch (scheme) {
    case Scheme::MatrixPairs:
        return plan_matrix_pairs(cfg);
    case Scheme::MatrixFullWindow:
        return plan_matrix_full_window(cfg);
    case Scheme::MultiDimWindow:
        return plan_multidim_window(cfg, stack);
    case Scheme::MatrixList:
        return plan_matrix_list(cfg, stack);
    }
    throw ConfigError("unknown scheme");
}

Fold final_fold(Scheme scheme, std::size_t history_length, std::optional<std::size_t> window) {
    return make_plan(scheme, SplitConfig{history_length + 1, history_length, window}).folds.front();
}

std::string FoldPlan::dump() const {
    std::ostringstream out;
    for (const auto& fold : folds) {
        out << "fold " << fold.index << " train ";
        for (std::size_t i = 0; i < fold.training.size(); ++i) {
            out << (i == 0 ? "" : ",") << fold.training[i].str();
        }
        out << (scheme == Scheme::MatrixList ? " warmup " : " input ") << fold.validation_input.str() << " target "
            << fold.target_row << '\n';
    }
    return out.str();
}

std::optional<std::size_t> window_for(const Assignment& theta, const SplitConfig& cfg) {
    if (theta.contains("S")) {
        const auto s = theta.get_int("S");
        if (s < 1) {
            throw ConfigError("window length S must be positive, got " + std::to_string(s));
        }
        return static_cast<std::size_t>(s);
    }
    return cfg.window;
}

namespace {
constexpr double kTieTolerance = 1e-12;
}

TuningResult grid_search(const ForecastFamily& family, const HyperGrid& grid, const Matrix& data,
                         const SplitConfig& cfg, const TuningOptions& options) {
    if (static_cast<std::size_t>(data.rows()) != cfg.length) {
        throw ConfigError("tuning data has " + std::to_string(data.rows()) + " rows, split expects L=" +
                          std::to_string(cfg.length));
    }
    TuningResult result;
    result.assignments = grid.enumerate();
    result.mean_errors.reserve(result.assignments.size());
    result.fold_errors.reserve(result.assignments.size());

    for (std::size_t g = 0; g < result.assignments.size(); ++g) {
        const Assignment& theta = result.assignments[g];
        SplitConfig point_cfg = cfg;
        point_cfg.window = window_for(theta, cfg);
        const FoldPlan plan = make_plan(family.scheme(), point_cfg, options.stack);

        std::vector<double> errors;
        errors.reserve(plan.folds.size());
        for (const Fold& fold : plan.folds) {
            const auto visible = static_cast<Eigen::Index>(fold.last_visible_row());
            RowVector predicted;
            try {
                predicted = family.forecast(data.topRows(visible), fold, theta,
                                            derive_seed(options.seed, {g, fold.index}));
            } catch (const Error& e) {
                throw ModelError(family.name() + " {" + theta.str() + "} fold " + std::to_string(fold.index) + ": " +
                                 e.what());
            }
            errors.push_back(cv_objective(data.row(visible), predicted));
        }
        double sum = 0.0;
        for (double e : errors) {
            sum += e;
        }
        result.mean_errors.push_back(sum / static_cast<double>(errors.size()));
        result.fold_errors.push_back(std::move(errors));
        // Means closer than rounding noise count as ties, which the earlier point wins.
        if (result.mean_errors.back() < result.mean_errors[result.best_index] - kTieTolerance) {
            result.best_index = g;
        }
    }
    return result;
}

} // namespace mtsf
