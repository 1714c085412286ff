#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtsf/hyper_grid.hpp"
#include "mtsf/series_matrix.hpp"

namespace mtsf {

class ForecastFamily;

/// Rolling-window cross-validation schemes.
enum class Scheme {
    MatrixPairs,      ///< lag-embedded regressors trained on a sliding window of rows
    MatrixFullWindow, ///< models that consume the whole sliding window as one input
    MultiDimWindow,   ///< (S-row window -> next row) stacks for sequence regressors
    MatrixList,       ///< (S-row sequence -> shifted sequence) pairs for recurrent models
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);
bool scheme_uses_window(Scheme scheme);

/// Inclusive 1-based row range.
struct RowRange {
    std::size_t first = 1;
    std::size_t last = 1;

    std::size_t length() const noexcept { return last - first + 1; }
    RowRange shifted(std::size_t by) const noexcept { return {first + by, last + by}; }
    std::string str() const;
    bool operator==(const RowRange&) const = default;
};

/// Training input rows and, unless the model consumes the input window whole, the rows it learns to emit.
struct SamplePair {
    RowRange input;
    std::optional<RowRange> target;

    SamplePair shifted(std::size_t by) const;
    std::string str() const;
    bool operator==(const SamplePair&) const = default;
};

struct Fold {
    std::size_t index = 1; ///< 1-based fold number
    std::vector<SamplePair> training;
    /// Rows fed to the fitted model; for MatrixList the warm-up pair (input -> target sequence).
    SamplePair validation_input;
    /// Row whose values the forecast is compared against.
    std::size_t target_row = 0;

    /// Largest row the model may read while fitting or forecasting this fold.
    std::size_t last_visible_row() const noexcept { return target_row - 1; }
    bool operator==(const Fold&) const = default;
};

/// Window lengths of one cross-validation configuration: L = train_length + validation_length.
struct SplitConfig {
    std::size_t length = 0;       ///< L
    std::size_t train_length = 0; ///< L_tr
    std::optional<std::size_t> window; ///< S, required by the window schemes

    std::size_t validation_length() const noexcept { return length - train_length; }

    /// L_tr = floor(fraction * L).
    static SplitConfig from_fraction(std::size_t length, double train_fraction,
                                     std::optional<std::size_t> window = std::nullopt);

    /// Throws ConfigError unless the configuration is usable for `scheme`.
    void validate(Scheme scheme) const;
};

/// How the window schemes treat their training stack as folds advance.
enum class StackMode {
    Rolling, ///< translate every training pair forward with the fold
    Fixed,   ///< train every fold on the stack built from rows 1..L_tr
};

struct FoldPlan {
    Scheme scheme = Scheme::MatrixPairs;
    SplitConfig config;
    StackMode stack = StackMode::Rolling;
    std::vector<Fold> folds;

    /// One line per fold, 1-based inclusive ranges written first:last.
    std::string dump() const;
};

FoldPlan plan_matrix_pairs(const SplitConfig& cfg);
FoldPlan plan_matrix_full_window(const SplitConfig& cfg);
FoldPlan plan_multidim_window(const SplitConfig& cfg, StackMode stack = StackMode::Rolling);
FoldPlan plan_matrix_list(const SplitConfig& cfg, StackMode stack = StackMode::Rolling);
FoldPlan make_plan(Scheme scheme, const SplitConfig& cfg, StackMode stack = StackMode::Rolling);

/// Single fold that trains on rows 1..L and forecasts row L+1, with the
/// training material laid out the same way as the scheme's validation folds.
Fold final_fold(Scheme scheme, std::size_t history_length, std::optional<std::size_t> window);

struct TuningOptions {
    StackMode stack = StackMode::Rolling;
    std::uint64_t seed = 0;
};

struct TuningResult {
    std::vector<Assignment> assignments;
    std::vector<double> mean_errors;              ///< mean validation error per grid point
    std::vector<std::vector<double>> fold_errors; ///< per grid point, one error per fold
    std::size_t best_index = 0;

    const Assignment& best_assignment() const { return assignments.at(best_index); }
    double best_error() const { return mean_errors.at(best_index); }
};

/// Window length for a grid point: its "S" parameter if present, else cfg.window.
std::optional<std::size_t> window_for(const Assignment& theta, const SplitConfig& cfg);

/// Exhaustive grid search over `grid` using the family's rolling-window scheme on
/// scaled `data` (cfg.length rows). Every (grid point, fold) pair is a fresh fit
/// seeded from options.seed; mean errors within 1e-12 of each other tie, and
/// ties go to the earliest grid point.
TuningResult grid_search(const ForecastFamily& family, const HyperGrid& grid, const Matrix& data,
                         const SplitConfig& cfg, const TuningOptions& options = {});

} // namespace mtsf
