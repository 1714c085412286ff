#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtsf/dataset.hpp"
#include "mtsf/forecast_family.hpp"
#include "mtsf/hyper_grid.hpp"
#include "mtsf/recipe.hpp"
#include "mtsf/rolling_cv.hpp"

namespace mtsf {

enum class WindowSampling {
    Even,   ///< deterministic, evenly spaced starts
    Random, ///< seeded uniform draws without replacement (sorted)
};

struct DatasetSpec {
    std::string name;
    /// Exactly one of recipe / csv is set.
    std::optional<std::filesystem::path> recipe;
    std::optional<std::filesystem::path> csv;
    CsvSchema schema; ///< used with `csv`
};

struct ModelSpec {
    std::string label;  ///< report name, defaults to the family name
    std::string family;
    HyperGrid grid;
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<std::size_t> window_lengths{40, 90};
    double train_fraction = 0.8;
    std::size_t monte_carlo_runs = 15;
    std::uint64_t seed = 0;
    WindowSampling sampling = WindowSampling::Even;
    StackMode stack = StackMode::Rolling;
    std::vector<ModelSpec> models;

    /// Canonical JSON form; parsing it back yields an equal configuration.
    Json to_json() const;
};

/// Parses an experiment document. Relative dataset paths resolve against `base_dir`.
/// Errors carry the JSON key path, e.g. "config.models[2].grid.p".
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SeriesMatrix load_dataset(const DatasetSpec& spec);

/// K distinct 1-based window starts such that rows [start, start + L] fit in
/// `dataset_length` rows. Even mode spaces them from 1 to dataset_length - L.
std::vector<std::size_t> sample_windows(std::size_t dataset_length, std::size_t window, std::size_t runs,
                                        std::uint64_t seed, WindowSampling mode = WindowSampling::Even);

struct RunSettings {
    double train_fraction = 0.8;
    StackMode stack = StackMode::Rolling;
    std::uint64_t seed = 0;
};

/// Outcome of one model on one Monte-Carlo window, metrics in scaled space.
struct RunRecord {
    std::size_t run = 0;   ///< 1-based
    std::size_t start = 0; ///< 1-based first history row in the dataset
    Assignment best;
    double cv_error = 0.0;
    RowVector forecast;
    double smape = 0.0;
    double maape = 0.0;
    std::optional<double> mase; ///< unset when every series has a flat history
};

/// Tunes `family` on the first L rows of `window` (L + 1 rows), refits on all
/// L rows with the best assignment and scores the forecast of row L + 1.
/// The scaler is fitted on rows 1..L only.
RunRecord run_single(const Matrix& window, const ForecastFamily& family, const HyperGrid& grid,
                     const RunSettings& settings);

struct ReportCell {
    std::string dataset;
    std::string model;
    std::size_t window_length = 0;
    std::vector<RunRecord> runs;
    bool failed = false;
    std::string error;

    std::optional<double> mean_smape;
    std::optional<double> mean_maape;
    std::optional<double> mean_mase;
    std::size_t mase_undefined_runs = 0;

    /// Recomputes the means from `runs` (sums in run-index order).
    void aggregate();
};

struct BenchmarkReport {
    Json config;
    std::uint64_t seed = 0;
    std::vector<ReportCell> cells;

    bool partial() const;
    const ReportCell* find(const std::string& dataset, const std::string& model, std::size_t window_length) const;
};

struct BenchmarkOptions {
    std::size_t threads = 1;
};

/// Runs the dataset x model x window length x run product. Units execute in
/// parallel on `threads` workers; results are assembled in cell-key order so
/// the report does not depend on the thread count. A failing unit marks its
/// cell failed without stopping the others.
BenchmarkReport run_benchmark(const ExperimentConfig& cfg, const BenchmarkOptions& options = {});

} // namespace mtsf
