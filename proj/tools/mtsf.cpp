// mtsf: dataset preparation, fold-plan inspection, tuning, benchmarking and
// report rendering for single-step multiple time series forecasting.
//
// Exit codes: 0 success, 1 usage/config error, 2 I/O or data error,
// 3 model failure (bench: at least one report cell failed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mtsf/dataset.hpp"
#include "mtsf/forecast_family.hpp"
#include "mtsf/harness.hpp"
#include "mtsf/recipe.hpp"
#include "mtsf/report.hpp"
#include "mtsf/rolling_cv.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kModel = 3 };

int prepare(const std::string& recipe_path, const std::string& out_path) {
    const auto recipe = mtsf::load_recipe(recipe_path);
    const auto data = mtsf::prepare_dataset(recipe);
    mtsf::write_csv(data, out_path);
    std::cout << data.cols() << " series \xC3\x97 " << data.rows() << " rows\n";
    return kOk;
}

int plan(const std::string& scheme_name, std::size_t length, std::optional<std::size_t> train,
         std::optional<double> fraction, std::optional<std::size_t> window, bool fixed) {
    const auto scheme = mtsf::parse_scheme(scheme_name);
    mtsf::SplitConfig cfg;
    if (train) {
        cfg = mtsf::SplitConfig{length, *train, window};
    } else {
        cfg = mtsf::SplitConfig::from_fraction(length, fraction.value_or(0.8), window);
    }
    const auto p = mtsf::make_plan(scheme, cfg, fixed ? mtsf::StackMode::Fixed : mtsf::StackMode::Rolling);
    std::cout << p.dump();
    return kOk;
}

struct TuneArgs {
    std::string recipe;
    std::string csv;
    std::string timestamp_column;
    std::string family;
    std::string grid_file;
    std::size_t length = 40;
    std::size_t start = 1;
    double fraction = 0.8;
    std::uint64_t seed = 0;
    bool fixed = false;
};

int tune(const TuneArgs& a) {
    mtsf::DatasetSpec spec;
    spec.name = "data";
    if (!a.recipe.empty()) {
        spec.recipe = a.recipe;
    } else {
        spec.csv = a.csv;
        if (!a.timestamp_column.empty()) {
            spec.schema.timestamp_column = a.timestamp_column;
        }
    }
    const auto data = mtsf::load_dataset(spec);
    const auto family = mtsf::make_family(a.family);
    mtsf::HyperGrid grid = family->default_grid();
    if (!a.grid_file.empty()) {
        std::ifstream in(a.grid_file);
        if (!in) {
            throw mtsf::IoError("cannot open grid file '" + a.grid_file + "'");
        }
        try {
            grid = mtsf::HyperGrid::from_json(mtsf::Json::parse(in), "grid");
        } catch (const mtsf::Json::parse_error& e) {
            throw mtsf::ConfigError(std::string("grid: ") + e.what());
        }
    }
    const auto window = mtsf::slice_window(data, a.start, a.length);
    const auto scaled = mtsf::apply_scaler(window.values(), mtsf::fit_scaler(window.values()));
    const auto cfg = mtsf::SplitConfig::from_fraction(a.length, a.fraction);
    const auto result = mtsf::grid_search(
        *family, grid, scaled, cfg,
        mtsf::TuningOptions{a.fixed ? mtsf::StackMode::Fixed : mtsf::StackMode::Rolling, a.seed});

    std::cout << "# " << family->name() << " scheme=" << mtsf::to_string(family->scheme()) << " rows "
              << window.origin_index() << ".." << window.origin_index() + a.length - 1 << " L=" << cfg.length
              << " L_tr=" << cfg.train_length << " L_v=" << cfg.validation_length() << '\n';
    for (std::size_t g = 0; g < result.assignments.size(); ++g) {
        char err[32];
        std::snprintf(err, sizeof(err), "%.6f", result.mean_errors[g]);
        std::cout << (g == result.best_index ? "* " : "  ") << err << "  " << result.assignments[g].str() << '\n';
    }
    std::cout << "best: " << result.best_assignment().str() << '\n';
    return kOk;
}

int bench(const std::string& config_path, const std::string& out_dir, std::size_t threads,
          std::optional<std::uint64_t> seed) {
    auto cfg = mtsf::load_experiment_config(config_path);
    if (seed) {
        cfg.seed = *seed;
    }
    const auto report = mtsf::run_benchmark(cfg, mtsf::BenchmarkOptions{threads});
    const auto files = mtsf::write_report(report, out_dir);
    std::cout << mtsf::format_report_table(report);
    std::cerr << "wrote " << files.csv.string() << ", " << files.json.string() << ", " << files.table.string()
              << '\n';
    return report.partial() ? kModel : kOk;
}

int report(const std::string& detail, const std::string& out_dir) {
    const auto r = mtsf::read_report(detail);
    if (!out_dir.empty()) {
        mtsf::write_report(r, out_dir);
    }
    std::cout << mtsf::format_report_table(r);
    return r.partial() ? kModel : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-step forecasting of many short co-observed time series"};
    app.require_subcommand(1, 1);

    std::string recipe_path;
    std::string out_path;
    auto* prep = app.add_subcommand("prepare", "Prepare a wide CSV dataset from a recipe");
    prep->add_option("--recipe", recipe_path, "Preparation recipe (JSON)")->required();
    prep->add_option("--out", out_path, "Output CSV path")->required();

    std::string scheme;
    std::size_t length = 0;
    std::optional<std::size_t> train;
    std::optional<double> fraction;
    std::optional<std::size_t> window;
    bool fixed = false;
    auto* pl = app.add_subcommand("plan", "Print the fold plan of a rolling-window scheme");
    pl->add_option("--scheme", scheme, "matrix-pairs | matrix-full-window | multidim-window | matrix-list")
        ->required();
    pl->add_option("--length,-L", length, "Total window length L")->required();
    auto* train_opt = pl->add_option("--train", train, "Training length L_tr");
    pl->add_option("--train-fraction", fraction, "L_tr = floor(fraction * L), default 0.8")->excludes(train_opt);
    pl->add_option("--window,-S", window, "Inner window length S (window schemes)");
    pl->add_flag("--fixed-stack", fixed, "Keep the training stack of rows 1..L_tr for every fold");

    TuneArgs ta;
    auto* tu = app.add_subcommand("tune", "Grid-search one model family on one window of a dataset");
    auto* tu_recipe = tu->add_option("--recipe", ta.recipe, "Preparation recipe (JSON)");
    auto* tu_csv = tu->add_option("--csv", ta.csv, "Wide CSV file");
    tu_recipe->excludes(tu_csv);
    tu->add_option("--timestamp-column", ta.timestamp_column, "Timestamp column of --csv");
    tu->add_option("--family", ta.family, "Model family")->required();
    tu->add_option("--grid", ta.grid_file, "Grid JSON file (defaults to the family's grid)");
    tu->add_option("--length,-L", ta.length, "History length L")->capture_default_str();
    tu->add_option("--start", ta.start, "1-based first row of the window")->capture_default_str();
    tu->add_option("--train-fraction", ta.fraction, "Training share of L")->capture_default_str();
    tu->add_option("--seed", ta.seed, "Root seed")->capture_default_str();
    tu->add_flag("--fixed-stack", ta.fixed, "Keep the training stack of rows 1..L_tr for every fold");

    std::string config_path;
    std::string bench_out;
    std::size_t threads = 1;
    std::optional<std::uint64_t> seed;
    auto* be = app.add_subcommand("bench", "Run a Monte-Carlo benchmark from an experiment config");
    be->add_option("--config", config_path, "Experiment config (JSON)")->required();
    be->add_option("--out", bench_out, "Output directory")->required();
    be->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    be->add_option("--seed", seed, "Override the config's root seed");

    std::string detail;
    std::string report_out;
    auto* re = app.add_subcommand("report", "Re-render a report from its JSON detail file");
    re->add_option("--detail", detail, "report.json written by bench")->required();
    re->add_option("--out", report_out, "Directory for regenerated report files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*prep) {
            return prepare(recipe_path, out_path);
        }
        if (*pl) {
            return plan(scheme, length, train, fraction, window, fixed);
        }
        if (*tu) {
            if (ta.recipe.empty() == ta.csv.empty()) {
                std::cerr << "tune: exactly one of --recipe or --csv is required\n";
                return kUsage;
            }
            return tune(ta);
        }
        if (*be) {
            return bench(config_path, bench_out, threads, seed);
        }
        if (*re) {
            return report(detail, report_out);
        }
    } catch (const mtsf::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const mtsf::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const mtsf::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const mtsf::ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kModel;
    }
    return kUsage;
}
