#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "mtsf/forecast_family.hpp"
#include "mtsf/harness.hpp"
#include "mtsf/recipe.hpp"
#include "mtsf/report.hpp"
#include "mtsf/synthetic.hpp"

using namespace mtsf;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mtsf_unit_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

HyperGrid small_grid(const std::string& family) {
    if (family == "ridge_ar" || family == "ridge_ar_window") {
        return HyperGrid({{"p", {std::int64_t{1}, std::int64_t{2}}}, {"lambda", {0.1}}});
    }
    if (family == "linear_svr") {
        return HyperGrid({{"p", {std::int64_t{2}}}, {"C", {0.1}}, {"epsilon", {0.01}}});
    }
    if (family == "random_forest") {
        return HyperGrid({{"trees", {std::int64_t{5}}}, {"max_depth", {std::int64_t{4}}}, {"p", {std::int64_t{2}}}});
    }
    if (family == "window_ridge") {
        return HyperGrid({{"S", {std::int64_t{2}, std::int64_t{4}}}, {"lambda", {1.0}}});
    }
    if (family == "esn") {
        return HyperGrid({{"S", {std::int64_t{4}}}, {"R", {std::int64_t{20}}}, {"rho", {0.5, 0.9}}});
    }
    return {};
}

} // namespace

TEST_CASE("window sampling") {
    CHECK(sample_windows(101, 40, 1, 0) == std::vector<std::size_t>{1});
    CHECK(sample_windows(101, 100, 1, 0) == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(sample_windows(101, 100, 2, 0), ConfigError);
    CHECK_THROWS_AS(sample_windows(101, 101, 1, 0), ConfigError);

    const auto starts = sample_windows(1464, 90, 15, 0);
    REQUIRE(starts.size() == 15);
    CHECK(starts.front() == 1);
    CHECK(starts.back() == 1374);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        // nearest integer to the arithmetic progression from 1 to 1374
        const double exact = 1.0 + 1373.0 * static_cast<double>(i) / 14.0;
        CHECK(std::abs(static_cast<double>(starts[i]) - exact) <= 0.5);
    }

    const auto random = sample_windows(500, 40, 10, 3, WindowSampling::Random);
    CHECK(random == sample_windows(500, 40, 10, 3, WindowSampling::Random));
    CHECK(random != sample_windows(500, 40, 10, 4, WindowSampling::Random));
    CHECK(std::is_sorted(random.begin(), random.end()));
    CHECK(std::adjacent_find(random.begin(), random.end()) == random.end());
    CHECK(random.back() + 40 <= 500);
}

TEST_CASE("family registry") {
    for (const auto& name : family_names()) {
        const auto family = make_family(name);
        CHECK(family->name() == name);
        CHECK(family->default_grid().size() >= 1);
    }
    CHECK_THROWS_AS(make_family("lstm"), ConfigError);
}

TEST_CASE("every family forecasts a finite row without reading ahead") {
    const Matrix data = synthetic::seasonal_traffic(60, 4, 1).values();
    const Matrix scaled = (data.rowwise() - data.colwise().minCoeff()).array().rowwise() /
                          (data.colwise().maxCoeff() - data.colwise().minCoeff()).array();
    const SplitConfig cfg{40, 32, 4};
    for (const auto& name : family_names()) {
        const auto family = make_family(name);
        const auto theta = small_grid(name).at(0);
        const auto plan = make_plan(family->scheme(), SplitConfig{40, 32, window_for(theta, cfg)});
        const auto& fold = plan.folds.front();
        const RowVector out = family->forecast(scaled.topRows(static_cast<Eigen::Index>(fold.last_visible_row())),
                                               fold, theta, 7);
        CHECK(out.size() == 4);
        CHECK(out.allFinite());
        CHECK_THROWS_AS(family->forecast(scaled.topRows(40), fold, theta, 7), ModelError);
        // same seed, same forecast
        CHECK(family->forecast(scaled.topRows(static_cast<Eigen::Index>(fold.last_visible_row())), fold, theta, 7) ==
              out);
    }
}

TEST_CASE("single run") {
    SUBCASE("naive on a window whose test row repeats the last row scores zero") {
        Matrix w = synthetic::random_walk(41, 3, 2).values();
        w.row(40) = w.row(39);
        const auto naive = make_family("naive");
        const auto r = run_single(w, *naive, {}, {});
        CHECK(r.smape == 0.0);
        CHECK(r.maape == 0.0);
        CHECK(*r.mase == 0.0);
    }
    SUBCASE("naive on iid noise is clearly imperfect, on constants exact") {
        const auto naive = make_family("naive");
        const auto r = run_single(synthetic::iid_noise(41, 5, 3).values(), *naive, {}, {});
        CHECK(r.smape > 0.1);
        const auto c = run_single(Matrix::Constant(41, 2, 3.0), *naive, {}, {});
        CHECK(c.smape == 0.0);
        CHECK(*c.mase == 0.0);
    }
    SUBCASE("the test row never influences tuning") {
        const auto family = make_family("ridge_ar");
        const HyperGrid grid = family->default_grid();
        Matrix w = synthetic::seasonal_traffic(91, 5, 4).values();
        const auto base = run_single(w, *family, grid, {0.8, StackMode::Rolling, 5});
        w.row(90) *= 3.0;
        const auto perturbed = run_single(w, *family, grid, {0.8, StackMode::Rolling, 5});
        CHECK(perturbed.best == base.best);
        CHECK(perturbed.cv_error == base.cv_error);
        CHECK(perturbed.forecast == base.forecast);
        CHECK(perturbed.smape != base.smape);
    }
    CHECK_THROWS_AS(run_single(Matrix::Ones(3, 2), *make_family("naive"), {}, {}), ConfigError);
}

TEST_CASE("experiment config") {
    const auto cfg = parse_experiment_config(R"({
        "datasets": [{"name": "walk", "csv": "walk.csv", "timestamp_column": "t"}],
        "window_lengths": [40], "monte_carlo_runs": 3, "seed": 9,
        "models": ["naive", {"family": "ridge_ar", "label": "ar", "grid": {"p": [1, 2]}}]
    })", "/data");
    CHECK(cfg.datasets.front().csv == std::filesystem::path("/data/walk.csv"));
    CHECK(cfg.models.size() == 2);
    CHECK(cfg.models[0].grid.size() == make_family("naive")->default_grid().size());
    CHECK(cfg.models[1].label == "ar");
    CHECK(cfg.models[1].grid.size() == 2);
    CHECK(cfg.train_fraction == 0.8);
    CHECK(parse_experiment_config(cfg.to_json().dump()).to_json() == cfg.to_json());

    try {
        parse_experiment_config(R"({"datasets": [{"name": "x", "csv": "x.csv"}], "models": ["naive", {"family": "gru"}]})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("config.models[1].family") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_experiment_config(R"({"datasets": [], "models": ["naive"], "extra": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"datasets": [{"name": "x", "csv": "x.csv"}], "models": ["naive"],
                                                "monte_carlo_runs": 0})"),
                    ConfigError);
}

TEST_CASE("benchmark report") {
    const auto dir = scratch("bench");
    write_csv(synthetic::random_walk(120, 3, 12), dir / "walk.csv");
    std::ofstream(dir / "cfg.json") << R"({
        "datasets": [{"name": "walk", "csv": "walk.csv"}],
        "window_lengths": [40], "monte_carlo_runs": 3, "seed": 1,
        "models": ["naive", {"family": "ridge_ar", "grid": {"p": [1, 2], "lambda": [0.1]}}]
    })";
    const auto cfg = load_experiment_config(dir / "cfg.json");
    const auto report = run_benchmark(cfg);
    REQUIRE(report.cells.size() == 2);
    const auto* naive = report.find("walk", "naive", 40);
    REQUIRE(naive != nullptr);
    CHECK(naive->runs.size() == 3);
    CHECK_FALSE(report.partial());

    double sum = 0.0;
    for (const auto& r : naive->runs) {
        sum += r.smape;
    }
    CHECK(std::abs(*naive->mean_smape - sum / 3.0) <= 1e-12);

    SUBCASE("parallel execution reproduces sequential bytes") {
        const auto parallel = run_benchmark(cfg, {4});
        CHECK(report_to_json(parallel).dump() == report_to_json(report).dump());
        CHECK(format_report_csv(parallel) == format_report_csv(report));
    }
    SUBCASE("json round trip regenerates the means exactly") {
        const auto back = report_from_json(report_to_json(report));
        CHECK(report_to_json(back).dump() == report_to_json(report).dump());
        const auto files = write_report(report, dir / "out");
        CHECK(std::filesystem::exists(files.csv));
        CHECK(std::filesystem::exists(files.table));
        CHECK(report_to_json(read_report(files.json)).dump() == report_to_json(report).dump());
    }
    SUBCASE("mean is independent of run order") {
        auto cell = *naive;
        std::reverse(cell.runs.begin(), cell.runs.end());
        cell.aggregate();
        CHECK(std::abs(*cell.mean_smape - *naive->mean_smape) <= 1e-12);
    }
    SUBCASE("csv layout") {
        const auto csv = format_report_csv(report);
        CHECK(csv.rfind("dataset,model,window_length,metric,mean,runs,undefined_runs,status\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
    }
    SUBCASE("a different seed leaves fold plans and even window starts alone") {
        auto other = cfg;
        other.seed = 2;
        const auto again = run_benchmark(other);
        for (std::size_t r = 0; r < 3; ++r) {
            CHECK(again.cells[0].runs[r].start == report.cells[0].runs[r].start);
            // naive has no seeded parts
            CHECK(again.cells[0].runs[r].smape == report.cells[0].runs[r].smape);
        }
    }
    SUBCASE("a failing cell does not stop the others") {
        auto broken = cfg;
        broken.models.push_back({"bad_esn", "esn", HyperGrid({{"S", {std::int64_t{50}}}})});
        const auto partial = run_benchmark(broken);
        CHECK(partial.partial());
        CHECK(partial.find("walk", "bad_esn", 40)->failed);
        CHECK_FALSE(partial.find("walk", "naive", 40)->failed);
        CHECK(format_report_csv(partial).find("failed") != std::string::npos);
    }
}

TEST_CASE("shipped recipes and configs parse") {
    const std::filesystem::path root = MTSF_SOURCE_DIR;
    std::size_t recipes = 0;
    for (const auto& entry : std::filesystem::directory_iterator(root / "recipes")) {
        const auto recipe = load_recipe(entry.path());
        CHECK(recipe.source_path.is_absolute());
        ++recipes;
    }
    CHECK(recipes == 5);

    const auto full = load_experiment_config(root / "configs/full_protocol.json");
    CHECK(full.datasets.size() == 5);
    CHECK(full.models.size() == 7);
    CHECK(full.monte_carlo_runs == 15);

    const auto smoke = load_experiment_config(root / "configs/smoke.json");
    const auto data = load_dataset(smoke.datasets.at(0));
    CHECK(data.cols() == 12);
}
