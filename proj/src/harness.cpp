#include "mtsf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mtsf/metrics.hpp"
#include "mtsf/seed.hpp"

namespace mtsf {

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (known.count(item.key()) == 0) {
            config_fail(where + "." + item.key(), "unknown key");
        }
    }
}

template <typename T>
T read(const Json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const Json::exception& e) {
        config_fail(where + "." + key, e.what());
    }
}

std::size_t read_positive(const Json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        config_fail(where + "." + key, "expected a positive integer, got " + v.dump());
    }
    return static_cast<std::size_t>(v.get<long long>());
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::string sampling_name(WindowSampling s) { return s == WindowSampling::Even ? "even" : "random"; }
std::string stack_name(StackMode s) { return s == StackMode::Rolling ? "rolling" : "fixed"; }

} // namespace

Json ExperimentConfig::to_json() const {
    Json j;
    auto ds = Json::array();
    for (const auto& d : datasets) {
        Json item;
        item["name"] = d.name;
        if (d.recipe) {
            item["recipe"] = d.recipe->generic_string();
        } else if (d.csv) {
            item["csv"] = d.csv->generic_string();
            if (d.schema.timestamp_column) {
                item["timestamp_column"] = *d.schema.timestamp_column;
            }
            if (!d.schema.value_columns.empty()) {
                item["value_columns"] = d.schema.value_columns;
            }
            item["missing_policy"] = to_string(d.schema.missing_policy);
            item["zero_is_missing"] = d.schema.zero_is_missing;
            if (!d.schema.resolution.empty()) {
                item["resolution"] = d.schema.resolution;
            }
        }
        ds.push_back(item);
    }
    j["datasets"] = ds;
    j["window_lengths"] = window_lengths;
    j["train_fraction"] = train_fraction;
    j["monte_carlo_runs"] = monte_carlo_runs;
    j["seed"] = seed;
    j["window_sampling"] = sampling_name(sampling);
    j["training_stack"] = stack_name(stack);
    auto ms = Json::array();
    for (const auto& m : models) {
        ms.push_back(Json{{"label", m.label}, {"family", m.family}, {"grid", m.grid.to_json()}});
    }
    j["models"] = ms;
    return j;
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        config_fail("config", e.what());
    }
    if (!doc.is_object()) {
        config_fail("config", "top level must be an object");
    }
    reject_unknown(doc,
                   {"datasets", "window_lengths", "train_fraction", "monte_carlo_runs", "seed", "window_sampling",
                    "training_stack", "models", "description"},
                   "config");

    ExperimentConfig cfg;
    if (!doc.contains("datasets") || !doc.at("datasets").is_array() || doc.at("datasets").empty()) {
        config_fail("config.datasets", "expected a non-empty array");
    }
    std::set<std::string> dataset_names;
    for (std::size_t i = 0; i < doc.at("datasets").size(); ++i) {
        const auto& d = doc.at("datasets")[i];
        const std::string where = "config.datasets[" + std::to_string(i) + "]";
        if (!d.is_object()) {
            config_fail(where, "expected an object");
        }
        reject_unknown(d,
                       {"name", "recipe", "csv", "timestamp_column", "value_columns", "missing_policy",
                        "zero_is_missing", "resolution"},
                       where);
        DatasetSpec spec;
        spec.name = read<std::string>(d, "name", where);
        if (!dataset_names.insert(spec.name).second) {
            config_fail(where + ".name", "duplicate dataset name '" + spec.name + "'");
        }
        if (d.contains("recipe") == d.contains("csv")) {
            config_fail(where, "exactly one of 'recipe' or 'csv' is required");
        }
        if (d.contains("recipe")) {
            spec.recipe = resolve(base_dir, read<std::string>(d, "recipe", where));
        } else {
            spec.csv = resolve(base_dir, read<std::string>(d, "csv", where));
            if (d.contains("timestamp_column")) {
                spec.schema.timestamp_column = read<std::string>(d, "timestamp_column", where);
            }
            if (d.contains("value_columns")) {
                spec.schema.value_columns = read<std::vector<std::string>>(d, "value_columns", where);
            }
            if (d.contains("missing_policy")) {
                try {
                    spec.schema.missing_policy = parse_missing_policy(read<std::string>(d, "missing_policy", where));
                } catch (const ConfigError& e) {
                    config_fail(where + ".missing_policy", e.what());
                }
            }
            if (d.contains("zero_is_missing")) {
                spec.schema.zero_is_missing = read<bool>(d, "zero_is_missing", where);
            }
            if (d.contains("resolution")) {
                spec.schema.resolution = read<std::string>(d, "resolution", where);
            }
        }
        cfg.datasets.push_back(std::move(spec));
    }

    if (doc.contains("window_lengths")) {
        const auto& w = doc.at("window_lengths");
        if (!w.is_array() || w.empty()) {
            config_fail("config.window_lengths", "expected a non-empty array");
        }
        cfg.window_lengths.clear();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!w[i].is_number_integer() || w[i].get<long long>() < 3) {
                config_fail("config.window_lengths[" + std::to_string(i) + "]", "expected an integer >= 3");
            }
            cfg.window_lengths.push_back(static_cast<std::size_t>(w[i].get<long long>()));
        }
    }
    if (doc.contains("train_fraction")) {
        cfg.train_fraction = read<double>(doc, "train_fraction", "config");
        if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
            config_fail("config.train_fraction", "must lie in (0, 1)");
        }
    }
    if (doc.contains("monte_carlo_runs")) {
        cfg.monte_carlo_runs = read_positive(doc, "monte_carlo_runs", "config");
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) {
            config_fail("config.seed", "expected a non-negative integer");
        }
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("window_sampling")) {
        const auto s = read<std::string>(doc, "window_sampling", "config");
        if (s == "even") {
            cfg.sampling = WindowSampling::Even;
        } else if (s == "random") {
            cfg.sampling = WindowSampling::Random;
        } else {
            config_fail("config.window_sampling", "expected even or random, got '" + s + "'");
        }
    }
    if (doc.contains("training_stack")) {
        const auto s = read<std::string>(doc, "training_stack", "config");
        if (s == "rolling") {
            cfg.stack = StackMode::Rolling;
        } else if (s == "fixed") {
            cfg.stack = StackMode::Fixed;
        } else {
            config_fail("config.training_stack", "expected rolling or fixed, got '" + s + "'");
        }
    }

    if (!doc.contains("models") || !doc.at("models").is_array() || doc.at("models").empty()) {
        config_fail("config.models", "expected a non-empty array");
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < doc.at("models").size(); ++i) {
        const auto& m = doc.at("models")[i];
        const std::string where = "config.models[" + std::to_string(i) + "]";
        ModelSpec spec;
        std::unique_ptr<ForecastFamily> family;
        if (m.is_string()) {
            spec.family = m.get<std::string>();
        } else if (m.is_object()) {
            reject_unknown(m, {"family", "label", "grid"}, where);
            spec.family = read<std::string>(m, "family", where);
            if (m.contains("label")) {
                spec.label = read<std::string>(m, "label", where);
            }
        } else {
            config_fail(where, "expected a family name or an object");
        }
        try {
            family = make_family(spec.family);
        } catch (const ConfigError& e) {
            config_fail(where + ".family", e.what());
        }
        if (spec.label.empty()) {
            spec.label = spec.family;
        }
        if (!labels.insert(spec.label).second) {
            config_fail(where + ".label", "duplicate model label '" + spec.label + "'");
        }
        spec.grid = m.is_object() && m.contains("grid") ? HyperGrid::from_json(m.at("grid"), where + ".grid")
                                                        : family->default_grid();
        cfg.models.push_back(std::move(spec));
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str(), path.parent_path());
}

SeriesMatrix load_dataset(const DatasetSpec& spec) {
    if (spec.recipe) {
        return prepare_dataset(load_recipe(*spec.recipe));
    }
    if (spec.csv) {
        return load_csv(*spec.csv, spec.schema);
    }
    throw ConfigError("dataset '" + spec.name + "' has neither a recipe nor a csv path");
}

std::vector<std::size_t> sample_windows(std::size_t dataset_length, std::size_t window, std::size_t runs,
                                        std::uint64_t seed, WindowSampling mode) {
    if (runs < 1) {
        throw ConfigError("Monte-Carlo run count must be at least 1");
    }
    if (window + 1 > dataset_length) {
        throw ConfigError("window of " + std::to_string(window) + " rows plus a test row does not fit in " +
                          std::to_string(dataset_length) + " rows");
    }
    const std::size_t last_start = dataset_length - window;
    if (runs > last_start) {
        throw ConfigError(std::to_string(runs) + " runs requested but only " + std::to_string(last_start) +
                          " distinct window starts exist");
    }
    std::vector<std::size_t> starts;
    starts.reserve(runs);
    if (runs == 1) {
        starts.push_back(1);
        return starts;
    }
    if (mode == WindowSampling::Even) {
        // Rounded arithmetic progression from 1 to last_start; step >= 1 keeps starts distinct.
        const std::size_t span = last_start - 1;
        const std::size_t gaps = runs - 1;
        for (std::size_t i = 0; i < runs; ++i) {
            starts.push_back(1 + (2 * i * span + gaps) / (2 * gaps));
        }
        return starts;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pool(last_start);
    for (std::size_t i = 0; i < last_start; ++i) {
        pool[i] = i + 1;
    }
    for (std::size_t i = 0; i < runs; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto j = i + std::min(static_cast<std::size_t>(u * static_cast<double>(last_start - i)),
                                    last_start - i - 1);
        std::swap(pool[i], pool[j]);
        starts.push_back(pool[i]);
    }
    std::sort(starts.begin(), starts.end());
    return starts;
}

RunRecord run_single(const Matrix& window, const ForecastFamily& family, const HyperGrid& grid,
                     const RunSettings& settings) {
    if (window.rows() < 4) {
        throw ConfigError("a run needs at least 3 history rows plus a test row");
    }
    const auto L = static_cast<std::size_t>(window.rows() - 1);
    const auto history_rows = static_cast<Eigen::Index>(L);

    const ScalingTransform scaler = fit_scaler(window.topRows(history_rows));
    const Matrix scaled = apply_scaler(window, scaler);
    const Matrix history = scaled.topRows(history_rows);

    const SplitConfig cfg = SplitConfig::from_fraction(L, settings.train_fraction);
    const TuningResult tuning =
        grid_search(family, grid, history, cfg, TuningOptions{settings.stack, derive_seed(settings.seed, {1})});

    RunRecord record;
    record.best = tuning.best_assignment();
    record.cv_error = tuning.best_error();
    const Fold fold = final_fold(family.scheme(), L, window_for(record.best, cfg));
    try {
        record.forecast = family.forecast(history, fold, record.best, derive_seed(settings.seed, {2}));
    } catch (const Error& e) {
        throw ModelError(family.name() + " {" + record.best.str() + "} final refit: " + e.what());
    }
    const RowVector actual = scaled.row(history_rows);
    record.smape = smape(actual, record.forecast);
    record.maape = maape(actual, record.forecast);
    record.mase = mase(actual, record.forecast, history);
    return record;
}

void ReportCell::aggregate() {
    mean_smape.reset();
    mean_maape.reset();
    mean_mase.reset();
    mase_undefined_runs = 0;
    if (runs.empty()) {
        return;
    }
    std::vector<const RunRecord*> ordered;
    for (const auto& r : runs) {
        ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(), [](const RunRecord* a, const RunRecord* b) { return a->run < b->run; });
    double s = 0.0;
    double m = 0.0;
    double q = 0.0;
    std::size_t defined = 0;
    for (const auto* r : ordered) {
        s += r->smape;
        m += r->maape;
        if (r->mase) {
            q += *r->mase;
            ++defined;
        } else {
            ++mase_undefined_runs;
        }
    }
    const auto n = static_cast<double>(ordered.size());
    mean_smape = s / n;
    mean_maape = m / n;
    if (defined > 0) {
        mean_mase = q / static_cast<double>(defined);
    }
}

bool BenchmarkReport::partial() const {
    return std::any_of(cells.begin(), cells.end(), [](const ReportCell& c) { return c.failed; });
}

const ReportCell* BenchmarkReport::find(const std::string& dataset, const std::string& model,
                                        std::size_t window_length) const {
    for (const auto& c : cells) {
        if (c.dataset == dataset && c.model == model && c.window_length == window_length) {
            return &c;
        }
    }
    return nullptr;
}

BenchmarkReport run_benchmark(const ExperimentConfig& cfg, const BenchmarkOptions& options) {
    BenchmarkReport report;
    report.config = cfg.to_json();
    report.seed = cfg.seed;

    struct Unit {
        std::size_t cell;
        std::size_t run;
        std::size_t start;
        std::uint64_t seed;
    };
    std::vector<Unit> units;
    std::vector<Matrix> datasets;
    std::vector<std::size_t> cell_dataset;
    std::vector<std::size_t> cell_model;

    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        std::optional<SeriesMatrix> data;
        std::string load_error;
        try {
            data = load_dataset(cfg.datasets[d]);
        } catch (const Error& e) {
            load_error = e.what();
        }
        datasets.push_back(data ? data->values() : Matrix());
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            for (const auto window : cfg.window_lengths) {
                ReportCell cell;
                cell.dataset = cfg.datasets[d].name;
                cell.model = cfg.models[m].label;
                cell.window_length = window;
                const std::size_t index = report.cells.size();
                if (!data) {
                    cell.failed = true;
                    cell.error = load_error;
                } else {
                    try {
                        const auto starts =
                            sample_windows(data->rows(), window, cfg.monte_carlo_runs,
                                           derive_seed(cfg.seed, {0x5A3D1E, d, window}), cfg.sampling);
                        for (std::size_t k = 0; k < starts.size(); ++k) {
                            units.push_back({index, k + 1, starts[k], derive_seed(cfg.seed, {d, m, window, k + 1})});
                        }
                    } catch (const Error& e) {
                        cell.failed = true;
                        cell.error = e.what();
                    }
                }
                report.cells.push_back(std::move(cell));
                cell_dataset.push_back(d);
                cell_model.push_back(m);
            }
        }
    }

    std::vector<std::unique_ptr<ForecastFamily>> families;
    for (const auto& m : cfg.models) {
        families.push_back(make_family(m.family));
    }

    std::vector<std::optional<RunRecord>> records(units.size());
    std::vector<std::string> errors(units.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < units.size(); i = next++) {
            const Unit& u = units[i];
            const auto& cell = report.cells[u.cell];
            const std::size_t d = cell_dataset[u.cell];
            const std::size_t m = cell_model[u.cell];
            try {
                const Matrix window = datasets[d].middleRows(static_cast<Eigen::Index>(u.start - 1),
                                                             static_cast<Eigen::Index>(cell.window_length + 1));
                RunRecord r = run_single(window, *families[m], cfg.models[m].grid,
                                         RunSettings{cfg.train_fraction, cfg.stack, u.seed});
                r.run = u.run;
                r.start = u.start;
                records[i] = std::move(r);
            } catch (const Error& e) {
                errors[i] = "run " + std::to_string(u.run) + " (start " + std::to_string(u.start) + "): " + e.what();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, units.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t i = 0; i < units.size(); ++i) {
        auto& cell = report.cells[units[i].cell];
        if (records[i]) {
            cell.runs.push_back(std::move(*records[i]));
        } else if (!cell.failed) {
            cell.failed = true;
            cell.error = errors[i];
        }
    }
    for (auto& cell : report.cells) {
        if (!cell.failed) {
            cell.aggregate();
        }
    }
    return report;
}

} // namespace mtsf
