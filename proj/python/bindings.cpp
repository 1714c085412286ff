#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mtsf/dataset.hpp"
#include "mtsf/forecast_family.hpp"
#include "mtsf/harness.hpp"
#include "mtsf/metrics.hpp"
#include "mtsf/recipe.hpp"
#include "mtsf/report.hpp"
#include "mtsf/rolling_cv.hpp"
#include "mtsf/synthetic.hpp"

namespace py = pybind11;
using namespace mtsf;

namespace {

CsvSchema make_schema(std::optional<std::string> timestamp_column, std::vector<std::string> value_columns,
                      const std::string& missing_policy, bool zero_is_missing, std::string resolution) {
    CsvSchema s;
    s.timestamp_column = std::move(timestamp_column);
    s.value_columns = std::move(value_columns);
    s.missing_policy = parse_missing_policy(missing_policy);
    s.zero_is_missing = zero_is_missing;
    s.resolution = std::move(resolution);
    return s;
}

py::object param_to_py(const ParamValue& v) {
    return std::visit([](const auto& x) -> py::object { return py::cast(x); }, v);
}

py::dict assignment_to_py(const Assignment& a) {
    py::dict d;
    for (const auto& [name, value] : a.values()) {
        d[py::str(name)] = param_to_py(value);
    }
    return d;
}

ParamValue param_from_py(const py::handle& h, const std::string& where) {
    if (py::isinstance<py::bool_>(h)) {
        return std::string(h.cast<bool>() ? "true" : "false");
    }
    if (py::isinstance<py::int_>(h)) {
        return h.cast<std::int64_t>();
    }
    if (py::isinstance<py::float_>(h)) {
        return h.cast<double>();
    }
    if (py::isinstance<py::str>(h)) {
        return h.cast<std::string>();
    }
    throw ConfigError(where + ": grid values must be int, float or str");
}

// {"p": [1, 2], "lambda": 0.1} -> grid; scalars are single-candidate axes.
HyperGrid grid_from_py(const py::object& grid, const std::string& family) {
    if (grid.is_none()) {
        return make_family(family)->default_grid();
    }
    std::vector<GridAxis> axes;
    for (const auto& [key, values] : grid.cast<py::dict>()) {
        GridAxis axis{key.cast<std::string>(), {}};
        const std::string where = "grid." + axis.name;
        if (py::isinstance<py::list>(values) || py::isinstance<py::tuple>(values)) {
            for (const auto& v : values) {
                axis.candidates.push_back(param_from_py(v, where));
            }
        } else {
            axis.candidates.push_back(param_from_py(values, where));
        }
        axes.push_back(std::move(axis));
    }
    return HyperGrid(std::move(axes));
}

py::dict fold_to_py(const Fold& f) {
    py::list training;
    for (const auto& p : f.training) {
        training.append(p.str());
    }
    py::dict d;
    d["index"] = f.index;
    d["training"] = training;
    d["validation_input"] = f.validation_input.str();
    d["target_row"] = f.target_row;
    return d;
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict run_to_py(const RunRecord& r) {
    py::dict d;
    d["run"] = r.run;
    d["start"] = r.start;
    d["best"] = assignment_to_py(r.best);
    d["cv_error"] = r.cv_error;
    d["forecast"] = r.forecast;
    d["smape"] = r.smape;
    d["maape"] = r.maape;
    d["mase"] = r.mase ? py::cast(*r.mase) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rolling-window benchmark harness for multiple-series single-step forecasting";

    // Derived types are registered after the base so their translators run first.
    const auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<ModelError>(m, "ModelError", base.ptr());

    py::class_<SeriesMatrix>(m, "SeriesMatrix")
        .def(py::init([](const Matrix& values, std::optional<std::vector<std::string>> ids, std::string resolution) {
                 std::vector<std::string> names;
                 if (ids) {
                     names = *ids;
                 } else {
                     for (Eigen::Index c = 0; c < values.cols(); ++c) {
                         names.push_back("s" + std::to_string(c + 1));
                     }
                 }
                 return SeriesMatrix(values, std::move(names), std::move(resolution));
             }),
             py::arg("values"), py::arg("series_ids") = py::none(), py::arg("resolution") = "")
        .def_property_readonly("values", &SeriesMatrix::values)
        .def_property_readonly("series_ids", &SeriesMatrix::series_ids)
        .def_property_readonly("resolution", &SeriesMatrix::resolution)
        .def_property_readonly("origin_index", &SeriesMatrix::origin_index)
        .def_property_readonly("timestamps", &SeriesMatrix::timestamps)
        .def_property_readonly("shape", [](const SeriesMatrix& s) { return py::make_tuple(s.rows(), s.cols()); })
        .def("__eq__", &SeriesMatrix::operator==)
        .def("__repr__", [](const SeriesMatrix& s) {
            return "<SeriesMatrix " + std::to_string(s.cols()) + " series x " + std::to_string(s.rows()) + " rows>";
        });

    m.def(
        "load_csv",
        [](const std::filesystem::path& path, std::optional<std::string> timestamp_column,
           std::vector<std::string> value_columns, const std::string& missing_policy, bool zero_is_missing,
           std::string resolution) {
            return load_csv(path, make_schema(std::move(timestamp_column), std::move(value_columns), missing_policy,
                                              zero_is_missing, std::move(resolution)));
        },
        py::arg("path"), py::arg("timestamp_column") = py::none(), py::arg("value_columns") = std::vector<std::string>{},
        py::arg("missing_policy") = "drop", py::arg("zero_is_missing") = false, py::arg("resolution") = "");
    m.def(
        "parse_csv",
        [](const std::string& text, std::optional<std::string> timestamp_column, const std::string& missing_policy,
           bool zero_is_missing) {
            return parse_csv(text, make_schema(std::move(timestamp_column), {}, missing_policy, zero_is_missing, ""));
        },
        py::arg("text"), py::arg("timestamp_column") = py::none(), py::arg("missing_policy") = "drop",
        py::arg("zero_is_missing") = false);
    m.def("write_csv", &write_csv, py::arg("matrix"), py::arg("path"));
    m.def("format_csv", &format_csv, py::arg("matrix"));
    m.def("prepare_dataset", [](const std::filesystem::path& recipe) { return prepare_dataset(load_recipe(recipe)); },
          py::arg("recipe"), "Load, filter and resample a dataset per a JSON recipe file.");
    m.def("resample_mean", &resample_mean, py::arg("matrix"), py::arg("group_size"));
    m.def("resample_sum", &resample_sum, py::arg("matrix"), py::arg("group_size"));
    m.def("slice_window", &slice_window, py::arg("matrix"), py::arg("start"), py::arg("length"));
    m.def("select_columns", &select_columns, py::arg("matrix"), py::arg("series_ids"));

    py::class_<ScalingTransform>(m, "ScalingTransform")
        .def_readonly("mins", &ScalingTransform::mins)
        .def_readonly("maxs", &ScalingTransform::maxs)
        .def_readonly("degenerate_columns", &ScalingTransform::degenerate_columns)
        .def("apply", [](const ScalingTransform& t, const Matrix& v) { return apply_scaler(v, t); }, py::arg("values"))
        .def("invert", [](const ScalingTransform& t, const RowVector& r) { return invert_scaler(r, t); },
             py::arg("row"));
    m.def("fit_scaler", py::overload_cast<const Matrix&>(&fit_scaler), py::arg("values"));

    m.def("smape", py::overload_cast<const RowVector&, const RowVector&>(&smape), py::arg("actual"),
          py::arg("predicted"));
    m.def("maape", py::overload_cast<const RowVector&, const RowVector&>(&maape), py::arg("actual"),
          py::arg("predicted"));
    m.def("mase", py::overload_cast<const RowVector&, const RowVector&, const Matrix&>(&mase), py::arg("actual"),
          py::arg("predicted"), py::arg("history"), "None when every series has a flat history.");
    m.def("cv_objective", py::overload_cast<const RowVector&, const RowVector&>(&cv_objective), py::arg("actual"),
          py::arg("predicted"));

    m.def(
        "plan",
        [](const std::string& scheme, std::size_t length, std::size_t train_length, std::optional<std::size_t> window,
           bool fixed_stack) {
            const auto plan = make_plan(parse_scheme(scheme), SplitConfig{length, train_length, window},
                                        fixed_stack ? StackMode::Fixed : StackMode::Rolling);
            py::list folds;
            for (const auto& f : plan.folds) {
                folds.append(fold_to_py(f));
            }
            py::dict d;
            d["scheme"] = to_string(plan.scheme);
            d["folds"] = folds;
            d["dump"] = plan.dump();
            return d;
        },
        py::arg("scheme"), py::arg("length"), py::arg("train_length"), py::arg("window") = py::none(),
        py::arg("fixed_stack") = false);

    m.def("family_names", &family_names);
    m.def(
        "default_grid",
        [](const std::string& family) {
            const HyperGrid grid = make_family(family)->default_grid();
            py::dict d;
            for (const auto& axis : grid.axes()) {
                py::list values;
                for (const auto& v : axis.candidates) {
                    values.append(param_to_py(v));
                }
                d[py::str(axis.name)] = values;
            }
            return d;
        },
        py::arg("family"));

    m.def(
        "grid_search",
        [](const std::string& family, const Matrix& data, py::object grid, double train_fraction,
           std::uint64_t seed, bool fixed_stack) {
            const auto fam = make_family(family);
            const auto g = grid_from_py(grid, family);
            const auto cfg = SplitConfig::from_fraction(static_cast<std::size_t>(data.rows()), train_fraction);
            TuningResult r;
            {
                py::gil_scoped_release release;
                r = grid_search(*fam, g, data, cfg, {fixed_stack ? StackMode::Fixed : StackMode::Rolling, seed});
            }
            py::list points;
            for (const auto& a : r.assignments) {
                points.append(assignment_to_py(a));
            }
            py::dict d;
            d["assignments"] = points;
            d["mean_errors"] = r.mean_errors;
            d["fold_errors"] = r.fold_errors;
            d["best_index"] = r.best_index;
            d["best"] = assignment_to_py(r.best_assignment());
            return d;
        },
        py::arg("family"), py::arg("data"), py::arg("grid") = py::none(), py::arg("train_fraction") = 0.8,
        py::arg("seed") = 0, py::arg("fixed_stack") = false,
        "Tune a family on scaled data (L x N) with the family's rolling-window scheme.");

    m.def(
        "run_single",
        [](const Matrix& window, const std::string& family, py::object grid, double train_fraction,
           std::uint64_t seed) {
            const auto fam = make_family(family);
            const auto g = grid_from_py(grid, family);
            RunRecord r;
            {
                py::gil_scoped_release release;
                r = run_single(window, *fam, g, {train_fraction, StackMode::Rolling, seed});
            }
            return run_to_py(r);
        },
        py::arg("window"), py::arg("family"), py::arg("grid") = py::none(), py::arg("train_fraction") = 0.8,
        py::arg("seed") = 0, "Tune on rows 1..L of an (L + 1) x N window, refit, and score row L + 1.");

    m.def(
        "run_benchmark",
        [](const std::filesystem::path& config, std::size_t threads, std::optional<std::uint64_t> seed) {
            auto cfg = load_experiment_config(config);
            if (seed) {
                cfg.seed = *seed;
            }
            BenchmarkReport report;
            {
                py::gil_scoped_release release;
                report = run_benchmark(cfg, {threads});
            }
            return json_to_py(report_to_json(report));
        },
        py::arg("config"), py::arg("threads") = 1, py::arg("seed") = py::none(),
        "Run an experiment config file and return the JSON report as a dict.");
    m.def(
        "format_report",
        [](py::object report) {
            const auto text = py::module_::import("json").attr("dumps")(report).cast<std::string>();
            return format_report_table(report_from_json(Json::parse(text)));
        },
        py::arg("report"));

    auto syn = m.def_submodule("synthetic", "Deterministic test datasets");
    syn.def("random_walk", &synthetic::random_walk, py::arg("rows"), py::arg("series"), py::arg("seed"));
    syn.def("iid_noise", &synthetic::iid_noise, py::arg("rows"), py::arg("series"), py::arg("seed"));
    syn.def("seasonal_traffic", &synthetic::seasonal_traffic, py::arg("rows"), py::arg("series"), py::arg("seed"));
}
