#include "mtsf/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mtsf {

namespace {

constexpr const char* kFormat = "mtsf-benchmark-report";
constexpr int kVersion = 1;

Json optional_json(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::optional<double> optional_from(const Json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Assignment assignment_from(const Json& j) {
    std::vector<std::pair<std::string, ParamValue>> values;
    for (const auto& item : j.items()) {
        values.emplace_back(item.key(), param_from_json(item.value()));
    }
    return Assignment(std::move(values));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw IoError("error writing '" + path.string() + "'");
    }
}

} // namespace

Json report_to_json(const BenchmarkReport& report) {
    Json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["seed"] = report.seed;
    j["evaluation_space"] = "scaled";
    j["partial"] = report.partial();
    j["config"] = report.config;
    auto cells = Json::array();
    for (const auto& c : report.cells) {
        Json cell;
        cell["dataset"] = c.dataset;
        cell["model"] = c.model;
        cell["window_length"] = c.window_length;
        cell["status"] = c.failed ? "failed" : "ok";
        if (c.failed) {
            cell["error"] = c.error;
        }
        auto runs = Json::array();
        for (const auto& r : c.runs) {
            runs.push_back(Json{{"run", r.run},
                                {"start", r.start},
                                {"best_params", r.best.to_json()},
                                {"cv_error", r.cv_error},
                                {"smape", r.smape},
                                {"maape", r.maape},
                                {"mase", optional_json(r.mase)}});
        }
        cell["runs"] = runs;
        cell["means"] = Json{{"smape", optional_json(c.mean_smape)},
                             {"maape", optional_json(c.mean_maape)},
                             {"mase", optional_json(c.mean_mase)},
                             {"mase_undefined_runs", c.mase_undefined_runs}};
        cells.push_back(cell);
    }
    j["cells"] = cells;
    return j;
}

BenchmarkReport report_from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormat) {
            throw ConfigError("not a benchmark report (format field is '" + j.at("format").get<std::string>() + "')");
        }
        BenchmarkReport report;
        report.seed = j.at("seed").get<std::uint64_t>();
        report.config = j.at("config");
        for (const auto& c : j.at("cells")) {
            ReportCell cell;
            cell.dataset = c.at("dataset").get<std::string>();
            cell.model = c.at("model").get<std::string>();
            cell.window_length = c.at("window_length").get<std::size_t>();
            cell.failed = c.at("status").get<std::string>() == "failed";
            if (cell.failed) {
                cell.error = c.value("error", std::string());
            }
            for (const auto& r : c.at("runs")) {
                RunRecord rec;
                rec.run = r.at("run").get<std::size_t>();
                rec.start = r.at("start").get<std::size_t>();
                rec.best = assignment_from(r.at("best_params"));
                rec.cv_error = r.at("cv_error").get<double>();
                rec.smape = r.at("smape").get<double>();
                rec.maape = r.at("maape").get<double>();
                rec.mase = optional_from(r.at("mase"));
                cell.runs.push_back(std::move(rec));
            }
            if (!cell.failed) {
                cell.aggregate();
            }
            report.cells.push_back(std::move(cell));
        }
        return report;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
}

std::string format_report_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "dataset,model,window_length,metric,mean,runs,undefined_runs,status\n";
    for (const auto& c : report.cells) {
        const std::string status = c.failed ? "failed" : "ok";
        const std::pair<const char*, const std::optional<double>*> metrics[] = {
            {"smape", &c.mean_smape}, {"maape", &c.mean_maape}, {"mase", &c.mean_mase}};
        for (const auto& [name, value] : metrics) {
            const std::size_t undefined = std::string(name) == "mase" ? c.mase_undefined_runs : 0;
            out << c.dataset << ',' << c.model << ',' << c.window_length << ',' << name << ','
                << (*value ? shortest(**value) : std::string()) << ',' << c.runs.size() << ',' << undefined << ','
                << status << '\n';
        }
    }
    return out.str();
}

std::string format_report_table(const BenchmarkReport& report) {
    std::vector<std::string> datasets;
    std::vector<std::string> models;
    std::map<std::string, std::vector<std::size_t>> windows;
    for (const auto& c : report.cells) {
        if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end()) {
            datasets.push_back(c.dataset);
        }
        if (std::find(models.begin(), models.end(), c.model) == models.end()) {
            models.push_back(c.model);
        }
        auto& w = windows[c.dataset];
        if (std::find(w.begin(), w.end(), c.window_length) == w.end()) {
            w.push_back(c.window_length);
        }
    }

    std::size_t model_width = 5;
    for (const auto& m : models) {
        model_width = std::max(model_width, m.size());
    }
    constexpr int col = 9;
    auto pad = [](const std::string& s, std::size_t width) {
        return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
    };
    auto rpad = [](const std::string& s, std::size_t width) {
        return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
    };

    std::size_t runs = 0;
    for (const auto& c : report.cells) {
        runs = std::max(runs, c.runs.size());
    }
    std::ostringstream out;
    out << "Forecasting results (scaled space, mean over " << runs << " Monte-Carlo runs, seed " << report.seed
        << ")\n";

    std::string line1 = pad("", model_width + 2) + pad("", 7);
    std::string line2 = pad("model", model_width + 2) + pad("metric", 7);
    for (const auto& d : datasets) {
        const auto& w = windows[d];
        const std::size_t width = w.size() * (col + 1);
        line1 += "|" + pad(" " + d, width);
        line2 += "|";
        for (std::size_t i = 0; i < w.size(); ++i) {
            line2 += rpad(std::to_string(w[i]), col) + " ";
        }
    }
    out << line1 << '\n' << line2 << '\n' << std::string(line2.size(), '-') << '\n';

    const char* names[] = {"sMAPE", "MAAPE", "MASE"};
    for (const auto& m : models) {
        for (int k = 0; k < 3; ++k) {
            std::string line = pad(k == 0 ? m : "", model_width + 2) + pad(names[k], 7);
            for (const auto& d : datasets) {
                line += "|";
                for (const auto w : windows[d]) {
                    const ReportCell* c = report.find(d, m, w);
                    std::string text = "n/a";
                    if (c && c->failed) {
                        text = "failed";
                    } else if (c) {
                        const auto& v = k == 0 ? c->mean_smape : k == 1 ? c->mean_maape : c->mean_mase;
                        if (v) {
                            char buf[32];
                            std::snprintf(buf, sizeof(buf), "%.4f", *v);
                            text = buf;
                        } else if (k == 2) {
                            text = "undef";
                        }
                    }
                    line += rpad(text, col) + " ";
                }
            }
            out << line << '\n';
        }
    }
    for (const auto& c : report.cells) {
        if (c.failed) {
            out << "failed: " << c.dataset << " / " << c.model << " / " << c.window_length << ": " << c.error << '\n';
        }
    }
    return out.str();
}

ReportFiles write_report(const BenchmarkReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
    }
    ReportFiles files{out_dir / "report.csv", out_dir / "report.json", out_dir / "report.txt"};
    write_text(files.csv, format_report_csv(report));
    write_text(files.json, report_to_json(report).dump(2) + "\n");
    write_text(files.table, format_report_table(report));
    return files;
}

BenchmarkReport read_report(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) {
        throw IoError("cannot open report '" + json_path.string() + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("report '" + json_path.string() + "': " + e.what());
    }
    return report_from_json(j);
}

} // namespace mtsf
