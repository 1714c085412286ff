#include "mtsf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace mtsf {

SeriesMatrix::SeriesMatrix(Matrix values, std::vector<std::string> series_ids, std::string resolution,
                           std::size_t origin_index, std::vector<std::string> timestamps)
    : values_(std::move(values)),
      series_ids_(std::move(series_ids)),
      resolution_(std::move(resolution)),
      origin_index_(origin_index),
      timestamps_(std::move(timestamps)) {
    if (values_.rows() < 2) {
        throw DataError("series matrix needs at least 2 rows, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw DataError("series matrix needs at least 1 column");
    }
    if (series_ids_.size() != static_cast<std::size_t>(values_.cols())) {
        throw DataError("series id count " + std::to_string(series_ids_.size()) + " does not match column count " +
                        std::to_string(values_.cols()));
    }
    if (!timestamps_.empty() && timestamps_.size() != static_cast<std::size_t>(values_.rows())) {
        throw DataError("timestamp count does not match row count");
    }
    if (origin_index_ < 1) {
        throw DataError("origin index is 1-based");
    }
    if (!values_.allFinite()) {
        throw DataError("series matrix contains missing or non-finite values");
    }
}

bool SeriesMatrix::operator==(const SeriesMatrix& other) const {
    return values_.rows() == other.values_.rows() && values_.cols() == other.values_.cols() &&
           values_ == other.values_ && series_ids_ == other.series_ids_ && resolution_ == other.resolution_ &&
           origin_index_ == other.origin_index_ && timestamps_ == other.timestamps_;
}

MissingPolicy parse_missing_policy(const std::string& name) {
    if (name == "drop") {
        return MissingPolicy::Drop;
    }
    if (name == "forward_fill" || name == "ffill") {
        return MissingPolicy::ForwardFill;
    }
    throw ConfigError("unknown missing policy '" + name + "' (expected drop or forward_fill)");
}

std::string to_string(MissingPolicy policy) {
    return policy == MissingPolicy::Drop ? "drop" : "forward_fill";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Minimal RFC 4180 field splitter: handles double-quoted fields with "" escapes.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

bool is_missing_token(const std::string& cell) {
    return cell.empty() || cell == "NaN" || cell == "nan" || cell == "NAN";
}

double parse_real(const std::string& cell, const std::string& source, std::size_t line_no, const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw DataError(source + ":" + std::to_string(line_no) + ": column '" + column + "': cannot parse '" + cell +
                        "' as a real number");
    }
    return value;
}

} // namespace

SeriesMatrix parse_csv(const std::string& text, const CsvSchema& schema, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty()) {
        throw DataError(source + ": empty file");
    }

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!position.emplace(header[i], i).second) {
            throw DataError(source + ": duplicate column '" + header[i] + "'");
        }
    }

    std::optional<std::size_t> ts_pos;
    if (schema.timestamp_column) {
        auto it = position.find(*schema.timestamp_column);
        if (it == position.end()) {
            throw DataError(source + ": timestamp column '" + *schema.timestamp_column + "' not found");
        }
        ts_pos = it->second;
    }

    std::vector<std::size_t> value_pos;
    if (schema.value_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!ts_pos || i != *ts_pos) {
                value_pos.push_back(i);
            }
        }
    } else {
        for (const auto& name : schema.value_columns) {
            auto it = position.find(name);
            if (it == position.end()) {
                throw DataError(source + ": value column '" + name + "' not found");
            }
            value_pos.push_back(it->second);
        }
    }

    const double missing = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> columns(value_pos.size());
    std::vector<std::string> timestamps;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": ragged row with " +
                            std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
        }
        if (ts_pos) {
            timestamps.push_back(fields[*ts_pos]);
        }
        for (std::size_t j = 0; j < value_pos.size(); ++j) {
            const auto& cell = fields[value_pos[j]];
            double v = is_missing_token(cell) ? missing : parse_real(cell, source, line_no, header[value_pos[j]]);
            if (schema.zero_is_missing && v == 0.0) {
                v = missing;
            }
            columns[j].push_back(v);
        }
    }

    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        auto& col = columns[j];
        if (schema.missing_policy == MissingPolicy::ForwardFill) {
            for (std::size_t r = 1; r < col.size(); ++r) {
                if (std::isnan(col[r])) {
                    col[r] = col[r - 1];
                }
            }
        }
        if (std::none_of(col.begin(), col.end(), [](double v) { return std::isnan(v); })) {
            keep.push_back(j);
        }
    }
    if (keep.empty()) {
        throw DataError(source + ": zero usable columns");
    }

    Matrix values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(keep.size()));
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const auto& col = columns[keep[k]];
        for (std::size_t r = 0; r < rows; ++r) {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = col[r];
        }
        ids.push_back(header[value_pos[keep[k]]]);
    }
    return SeriesMatrix(std::move(values), std::move(ids), schema.resolution, 1, std::move(timestamps));
}

SeriesMatrix load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("error reading '" + path.string() + "'");
    }
    return parse_csv(buffer.str(), schema, path.string());
}

namespace {

std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string format_csv(const SeriesMatrix& m) {
    std::string out;
    const bool with_ts = !m.timestamps().empty();
    if (with_ts) {
        out += "timestamp,";
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j > 0) {
            out.push_back(',');
        }
        out += quote_if_needed(m.series_ids()[j]);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (with_ts) {
            out += quote_if_needed(m.timestamps()[r]);
            out.push_back(',');
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out.push_back(',');
            }
            out += format_real(m.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)));
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const SeriesMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << format_csv(m);
    if (!out) {
        throw IoError("error writing '" + path.string() + "'");
    }
}

namespace {

SeriesMatrix resample(const SeriesMatrix& m, std::size_t group_size, bool mean) {
    if (group_size == 0) {
        throw ConfigError("resample group size must be at least 1");
    }
    const auto groups = static_cast<Eigen::Index>(m.rows() / group_size);
    const auto g = static_cast<Eigen::Index>(group_size);
    Matrix out(groups, m.values().cols());
    for (Eigen::Index i = 0; i < groups; ++i) {
        out.row(i) = m.values().middleRows(i * g, g).colwise().sum();
        if (mean) {
            out.row(i) /= static_cast<double>(group_size);
        }
    }
    std::vector<std::string> ts;
    if (!m.timestamps().empty()) {
        for (Eigen::Index i = 0; i < groups; ++i) {
            ts.push_back(m.timestamps()[static_cast<std::size_t>(i * g)]);
        }
    }
    return SeriesMatrix(std::move(out), m.series_ids(), m.resolution(), m.origin_index(), std::move(ts));
}

} // namespace

SeriesMatrix resample_mean(const SeriesMatrix& m, std::size_t group_size) {
    return resample(m, group_size, true);
}

SeriesMatrix resample_sum(const SeriesMatrix& m, std::size_t group_size) {
    return resample(m, group_size, false);
}

SeriesMatrix slice_window(const SeriesMatrix& m, std::size_t start, std::size_t length) {
    if (start < 1 || length < 1 || start + length - 1 > m.rows()) {
        throw DataError("window [" + std::to_string(start) + ", " + std::to_string(start + length - 1) +
                        "] outside rows 1.." + std::to_string(m.rows()));
    }
    std::vector<std::string> ts;
    if (!m.timestamps().empty()) {
        ts.assign(m.timestamps().begin() + static_cast<std::ptrdiff_t>(start - 1),
                  m.timestamps().begin() + static_cast<std::ptrdiff_t>(start - 1 + length));
    }
    return SeriesMatrix(m.values().middleRows(static_cast<Eigen::Index>(start - 1), static_cast<Eigen::Index>(length)),
                        m.series_ids(), m.resolution(), m.origin_index() + start - 1, std::move(ts));
}

SeriesMatrix select_columns(const SeriesMatrix& m, const std::vector<std::string>& ids) {
    std::unordered_map<std::string, Eigen::Index> position;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        position.emplace(m.series_ids()[j], static_cast<Eigen::Index>(j));
    }
    Matrix out(m.values().rows(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto it = position.find(ids[k]);
        if (it == position.end()) {
            throw DataError("column '" + ids[k] + "' not present after filtering");
        }
        out.col(static_cast<Eigen::Index>(k)) = m.values().col(it->second);
    }
    return SeriesMatrix(std::move(out), ids, m.resolution(), m.origin_index(), m.timestamps());
}

ScalingTransform fit_scaler(const Matrix& values) {
    if (values.rows() < 1) {
        throw DataError("cannot fit a scaler on zero rows");
    }
    ScalingTransform t{values.colwise().minCoeff(), values.colwise().maxCoeff(), {}};
    for (Eigen::Index n = 0; n < values.cols(); ++n) {
        if (t.mins(n) == t.maxs(n)) {
            t.degenerate_columns.insert(static_cast<std::size_t>(n));
        }
    }
    return t;
}

Matrix apply_scaler(const Matrix& values, const ScalingTransform& t) {
    if (static_cast<std::size_t>(values.cols()) != t.size()) {
        throw DataError("scaler fitted on " + std::to_string(t.size()) + " columns, got " +
                        std::to_string(values.cols()));
    }
    Matrix out(values.rows(), values.cols());
    for (Eigen::Index n = 0; n < values.cols(); ++n) {
        if (t.degenerate_columns.count(static_cast<std::size_t>(n)) != 0) {
            out.col(n).setZero();
        } else {
            out.col(n) = (values.col(n).array() - t.mins(n)) / (t.maxs(n) - t.mins(n));
        }
    }
    return out;
}

SeriesMatrix apply_scaler(const SeriesMatrix& m, const ScalingTransform& t) {
    return SeriesMatrix(apply_scaler(m.values(), t), m.series_ids(), m.resolution(), m.origin_index(), m.timestamps());
}

RowVector invert_scaler(const RowVector& row, const ScalingTransform& t) {
    if (static_cast<std::size_t>(row.size()) != t.size()) {
        throw DataError("scaler fitted on " + std::to_string(t.size()) + " columns, got row of length " +
                        std::to_string(row.size()));
    }
    RowVector out(row.size());
    for (Eigen::Index n = 0; n < row.size(); ++n) {
        if (t.degenerate_columns.count(static_cast<std::size_t>(n)) != 0) {
            out(n) = t.mins(n);
        } else {
            out(n) = row(n) * (t.maxs(n) - t.mins(n)) + t.mins(n);
        }
    }
    return out;
}

} // namespace mtsf
