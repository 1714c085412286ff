#include "mtsf/hyper_grid.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "mtsf/error.hpp"

namespace mtsf {

std::string to_string(const ParamValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *d);
        return std::string(buf, ptr);
    }
    return std::get<std::string>(v);
}

Json to_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

ParamValue param_from_json(const Json& j) {
    if (j.is_number_integer()) {
        return j.get<std::int64_t>();
    }
    if (j.is_number_float()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_boolean()) {
        return std::string(j.get<bool>() ? "true" : "false");
    }
    throw ConfigError("hyper-parameter values must be numbers or strings, got " + j.dump());
}

bool Assignment::contains(const std::string& name) const {
    for (const auto& [k, v] : values_) {
        if (k == name) {
            return true;
        }
    }
    return false;
}

const ParamValue& Assignment::at(const std::string& name) const {
    for (const auto& [k, v] : values_) {
        if (k == name) {
            return v;
        }
    }
    throw ConfigError("hyper-parameter '" + name + "' missing from assignment {" + str() + "}");
}

std::int64_t Assignment::get_int(const std::string& name) const {
    const auto& v = at(name);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return *i;
    }
    if (const auto* d = std::get_if<double>(&v)) {
        if (std::floor(*d) == *d) {
            return static_cast<std::int64_t>(*d);
        }
    }
    throw ConfigError("hyper-parameter '" + name + "' must be an integer, got " + to_string(v));
}

std::int64_t Assignment::get_int(const std::string& name, std::int64_t fallback) const {
    return contains(name) ? get_int(name) : fallback;
}

double Assignment::get_real(const std::string& name) const {
    const auto& v = at(name);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    throw ConfigError("hyper-parameter '" + name + "' must be a number, got " + to_string(v));
}

double Assignment::get_real(const std::string& name, double fallback) const {
    return contains(name) ? get_real(name) : fallback;
}

std::string Assignment::get_string(const std::string& name, const std::string& fallback) const {
    if (!contains(name)) {
        return fallback;
    }
    const auto& v = at(name);
    if (const auto* s = std::get_if<std::string>(&v)) {
        return *s;
    }
    throw ConfigError("hyper-parameter '" + name + "' must be a string, got " + to_string(v));
}

std::string Assignment::str() const {
    if (values_.empty()) {
        return "default";
    }
    std::string out;
    for (const auto& [k, v] : values_) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += k + "=" + to_string(v);
    }
    return out;
}

Json Assignment::to_json() const {
    auto j = Json::object();
    for (const auto& [k, v] : values_) {
        j[k] = mtsf::to_json(v);
    }
    return j;
}

HyperGrid::HyperGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
    std::set<std::string> seen;
    for (const auto& axis : axes_) {
        if (axis.candidates.empty()) {
            throw ConfigError("grid axis '" + axis.name + "' has no candidates");
        }
        if (!seen.insert(axis.name).second) {
            throw ConfigError("grid axis '" + axis.name + "' declared twice");
        }
    }
}

std::size_t HyperGrid::size() const noexcept {
    std::size_t n = 1;
    for (const auto& axis : axes_) {
        n *= axis.candidates.size();
    }
    return n;
}

Assignment HyperGrid::at(std::size_t index) const {
    if (index >= size()) {
        throw ConfigError("grid index " + std::to_string(index) + " out of range");
    }
    std::vector<std::pair<std::string, ParamValue>> values(axes_.size());
    for (std::size_t a = axes_.size(); a-- > 0;) {
        const auto& axis = axes_[a];
        values[a] = {axis.name, axis.candidates[index % axis.candidates.size()]};
        index /= axis.candidates.size();
    }
    return Assignment(std::move(values));
}

std::vector<Assignment> HyperGrid::enumerate() const {
    std::vector<Assignment> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out.push_back(at(i));
    }
    return out;
}

HyperGrid HyperGrid::from_json(const Json& j, const std::string& where) {
    // Axes come as an object {"p": [1, 2], ...} in declared order, or as an
    // array of {"name": ..., "values": [...]}.
    std::vector<GridAxis> axes;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto& item = j[i];
            const std::string at = where + "[" + std::to_string(i) + "]";
            if (!item.is_object() || !item.contains("name") || !item.contains("values") ||
                !item.at("values").is_array()) {
                throw ConfigError(at + ": expected {\"name\": ..., \"values\": [...]}");
            }
            GridAxis axis{item.at("name").get<std::string>(), {}};
            for (const auto& v : item.at("values")) {
                axis.candidates.push_back(param_from_json(v));
            }
            axes.push_back(std::move(axis));
        }
    } else if (j.is_object()) {
        for (const auto& item : j.items()) {
            const auto& vals = item.value();
            GridAxis axis{item.key(), {}};
            if (vals.is_array()) {
                for (const auto& v : vals) {
                    axis.candidates.push_back(param_from_json(v));
                }
            } else {
                axis.candidates.push_back(param_from_json(vals));
            }
            axes.push_back(std::move(axis));
        }
    } else {
        throw ConfigError(where + ": expected an object or an array of axes");
    }
    try {
        return HyperGrid(std::move(axes));
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

Json HyperGrid::to_json() const {
    auto out = Json::array();
    for (const auto& axis : axes_) {
        auto values = Json::array();
        for (const auto& v : axis.candidates) {
            values.push_back(mtsf::to_json(v));
        }
        out.push_back({{"name", axis.name}, {"values", values}});
    }
    return out;
}

} // namespace mtsf
