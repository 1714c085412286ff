#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mtsf {
/// Insertion-ordered JSON: configs keep their declared key order, reports are emitted in a fixed order.
using Json = nlohmann::ordered_json;
}

namespace mtsf {

using ParamValue = std::variant<std::int64_t, double, std::string>;

std::string to_string(const ParamValue& v);
Json to_json(const ParamValue& v);
ParamValue param_from_json(const Json& j);

/// One point of a hyper-parameter grid: named values in axis order.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::vector<std::pair<std::string, ParamValue>> values) : values_(std::move(values)) {}

    bool contains(const std::string& name) const;
    const ParamValue& at(const std::string& name) const;

    /// Integer parameter; reals with an integral value are accepted.
    std::int64_t get_int(const std::string& name) const;
    std::int64_t get_int(const std::string& name, std::int64_t fallback) const;
    /// Real parameter; integers are widened.
    double get_real(const std::string& name) const;
    double get_real(const std::string& name, double fallback) const;
    std::string get_string(const std::string& name, const std::string& fallback) const;

    const std::vector<std::pair<std::string, ParamValue>>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// "p=2 lambda=0.1"; "default" for the empty assignment.
    std::string str() const;
    Json to_json() const;

    bool operator==(const Assignment&) const = default;

private:
    std::vector<std::pair<std::string, ParamValue>> values_;
};

struct GridAxis {
    std::string name;
    std::vector<ParamValue> candidates;
};

/// Cartesian product of named axes. Enumeration is row-major over the declared
/// axis order (the last axis varies fastest). A grid with no axes has one point.
class HyperGrid {
public:
    HyperGrid() = default;
    explicit HyperGrid(std::vector<GridAxis> axes);

    std::size_t size() const noexcept;
    Assignment at(std::size_t index) const;
    std::vector<Assignment> enumerate() const;

    const std::vector<GridAxis>& axes() const noexcept { return axes_; }

    static HyperGrid from_json(const Json& j, const std::string& where = "grid");
    Json to_json() const;

private:
    std::vector<GridAxis> axes_;
};

} // namespace mtsf
