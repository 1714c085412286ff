#pragma once

#include <string>

#include "mtsf/error.hpp"

namespace mtsf {

/// Whether a lag regressor is fit once on samples pooled across all series
/// (global, cross-learning) or separately per series.
enum class Pooling { Global, PerSeries };

inline Pooling parse_pooling(const std::string& name) {
    if (name == "global") {
        return Pooling::Global;
    }
    if (name == "per_series" || name == "local") {
        return Pooling::PerSeries;
    }
    throw ConfigError("unknown pooling '" + name + "' (expected global or per_series)");
}

} // namespace mtsf
