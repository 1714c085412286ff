#pragma once

#include "mtsf/series_matrix.hpp"

namespace mtsf {

/// Persistence forecast: the last observed row.
RowVector naive_last(const Matrix& history);

} // namespace mtsf
