#include "mtsf/models/naive.hpp"

namespace mtsf {

RowVector naive_last(const Matrix& history) {
    if (history.rows() < 1 || history.cols() < 1) {
        throw ModelError("naive forecast needs a non-empty history");
    }
    return history.bottomRows(1);
}

} // namespace mtsf
