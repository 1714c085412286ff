#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtsf/error.hpp"

namespace mtsf {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

/// L x N observation matrix: row l holds observation l of every series,
/// column n holds the full history of series n.
class SeriesMatrix {
public:
    SeriesMatrix(Matrix values, std::vector<std::string> series_ids,
                 std::string resolution = {}, std::size_t origin_index = 1,
                 std::vector<std::string> timestamps = {});

    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& series_ids() const noexcept { return series_ids_; }
    const std::string& resolution() const noexcept { return resolution_; }
    /// 1-based index of row 1 within the source dataset.
    std::size_t origin_index() const noexcept { return origin_index_; }
    /// Per-row timestamp labels carried from the source file; may be empty.
    const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    bool operator==(const SeriesMatrix& other) const;

private:
    Matrix values_;
    std::vector<std::string> series_ids_;
    std::string resolution_;
    std::size_t origin_index_;
    std::vector<std::string> timestamps_;
};

} // namespace mtsf
