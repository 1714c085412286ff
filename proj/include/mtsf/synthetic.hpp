#pragma once

#include <cstddef>
#include <cstdint>

#include "mtsf/series_matrix.hpp"

namespace mtsf::synthetic {

/// Gaussian random walks starting at 10 with unit-variance steps.
SeriesMatrix random_walk(std::size_t rows, std::size_t series, std::uint64_t seed);

/// Independent N(5, 1) draws.
SeriesMatrix iid_noise(std::size_t rows, std::size_t series, std::uint64_t seed);

/// Hourly traffic-speed fixture with a daily cycle.
///
/// Segment n has a free-flow speed b_n ~ U[30, 70] km/h, a morning dip
/// centred at 08:00 + o_n and an evening dip at 18:00 + o_n (o_n ~ U[-1, 1] h,
/// depths d_n ~ U[0.2, 0.5] and 0.8 d_n, Gaussian profiles with 1.5 h and
/// 2 h widths), a weekend factor 0.5 on the dips, and AR(1) noise
/// (phi = 0.6, innovation sd 0.01 b_n):
///
///     speed_n(t) = b_n (1 - d_n w(t) (g(h - 8 - o_n, 1.5) + 0.8 g(h - 18 - o_n, 2))) + e_n(t)
///
/// where h = t mod 24 and g(x, s) = exp(-x^2 / (2 s^2)).
SeriesMatrix seasonal_traffic(std::size_t rows, std::size_t series, std::uint64_t seed);

} // namespace mtsf::synthetic
