#include "mtsf/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace mtsf::synthetic {

namespace {

// Box-Muller on top-53-bit uniforms: the stream is the same on every standard library.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::vector<std::string> ids(std::size_t series, const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t n = 0; n < series; ++n) {
        out.push_back(prefix + std::to_string(n + 1));
    }
    return out;
}

std::vector<std::string> hour_stamps(std::size_t rows) {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < rows; ++t) {
        out.push_back("d" + std::to_string(t / 24 + 1) + "h" + std::to_string(t % 24));
    }
    return out;
}

} // namespace

SeriesMatrix random_walk(std::size_t rows, std::size_t series, std::uint64_t seed) {
    Gaussian g(seed);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(series));
    for (Eigen::Index n = 0; n < m.cols(); ++n) {
        double level = 10.0;
        for (Eigen::Index t = 0; t < m.rows(); ++t) {
            level += g.normal();
            m(t, n) = level;
        }
    }
    return SeriesMatrix(std::move(m), ids(series, "walk_"), "synthetic");
}

SeriesMatrix iid_noise(std::size_t rows, std::size_t series, std::uint64_t seed) {
    Gaussian g(seed);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(series));
    for (Eigen::Index n = 0; n < m.cols(); ++n) {
        for (Eigen::Index t = 0; t < m.rows(); ++t) {
            m(t, n) = 5.0 + g.normal();
        }
    }
    return SeriesMatrix(std::move(m), ids(series, "noise_"), "synthetic");
}

SeriesMatrix seasonal_traffic(std::size_t rows, std::size_t series, std::uint64_t seed) {
    Gaussian g(seed);
    auto bump = [](double x, double s) { return std::exp(-x * x / (2.0 * s * s)); };
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(series));
    for (Eigen::Index n = 0; n < m.cols(); ++n) {
        const double base = 30.0 + 40.0 * g.uniform();
        const double depth = 0.2 + 0.3 * g.uniform();
        const double offset = -1.0 + 2.0 * g.uniform();
        double noise = 0.0;
        for (Eigen::Index t = 0; t < m.rows(); ++t) {
            const double h = static_cast<double>(t % 24);
            const bool weekend = (t / 24) % 7 >= 5;
            const double dip = bump(h - 8.0 - offset, 1.5) + 0.8 * bump(h - 18.0 - offset, 2.0);
            noise = 0.6 * noise + 0.01 * base * g.normal();
            m(t, n) = base * (1.0 - depth * (weekend ? 0.5 : 1.0) * dip) + noise;
        }
    }
    return SeriesMatrix(std::move(m), ids(series, "segment_"), "hourly", 1, hour_stamps(rows));
}

} // namespace mtsf::synthetic
