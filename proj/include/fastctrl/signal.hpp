#pragma once

#include <complex>
#include <vector>

#include "fastctrl/errors.hpp"

namespace fastctrl {

// Sampled scalar control on a uniform grid over [0, T]. Norms are trapezoid
// estimates on that grid.
struct ControlSignal {
    double T = 0.0;
    std::vector<double> time_grid;
    std::vector<std::complex<double>> values;
    double l2 = 0.0;
    double linf = 0.0;

    static ControlSignal from_samples(double T, std::vector<std::complex<double>> values);
};

inline ControlSignal ControlSignal::from_samples(double T,
                                                 std::vector<std::complex<double>> v) {
    if (T <= 0.0) throw DomainError("ControlSignal: T must be > 0");
    if (v.size() < 2) throw DomainError("ControlSignal: need at least 2 samples");
    ControlSignal s;
    s.T = T;
    s.values = std::move(v);
    const std::size_t n = s.values.size();
    s.time_grid.resize(n);
    const double h = T / static_cast<double>(n - 1);
    double sum = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.time_grid[i] = i * h;
        double m = std::norm(s.values[i]);
        peak = std::max(peak, m);
        sum += (i == 0 || i + 1 == n) ? 0.5 * m : m;
    }
    s.l2 = std::sqrt(sum * h);
    s.linf = std::sqrt(peak);
    return s;
}

}  // namespace fastctrl
