#pragma once

// Canonical products Phi_n(z) = prod_{k != n} (1 - z / (lambda_k - lambda_n))
// over the modes of a spectral system, with the tail beyond the stored modes
// completed analytically from the power-law asymptotics, plus growth-bound
// checks against the leading-order envelopes exp(c |z|^(1/alpha)).

#include <complex>
#include <vector>

#include "fastctrl/fit.hpp"
#include "fastctrl/spectrum.hpp"

namespace fastctrl {

struct ProductEval {
    std::complex<double> value;  // may overflow to inf; log_abs stays valid
    double log_abs = 0.0;        // ln |Phi_n(z)|, -inf at zeros
    int truncation_index = 0;    // modes with |index| <= K entered exactly
    double tail_bound = 0.0;     // bound on |log| error of the completed tail
};

struct CountingProfile {
    std::vector<double> s_grid;
    std::vector<int> counts;
};

// #{k != n stored : |lambda_k - lambda_n| <= s}.
int counting_function(const SpectralSystem& sys, int n_index, double s);

CountingProfile counting_profile(const SpectralSystem& sys, int n_index,
                                 const std::vector<double>& s_grid);

// Evaluates Phi_n(z). Stored modes enter the product exactly; the remaining
// factors are summed in log space using the idealized eigenvalues R k^alpha.
// tail_bound estimates the error of that idealization from the perturbation
// level seen in the stored modes; TruncationError is raised (with the needed
// mode count) when it cannot be pushed below tol.
ProductEval phi_n(const SpectralSystem& sys, int n_index, std::complex<double> z,
                  double tol);

enum class PhiBound {
    Dispersive,     // Phi_n(z) on the complex plane, c = pi / (R^(1/a) sin(pi/a))
    ParabolicLine,  // Phi_n(-ix - lambda_n), c = pi / (2 R^(1/a) sin(pi/(2a)))
    TwoSided,       // two-sided spectra, c = 2 pi / (R^(1/a) sin(pi/a))
};

// Leading coefficient of the growth envelope for the given bound flavor.
double phi_growth_coefficient(const SpectralSystem& sys, PhiBound bound);

// slack(z) = ln|Phi_n(z)| - c |z|^(1/alpha) checked with the
// calibrate/validate protocol (the polynomial factors in the bounds have
// unspecified degree). For ParabolicLine the grid entries are read as real x
// and the product is evaluated at -ix - lambda_n.
BoundReport phi_growth_report(const SpectralSystem& sys, int n_index,
                              const std::vector<std::complex<double>>& grid,
                              PhiBound bound);

}  // namespace fastctrl
