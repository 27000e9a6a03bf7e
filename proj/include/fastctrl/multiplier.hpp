#pragma once

// The compactly supported multiplier H_beta(z) = C_nu * int_{-1}^{1}
// sigma_nu(t) e^{-i beta t z} dt built from the bump
// sigma_nu(t) = exp(-nu / (1 - t^2)), with the coupling
// beta * nu^(alpha-1) = ((pi + delta) / sin(pi/alpha))^alpha.
//
// On the real axis H_beta is even, real, and decays faster than any power;
// the decay is produced by cancellation of the oscillatory integral, so far
// field values are computed in extended precision (see MultiplierTable).

#include <complex>
#include <vector>

#include "fastctrl/fit.hpp"
#include "fastctrl/precision.hpp"

namespace fastctrl {

double sigma_nu(double nu, double t);

// C_nu = 1 / ||sigma_nu||_1, quadrature-doubling to relative 1e-12.
double c_nu(double nu, int quad_nodes = 256);

struct MultiplierConfig {
    double nu = 1.0;
    double beta = 1.0;
    double delta = 0.05;
    double alpha = 2.0;
    int quad_nodes = 256;

    MultiplierConfig() = default;
    MultiplierConfig(double nu, double beta, double delta, double alpha,
                     int quad_nodes = 256);
};

// Inverts the beta-nu coupling: nu = (((pi+delta)/sin(pi/alpha))^alpha /
// beta)^(1/(alpha-1)).
MultiplierConfig link_beta_to_nu(double alpha, double delta, double beta,
                                 int quad_nodes = 256);

// Double-precision evaluation, node-doubling to relative 1e-10. Reliable
// while the cancellation stays above the double noise floor (|H| >~ 1e-13 on
// the real axis) and for |Im z| * beta <= 50.
std::complex<double> h_beta(const MultiplierConfig& cfg, std::complex<double> z);

// Extended-precision real-axis evaluation (handles the cancellation-driven
// far field). Returns H_beta(x) rounded to double.
double h_beta_real_hp(const MultiplierConfig& cfg, double x, int digits);

// H_beta(i y): positive, no cancellation.
double h_beta_imag_hp(const MultiplierConfig& cfg, double y, int digits);

// H_beta on the uniform grid y0 + j dy, j = 0..count-1, in one extended
// precision pass (the bump values are shared across the grid and the
// oscillatory factors advance by rotation recurrences). Node counts double
// until the whole batch is converged.
std::vector<double> h_beta_real_batch(const MultiplierConfig& cfg, double y0, double dy,
                                      int count, int digits);

// Lemma-style decay check: ln|H_beta(x)| + ((pi+delta/2)/sin(pi/alpha))
// |x|^(1/alpha) <= 3 nu/4 + ln(nu+1)/2 + c0 with c0 calibrated on half the
// grid.
BoundReport est_mul_decay_check(const MultiplierConfig& cfg,
                                const std::vector<double>& x_grid);

// Lower-bound check on the imaginary axis: H_beta(iy) >=
// e^{beta y / (2 sqrt(nu+1))} / (K sqrt(nu+1)) with K calibrated on half the
// grid; the report slack is ln of the bound minus ln H.
BoundReport minmult_check(const MultiplierConfig& cfg, const std::vector<double>& y_grid);

}  // namespace fastctrl
