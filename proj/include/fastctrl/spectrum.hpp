#pragma once

// Spectral control systems y_t + Ay = Bu (parabolic) and y_t + iAy = Bu
// (dispersive), described by their eigenvalues lambda_n, scalar control
// coefficients b_k and the power-law asymptotics lambda_n ~ R n^alpha.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fastctrl/fit.hpp"

#include "json.hpp"

namespace fastctrl {

enum class SystemKind { Parabolic, Dispersive };

struct SpectralSystem {
    SystemKind kind = SystemKind::Parabolic;
    std::vector<int> indices;                // ordered; 1..N or -N..-1,1..N
    std::vector<double> lambdas;             // strictly increasing, nonzero
    std::vector<std::complex<double>> bs;    // control coefficients, |b| > 0
    double alpha = 2.0;                      // asymptotic exponent, >= 1
    double rate = 1.0;                       // asymptotic prefactor R > 0

    SpectralSystem() = default;
    SpectralSystem(SystemKind kind, std::vector<int> indices, std::vector<double> lambdas,
                   std::vector<std::complex<double>> bs, double alpha, double rate);

    std::size_t size() const { return lambdas.size(); }
    bool two_sided() const { return !indices.empty() && indices.front() < 0; }

    // Position of a stored index; throws UnknownIndex.
    std::size_t position(int index) const;
    double lambda_of(int index) const { return lambdas[position(index)]; }
    std::complex<double> b_of(int index) const { return bs[position(index)]; }

  private:
    void validate() const;
};

// lambda_n = R n^alpha + eps_n n^(alpha-1), |eps_n| <= perturb_amplitude with
// eps_n drawn deterministically from the seed; b_k = 1.
SpectralSystem make_power_law_spectrum(double alpha, double rate, int n_modes,
                                       double perturb_amplitude, std::uint64_t seed,
                                       SystemKind kind = SystemKind::Parabolic);

// Two-sided dispersive variant: indices -N..-1, 1..N with
// lambda_{-n} ~ -R n^alpha and sgn(lambda_n) = sgn(n).
SpectralSystem make_two_sided_spectrum(double alpha, double rate, int n_modes,
                                       double perturb_amplitude, std::uint64_t seed);

// Periodic linear KdV on (0, length): lambda_k = 8 pi^3 k^3 / L^3 for
// k in {-N..-1, 1..N}, |b_k| = sqrt(1 + 4 pi^2 k^2/L^2) * (2 pi |k| / L) /
// (sqrt(L) k^2).
SpectralSystem periodic_kdv_spectrum(double length, int n_modes);

// Fractional Dirichlet Laplacian power: lambda_k = (k pi / L)^(2 gamma), so
// alpha = 2 gamma; heat (Parabolic) or Schroedinger (Dispersive) flavor.
SpectralSystem fractional_spectrum(double gamma_exp, double length, int n_modes,
                                   SystemKind kind);

// min_{m != n} |lambda_m - lambda_n| over stored modes.
double spectral_gap(const SpectralSystem& sys);

// Least-squares recovery of (alpha, R) from the top half of stored modes plus
// the worst residual |lambda_n - R n^alpha| / n^(alpha-1).
FitReport validate_asymptotics(const SpectralSystem& sys);

nlohmann::json to_json(const SpectralSystem& sys);
SpectralSystem system_from_json(const nlohmann::json& j);

}  // namespace fastctrl
