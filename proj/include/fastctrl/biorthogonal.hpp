#pragma once

// Explicit biorthogonal families on [-T/2, T/2] by Fourier inversion of the
// frequency symbols
//   dispersive: g_n(x) = Phi_n(-x - lambda_n) H_beta(x + lambda_n),
//               beta = T (1 - delta) / 2,
//   parabolic:  h_n(x) = Phi_n(-ix - lambda_n) H_beta(c_a x) /
//               H_beta(i c_a lambda_n),
//               beta = (1-delta) T (2 sin(pi/2a))^a / (2 sin(pi/a)^a),
//               c_a  = sin(pi/a)^a / (2 sin(pi/2a))^a,
// and the fast controls assembled from them. The products run over the
// stored modes (the targets of the truncated moment problem); the inversion
// uses a certified quadratic-decay frequency cutoff and uniform-grid
// trapezoid sums, which are alias-accurate for these compactly supported
// inverses.

#include <complex>
#include <functional>
#include <vector>

#include "fastctrl/multiplier.hpp"
#include "fastctrl/signal.hpp"
#include "fastctrl/spectrum.hpp"

namespace fastctrl {

struct SynthesisOptions {
    double delta = 0.05;
    double freq_tol = 1e-9;    // target for the certified tail bound
    int time_points = 4097;    // samples across [-T/2, T/2] (lower bound)
    double grid_periods = 4.0; // frequency spacing dx = 2 pi / (grid_periods * T)
    double probe_start = 16.0; // first certification band edge
    int max_band_doublings = 22;
    bool enforce_nyquist = true;  // raise time_points to the alias-free count
};

struct BiorthogonalFamily {
    double T = 0.0;
    SystemKind kind = SystemKind::Dispersive;
    double delta = 0.0;
    std::vector<int> indices;
    std::vector<double> time_grid;  // uniform, symmetric about 0
    std::vector<std::vector<std::complex<double>>> samples;
    double x_cutoff = 0.0;   // largest certified frequency radius
    double tail_bound = 0.0; // worst certified tail over the modes
};

// Multiplier configuration used by the synthesis for a given system.
MultiplierConfig synthesis_multiplier(const SpectralSystem& sys, double T, double delta);

// Pointwise frequency symbols (double-precision quadrature path; the family
// pipeline evaluates the multiplier in extended precision instead).
std::complex<double> g_n(const SpectralSystem& sys, int n_index, double x, double T,
                         double delta);
std::complex<double> h_n(const SpectralSystem& sys, int n_index, double x, double T,
                         double delta);

struct TailCertificate {
    double cutoff = 0.0;    // X
    double constant = 0.0;  // c with |f(x)| <= c / (1 + (x - center)^2) beyond the probes
    double tail_bound = 0.0;
};

// Probes |freq_fn| on expanding bands around `center` until the quadratic
// envelope tail (c/pi) (pi/2 - arctan X) drops below tol; throws
// TailNotBounded when the bands stop improving.
TailCertificate certify_quadratic_tail(const std::function<std::complex<double>(double)>& freq_fn,
                                       double center, double tol,
                                       const SynthesisOptions& opts = {});

struct InversionResult {
    std::vector<double> time_grid;
    std::vector<std::complex<double>> samples;
    double x_cutoff = 0.0;
    double tail_bound = 0.0;
};

// f(t) = (1/2pi) int_{|x - center| <= X} freq_fn(x) e^{ixt} dx on a uniform
// time grid over [t_lo, t_hi].
InversionResult fourier_invert(const std::function<std::complex<double>(double)>& freq_fn,
                               double center, const TailCertificate& cert, double T,
                               double t_lo, double t_hi, int time_points,
                               double grid_periods = 4.0);

// Certify-then-invert on [-T/2, T/2]; the generic single-function operation.
InversionResult invert_to_time(const std::function<std::complex<double>(double)>& freq_fn,
                               double center, double T, double tol, int time_points,
                               const SynthesisOptions& opts = {});

BiorthogonalFamily synthesize_family(const SpectralSystem& sys, double T,
                                     const SynthesisOptions& opts = {});

// M[n][k] = int f_n(t) e^{i lambda_k t} dt (dispersive) or
// int w_n(t) e^{lambda_k t} dt (parabolic), trapezoid on the family grid.
std::vector<std::vector<std::complex<double>>> biorthogonality_matrix(
    const BiorthogonalFamily& family, const SpectralSystem& sys);

// max |M - I|.
double biorthogonality_residual(const std::vector<std::vector<std::complex<double>>>& m);

// u(t) = -sum_k (a_k / b_k) e^{-mu_k T/2} f_k(t - T/2) on [0, T].
ControlSignal synthesize_control(const BiorthogonalFamily& family, const SpectralSystem& sys,
                                 const std::vector<std::complex<double>>& y0);

// The synthesis module's own estimate of the terminal state its control
// leaves behind: the exact-quadrature residual from the pairing matrix,
// y_k(T) = sum_j a_j (b_k / b_j) e^{-(mu_k + mu_j) T/2} (delta_jk - M[j][k]),
// plus a cubic-interpolation bound for the sampled signal (from fourth
// differences of the samples).
struct ResidualPrediction {
    double family_part = 0.0;
    double sampling_part = 0.0;
    double total = 0.0;
};

ResidualPrediction predict_terminal_residual(const BiorthogonalFamily& family,
                                             const SpectralSystem& sys,
                                             const std::vector<std::complex<double>>& y0);

// Convenience: synthesize the family, then the control.
ControlSignal synthesize_control(const SpectralSystem& sys,
                                 const std::vector<std::complex<double>>& y0, double T,
                                 const SynthesisOptions& opts = {});

// Kind-aware center selection for a mode's frequency symbol
// (-lambda_n dispersive, 0 parabolic), then certify-and-invert.
InversionResult invert_to_time(const std::function<std::complex<double>(double)>& freq_fn,
                               const SpectralSystem& sys, int n_index, double T, double tol,
                               int time_points, const SynthesisOptions& opts = {});

// CSV rows (t, re, im).
void write_signal_csv(const ControlSignal& u, const std::string& path);
void write_family_csv(const BiorthogonalFamily& family, const std::string& path);

}  // namespace fastctrl
