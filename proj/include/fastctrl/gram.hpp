#pragma once

// Exact truncated moment problem: closed-form Gram matrices of the
// exponential families {e^{-lambda_k s}} (parabolic) and {e^{i lambda_k s}}
// (dispersive) on (0, T), solved in arbitrary precision. Provides the
// minimal-norm null controls, the truncated control cost, the distances
// d_m(T) and their dual-basis norms, and the small-time envelope check on
// d_m.

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "fastctrl/linalg.hpp"
#include "fastctrl/precision.hpp"
#include "fastctrl/signal.hpp"
#include "fastctrl/spectrum.hpp"

namespace fastctrl {

struct GramSystem {
    SpectralSystem sys;
    double T = 0.0;
    PrecisionContext precision;
    Matrix<CReal> G;
    Matrix<CReal> inverse;
    std::shared_ptr<const LdltFactor<CReal>> factor;
    double condition_estimate = 0.0;
};

// Spec-preferred working precision per kind: parabolic Gram matrices are
// exponentially ill-conditioned.
PrecisionContext default_gram_precision(SystemKind kind);

// Builds the Gram system; throws PrecisionInsufficient when the one-norm
// condition estimate exceeds 10^(digits-10).
GramSystem gram_matrix(const SpectralSystem& sys, double T, PrecisionContext precision);

// Distance from the m-th exponential to the span of the others,
// 1 / sqrt((G^-1)[m,m]).
double distance_dm(const GramSystem& gs, int m_index);

// Same distance via the explicit projection onto the reduced span; the
// independent route for cross-checks.
double distance_dm_projection(const GramSystem& gs, int m_index);

// ||psi_m|| = 1 / d_m.
double psi_norm(const GramSystem& gs, int m_index);

struct MinimalControl {
    ControlSignal signal;     // sampled on [0, T]
    double l2_norm = 0.0;     // exact Re(c^* w), not the sampled estimate
};

// Minimal L^2-norm control driving y0 (modal coefficients) to zero at time T,
// from the moment equations int_0^T u(s) e^{mu_k s} ds = -a_k / b_k with
// mu_k = i lambda_k (dispersive) or lambda_k (parabolic; the decaying
// representation adds the terminal weights e^{-lambda_k T} to the right-hand
// side).
MinimalControl minimal_norm_control(const GramSystem& gs,
                                    const std::vector<std::complex<double>>& y0,
                                    int samples = 4097);

// Truncated cost sup_{|y0|=1} of the dual-basis solution norm,
// sqrt(lambda_max(D^* G^-1 D)) with D = diag(-1/b_k).
double truncated_cost(const GramSystem& gs);

// Worst-case initial direction attaining truncated_cost (unit modal vector).
std::vector<std::complex<double>> worst_initial_direction(const GramSystem& gs);

// max_m psi_norm(m) / |b_m|; a feasible-point lower bound for the cost.
double lower_bound_cost(const GramSystem& gs);

struct DmScalingReport {
    double C = 0.0;                  // calibrated at the largest T
    double a = 0.0;                  // 1/T0, making the envelope tight there
    std::vector<double> T_values;    // descending
    std::vector<double> dm;          // computed distances
    std::vector<double> envelope;    // min_j C sqrt(T) (j!)^(alpha-1) (aT)^j
    std::vector<int> j_star;         // minimizing j per T
    double max_violation = 0.0;      // max (dm - envelope); <= 0 passes
    double envelope_exponent = 0.0;  // fitted power of 1/T in -ln(env / C sqrt(T))
};

// Calibrates (C, a) at the largest grid time and checks
// d_m(T) <= min_j C sqrt(T) (j!)^(alpha-1) (a T)^j on the rest of the grid.
// One-sided systems only.
DmScalingReport dm_scaling_check(const SpectralSystem& sys,
                                 const std::vector<double>& T_grid, int m_index,
                                 PrecisionContext precision);

// -ln of min_j (j!)^(alpha-1) (a T)^j together with the minimizing j; the
// factorial-vs-power optimization behind the small-time envelope shape.
std::pair<double, int> dm_envelope_depth(double alpha, double a, double T,
                                         int j_cap = 400);

}  // namespace fastctrl
