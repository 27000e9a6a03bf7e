#pragma once

// Exact modal integration of y_k' + mu_k y_k = b_k u with mu_k = lambda_k
// (parabolic) or i lambda_k (dispersive): the homogeneous part is an exact
// exponential, the control convolution integrates e^{mu s} against a
// piecewise-cubic interpolant of the sampled control.

#include <complex>
#include <cstdint>
#include <vector>

#include "fastctrl/signal.hpp"
#include "fastctrl/spectrum.hpp"

namespace fastctrl {

struct ModalState {
    std::vector<std::complex<double>> coeffs;
    double time = 0.0;
};

double residual_norm(const ModalState& state);

ModalState forward_simulate(const SpectralSystem& sys, const ModalState& y0,
                            const ControlSignal& u, double T);

// Uncontrolled propagation (u = 0), exact.
ModalState free_evolve(const SpectralSystem& sys, const ModalState& y0, double T);

struct AdmissibilityReport {
    double sampled_max = 0.0;    // max over sampled unit states
    double exact_supremum = 0.0; // largest eigenvalue of the output Gram form
    int trials = 0;
};

// Admissibility constant estimate: C(T) = sup_{|z|=1} int_0^T
// |sum_k conj(b_k) e^{-conj(mu_k) t} z_k|^2 dt, evaluated exactly through the
// Gram quadratic form; the sampled path exercises the estimator against it.
AdmissibilityReport admissibility_probe(const SpectralSystem& sys, double T, int trials,
                                        std::uint64_t seed);

// States along the controlled flow at n_snapshots points of the control grid
// (first entry is y0, last is y(T)).
std::vector<ModalState> simulate_trajectory(const SpectralSystem& sys, const ModalState& y0,
                                            const ControlSignal& u, double T,
                                            int n_snapshots = 33);

// CSV rows (t, norm) of a trajectory.
void write_trajectory_csv(const std::vector<ModalState>& trajectory,
                          const std::string& path);

}  // namespace fastctrl
