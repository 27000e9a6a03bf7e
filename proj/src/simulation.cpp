#include "fastctrl/simulation.hpp"

#include <array>
#include <cmath>

#include "fastctrl/csvio.hpp"
#include "fastctrl/errors.hpp"
#include "fastctrl/linalg.hpp"
#include "fastctrl/prng.hpp"

namespace fastctrl {

double residual_norm(const ModalState& state) {
    double s = 0.0;
    for (auto& c : state.coeffs) s += std::norm(c);
    return std::sqrt(s);
}

namespace {

using Cd = std::complex<double>;

// Moments M_k(z) = int_0^1 s^k e^{z s} ds for k = 0..3.
std::array<Cd, 4> exp_moments(Cd z) {
    std::array<Cd, 4> m;
    if (std::abs(z) < 0.5) {
        // M_k = sum_p z^p / (p! (k + p + 1)).
        for (int k = 0; k < 4; ++k) {
            Cd term = 1.0, sum = 0.0;
            for (int p = 0; p < 30; ++p) {
                sum += term / static_cast<double>(k + p + 1);
                term *= z / static_cast<double>(p + 1);
                if (std::abs(term) < 1e-20) break;
            }
            m[k] = sum;
        }
        return m;
    }
    Cd ez = std::exp(z);
    m[0] = (ez - 1.0) / z;
    for (int k = 1; k < 4; ++k) m[k] = (ez - static_cast<double>(k) * m[k - 1]) / z;
    return m;
}

// Integration weights for int_0^1 p(s) e^{z s} ds where p is the Lagrange
// cubic through samples at s = off-1, off, off+1, off+2 (off = 1 for the
// interior stencil); returns the weight of each of the four samples.
std::array<Cd, 4> cubic_weights(Cd z, int off) {
    // Lagrange basis on nodes n_j = j - off, j = 0..3, expanded in monomials.
    std::array<double, 4> nodes{};
    for (int j = 0; j < 4; ++j) nodes[j] = static_cast<double>(j - off);
    auto m = exp_moments(z);
    std::array<Cd, 4> w{};
    for (int j = 0; j < 4; ++j) {
        // Coefficients of prod_{l != j} (s - n_l) / (n_j - n_l).
        std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
        double denom = 1.0;
        int deg = 0;
        for (int l = 0; l < 4; ++l) {
            if (l == j) continue;
            denom *= nodes[j] - nodes[l];
            for (int d = deg; d >= 0; --d) {
                poly[d + 1] += poly[d];
                poly[d] *= -nodes[l];
            }
            ++deg;
        }
        Cd acc = 0.0;
        for (int d = 0; d <= 3; ++d) acc += poly[d] * m[d];
        w[j] = acc / denom;
    }
    return w;
}

}  // namespace

ModalState free_evolve(const SpectralSystem& sys, const ModalState& y0, double T) {
    if (y0.coeffs.size() != sys.size())
        throw GridMismatch("free_evolve: state size does not match system");
    ModalState out;
    out.time = y0.time + T;
    out.coeffs.resize(sys.size());
    for (std::size_t k = 0; k < sys.size(); ++k) {
        Cd mu = sys.kind == SystemKind::Parabolic ? Cd(sys.lambdas[k], 0.0)
                                                  : Cd(0.0, sys.lambdas[k]);
        out.coeffs[k] = std::exp(-mu * T) * y0.coeffs[k];
    }
    return out;
}

ModalState forward_simulate(const SpectralSystem& sys, const ModalState& y0,
                            const ControlSignal& u, double T) {
    if (y0.coeffs.size() != sys.size())
        throw GridMismatch("forward_simulate: state size does not match system");
    if (std::abs(u.T - T) > 1e-12 * std::max(1.0, T))
        throw GridMismatch("forward_simulate: control horizon does not match T");
    const std::size_t n_samp = u.values.size();
    if (n_samp < 4) throw GridMismatch("forward_simulate: control grid too coarse");
    const std::size_t n_int = n_samp - 1;
    const double h = T / static_cast<double>(n_int);

    ModalState out;
    out.time = y0.time + T;
    out.coeffs.resize(sys.size());

    for (std::size_t k = 0; k < sys.size(); ++k) {
        const Cd mu = sys.kind == SystemKind::Parabolic ? Cd(sys.lambdas[k], 0.0)
                                                        : Cd(0.0, sys.lambdas[k]);
        const Cd z = mu * h;

        // Precompute the three stencil variants (left edge, interior, right
        // edge); z is constant across the uniform grid.
        const auto w_left = cubic_weights(z, 0);
        const auto w_mid = cubic_weights(z, 1);
        const auto w_right = cubic_weights(z, 2);

        // I = int_0^T e^{-mu (T - s)} u(s) ds
        //   = e^{-mu T} sum_i e^{mu t_i} h int_0^1 e^{mu h s} p_i(s) ds.
        // The accumulation runs i from the right so only decaying
        // exponentials e^{-mu (T - t_i)} appear for parabolic modes.
        Cd acc = 0.0;
        const Cd decay = std::exp(-z);  // e^{-mu h}
        Cd front = 1.0;                 // e^{-mu (T - t_i)} at i = n_int - 1 start
        for (std::size_t rev = 0; rev < n_int; ++rev) {
            const std::size_t i = n_int - 1 - rev;
            front = rev == 0 ? std::exp(-z) : front * decay;
            // Periodic exact refresh keeps the recurrence drift negligible.
            if ((rev & 1023) == 1023) front = std::exp(-z * static_cast<double>(rev + 1));
            const std::array<Cd, 4>* w;
            std::size_t base;
            if (i == 0) {
                w = &w_left;
                base = 0;
            } else if (i + 2 <= n_samp - 1) {
                w = &w_mid;
                base = i - 1;
            } else {
                w = &w_right;
                base = i - 2;
            }
            Cd local = 0.0;
            for (int j = 0; j < 4; ++j) local += (*w)[j] * u.values[base + j];
            acc += front * local;
        }
        acc *= h;

        out.coeffs[k] = std::exp(-mu * T) * y0.coeffs[k] + sys.bs[k] * acc;
    }
    return out;
}

std::vector<ModalState> simulate_trajectory(const SpectralSystem& sys, const ModalState& y0,
                                            const ControlSignal& u, double T,
                                            int n_snapshots) {
    if (n_snapshots < 2) throw DomainError("simulate_trajectory: need >= 2 snapshots");
    const std::size_t n_samp = u.values.size();
    if (n_samp < 5) throw GridMismatch("simulate_trajectory: control grid too coarse");

    // Segment ends snapped to the control grid, each segment at least four
    // intervals wide so the cubic stencils stay valid.
    std::vector<std::size_t> stops{0};
    for (int s = 1; s < n_snapshots; ++s) {
        std::size_t idx = (n_samp - 1) * static_cast<std::size_t>(s) / (n_snapshots - 1);
        if (idx < stops.back() + 4) continue;
        if (idx > n_samp - 1 - 4 && idx != n_samp - 1) continue;
        stops.push_back(idx);
    }
    if (stops.back() != n_samp - 1) stops.push_back(n_samp - 1);

    std::vector<ModalState> out;
    out.reserve(stops.size());
    out.push_back(y0);
    out.front().time = 0.0;
    for (std::size_t s = 1; s < stops.size(); ++s) {
        const std::size_t a = stops[s - 1], b = stops[s];
        const double t0 = u.time_grid[a];
        const double t1 = u.time_grid[b];
        std::vector<std::complex<double>> chunk(u.values.begin() + a,
                                                u.values.begin() + b + 1);
        ModalState next = forward_simulate(
            sys, out.back(), ControlSignal::from_samples(t1 - t0, std::move(chunk)),
            t1 - t0);
        next.time = t1;
        out.push_back(std::move(next));
    }
    out.back().time = T;
    return out;
}

void write_trajectory_csv(const std::vector<ModalState>& trajectory,
                          const std::string& path) {
    CsvWriter csv(path);
    csv.header({"t", "norm"});
    for (const auto& s : trajectory)
        csv.row({CsvWriter::format(s.time), CsvWriter::format(residual_norm(s))});
}

AdmissibilityReport admissibility_probe(const SpectralSystem& sys, double T, int trials,
                                        std::uint64_t seed) {
    if (trials < 1) throw DomainError("admissibility_probe: trials must be >= 1");
    const std::size_t n = sys.size();

    // Output Gram form: F(z) = z^* A z with
    // A[j,k] = b_j conj(b_k) int_0^T e^{-conj(mu_j) t} conj(e^{-conj(mu_k) t}) dt.
    Matrix<Cx<double>> a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> ip;
            if (sys.kind == SystemKind::Parabolic) {
                double s = sys.lambdas[j] + sys.lambdas[k];
                ip = -std::expm1(-s * T) / s;
            } else {
                double d = sys.lambdas[k] - sys.lambdas[j];
                if (j == k) {
                    ip = T;
                } else {
                    ip = {std::sin(d * T) / d, -(std::cos(d * T) - 1.0) / d};
                }
            }
            std::complex<double> coef = sys.bs[j] * std::conj(sys.bs[k]);
            std::complex<double> v = coef * ip;
            a(j, k) = Cx<double>(v.real(), v.imag());
        }
    }

    AdmissibilityReport rep;
    rep.trials = trials;
    rep.exact_supremum = largest_eigenvalue(a, 1e-12);

    for (int t = 0; t < trials; ++t) {
        auto z = random_unit_vector(n, seed + static_cast<std::uint64_t>(t));
        std::complex<double> quad = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                quad += std::conj(z[i]) * std::complex<double>(a(i, j).re, a(i, j).im) * z[j];
        rep.sampled_max = std::max(rep.sampled_max, quad.real());
    }
    return rep;
}

}  // namespace fastctrl
