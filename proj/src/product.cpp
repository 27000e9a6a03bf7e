#include "fastctrl/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastctrl/errors.hpp"

namespace fastctrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Perturbation level of the stored modes relative to the idealized power law,
// max_n |lambda_n - sgn(n) R |n|^alpha| / |n|^(alpha-1).
double perturbation_scale(const SpectralSystem& sys) {
    double p = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        double n = std::abs(static_cast<double>(sys.indices[i]));
        double ideal = (sys.indices[i] > 0 ? 1.0 : -1.0) * sys.rate * std::pow(n, sys.alpha);
        p = std::max(p, std::abs(sys.lambdas[i] - ideal) / std::pow(n, sys.alpha - 1.0));
    }
    return p;
}

// ln(1 - z/(mu - lambda_n)) summed over the idealized modes mu = +-R k^alpha
// with |k| > k_from on the given side. Direct summation until the factors are
// uniformly close to 1, then an Euler-Maclaurin remainder expanded to second
// order in z/mu.
std::complex<double> ideal_log_tail(double rate, double alpha, double lambda_n,
                                    std::complex<double> z, long k_from, int side) {
    std::complex<double> sum = 0.0;
    const double zmag = std::abs(z);
    const double cutoff = 1e6 * std::max({1.0, zmag, std::abs(lambda_n)});
    long k = k_from + 1;
    for (;; ++k) {
        double mu = side * rate * std::pow(static_cast<double>(k), alpha);
        double gap = mu - lambda_n;
        if (std::abs(gap) > cutoff) break;
        sum += std::log(1.0 - z / gap);
        if (k > 100000000) throw TruncationError("phi_n: ideal tail did not converge", k);
    }
    // Remaining factors: ln(1 - w) = -w - w^2/2 - ... with w = z/(mu - l);
    // sum_{j>=k} 1/mu_j^p via Euler-Maclaurin.
    const double x = static_cast<double>(k);
    const double s1 = (std::pow(x, 1.0 - alpha) / (alpha - 1.0) + 0.5 * std::pow(x, -alpha)) / rate;
    const double s2 = std::pow(x, 1.0 - 2.0 * alpha) / (rate * rate * (2.0 * alpha - 1.0));
    const double sgn = static_cast<double>(side);
    // 1/(mu - l) ~ 1/mu + l/mu^2 (mu carries the side sign, |l| << cutoff).
    sum += (-z) * (sgn * s1 + lambda_n * s2) - 0.5 * z * z * s2;
    return sum;
}

// Conservative bound on the log-error of replacing the true (perturbed) tail
// modes beyond K by the idealized ones.
double tail_error_bound(const SpectralSystem& sys, double lambda_n,
                        std::complex<double> z, long K) {
    double pert = perturbation_scale(sys);
    if (pert == 0.0) return 0.0;
    const double zmag = std::abs(z);
    if (zmag == 0.0) return 0.0;
    // |d/dmu ln(1 - z/(mu - l))| = |z| / (|mu - l| |mu - l - z|); the shift of
    // mode k is at most pert * k^(alpha-1).
    double bound = 0.0;
    int sides = sys.two_sided() ? 2 : 1;
    for (int side = 0; side < sides; ++side) {
        double sgn = side == 0 ? 1.0 : -1.0;
        for (long k = K + 1;; ++k) {
            double mu = sgn * sys.rate * std::pow(static_cast<double>(k), sys.alpha);
            double gap = std::abs(mu - lambda_n);
            double shifted = gap - pert * std::pow(static_cast<double>(k), sys.alpha - 1.0);
            if (shifted <= 0.5 * gap || shifted <= 2.0 * zmag) {
                // Ideal positions are not trustworthy this close in.
                return std::numeric_limits<double>::infinity();
            }
            double term = zmag * pert * std::pow(static_cast<double>(k), sys.alpha - 1.0) /
                          (shifted * (shifted - zmag));
            bound += term;
            if (term < 1e-18 * std::max(bound, 1e-300) || k > K + 2000000) break;
        }
    }
    return 2.0 * bound;  // headroom for the higher-order expansion terms
}

}  // namespace

int counting_function(const SpectralSystem& sys, int n_index, double s) {
    if (s < 0.0) throw DomainError("counting_function: s must be >= 0");
    const double ln = sys.lambda_of(n_index);
    int count = 0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (sys.indices[i] == n_index) continue;
        if (std::abs(sys.lambdas[i] - ln) <= s) ++count;
    }
    return count;
}

CountingProfile counting_profile(const SpectralSystem& sys, int n_index,
                                 const std::vector<double>& s_grid) {
    CountingProfile prof;
    prof.s_grid = s_grid;
    prof.counts.reserve(s_grid.size());
    for (double s : s_grid) prof.counts.push_back(counting_function(sys, n_index, s));
    return prof;
}

ProductEval phi_n(const SpectralSystem& sys, int n_index, std::complex<double> z,
                  double tol) {
    if (tol <= 0.0) throw DomainError("phi_n: tol must be > 0");
    const double lambda_n = sys.lambda_of(n_index);

    ProductEval out;
    long K = 0;
    for (int idx : sys.indices) K = std::max<long>(K, std::abs(idx));
    out.truncation_index = static_cast<int>(K);

    if (z == std::complex<double>(0.0, 0.0)) {
        out.value = 1.0;
        out.log_abs = 0.0;
        out.tail_bound = 0.0;
        return out;
    }

    double tail = tail_error_bound(sys, lambda_n, z, K);
    if (!(tail <= tol)) {
        // Invert the leading behavior tail ~ 2 |z| pert / (R K) to report the
        // mode count that would certify tol.
        double pert = perturbation_scale(sys);
        double need = 2.0 * std::abs(z) * pert / (sys.rate * tol);
        long required = static_cast<long>(std::ceil(std::max(need, 2.0 * K + 2.0)));
        throw TruncationError("phi_n: stored modes cannot reach requested tolerance", required);
    }
    out.tail_bound = tail;

    // Exact factors over the stored modes, accumulated in log space with the
    // argument tracked modulo 2 pi; exact zeros short-circuit.
    double log_abs = 0.0;
    double arg = 0.0;
    bool is_zero = false;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (sys.indices[i] == n_index) continue;
        std::complex<double> factor = 1.0 - z / (sys.lambdas[i] - lambda_n);
        if (factor == std::complex<double>(0.0, 0.0)) {
            is_zero = true;
            break;
        }
        log_abs += std::log(std::abs(factor));
        arg += std::arg(factor);
    }
    if (is_zero) {
        out.value = 0.0;
        out.log_abs = -std::numeric_limits<double>::infinity();
        return out;
    }

    // Analytic completion over the non-stored idealized modes.
    std::complex<double> tail_log =
        ideal_log_tail(sys.rate, sys.alpha, lambda_n, z, K, +1);
    if (sys.two_sided()) tail_log += ideal_log_tail(sys.rate, sys.alpha, lambda_n, z, K, -1);
    log_abs += tail_log.real();
    arg += tail_log.imag();

    out.log_abs = log_abs;
    out.value = log_abs < 700.0
                    ? std::polar(std::exp(log_abs), arg)
                    : std::complex<double>(std::numeric_limits<double>::infinity(),
                                           std::numeric_limits<double>::infinity());
    return out;
}

double phi_growth_coefficient(const SpectralSystem& sys, PhiBound bound) {
    const double a = sys.alpha;
    const double rs = std::pow(sys.rate, 1.0 / a);
    switch (bound) {
        case PhiBound::Dispersive:
            return kPi / (rs * std::sin(kPi / a));
        case PhiBound::ParabolicLine:
            return kPi / (2.0 * rs * std::sin(kPi / (2.0 * a)));
        case PhiBound::TwoSided:
            return 2.0 * kPi / (rs * std::sin(kPi / a));
    }
    throw DomainError("phi_growth_coefficient: bad bound kind");
}

BoundReport phi_growth_report(const SpectralSystem& sys, int n_index,
                              const std::vector<std::complex<double>>& grid,
                              PhiBound bound) {
    const double lambda_n = sys.lambda_of(n_index);
    const double c = phi_growth_coefficient(sys, bound);

    std::vector<BoundRow> rows;
    rows.reserve(grid.size());
    for (const auto& g : grid) {
        std::complex<double> z =
            bound == PhiBound::ParabolicLine
                ? std::complex<double>(-lambda_n, -g.real())  // -i x - lambda_n
                : g;
        ProductEval ev = phi_n(sys, n_index, z, 1e-4);
        BoundRow row;
        row.z_re = g.real();
        row.z_im = g.imag();
        row.log_abs = ev.log_abs;
        double mag = bound == PhiBound::ParabolicLine ? std::abs(g.real()) : std::abs(g);
        row.slack = ev.log_abs - c * std::pow(mag, 1.0 / sys.alpha);
        rows.push_back(row);
    }
    return make_bound_report("phi_growth", std::move(rows), true);
}

}  // namespace fastctrl
