#include "fastctrl/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "fastctrl/errors.hpp"

namespace fastctrl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sigma_nu(double nu, double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-nu / (1.0 - t * t));
}

namespace {

// Trapezoid of f over [0, 1] with n intervals; f(1) = 0 for all integrands
// here, f(0) carries weight 1/2.
template <typename F>
double half_trapezoid(const F& f, int n) {
    double h = 1.0 / n;
    double sum = 0.5 * f(0.0);
    for (int i = 1; i < n; ++i) sum += f(i * h);
    return sum * h;
}

template <typename F>
double doubling_integral(const F& f, int n0, double rel_tol, const char* who,
                         int max_nodes = 1 << 22) {
    int n = n0;
    double prev = half_trapezoid(f, n);
    while (n < max_nodes) {
        n *= 2;
        double cur = half_trapezoid(f, n);
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    throw QuadratureNotConverged(std::string(who) + ": node limit reached");
}

}  // namespace

double c_nu(double nu, int quad_nodes) {
    if (nu <= 0.0) throw DomainError("c_nu: nu must be > 0");
    auto f = [nu](double t) { return sigma_nu(nu, t); };
    // Integrand scale is e^{-nu}; relative doubling handles it directly.
    double norm = 2.0 * doubling_integral(f, std::max(quad_nodes, 64), 1e-13, "c_nu");
    return 1.0 / norm;
}

MultiplierConfig::MultiplierConfig(double nu_, double beta_, double delta_, double alpha_,
                                   int quad_nodes_)
    : nu(nu_), beta(beta_), delta(delta_), alpha(alpha_), quad_nodes(quad_nodes_) {
    if (nu <= 0.0 || beta <= 0.0) throw DomainError("MultiplierConfig: nu, beta must be > 0");
    if (delta < 0.0) throw DomainError("MultiplierConfig: delta must be >= 0");
    if (alpha < 2.0) throw DomainError("MultiplierConfig: alpha must be >= 2");
    if (quad_nodes < 32) throw DomainError("MultiplierConfig: quad_nodes must be >= 32");
    double target = std::pow((kPi + delta) / std::sin(kPi / alpha), alpha);
    double got = beta * std::pow(nu, alpha - 1.0);
    if (std::abs(got - target) > 1e-12 * target)
        throw DomainError("MultiplierConfig: beta nu^(alpha-1) coupling violated");
}

MultiplierConfig link_beta_to_nu(double alpha, double delta, double beta, int quad_nodes) {
    if (alpha < 2.0) throw DomainError("link_beta_to_nu: alpha must be >= 2");
    if (delta < 0.0) throw DomainError("link_beta_to_nu: delta must be >= 0");
    if (beta <= 0.0) throw DomainError("link_beta_to_nu: beta must be > 0");
    double target = std::pow((kPi + delta) / std::sin(kPi / alpha), alpha);
    double nu = std::pow(target / beta, 1.0 / (alpha - 1.0));
    return MultiplierConfig(nu, beta, delta, alpha, quad_nodes);
}

std::complex<double> h_beta(const MultiplierConfig& cfg, std::complex<double> z) {
    if (std::abs(z.imag()) * cfg.beta > 55.0)
        throw QuadratureNotConverged("h_beta: |Im z| beta too large for double path");
    const double cn = c_nu(cfg.nu, cfg.quad_nodes);
    // e^{-i b t z} + e^{+i b t z} folded over t >= 0 (sigma is even).
    auto fre = [&](double t) {
        double s = sigma_nu(cfg.nu, t);
        if (s == 0.0) return 0.0;
        double a = cfg.beta * t * z.real();
        double b = cfg.beta * t * z.imag();
        return s * std::cos(a) * std::cosh(b);
    };
    auto fim = [&](double t) {
        double s = sigma_nu(cfg.nu, t);
        if (s == 0.0) return 0.0;
        double a = cfg.beta * t * z.real();
        double b = cfg.beta * t * z.imag();
        return s * std::sin(a) * std::sinh(b);
    };
    int n0 = std::max(cfg.quad_nodes,
                      64 + static_cast<int>(cfg.beta * std::abs(z) / kPi * 8.0));
    // 2 cos(beta t z) = 2 cos(a) cosh(b) - 2 i sin(a) sinh(b), a + ib = beta t z.
    double re = 2.0 * cn * doubling_integral(fre, n0, 1e-11, "h_beta");
    double im =
        z.imag() == 0.0 ? 0.0 : -2.0 * cn * doubling_integral(fim, n0, 1e-11, "h_beta");
    return {re, im};
}

namespace {

// Starting node count for the [0,1] trapezoid levels: resolve the
// oscillation/growth rate omega = |beta a| plus the aliasing margin that the
// absolute accuracy target demands (the bump transform falls like
// e^{nu - sqrt(nu omega)}).
long hp_start_nodes(double nu_d, double omega, int digits) {
    double nu = std::max(nu_d, 1e-6);
    double margin = std::pow((digits + 4) * 2.302585 + nu, 2.0) / nu;
    double need = (omega + margin) / kPi + 8.0 * nu_d + 64.0;
    long q = 256;
    while (q < static_cast<long>(need)) q *= 2;
    return q;
}

// Shared extended-precision core: 2 C_nu int_0^1 sigma_nu(t) K(beta t a) dt
// with K = cos (real axis) or cosh (imaginary axis). Uniform nodes, rotation
// or exp recurrences across the grid, node doubling until the change is below
// the target.
Real hp_integral(double nu_d, double beta_d, double a_d, int digits, bool trig) {
    PrecisionGuard guard{PrecisionContext(std::max(digits, 20))};
    const Real nu = nu_d;
    const Real arg = Real(beta_d) * Real(a_d);

    auto level_sum = [&](long q) {
        // Trapezoid over [0,1] with q intervals; t=1 contributes 0.
        Real h = Real(1) / q;
        Real sum = Real(0.5) * exp(-nu);  // sigma(0), weight 1/2
        if (trig) {
            const Real theta = arg * h;
            const Real c_step = cos(theta), s_step = sin(theta);
            Real c = 1, s = 0;
            for (long j = 1; j < q; ++j) {
                Real cn = c * c_step - s * s_step;
                Real sn = s * c_step + c * s_step;
                c = cn;
                s = sn;
                Real t = Real(j) * h;
                sum += exp(-nu / (1 - t * t)) * c;
            }
        } else {
            const Real estep = exp(arg * h);
            Real ep = 1, em = 1;
            const Real inv_estep = Real(1) / estep;
            for (long j = 1; j < q; ++j) {
                ep *= estep;
                em *= inv_estep;
                Real t = Real(j) * h;
                sum += exp(-nu / (1 - t * t)) * Real(0.5) * (ep + em);
            }
        }
        return sum * h;
    };

    long q = hp_start_nodes(nu_d, std::abs(beta_d * a_d), digits);
    Real prev = level_sum(q);
    const Real target = pow(Real(10), -(digits - 6));
    for (int it = 0; it < 14; ++it) {
        q *= 2;
        Real cur = level_sum(q);
        Real diff = abs(cur - prev);
        if (diff <= target * (Real(1) + abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureNotConverged("hp_integral: node limit reached");
}

Real hp_c_nu(double nu_d, int digits) {
    Real norm = 2 * hp_integral(nu_d, 0.0, 0.0, digits, true);
    return Real(1) / norm;
}

}  // namespace

double h_beta_real_hp(const MultiplierConfig& cfg, double x, int digits) {
    PrecisionGuard guard{PrecisionContext(std::max(digits, 20))};
    Real v = hp_c_nu(cfg.nu, digits) * 2 * hp_integral(cfg.nu, cfg.beta, x, digits, true);
    return static_cast<double>(v);
}

double h_beta_imag_hp(const MultiplierConfig& cfg, double y, int digits) {
    PrecisionGuard guard{PrecisionContext(std::max(digits, 20))};
    Real v = hp_c_nu(cfg.nu, digits) * 2 * hp_integral(cfg.nu, cfg.beta, y, digits, false);
    return static_cast<double>(v);
}

std::vector<double> h_beta_real_batch(const MultiplierConfig& cfg, double y0, double dy,
                                      int count, int digits) {
    if (count < 1 || dy <= 0.0) throw DomainError("h_beta_real_batch: bad grid");
    PrecisionGuard guard{PrecisionContext(std::max(digits, 20))};
    const Real nu = cfg.nu;
    const Real beta = cfg.beta;
    const Real ry0 = y0;
    const Real rdy = dy;
    const Real cn2 = hp_c_nu(cfg.nu, digits) * 2;

    const double worst = std::max(std::abs(y0), std::abs(y0 + (count - 1) * dy));

    auto level = [&](long q) {
        std::vector<Real> acc(count, Real(0));
        const Real h = Real(1) / q;
        // t = 0 node, weight 1/2; cos term is 1 for every grid point.
        {
            Real w = Real(0.5) * exp(-nu);
            for (int j = 0; j < count; ++j) acc[j] += w;
        }
        for (long i = 1; i < q; ++i) {
            const Real t = Real(i) * h;
            const Real w = exp(-nu / (1 - t * t));
            // cos(beta t (y0 + j dy)) advanced across j by rotation.
            const Real phase0 = beta * t * ry0;
            const Real theta = beta * t * rdy;
            Real c = cos(phase0), s = sin(phase0);
            const Real cs = cos(theta), ss = sin(theta);
            for (int j = 0; j < count; ++j) {
                acc[j] += w * c;
                Real cn = c * cs - s * ss;
                Real sn = s * cs + c * ss;
                c = cn;
                s = sn;
            }
        }
        for (auto& v : acc) v *= h;
        return acc;
    };

    long q = hp_start_nodes(cfg.nu, cfg.beta * worst, digits);
    std::vector<Real> prev = level(q);
    const Real target = pow(Real(10), -(digits - 6));
    for (int it = 0; it < 10; ++it) {
        q *= 2;
        std::vector<Real> cur = level(q);
        Real worst_diff(0);
        for (int j = 0; j < count; ++j) {
            Real d = abs(cur[j] - prev[j]) / (Real(1) + abs(cur[j]));
            if (d > worst_diff) worst_diff = d;
        }
        if (worst_diff <= target) {
            std::vector<double> out(count);
            for (int j = 0; j < count; ++j) out[j] = static_cast<double>(cn2 * cur[j]);
            return out;
        }
        prev = std::move(cur);
    }
    throw QuadratureNotConverged("h_beta_real_batch: node limit reached");
}

BoundReport est_mul_decay_check(const MultiplierConfig& cfg,
                                const std::vector<double>& x_grid) {
    const double lead = (kPi + cfg.delta / 2.0) / std::sin(kPi / cfg.alpha);
    const double rhs0 = 0.75 * cfg.nu + 0.5 * std::log(cfg.nu + 1.0);

    std::vector<BoundRow> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        int digits =
            static_cast<int>(std::sqrt(cfg.nu * cfg.beta * std::abs(x)) / 2.302585) + 30;
        double h = h_beta_real_hp(cfg, x, digits);
        BoundRow row;
        row.z_re = x;
        row.log_abs = std::log(std::max(std::abs(h), 1e-290));
        row.slack = row.log_abs + lead * std::pow(std::abs(x), 1.0 / cfg.alpha) - rhs0;
        rows.push_back(row);
    }
    return make_bound_report("est_mul_decay", std::move(rows), false);
}

BoundReport minmult_check(const MultiplierConfig& cfg, const std::vector<double>& y_grid) {
    std::vector<BoundRow> rows;
    rows.reserve(y_grid.size());
    for (double y : y_grid) {
        double h = h_beta_imag_hp(cfg, y, 40);
        BoundRow row;
        row.z_im = y;
        row.log_abs = std::log(h);
        // ln of required lower envelope with K = 1; calibration absorbs ln K.
        double envelope = cfg.beta * std::abs(y) / (2.0 * std::sqrt(cfg.nu + 1.0)) -
                          0.5 * std::log(cfg.nu + 1.0);
        row.slack = envelope - row.log_abs;  // <= ln K must hold after calibration
        rows.push_back(row);
    }
    return make_bound_report("minmult", std::move(rows), false);
}

}  // namespace fastctrl
