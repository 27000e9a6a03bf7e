#include "fastctrl/lemmas.hpp"

#include <algorithm>
#include <cmath>

#include "fastctrl/errors.hpp"
#include "fastctrl/quadrature.hpp"

namespace fastctrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (1+v)^(1/a) - (1-v)^(1/a) without cancellation at small v.
double power_difference(double alpha, double v) {
    double s2 = std::log1p(-v) / alpha;
    double ratio = (std::log1p(v) - std::log1p(-v)) / alpha;
    return std::exp(s2) * std::expm1(ratio);
}

}  // namespace

double integral_U(double alpha, double x) {
    if (alpha <= 1.0) throw DomainError("integral_U: alpha must be > 1");
    if (x <= 0.0) throw DomainError("integral_U: x must be > 0");
    // [0, 1/2] directly; [1/2, 1] with v = 1 - w^alpha to absorb the
    // (1-v)^(1/a) kink at v = 1.
    auto f1 = [&](double v) {
        if (v == 0.0) return 2.0 / (alpha * x);
        return power_difference(alpha, v) / (v * (v + x));
    };
    double part1 = adaptive_simpson(f1, 0.0, 0.5, 1e-12);
    const double w_hi = std::pow(0.5, 1.0 / alpha);
    auto f2 = [&](double w) {
        double wa = std::pow(w, alpha);
        double v = 1.0 - wa;
        double term = std::pow(1.0 + v, 1.0 / alpha) - w;
        return term * alpha * std::pow(w, alpha - 1.0) / (v * (v + x));
    };
    double part2 = adaptive_simpson(f2, 0.0, w_hi, 1e-12);
    return part1 + part2;
}

double integral_V(double alpha, double x) {
    if (alpha <= 1.0) throw DomainError("integral_V: alpha must be > 1");
    if (x <= 0.0) throw DomainError("integral_V: x must be > 0");
    // v = 1/s then s = u^(a/(a-1)) removes the endpoint singularity:
    // V = a/(a-1) int_0^1 (1 + u^(a/(a-1)))^(1/a) / (1 + x u^(a/(a-1))) du.
    const double p = alpha / (alpha - 1.0);
    auto f = [&](double u) {
        double up = std::pow(u, p);
        return std::pow(1.0 + up, 1.0 / alpha) / (1.0 + x * up);
    };
    return p * adaptive_simpson(f, 0.0, 1.0, 1e-12);
}

double integral_W(double alpha, double x) {
    if (alpha <= 1.0) throw DomainError("integral_W: alpha must be > 1");
    if (x <= 0.0) throw DomainError("integral_W: x must be > 0");
    // W = int_0^1 (1-s)^(1/a) s^(-1/a) / (1+sx) ds; split at 1/2, power
    // substitutions at both ends.
    const double p = alpha / (alpha - 1.0);
    auto f1 = [&](double u) {
        double s = std::pow(u, p);
        return p * std::pow(1.0 - s, 1.0 / alpha) / (1.0 + s * x);
    };
    double part1 = adaptive_simpson(f1, 0.0, std::pow(0.5, 1.0 / p), 1e-12);
    auto f2 = [&](double w) {
        double wa = std::pow(w, alpha);
        double s = 1.0 - wa;
        return alpha * w * std::pow(w, alpha - 1.0) * std::pow(s, -1.0 / alpha) /
               (1.0 + s * x);
    };
    double part2 = adaptive_simpson(f2, 0.0, std::pow(0.5, 1.0 / alpha), 1e-12);
    return part1 + part2;
}

double integral_W_closed_form(double alpha, double x) {
    return kPi * std::expm1(std::log1p(x) / alpha) / (x * std::sin(kPi / alpha));
}

double integral_I(double alpha) {
    if (alpha <= 1.0) throw DomainError("integral_I: alpha must be > 1");
    // Split at t = 1 and substitute away both endpoint singularities:
    // I = a/(a-1) int_0^1 du / (1 + u^(a/(a-1))) + a int_0^1 du / (1 + u^a).
    const double p = alpha / (alpha - 1.0);
    auto f1 = [&](double u) { return 1.0 / (1.0 + std::pow(u, p)); };
    auto f2 = [&](double u) { return 1.0 / (1.0 + std::pow(u, alpha)); };
    return p * adaptive_simpson(f1, 0.0, 1.0, 1e-12) +
           alpha * adaptive_simpson(f2, 0.0, 1.0, 1e-12);
}

namespace {

// Direct Gauss series, |z| <= 0.75.
double gauss_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 4000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
    }
    throw SeriesNotConverged("hyp2f1: Gauss series did not converge");
}

bool near_nonpositive_integer(double x) {
    return x <= 1e-12 && std::abs(x - std::round(x)) < 1e-9;
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (near_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a non-positive integer");
    if (z >= 1.0 || z < -1.0) throw DomainError("hyp2f1: z must lie in [-1, 1)");
    if (z == 0.0) return 1.0;
    if (z < 0.0) {
        // Euler transformation: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)),
        // mapping [-1, 0) to (0, 1/2].
        return std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1.0));
    }
    if (z <= 0.75) return gauss_series(a, b, c, z);
    // Connection at z = 1 (c - a - b not an integer for the parameter ranges
    // used here).
    const double cab = c - a - b;
    if (std::abs(cab - std::round(cab)) < 1e-8)
        throw SeriesNotConverged("hyp2f1: z near 1 with integer c-a-b not supported");
    const double g1 = std::tgamma(c) * std::tgamma(cab) /
                      (std::tgamma(c - a) * std::tgamma(c - b));
    const double g2 = std::tgamma(c) * std::tgamma(-cab) /
                      (std::tgamma(a) * std::tgamma(b));
    const double w = 1.0 - z;
    return g1 * gauss_series(a, b, 1.0 - cab, w) +
           g2 * std::pow(w, cab) * gauss_series(c - a, c - b, 1.0 + cab, w);
}

double harmonic_frac(double r) {
    if (r <= 0.0 || r > 1.0) throw DomainError("harmonic_frac: r must be in (0, 1]");
    // t = u^(1/r): H_r = int_0^1 (1-u) u^(1/r - 1) / (r (1 - u^(1/r))) du.
    const double q = 1.0 / r;
    auto f = [&](double u) {
        if (u == 0.0) return q == 1.0 ? 1.0 : 0.0;
        if (u == 1.0) return 1.0;
        return (1.0 - u) * std::pow(u, q - 1.0) * q / (1.0 - std::pow(u, q));
    };
    return adaptive_simpson(f, 0.0, 1.0, 1e-12);
}

namespace {

void sort_witnesses(InequalityReport& rep,
                    std::vector<std::pair<double, std::pair<double, double>>>& scored) {
    std::sort(scored.begin(), scored.end(),
              [](const auto& l, const auto& r) { return l.first > r.first; });
    const std::size_t keep = std::min<std::size_t>(3, scored.size());
    for (std::size_t i = 0; i < keep; ++i) rep.witnesses.push_back(scored[i].second);
    rep.max_slack = scored.empty() ? 0.0 : scored.front().first;
}

}  // namespace

std::vector<InequalityReport> verify_inequality_suite(const std::vector<double>& alpha_grid,
                                                      const std::vector<double>& x_grid) {
    std::vector<InequalityReport> out;

    {  // (a) x^(1-1/a) (U + V) <= pi / sin(pi/a)
        InequalityReport rep;
        rep.name = "uv_envelope";
        rep.grid_desc = "alpha grid x log-x grid";
        std::vector<std::pair<double, std::pair<double, double>>> scored;
        for (double a : alpha_grid) {
            const double rhs = kPi / std::sin(kPi / a);
            for (double x : x_grid) {
                double lhs = std::pow(x, 1.0 - 1.0 / a) *
                             (integral_U(a, x) + integral_V(a, x));
                scored.push_back({lhs - rhs, {a, x}});
            }
        }
        sort_witnesses(rep, scored);
        out.push_back(std::move(rep));
    }

    {  // (b) x^(1-1/a) W <= pi / sin(pi/a)
        InequalityReport rep;
        rep.name = "w_envelope";
        rep.grid_desc = "alpha grid x log-x grid";
        std::vector<std::pair<double, std::pair<double, double>>> scored;
        for (double a : alpha_grid) {
            const double rhs = kPi / std::sin(kPi / a);
            for (double x : x_grid) {
                double lhs = std::pow(x, 1.0 - 1.0 / a) * integral_W(a, x);
                scored.push_back({lhs - rhs, {a, x}});
            }
        }
        sort_witnesses(rep, scored);
        out.push_back(std::move(rep));
    }

    {  // (c) 1 - 0.52 a + a 2^(1/a) <= pi / sin(pi/a)
        InequalityReport rep;
        rep.name = "hypergeometric_margin";
        rep.grid_desc = "alpha grid";
        std::vector<std::pair<double, std::pair<double, double>>> scored;
        for (double a : alpha_grid) {
            double lhs = 1.0 - 0.52 * a + a * std::pow(2.0, 1.0 / a);
            double rhs = kPi / std::sin(kPi / a);
            scored.push_back({lhs - rhs, {a, 0.0}});
        }
        sort_witnesses(rep, scored);
        out.push_back(std::move(rep));
    }

    {  // (d) 1 - x^a <= (1+x)^(a-1) (1-x) on [0, 1]
        InequalityReport rep;
        rep.name = "power_factorization";
        rep.grid_desc = "alpha grid x uniform [0,1]";
        std::vector<std::pair<double, std::pair<double, double>>> scored;
        for (double a : alpha_grid) {
            for (int i = 0; i <= 200; ++i) {
                double x = i / 200.0;
                double lhs = 1.0 - std::pow(x, a);
                double rhs = std::pow(1.0 + x, a - 1.0) * (1.0 - x);
                scored.push_back({lhs - rhs, {a, x}});
            }
        }
        sort_witnesses(rep, scored);
        out.push_back(std::move(rep));
    }

    {  // (e) sqrt(x) U_{a=2}(x) <= 1 on (0, 1]
        InequalityReport rep;
        rep.name = "u_half_power";
        rep.grid_desc = "uniform (0,1]";
        std::vector<std::pair<double, std::pair<double, double>>> scored;
        for (int i = 1; i <= 200; ++i) {
            double x = i / 200.0;
            double lhs = std::sqrt(x) * integral_U(2.0, x);
            scored.push_back({lhs - 1.0, {2.0, x}});
        }
        sort_witnesses(rep, scored);
        out.push_back(std::move(rep));
    }

    return out;
}

std::vector<double> default_alpha_grid() { return {2.0, 2.25, 2.5, 3.0, 4.0, 8.0}; }

std::vector<double> default_x_grid() {
    std::vector<double> xs;
    const int n = 200;
    for (int i = 0; i < n; ++i)
        xs.push_back(std::pow(10.0, -3.0 + 6.0 * i / (n - 1.0)));
    return xs;
}

}  // namespace fastctrl
