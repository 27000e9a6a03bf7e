#include "fastctrl/gram.hpp"

#include <algorithm>
#include <cmath>

#include "fastctrl/errors.hpp"

namespace fastctrl {

PrecisionContext default_gram_precision(SystemKind kind) {
    return PrecisionContext(kind == SystemKind::Parabolic ? 64 : 30);
}

GramSystem gram_matrix(const SpectralSystem& sys, double T, PrecisionContext precision) {
    if (T <= 0.0) throw DomainError("gram_matrix: T must be > 0");
    GramSystem gs;
    gs.sys = sys;
    gs.T = T;
    gs.precision = precision;

    PrecisionGuard guard{precision};
    const std::size_t n = sys.size();
    const Real rT = T;
    gs.G = Matrix<CReal>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            CReal entry;
            if (sys.kind == SystemKind::Parabolic) {
                const Real s = Real(sys.lambdas[j]) + Real(sys.lambdas[k]);
                entry = CReal((1 - exp(-s * rT)) / s, Real(0));
            } else if (j == k) {
                entry = CReal(rT, Real(0));
            } else {
                const Real d = Real(sys.lambdas[j]) - Real(sys.lambdas[k]);
                // (e^{i d T} - 1) / (i d)
                entry = CReal(sin(d * rT) / d, -(cos(d * rT) - 1) / d);
            }
            gs.G(j, k) = entry;
            gs.G(k, j) = conj(entry);
        }
    }

    gs.factor = std::make_shared<const LdltFactor<CReal>>(gs.G);
    gs.inverse = gs.factor->inverse();
    Real cond = one_norm(gs.G) * one_norm(gs.inverse);
    gs.condition_estimate = static_cast<double>(cond);

    if (!(cond < pow(Real(10), precision.digits - 10)))
        throw PrecisionInsufficient(
            "gram_matrix: condition estimate exceeds 10^(digits-10)",
            gs.condition_estimate);
    return gs;
}

double distance_dm(const GramSystem& gs, int m_index) {
    PrecisionGuard guard{gs.precision};
    const std::size_t m = gs.sys.position(m_index);
    Real diag = gs.inverse(m, m).re;
    if (!(diag > 0))
        throw PrecisionInsufficient("distance_dm: inverse diagonal not positive",
                                    gs.condition_estimate);
    return static_cast<double>(1 / sqrt(diag));
}

double distance_dm_projection(const GramSystem& gs, int m_index) {
    PrecisionGuard guard{gs.precision};
    const std::size_t m = gs.sys.position(m_index);
    const std::size_t n = gs.sys.size();
    if (n == 1) return static_cast<double>(sqrt(gs.G(0, 0).re));

    // d_m^2 = G[m,m] - g^* G_mm^{-1} g, the Schur complement of the reduced
    // block; solved with a fresh factorization of G with row/col m removed.
    Matrix<CReal> reduced(n - 1, n - 1);
    std::vector<CReal> g(n - 1);
    std::size_t ii = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == m) continue;
        g[ii] = gs.G(i, m);
        std::size_t jj = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == m) continue;
            reduced(ii, jj) = gs.G(i, j);
            ++jj;
        }
        ++ii;
    }
    LdltFactor<CReal> fac(reduced);
    auto sol = fac.solve(g);
    Real quad(0);
    for (std::size_t i = 0; i < n - 1; ++i)
        quad += (conj(g[i]) * sol[i]).re;
    Real d2 = gs.G(m, m).re - quad;
    if (!(d2 > 0))
        throw PrecisionInsufficient("distance_dm_projection: negative squared distance",
                                    gs.condition_estimate);
    return static_cast<double>(sqrt(d2));
}

double psi_norm(const GramSystem& gs, int m_index) {
    return 1.0 / distance_dm(gs, m_index);
}

MinimalControl minimal_norm_control(const GramSystem& gs,
                                    const std::vector<std::complex<double>>& y0,
                                    int samples) {
    const std::size_t n = gs.sys.size();
    if (y0.size() != n) throw DomainError("minimal_norm_control: y0 size mismatch");
    if (samples < 2) throw DomainError("minimal_norm_control: need >= 2 samples");

    PrecisionGuard guard{gs.precision};
    const bool parabolic = gs.sys.kind == SystemKind::Parabolic;
    const Real rT = gs.T;

    // Moment right-hand side; the parabolic decaying representation carries
    // the terminal weights e^{-lambda_k T}.
    std::vector<CReal> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        CReal ak = to_creal(y0[k]);
        CReal bk = to_creal(gs.sys.bs[k]);
        CReal v = -(ak / bk);
        if (parabolic) v *= Real(exp(-Real(gs.sys.lambdas[k]) * rT));
        c[k] = v;
    }
    auto w = gs.factor->solve(c);

    Real norm_sq(0);
    for (std::size_t k = 0; k < n; ++k) norm_sq += (conj(c[k]) * w[k]).re;
    if (norm_sq < 0) norm_sq = 0;

    // Sample u on [0, T]; the summation cancels heavily, so it stays in
    // extended precision until the final rounding.
    std::vector<std::complex<double>> values(samples);
    const Real h = rT / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const Real t = h * i;
        CReal acc(Real(0), Real(0));
        for (std::size_t k = 0; k < n; ++k) {
            const Real lam = gs.sys.lambdas[k];
            if (parabolic) {
                acc += w[k] * Real(exp(-lam * (rT - t)));
            } else {
                acc += w[k] * cis(-lam * t);
            }
        }
        values[i] = to_complex(acc);
    }

    MinimalControl out{ControlSignal::from_samples(gs.T, std::move(values)),
                       static_cast<double>(sqrt(norm_sq))};
    return out;
}

namespace {

Matrix<CReal> cost_matrix(const GramSystem& gs) {
    const std::size_t n = gs.sys.size();
    Matrix<CReal> a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        CReal bi = to_creal(gs.sys.bs[i]);
        for (std::size_t j = 0; j < n; ++j) {
            CReal bj = to_creal(gs.sys.bs[j]);
            a(i, j) = gs.inverse(i, j) / (conj(bi) * bj);
        }
    }
    return a;
}

}  // namespace

namespace {

EigenPair<CReal> cost_eigenpair(const GramSystem& gs) {
    Real tol = pow(Real(10), -std::min(gs.precision.digits - 8, 30));
    return dominant_eigenpair(cost_matrix(gs), tol);
}

}  // namespace

double truncated_cost(const GramSystem& gs) {
    PrecisionGuard guard{gs.precision};
    return static_cast<double>(sqrt(cost_eigenpair(gs).value));
}

std::vector<std::complex<double>> worst_initial_direction(const GramSystem& gs) {
    PrecisionGuard guard{gs.precision};
    const std::size_t n = gs.sys.size();
    auto pair = cost_eigenpair(gs);

    std::vector<std::complex<double>> out(n);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = to_complex(pair.vector[i]);
        norm_sq += std::norm(out[i]);
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& z : out) z *= inv;
    return out;
}

double lower_bound_cost(const GramSystem& gs) {
    PrecisionGuard guard{gs.precision};
    Real best(0);
    for (std::size_t m = 0; m < gs.sys.size(); ++m) {
        Real diag = gs.inverse(m, m).re;
        if (!(diag > 0))
            throw PrecisionInsufficient("lower_bound_cost: inverse diagonal not positive",
                                        gs.condition_estimate);
        Real v = sqrt(diag) / Real(std::abs(gs.sys.bs[m]));
        if (v > best) best = v;
    }
    return static_cast<double>(best);
}

DmScalingReport dm_scaling_check(const SpectralSystem& sys,
                                 const std::vector<double>& T_grid, int m_index,
                                 PrecisionContext precision) {
    if (sys.two_sided())
        throw DomainError("dm_scaling_check: one-sided systems only");
    if (T_grid.size() < 2) throw DomainError("dm_scaling_check: need >= 2 grid times");

    DmScalingReport rep;
    rep.T_values = T_grid;
    std::sort(rep.T_values.begin(), rep.T_values.end(), std::greater<double>());

    for (double T : rep.T_values)
        rep.dm.push_back(distance_dm(gram_matrix(sys, T, precision), m_index));

    const double T0 = rep.T_values.front();
    rep.C = rep.dm.front() / std::sqrt(T0);
    // With a = 1/T0 the envelope is tight at the calibration time
    // (min_j (j!)^(alpha-1) (a T0)^j = 1) and genuinely factorial-decaying on
    // the rest of the grid.
    rep.a = 1.0 / T0;

    rep.max_violation = -1e300;
    std::vector<double> fit_x, fit_y;
    for (std::size_t i = 0; i < rep.T_values.size(); ++i) {
        const double T = rep.T_values[i];
        auto [depth, bestj] = dm_envelope_depth(sys.alpha, rep.a, T);
        rep.envelope.push_back(rep.C * std::sqrt(T) * std::exp(-depth));
        rep.j_star.push_back(bestj);
        if (i > 0)  // calibration point excluded from the violation scan
            rep.max_violation = std::max(rep.max_violation, rep.dm[i] - rep.envelope[i]);
        if (depth > 0.5) {
            fit_x.push_back(std::log(1.0 / T));
            fit_y.push_back(std::log(depth));
        }
    }
    if (fit_x.size() >= 2)
        rep.envelope_exponent = fit_line(fit_x, fit_y).slope;
    return rep;
}

std::pair<double, int> dm_envelope_depth(double alpha, double a, double T, int j_cap) {
    double best = 0.0;
    int bestj = 0;
    double log_fact = 0.0;
    const double log_at = std::log(a) + std::log(T);
    for (int j = 1; j <= j_cap; ++j) {
        log_fact += std::log(static_cast<double>(j));
        double v = (alpha - 1.0) * log_fact + j * log_at;
        if (v < -best) {
            best = -v;
            bestj = j;
        }
        // Factorial growth makes every later term larger once v turns up.
        if (v > -best + 50.0) break;
    }
    return {best, bestj};
}

}  // namespace fastctrl
