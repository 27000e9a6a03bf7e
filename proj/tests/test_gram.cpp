#include <cmath>
#include <complex>

#include "doctest.h"
#include "fastctrl/fit.hpp"
#include "fastctrl/gram.hpp"
#include "fastctrl/quadrature.hpp"

using namespace fastctrl;

namespace {
constexpr double kPi = 3.14159265358979323846;
using Cd = std::complex<double>;
}

TEST_CASE("gram entries in closed form") {
    // Dispersive diagonal is T.
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 3);
    auto gd = gram_matrix(kdv, 0.7, PrecisionContext(30));
    for (std::size_t i = 0; i < kdv.size(); ++i)
        CHECK(static_cast<double>(gd.G(i, i).re) == doctest::Approx(0.7).epsilon(1e-14));

    // Single parabolic mode.
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    auto g1 = gram_matrix(one, 1.0, PrecisionContext(30));
    CHECK(static_cast<double>(g1.G(0, 0).re) ==
          doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-14));

    // Parabolic N=6 entries against an adaptive quadrature oracle.
    auto heat = make_power_law_spectrum(2.0, 1.0, 6, 0.0, 0);
    auto gs = gram_matrix(heat, 0.5, PrecisionContext(40));
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            double s = heat.lambdas[j] + heat.lambdas[k];
            double oracle = adaptive_simpson(
                [s](double t) { return std::exp(-s * t); }, 0.0, 0.5, 1e-13);
            CHECK(static_cast<double>(gs.G(j, k).re) ==
                  doctest::Approx(oracle).epsilon(1e-12));
            CHECK(std::abs(static_cast<double>(gs.G(j, k).im)) <= 1e-30);
        }
    }

    // Dispersive off-diagonal oracle.
    auto gk = gram_matrix(kdv, 0.7, PrecisionContext(30));
    for (std::size_t j = 0; j < kdv.size(); ++j) {
        for (std::size_t k = 0; k < kdv.size(); ++k) {
            if (j == k) continue;
            double d = kdv.lambdas[j] - kdv.lambdas[k];
            Cd oracle{std::sin(d * 0.7) / d, -(std::cos(d * 0.7) - 1.0) / d};
            CHECK(std::abs(to_complex(gk.G(j, k)) - oracle) <= 1e-14);
        }
    }
}

TEST_CASE("distances") {
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    auto g1 = gram_matrix(one, 1.0, PrecisionContext(30));
    CHECK(distance_dm(g1, 1) ==
          doctest::Approx(std::sqrt((1.0 - std::exp(-2.0)) / 2.0)).epsilon(1e-13));

    // Two dispersive modes orthogonal over the full period: d^2 = T.
    SpectralSystem two(SystemKind::Dispersive, {-1, 1}, {-1.0, 1.0}, {1.0, 1.0}, 2.0, 1.0);
    auto g2 = gram_matrix(two, 2.0 * kPi, PrecisionContext(30));
    CHECK(distance_dm(g2, 1) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
    CHECK(distance_dm(g2, -1) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));

    // Dual computation: inverse diagonal vs explicit projection.
    auto heat = make_power_law_spectrum(2.0, 1.0, 6, 0.0, 0);
    auto gh = gram_matrix(heat, 0.5, PrecisionContext(60));
    for (int m = 1; m <= 6; ++m)
        CHECK(distance_dm(gh, m) ==
              doctest::Approx(distance_dm_projection(gh, m)).epsilon(1e-8));
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 3);
    auto gk = gram_matrix(kdv, 0.5, PrecisionContext(60));
    for (int m : {-3, -1, 2})
        CHECK(distance_dm(gk, m) ==
              doctest::Approx(distance_dm_projection(gk, m)).epsilon(1e-8));
}

TEST_CASE("dual-basis norms") {
    // Single parabolic mode, T large: psi norm -> sqrt(2).
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    auto g = gram_matrix(one, 30.0, PrecisionContext(30));
    CHECK(psi_norm(g, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    auto heat = make_power_law_spectrum(2.0, 1.0, 6, 0.0, 0);
    double prev = 0.0;
    for (double T : {0.5, 0.3, 0.2, 0.1}) {
        auto gs = gram_matrix(heat, T, PrecisionContext(60));
        for (int m = 1; m <= 6; ++m)
            CHECK(psi_norm(gs, m) * distance_dm(gs, m) == doctest::Approx(1.0).epsilon(1e-12));
        double cur = psi_norm(gs, 1);
        CHECK(cur > prev);  // grows as T shrinks
        prev = cur;
    }
}

TEST_CASE("minimal-norm control") {
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    auto g1 = gram_matrix(one, 1.0, PrecisionContext(30));

    auto zero = minimal_norm_control(g1, {Cd(0.0, 0.0)});
    CHECK(zero.l2_norm == 0.0);
    CHECK(zero.signal.l2 <= 1e-300);

    // 1x1 solve: the moment value is -a e^{-lambda T} / b, so
    // |u|^2 = e^{-2} / G11 = 2 e^{-2} / (1 - e^{-2}).
    auto mc = minimal_norm_control(g1, {Cd(1.0, 0.0)}, 8193);
    double expect = std::sqrt(2.0 * std::exp(-2.0) / (1.0 - std::exp(-2.0)));
    CHECK(mc.l2_norm == doctest::Approx(expect).epsilon(1e-12));
    CHECK(mc.signal.l2 == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("costs: closed forms, sandwich, monotonicity") {
    SpectralSystem one(SystemKind::Parabolic, {1}, {1.0}, {Cd(0.5, 0.0)}, 2.0, 1.0);
    auto g1 = gram_matrix(one, 1.0, PrecisionContext(30));
    double g11 = (1.0 - std::exp(-2.0)) / 2.0;
    CHECK(truncated_cost(g1) == doctest::Approx(2.0 / std::sqrt(g11)).epsilon(1e-10));
    CHECK(lower_bound_cost(g1) == doctest::Approx(truncated_cost(g1)).epsilon(1e-10));

    auto heat = make_power_law_spectrum(2.0, 1.0, 8, 0.0, 0);
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    for (double T : {0.5, 0.2}) {
        auto gh = gram_matrix(heat, T, PrecisionContext(64));
        double lower = lower_bound_cost(gh);
        double cost = truncated_cost(gh);
        CHECK(lower <= cost);
        for (int m = 1; m <= 8; ++m) CHECK(cost >= psi_norm(gh, m) / std::abs(heat.bs[m - 1]) * (1.0 - 1e-12));
        auto gk = gram_matrix(kdv, T, PrecisionContext(40));
        CHECK(lower_bound_cost(gk) <= truncated_cost(gk));
    }

    // Appending modes cannot decrease the cost.
    double prev = 0.0;
    for (int n : {2, 4, 6, 8}) {
        auto sys = make_power_law_spectrum(2.0, 1.0, n, 0.0, 0);
        double c = truncated_cost(gram_matrix(sys, 0.4, PrecisionContext(64)));
        CHECK(c >= prev * (1.0 - 1e-12));
        prev = c;
    }

    // Longer horizons cannot increase the cost.
    prev = 1e300;
    for (double T : {0.1, 0.2, 0.4, 0.8}) {
        double c = truncated_cost(gram_matrix(heat, T, PrecisionContext(64)));
        CHECK(c <= prev * (1.0 + 1e-12));
        prev = c;
    }
}

TEST_CASE("cost blow-up fit on the periodic KdV sweep") {
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 6);
    std::vector<double> xs, ys;
    for (double T : {0.5, 0.35, 0.25, 0.18, 0.12}) {
        auto gs = gram_matrix(kdv, T, PrecisionContext(64));
        xs.push_back(1.0 / std::sqrt(T));
        ys.push_back(std::log(truncated_cost(gs)));
    }
    auto fit = fit_line(xs, ys);
    CHECK(fit.r2 >= 0.99);
    CHECK(fit.slope > 0.0);

    // Lower bound slope is positive as well (alpha = 2 family).
    auto heat = make_power_law_spectrum(2.0, 2.0, 6, 0.0, 0);
    std::vector<double> xl, yl;
    for (double T : {0.5, 0.35, 0.25, 0.18, 0.12}) {
        auto gs = gram_matrix(heat, T, PrecisionContext(64));
        xl.push_back(1.0 / T);
        yl.push_back(std::log(lower_bound_cost(gs)));
    }
    auto lfit = fit_line(xl, yl);
    CHECK(lfit.slope > 0.0);
    CHECK(lfit.r2 >= 0.99);
}

TEST_CASE("worst direction attains the cost for dispersive systems") {
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    auto gs = gram_matrix(kdv, 0.8, PrecisionContext(40));
    auto dir = worst_initial_direction(gs);
    double norm = 0.0;
    for (auto& v : dir) norm += std::norm(v);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    auto mc = minimal_norm_control(gs, dir, 4097);
    CHECK(mc.l2_norm == doctest::Approx(truncated_cost(gs)).epsilon(1e-9));  // same eigenpair
}

TEST_CASE("small-time envelope for d_m") {
    auto heat = fractional_spectrum(1.0, kPi, 8, SystemKind::Parabolic);
    auto rep = dm_scaling_check(heat, {0.5, 0.35, 0.25, 0.18, 0.12, 0.08}, 1,
                                PrecisionContext(64));
    CHECK(rep.max_violation <= 0.0);
    CHECK(rep.C == doctest::Approx(rep.dm[0] / std::sqrt(0.5)));
    CHECK(rep.envelope[0] == doctest::Approx(rep.dm[0]).epsilon(1e-12));  // j = 0 tight
    CHECK(rep.j_star.back() > 0);

    // The envelope itself reproduces the exp(-c / T^(1/(alpha-1))) shape: the
    // fitted exponent of the depth approaches 1/(alpha-1) on a deep grid.
    std::vector<double> xs, ys;
    for (double T : {0.04, 0.03, 0.02, 0.015, 0.01}) {
        auto [depth, jstar] = dm_envelope_depth(2.0, rep.a, T);
        CHECK(jstar > 0);
        xs.push_back(std::log(1.0 / T));
        ys.push_back(std::log(depth));
    }
    double slope = fit_line(xs, ys).slope;
    CHECK(std::abs(slope - 1.0) <= 0.15);

    CHECK_THROWS_AS(
        dm_scaling_check(periodic_kdv_spectrum(2.0 * kPi, 3), {0.5, 0.25}, 1,
                         PrecisionContext(40)),
        DomainError);
}

TEST_CASE("precision guard rails") {
    auto heat = make_power_law_spectrum(2.0, 1.0, 8, 0.0, 0);
    CHECK_THROWS_AS(gram_matrix(heat, 0.3, PrecisionContext(15)), PrecisionInsufficient);
    CHECK_THROWS_AS(PrecisionContext(10), DomainError);
    CHECK_THROWS_AS(gram_matrix(heat, -1.0, PrecisionContext(30)), DomainError);
}
