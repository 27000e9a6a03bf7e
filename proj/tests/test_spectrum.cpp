#include <cmath>
#include <complex>

#include "doctest.h"
#include "fastctrl/errors.hpp"
#include "fastctrl/spectrum.hpp"

using namespace fastctrl;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("power-law generator, unperturbed") {
    auto sys = make_power_law_spectrum(2.0, 1.0, 3, 0.0, 0);
    REQUIRE(sys.size() == 3);
    CHECK(sys.lambdas[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sys.lambdas[1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(sys.lambdas[2] == doctest::Approx(9.0).epsilon(1e-15));
    for (auto& b : sys.bs) CHECK(b == std::complex<double>(1.0, 0.0));

    auto cubic = make_power_law_spectrum(3.0, 1.0, 2, 0.0, 0);
    CHECK(cubic.lambdas[0] == doctest::Approx(1.0));
    CHECK(cubic.lambdas[1] == doctest::Approx(8.0));
}

TEST_CASE("power-law generator, perturbed output stays within the stated class") {
    auto sys = make_power_law_spectrum(2.0, 1.0, 50, 0.5, 7);
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        double n = sys.indices[i];
        worst = std::max(worst, std::abs(sys.lambdas[i] - n * n) / n);
    }
    CHECK(worst <= 0.5);
    CHECK(worst > 0.0);  // the perturbation is actually applied
    CHECK(spectral_gap(sys) > 0.0);
}

TEST_CASE("two-sided generator") {
    auto sys = make_two_sided_spectrum(3.0, 1.0, 2, 0.0, 0);
    REQUIRE(sys.size() == 4);
    CHECK(sys.lambdas[0] == doctest::Approx(-8.0));
    CHECK(sys.lambdas[1] == doctest::Approx(-1.0));
    CHECK(sys.lambdas[2] == doctest::Approx(1.0));
    CHECK(sys.lambdas[3] == doctest::Approx(8.0));
    CHECK(sys.kind == SystemKind::Dispersive);

    auto tiny = make_two_sided_spectrum(2.0, 2.0, 1, 0.0, 0);
    CHECK(tiny.lambdas[0] == doctest::Approx(-2.0));
    CHECK(tiny.lambdas[1] == doctest::Approx(2.0));

    auto perturbed = make_two_sided_spectrum(3.0, 1.0, 20, 0.3, 1);
    CHECK(spectral_gap(perturbed) > 0.0);
    for (std::size_t i = 0; i < perturbed.size(); ++i)
        CHECK((perturbed.lambdas[i] > 0) == (perturbed.indices[i] > 0));

    // Mirror symmetry without perturbation.
    auto sym = make_two_sided_spectrum(3.0, 1.0, 10, 0.0, 0);
    for (int n = 1; n <= 10; ++n)
        CHECK(sym.lambda_of(-n) == doctest::Approx(-sym.lambda_of(n)).epsilon(1e-15));
}

TEST_CASE("periodic KdV preset") {
    auto sys = periodic_kdv_spectrum(2.0 * kPi, 5);
    CHECK(sys.lambda_of(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sys.lambda_of(2) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(std::abs(sys.b_of(1)) ==
          doctest::Approx(std::sqrt(2.0) / std::sqrt(2.0 * kPi)).epsilon(1e-14));
    CHECK(sys.alpha == doctest::Approx(3.0));
    CHECK(sys.rate == doctest::Approx(1.0).epsilon(1e-14));

    // |b_k| stays bounded above and below (tends to 1/sqrt(L)).
    auto big = periodic_kdv_spectrum(2.0 * kPi, 50);
    double lo = 1e300, hi = 0.0;
    for (auto& b : big.bs) {
        lo = std::min(lo, std::abs(b));
        hi = std::max(hi, std::abs(b));
    }
    CHECK(hi / lo < 2.0);
    CHECK(std::abs(big.b_of(50)) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-3));
}

TEST_CASE("fractional Laplacian preset") {
    auto heat = fractional_spectrum(1.0, kPi, 3, SystemKind::Parabolic);
    CHECK(heat.lambdas[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(heat.lambdas[1] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(heat.lambdas[2] == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(heat.alpha == doctest::Approx(2.0));

    auto frac = fractional_spectrum(1.5, kPi, 4, SystemKind::Parabolic);
    CHECK(frac.lambda_of(2) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(frac.alpha == doctest::Approx(3.0));

    auto schr = fractional_spectrum(1.0, kPi, 4, SystemKind::Dispersive);
    CHECK(schr.kind == SystemKind::Dispersive);

    CHECK_THROWS_AS(fractional_spectrum(0.4, kPi, 4, SystemKind::Parabolic), DomainError);
}

TEST_CASE("spectral gap") {
    CHECK(spectral_gap(make_power_law_spectrum(2.0, 1.0, 3, 0.0, 0)) == doctest::Approx(3.0));
    CHECK(spectral_gap(make_two_sided_spectrum(3.0, 1.0, 2, 0.0, 0)) == doctest::Approx(2.0));
    // Enumerating all pairs of the KdV spectrum: the nearest pair is
    // (lambda_{-1}, lambda_1) at distance 2.
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 5);
    double brute = 1e300;
    for (std::size_t i = 0; i < kdv.size(); ++i)
        for (std::size_t j = 0; j < kdv.size(); ++j)
            if (i != j) brute = std::min(brute, std::abs(kdv.lambdas[i] - kdv.lambdas[j]));
    CHECK(spectral_gap(kdv) == doctest::Approx(brute));
    CHECK(spectral_gap(kdv) == doctest::Approx(2.0));
}

TEST_CASE("validate_asymptotics recovers exact power laws") {
    for (double alpha : {2.0, 2.5, 3.0}) {
        for (double rate : {1.0, 3.0}) {
            auto sys = make_power_law_spectrum(alpha, rate, 24, 0.0, 0);
            FitReport fit = validate_asymptotics(sys);
            CHECK(fit.exponent == doctest::Approx(alpha).epsilon(1e-10));
            CHECK(fit.prefactor == doctest::Approx(rate).epsilon(1e-8));
            CHECK(fit.max_residual <= 1e-8);
        }
    }
    FitReport kdv = validate_asymptotics(periodic_kdv_spectrum(2.0 * kPi, 12));
    CHECK(kdv.exponent == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("validate_asymptotics on a perturbed family") {
    auto sys = make_power_law_spectrum(2.0, 1.0, 50, 0.5, 7);
    FitReport fit = validate_asymptotics(sys);
    CHECK(fit.max_residual <= 0.5);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("preset invariants: monotone, gapped, comparable coefficients") {
    std::vector<SpectralSystem> all{
        make_power_law_spectrum(2.0, 1.0, 30, 0.4, 3),
        make_two_sided_spectrum(2.5, 2.0, 15, 0.2, 9),
        periodic_kdv_spectrum(4.0, 12),
        fractional_spectrum(1.25, 2.0, 20, SystemKind::Parabolic),
    };
    for (auto& sys : all) {
        CHECK(spectral_gap(sys) > 0.0);
        double lo = 1e300, hi = 0.0;
        for (auto& b : sys.bs) {
            lo = std::min(lo, std::abs(b));
            hi = std::max(hi, std::abs(b));
        }
        CHECK(hi / lo <= 100.0);
        for (std::size_t i = 1; i < sys.size(); ++i)
            CHECK(sys.lambdas[i] > sys.lambdas[i - 1]);
    }
}

TEST_CASE("structural validation errors") {
    CHECK_THROWS_AS(SpectralSystem(SystemKind::Parabolic, {1, 2, 3}, {2.0, 1.0, 3.0},
                                   {1.0, 1.0, 1.0}, 2.0, 1.0),
                    GapViolation);
    CHECK_THROWS_AS(SpectralSystem(SystemKind::Parabolic, {1, 2}, {-1.0, 1.0}, {1.0, 1.0},
                                   2.0, 1.0),
                    GapViolation);
    CHECK_THROWS_AS(make_power_law_spectrum(1.5, 1.0, 4, 0.0, 0), DomainError);
    auto sys = make_power_law_spectrum(2.0, 1.0, 4, 0.0, 0);
    CHECK_THROWS_AS(sys.lambda_of(9), UnknownIndex);
}

TEST_CASE("json round trip") {
    auto sys = periodic_kdv_spectrum(2.0 * kPi, 4);
    auto copy = system_from_json(to_json(sys));
    CHECK(copy.kind == sys.kind);
    CHECK(copy.indices == sys.indices);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        CHECK(copy.lambdas[i] == doctest::Approx(sys.lambdas[i]).epsilon(1e-15));
        CHECK(std::abs(copy.bs[i] - sys.bs[i]) <= 1e-15);
    }
    CHECK(copy.alpha == sys.alpha);
    CHECK(copy.rate == doctest::Approx(sys.rate));
    auto j = to_json(sys);
    CHECK(j.contains("kind"));
    CHECK(j.contains("bs_re"));
    CHECK(j.contains("bs_im"));
}
