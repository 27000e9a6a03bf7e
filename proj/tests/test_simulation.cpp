#include <cmath>
#include <complex>
#include <fstream>

#include "doctest.h"
#include "fastctrl/biorthogonal.hpp"
#include "fastctrl/gram.hpp"
#include "fastctrl/prng.hpp"
#include "fastctrl/simulation.hpp"

using namespace fastctrl;

namespace {
constexpr double kPi = 3.14159265358979323846;
using Cd = std::complex<double>;

ControlSignal zero_signal(double T, int n = 128) {
    return ControlSignal::from_samples(T, std::vector<Cd>(n, Cd(0.0, 0.0)));
}
}

TEST_CASE("residual norm") {
    CHECK(residual_norm({{}, 0.0}) == 0.0);
    CHECK(residual_norm({{Cd(1.0, 0.0)}, 0.0}) == doctest::Approx(1.0));
    CHECK(residual_norm({{Cd(0.6, 0.0), Cd(0.8, 0.0)}, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("free evolution") {
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    ModalState y0{{Cd(1.0, 0.0)}, 0.0};
    auto yT = forward_simulate(one, y0, zero_signal(1.0), 1.0);
    CHECK(std::abs(yT.coeffs[0]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(yT.time == doctest::Approx(1.0));

    // Dispersive evolution is an isometry mode by mode.
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    auto z = random_unit_vector(kdv.size(), 5);
    ModalState s0{z, 0.0};
    auto sT = forward_simulate(kdv, s0, zero_signal(0.9), 0.9);
    CHECK(residual_norm(sT) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 0; k < z.size(); ++k)
        CHECK(std::abs(sT.coeffs[k]) == doctest::Approx(std::abs(z[k])).epsilon(1e-12));

    // Parabolic evolution is contractive.
    auto heat = make_power_law_spectrum(2.0, 1.0, 4, 0.0, 0);
    auto h0 = random_unit_vector(4, 6, true);
    auto hT = forward_simulate(heat, {h0, 0.0}, zero_signal(0.5), 0.5);
    CHECK(residual_norm(hT) <= 1.0);
}

TEST_CASE("controlled single mode against the closed form") {
    // y' = -y + u with u = sin(w t):
    // y(T) = e^{-T} y0 + (sin(wT) - w cos(wT) + w e^{-T}) / (1 + w^2).
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    const double w = 7.0, T = 1.3;
    const int n = 4097;
    std::vector<Cd> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = std::sin(w * (T * i / (n - 1.0)));
    ModalState y0{{Cd(0.4, 0.0)}, 0.0};
    auto yT = forward_simulate(one, y0, ControlSignal::from_samples(T, vals), T);
    double expect = std::exp(-T) * 0.4 +
                    (std::sin(w * T) - w * std::cos(w * T) + w * std::exp(-T)) /
                        (1.0 + w * w);
    CHECK(yT.coeffs[0].real() == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::abs(yT.coeffs[0].imag()) <= 1e-14);
}

TEST_CASE("closed loop with the minimal-norm control") {
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    auto gs = gram_matrix(kdv, 0.8, PrecisionContext(40));
    auto y0 = random_unit_vector(kdv.size(), 11);
    auto mc = minimal_norm_control(gs, y0, 16385);
    auto yT = forward_simulate(kdv, {y0, 0.0}, mc.signal, 0.8);
    CHECK(residual_norm(yT) <= 1e-8);

    auto heat = make_power_law_spectrum(2.0, 1.0, 6, 0.0, 0);
    auto gh = gram_matrix(heat, 0.7, PrecisionContext(60));
    auto h0 = random_unit_vector(6, 12, true);
    auto mh = minimal_norm_control(gh, h0, 16385);
    auto hT = forward_simulate(heat, {h0, 0.0}, mh.signal, 0.7);
    CHECK(residual_norm(hT) <= 1e-10);
}

TEST_CASE("simulated residual sits within the synthesis prediction") {
    SynthesisOptions opts;
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    auto fam_d = synthesize_family(kdv, 1.0, opts);
    auto heat = fractional_spectrum(1.0, kPi, 6, SystemKind::Parabolic);
    auto fam_p = synthesize_family(heat, 1.0, opts);

    for (int seed : {1, 2}) {
        auto yd = random_unit_vector(kdv.size(), seed);
        auto pd = predict_terminal_residual(fam_d, kdv, yd);
        auto ud = synthesize_control(fam_d, kdv, yd);
        double sim_d = residual_norm(forward_simulate(kdv, {yd, 0.0}, ud, 1.0));
        CHECK(sim_d <= 10.0 * pd.total);

        auto yp = random_unit_vector(heat.size(), seed, true);
        auto pp = predict_terminal_residual(fam_p, heat, yp);
        auto up = synthesize_control(fam_p, heat, yp);
        double sim_p = residual_norm(forward_simulate(heat, {yp, 0.0}, up, 1.0));
        CHECK(sim_p <= 10.0 * pp.total);
    }
}

TEST_CASE("grid mismatches are rejected") {
    auto one = make_power_law_spectrum(2.0, 1.0, 1, 0.0, 0);
    ModalState y0{{Cd(1.0, 0.0), Cd(0.0, 1.0)}, 0.0};
    CHECK_THROWS_AS(forward_simulate(one, y0, zero_signal(1.0), 1.0), GridMismatch);
    ModalState ok{{Cd(1.0, 0.0)}, 0.0};
    CHECK_THROWS_AS(forward_simulate(one, ok, zero_signal(2.0), 1.0), GridMismatch);
}

TEST_CASE("trajectory emission") {
    auto heat = make_power_law_spectrum(2.0, 1.0, 3, 0.0, 0);
    auto h0 = random_unit_vector(3, 2, true);
    auto traj = simulate_trajectory(heat, {h0, 0.0}, zero_signal(1.0, 257), 1.0, 9);
    REQUIRE(traj.size() >= 2);
    CHECK(traj.front().time == 0.0);
    CHECK(traj.back().time == doctest::Approx(1.0));
    // Norms decay monotonically for the free parabolic flow.
    for (std::size_t i = 1; i < traj.size(); ++i)
        CHECK(residual_norm(traj[i]) <= residual_norm(traj[i - 1]) * (1.0 + 1e-12));
    // Final state matches a single-shot simulation.
    auto direct = forward_simulate(heat, {h0, 0.0}, zero_signal(1.0, 257), 1.0);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(traj.back().coeffs[k] - direct.coeffs[k]) <= 1e-12);

    write_trajectory_csv(traj, "/tmp/fastctrl_traj_test.csv");
    std::ifstream in("/tmp/fastctrl_traj_test.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,norm");
}

TEST_CASE("admissibility probe") {
    // Single dispersive mode with b = 1: the form is exactly T for any unit z.
    SpectralSystem one(SystemKind::Dispersive, {1}, {3.0}, {Cd(1.0, 0.0)}, 2.0, 1.0);
    auto rep = admissibility_probe(one, 0.73, 5, 1);
    CHECK(rep.sampled_max == doctest::Approx(0.73).epsilon(1e-12));
    CHECK(rep.exact_supremum == doctest::Approx(0.73).epsilon(1e-12));

    // Monotone in the trial count, and never beyond the closed-form supremum.
    auto kdv = periodic_kdv_spectrum(2.0 * kPi, 4);
    double prev = 0.0;
    for (int trials : {1, 4, 16, 64}) {
        auto r = admissibility_probe(kdv, 1.0, trials, 3);
        CHECK(r.sampled_max >= prev);
        CHECK(r.sampled_max <= r.exact_supremum * (1.0 + 1e-12));
        prev = r.sampled_max;
    }

    auto heat = make_power_law_spectrum(2.0, 1.0, 5, 0.0, 0);
    auto rh = admissibility_probe(heat, 0.5, 32, 7);
    CHECK(rh.sampled_max <= rh.exact_supremum * (1.0 + 1e-12));
    CHECK(rh.exact_supremum > 0.0);
}
