#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "covert/analytics.hpp"
#include "covert/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covert;
using doctest::Approx;

namespace {

ScenarioParams scenario(double gamma, double m, std::uint64_t n, std::size_t N_w = 1) {
    ScenarioParams p;
    p.gamma = gamma;
    p.m = m;
    p.n = n;
    p.N_w = N_w;
    return p;
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("scalar KL frozen values") {
    // x = P_f / (d^gamma sigma^2) = 1.
    CHECK(scalar_gaussian_kl(1.0, 1.0, 1.0, 2.0) == Approx(0.0965735902799727).epsilon(1e-14));
    CHECK(2.0 * scalar_gaussian_kl_reverse(1.0, 2.0, 1.0, 1.0) == Approx(0.0945348918918356).epsilon(1e-14));
    CHECK(scalar_gaussian_kl(0.0, 1.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("scalar KL matches quadrature") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> log_x(-6.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double x = std::pow(10.0, log_x(rng));
        const double s = 0.5 + i * 0.03;
        CHECK(scalar_gaussian_kl(x * s, 1.0, s, 2.0) ==
              Approx(oracle::gaussian_kl_quadrature(s, s * (1 + x))).epsilon(1e-9));
        CHECK(scalar_gaussian_kl_reverse(x * s, 1.0, s, 2.0) ==
              Approx(oracle::gaussian_kl_quadrature(s * (1 + x), s)).epsilon(1e-9));
    }
}

TEST_CASE("quadratic bound dominates the KL") {
    for (double x = 1e-6; x < 2.0; x *= 1.7) {
        CHECK(scalar_gaussian_kl(x, 1.0, 1.0, 3.0) <= kl_quadratic_bound(x, 1.0, 1.0, 3.0));
        CHECK(scalar_gaussian_kl_reverse(x, 1.0, 1.0, 3.0) <= kl_quadratic_bound(x, 1.0, 1.0, 3.0));
    }
    CHECK_THROWS_AS(kl_quadratic_bound(2.0, 1.0, 1.0, 2.0), RegimeViolation);
}

TEST_CASE("multi-warden KL: rank-one closed form and bound") {
    const std::vector<double> d{0.3, 0.5, 0.9};
    const std::vector<double> v{1.0, 1.5, 0.7};
    const double P_f = 0.01;
    const double T = collective_snr(P_f, d, v, 2.0);
    CHECK(T == Approx(P_f / (0.09 * 1.0) + P_f / (0.25 * 1.5) + P_f / (0.81 * 0.7)));
    const double kl = multi_willie_kl(P_f, d, v, 3.0, 2.0);
    CHECK(kl == Approx(oracle::multi_warden_kl_dense(P_f, d, v, 3, 2.0)).epsilon(1e-9));
    CHECK(kl <= multi_willie_kl_bound(P_f, d, v, 3.0, 2.0));
    const std::vector<double> u{1.0 / 0.09, 1.0 / 0.25, 1.0 / 0.81};
    CHECK(rank1_logdet_ratio(v, P_f, u) == Approx(oracle::logdet_ratio_dense(v, P_f, u)).epsilon(1e-10));
    CHECK_THROWS_AS(multi_willie_kl_bound(1.0, d, v, 3.0, 2.0), RegimeViolation);
}

TEST_CASE("Pinsker floor") {
    CHECK(pinsker_detection_floor(200.0, 0.0).raw == 1.0);
    CHECK(pinsker_detection_floor(2.0, 1.0).raw == Approx(0.0));
    const auto big = pinsker_detection_floor(1e6, 1.0);
    CHECK(big.raw < 0.0);
    CHECK(big.clamped() == 0.0);
}

TEST_CASE("moment constant frozen values") {
    CHECK(expected_inv_noise_bound(2.0, 1.0) == Approx(0.318309886183791).epsilon(1e-14));
    CHECK(expected_inv_noise_bound(4.0, 1.0) == Approx(0.202642367284676).epsilon(1e-14));
    CHECK(expected_inv_noise_bound(2.0, 1.0, MomentConstant::published) == Approx(0.0506605918211689).epsilon(1e-14));
    CHECK(expected_inv_noise_bound(4.0, 1.0, MomentConstant::published) == Approx(0.0322515344331995).epsilon(1e-14));
    for (double g : {2.0, 3.0, 4.0, 6.0})
        CHECK(expected_inv_noise_bound(g, 1.0) / expected_inv_noise_bound(g, 1.0, MomentConstant::published) ==
              Approx(2.0 * std::numbers::pi));
    // Exact constant equals E[d^gamma] m^{gamma/2} / P_r.
    CHECK(expected_inv_noise_bound(3.0, 2.0) ==
          Approx(oracle::nearest_distance_moment_quadrature(1.0, 3.0) / 2.0).epsilon(1e-9));
    CHECK_THROWS_AS(expected_inv_noise_bound(1.5, 1.0), InvalidArgument);
}

TEST_CASE("covert budgets frozen values") {
    const auto p1 = scenario(2.0, 100.0, 1'000'000);
    const auto b1 = covert_budget_thm1(0.1, p1);
    CHECK(b1.c == Approx(0.222144146907918).epsilon(1e-13));
    CHECK(b1.P_f == Approx(0.222144146907918 * 100.0 / 1000.0).epsilon(1e-13));
    CHECK(covert_budget_thm1(0.1, p1, MomentConstant::published).c == Approx(1.39577283992778).epsilon(1e-13));

    const auto b2 = covert_budget_thm2(0.1, p1);
    REQUIRE(b2.conditioning_radius);
    CHECK(*b2.conditioning_radius == Approx(0.252313252202016).epsilon(1e-13));
    CHECK(b2.c == Approx(0.0565685424949238).epsilon(1e-13));
    CHECK(covert_budget_thm2(0.1, p1, MomentConstant::published).c == Approx(0.355430635052669).epsilon(1e-13));

    const auto p3 = scenario(2.0, 100.0, 1'000'000, 4);
    const auto b3 = covert_budget_thm3(0.1, p3);
    REQUIRE(b3.conditioning_radius);
    CHECK(*b3.conditioning_radius == Approx(0.0900636566239733).epsilon(1e-13));
    CHECK(b3.c == Approx(0.00360382772095203).epsilon(1e-13));
    CHECK(b3.P_f == Approx(0.00360382772095203 * 100.0 / (1000.0 * 4.0)).epsilon(1e-13));
    CHECK(covert_budget_thm3(0.1, p3, MomentConstant::published).c == Approx(0.0226435173858923).epsilon(1e-13));
}

TEST_CASE("budget scaling in n and m") {
    for (double gamma : {2.0, 4.0}) {
        const auto a = covert_budget_thm1(0.1, scenario(gamma, 10.0, 10'000));
        const auto b = covert_budget_thm1(0.1, scenario(gamma, 40.0, 40'000));
        CHECK(b.P_f / a.P_f == Approx(std::pow(4.0, 0.5 * gamma) / 2.0));
    }
    CHECK(thm3_power_order(100.0, 1e6, 2.0, 2.0) == Approx(100.0 / (1000.0 * 4.0)));
}

TEST_CASE("Bob bounds") {
    CHECK(bob_error_upper_bound(100.0, 0.0, 0.0, 1.0).raw == Approx(1.0));
    // Monotone: more power helps, more rate hurts.
    const double base = bob_error_upper_bound(200.0, 0.05, 0.5, 1.0).raw;
    CHECK(bob_error_upper_bound(200.0, 0.05, 1.0, 1.0).raw < base);
    CHECK(bob_error_upper_bound(200.0, 0.08, 0.5, 1.0).raw > base);
    CHECK(bob_error_upper_bound(200.0, 0.5, 0.01, 1.0).clamped() == 1.0);

    const double cb = bob_error_conditional_bound(1e6, 0.5, 0.2, 100.0, 2.0, 1.0, 1.0, 0.25);
    CHECK(cb > 0.0);
    CHECK(cb < 1.0);
}

TEST_CASE("throughput lower bound never exceeds the exact bits in regime") {
    for (double n : {1e4, 1e6, 1e8})
        for (double m : {10.0, 100.0})
            for (double gamma : {2.0, 4.0}) {
                const auto t = throughput_thm2(n, 0.5, 0.05, m, gamma, 1.0, 1.0, 0.1);
                if (!t.regime_ok) continue;
                CHECK(t.lower_bound <= t.bits * (1 + 1e-12));
                CHECK(t.rate == Approx(0.5 * 0.5 * std::log2(1.0 + t.log_argument)));
            }
    CHECK(thm2_phi(0.1) == Approx(std::sqrt(0.1 / (2 * std::numbers::pi))));
}

TEST_CASE("radiometer moments and design") {
    const auto h0 = radiometer_moments(2.0, 0.0, 100.0, Hypothesis::H0);
    CHECK(h0.mean == 2.0);
    CHECK(h0.variance == Approx(8.0 / 100.0));
    const auto h1 = radiometer_moments(2.0, 1.0, 100.0, Hypothesis::H1);
    CHECK(h1.mean == 3.0);
    CHECK(h1.variance == Approx((8.0 + 8.0) / 100.0));

    const auto d = radiometer_design(0.1, 0.05, scenario(2.0, 100.0, 1'000'000));
    CHECK(d.eta1 < d.eta1_limit);
    CHECK(d.threshold_t > 0.0);
    CHECK(d.eta2 > 0.0);
    CHECK_THROWS_AS(radiometer_design(0.05, 0.1, scenario(2.0, 100.0, 1'000'000)), InvalidArgument);
}

TEST_CASE("converse Bob floor") {
    CHECK(converse_bob_error_floor(0.0, 1.0, 1e6, 0.1, 1.0).raw == Approx(1.0 - 1e-6 / 0.1));
    CHECK(converse_bob_error_floor(1.0, 1.0, 1e6, 0.1, 1.0).raw < 0.0);
    CHECK_THROWS_AS(converse_bob_error_floor(0.1, 1.0, 1e6, 0.1, 0.0), InvalidArgument);
}

TEST_CASE("scenario validation") {
    ScenarioParams p;
    p.gamma = 1.9;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.gamma = 2.0;
    p.m = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

}  // TEST_SUITE
