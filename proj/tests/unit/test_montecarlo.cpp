#include <cmath>
#include <vector>

#include "covert/errors.hpp"
#include "covert/montecarlo.hpp"
#include "covert/parallel.hpp"
#include "doctest.h"

using namespace covert;
using doctest::Approx;

namespace {

DetectionSetup small_detection(DetectorKind detector, SynthesisMode mode) {
    DetectionSetup s;
    s.params.gamma = 2.0;
    s.params.m = 30.0;
    s.params.n = 200;
    s.detector = detector;
    s.P_f = 0.2;
    s.radiometer_t = 0.05;
    s.trials = 4000;
    s.seed = 99;
    s.synthesis = mode;
    return s;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("normal critical values") {
    CHECK(normal_critical_value(0.95) == Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_critical_value(0.99) == Approx(2.575829303548901).epsilon(1e-12));
    CHECK_THROWS_AS(normal_critical_value(1.0), InvalidArgument);
}

TEST_CASE("Wilson interval") {
    const auto w = wilson_interval(0, 1000, 0.95);
    CHECK(w.lower == doctest::Approx(0.0));
    CHECK(w.upper > 0.0);
    CHECK(w.upper < 0.01);
    const auto h = wilson_interval(500, 1000, 0.95);
    CHECK(h.lower < 0.5);
    CHECK(h.upper > 0.5);
    CHECK(h.half_width() == Approx(1.96 * std::sqrt(0.25 / 1000)).epsilon(0.01));
    CHECK(wilson_interval(1000, 1000).upper == Approx(1.0));
}

TEST_CASE("summarize") {
    const std::vector<double> x{1, 2, 3, 4};
    const auto s = summarize(x);
    CHECK(s.mean_hat == 2.5);
    CHECK(s.trials == 4);
    CHECK(s.std_err == Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(s.ci_half_width(0.95) == Approx(1.959963984540054 * s.std_err));
}

TEST_CASE("KS statistic and p-value") {
    std::vector<double> u;
    for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
    const double D = ks_statistic(u, [](double x) { return x; });
    CHECK(D == Approx(0.0005));
    CHECK(ks_pvalue(D, u.size()) == Approx(1.0));
    // Q_KS(1) = 0.2699996716735...
    CHECK(ks_pvalue(1.0 / (std::sqrt(1e4) + 0.12 + 0.11 / 100.0), 10'000) == Approx(0.26999967167735456).epsilon(1e-9));
    CHECK(ks_pvalue(0.5 / (std::sqrt(1e4) + 0.12 + 0.11 / 100.0), 10'000) == Approx(0.96394524366487511).epsilon(1e-9));
    std::vector<double> shifted;
    for (double x : u) shifted.push_back(x * x);
    const double D2 = ks_statistic(shifted, [](double x) { return x; });
    CHECK(ks_pvalue(D2, shifted.size()) < 1e-6);
}

TEST_CASE("trial minimum is enforced") {
    auto s = small_detection(DetectorKind::lrt, SynthesisMode::statistic);
    s.trials = 999;
    CHECK_THROWS_AS(estimate_detection_errors(s), InvalidArgument);
    DecodeSetup d;
    d.P_f = 0.5;
    d.rate = 0.02;
    d.trials = 10;
    CHECK_THROWS_AS(estimate_decode_error(d), InvalidArgument);
}

TEST_CASE("silent transmitter forces P_FA + P_MD = 1 for the LRT") {
    auto s = small_detection(DetectorKind::lrt, SynthesisMode::statistic);
    s.P_f = 0.0;
    s.trials = 1000;
    const auto e = estimate_detection_errors(s);
    CHECK(e.error_sum() == Approx(1.0));
}

TEST_CASE("detection is deterministic across worker counts") {
    for (auto kind : {DetectorKind::lrt, DetectorKind::radiometer}) {
        auto s = small_detection(kind, SynthesisMode::samples);
        s.trials = 1000;
        s.workers = 1;
        const auto a = estimate_detection_errors(s);
        s.workers = 3;
        const auto b = estimate_detection_errors(s);
        CHECK(a.p_fa_hat == b.p_fa_hat);
        CHECK(a.p_md_hat == b.p_md_hat);
        CHECK(a.pinsker_floor.mean_hat == b.pinsker_floor.mean_hat);
    }
}

TEST_CASE("samples and statistic modes agree for every detector") {
    for (auto kind : {DetectorKind::lrt, DetectorKind::radiometer, DetectorKind::joint_lrt}) {
        auto samples = small_detection(kind, SynthesisMode::samples);
        auto stat = small_detection(kind, SynthesisMode::statistic);
        if (kind == DetectorKind::joint_lrt) {
            samples.params.N_w = stat.params.N_w = 3;
            samples.placement = stat.placement = WardenPlacement::uniform(3);
        }
        stat.seed = 1234;
        const auto a = estimate_detection_errors(samples);
        const auto b = estimate_detection_errors(stat);
        CAPTURE(to_string(kind));
        CHECK(std::abs(a.error_sum() - b.error_sum()) < a.ci_half_width + b.ci_half_width);
    }
}

TEST_CASE("optimal detector error sum stays above the Pinsker floor") {
    const auto e = estimate_detection_errors(small_detection(DetectorKind::lrt, SynthesisMode::statistic));
    CHECK(e.error_sum() >= e.pinsker_floor.mean_hat - e.ci_half_width);
    CHECK(e.sqrt_half_divergence.mean_hat >= 0.0);
}

TEST_CASE("decode error stays below the analytic bound") {
    for (double P_f : {0.2, 1.0}) {
        DecodeSetup d;
        d.n = 200;
        d.P_f = P_f;
        d.rate = 10.0 / 200.0;
        d.bob_variance = 1.0;
        d.trials = 1000;
        d.seed = 5;
        const auto e = estimate_decode_error(d);
        CHECK(e.num_codewords == 1024);
        CHECK(e.achieved_rate == Approx(10.0 / 200.0));
        CHECK(e.interval.lower <= e.error.mean_hat);
        CHECK(e.error.mean_hat <= e.interval.upper);
        CHECK(e.interval.lower <= e.mean_upper_bound);
    }
}

TEST_CASE("layout expectation of d^gamma matches the closed form") {
    LayoutExpectationSetup s;
    s.params.m = 10.0;
    s.params.gamma = 2.0;
    s.functional = LayoutFunctional::d_rw_gamma;
    s.trials = 20000;
    s.seed = 4;
    const auto e = estimate_layout_expectation(s);
    CHECK(std::abs(e.mean_hat - nearest_distance_moment(10.0, 2.0)) < 4.5 * e.std_err);
    CHECK(parse_layout_functional(to_string(LayoutFunctional::sum_kl_terms)) == LayoutFunctional::sum_kl_terms);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(101, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw InvalidArgument("boom"); }),
                    InvalidArgument);
}

}  // TEST_SUITE
