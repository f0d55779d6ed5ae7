#include <cmath>
#include <numbers>
#include <vector>

#include "covert/errors.hpp"
#include "covert/geometry.hpp"
#include "covert/montecarlo.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covert;

TEST_SUITE("geometry") {

TEST_CASE("distance and warden box") {
    CHECK(distance(kAlice, kBob) == doctest::Approx(1.0));
    CHECK(squared_distance({0, 0}, {3, 4}) == doctest::Approx(25.0));
    CHECK(inside_warden_box(kMidpoint));
    CHECK(inside_warden_box({1.0, 0.5}));
    CHECK_FALSE(inside_warden_box({1.01, 0.0}));
    CHECK_FALSE(inside_warden_box({0.5, -0.51}));
}

TEST_CASE("window margin is enforced") {
    const auto w = PointProcessWindow::around_warden_box();
    CHECK(w.margin() == doctest::Approx(3.0));
    CHECK(w.area() == doctest::Approx(49.0));
    CHECK_THROWS_AS(PointProcessWindow::around_warden_box(2.5), InvalidArgument);
    CHECK_THROWS_AS(PointProcessWindow::make({0.5, 0.0}, -1.0), InvalidArgument);
}

TEST_CASE("nearest-node law closed forms") {
    CHECK(nearest_distance_cdf(1.0 / std::numbers::pi, 1.0) == doctest::Approx(0.632120558828558).epsilon(1e-14));
    CHECK(nearest_distance_cdf(10.0, 0.0) == 0.0);
    // E[d^2] = 1/(m pi) for gamma = 2.
    CHECK(nearest_distance_moment(5.0, 2.0) == doctest::Approx(1.0 / (5.0 * std::numbers::pi)).epsilon(1e-14));
    for (double m : {1.0, 10.0, 300.0})
        for (double gamma : {2.0, 3.0, 4.0})
            CHECK(nearest_distance_moment(m, gamma) ==
                  doctest::Approx(oracle::nearest_distance_moment_quadrature(m, gamma)).epsilon(1e-9));
}

TEST_CASE("nearest_friendly picks the minimum") {
    const std::vector<Point2D> nodes{{3, 0}, {0.6, 0.1}, {-1, -1}};
    const auto nn = nearest_friendly(nodes, kMidpoint);
    CHECK(nn.index == 1);
    CHECK(nn.distance == doctest::Approx(std::hypot(0.1, 0.1)));
}

TEST_CASE("friendly node count is Poisson with mean m*area") {
    const auto window = PointProcessWindow::around_warden_box();
    Rng rng(11);
    const double m = 4.0;
    double total = 0.0;
    const int reps = 400;
    for (int i = 0; i < reps; ++i) {
        const auto nodes = sample_friendly_nodes(m, window, rng);
        total += static_cast<double>(nodes.size());
        for (const auto& p : nodes) {
            CHECK(std::abs(p.x - window.center().x) <= window.half_width());
            CHECK(std::abs(p.y - window.center().y) <= window.half_width());
        }
    }
    const double mean = m * window.area();
    // 5 standard errors of the Poisson mean.
    CHECK(std::abs(total / reps - mean) < 5.0 * std::sqrt(mean / reps));
}

TEST_CASE("sampled nearest distance matches the CDF (KS)") {
    const auto window = PointProcessWindow::around_warden_box();
    Rng rng(5);
    const double m = 30.0;
    std::vector<double> d;
    for (int i = 0; i < 4000; ++i) {
        const auto draw = sample_layout(m, WardenPlacement::midpoint(), window, rng);
        d.push_back(draw.layout.nearest_jammer.at(0).distance);
    }
    const double D = ks_statistic(d, [m](double x) { return nearest_distance_cdf(m, x); });
    CHECK(ks_pvalue(D, d.size()) > 0.001);
}

TEST_CASE("layout placement") {
    const auto window = PointProcessWindow::around_warden_box();
    Rng rng(3);
    const auto mid = sample_layout(10.0, WardenPlacement::midpoint(), window, rng).layout;
    REQUIRE(mid.wardens.size() == 1);
    CHECK(mid.wardens[0] == kMidpoint);
    CHECK(mid.nearest_jammer.size() == 1);

    const auto many = sample_layout(10.0, WardenPlacement::uniform(5), window, rng).layout;
    REQUIRE(many.wardens.size() == 5);
    for (const auto& w : many.wardens) CHECK(inside_warden_box(w));
    const auto active = many.active_jammers();
    CHECK(!active.empty());
    CHECK(active.size() <= 5);

    // Each warden's jammer really is its nearest friendly node.
    for (std::size_t k = 0; k < 5; ++k) {
        const auto nn = nearest_friendly(many.friendly, many.wardens[k]);
        CHECK(nn.index == many.nearest_jammer[k].index);
    }
}

TEST_CASE("empty windows are resampled") {
    const auto window = PointProcessWindow::around_warden_box();
    Rng rng(9);
    // Mean 49 * 0.01 ~ 0.5 nodes per draw, so empty draws are common.
    std::size_t resamples = 0;
    for (int i = 0; i < 200; ++i) resamples += sample_layout(0.01, WardenPlacement::midpoint(), window, rng).resamples;
    CHECK(resamples > 0);
    CHECK_THROWS_AS(sample_layout(1e-9, WardenPlacement::midpoint(), window, rng, 3), NoJammerError);
}

}  // TEST_SUITE
