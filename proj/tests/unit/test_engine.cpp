#include <cmath>
#include <set>
#include <vector>

#include "covert/engine.hpp"
#include "covert/errors.hpp"
#include "doctest.h"

using namespace covert;
using doctest::Approx;

namespace {

SweepSpec analytic(int theorem) {
    auto s = SweepSpec::defaults(theorem);
    s.simulate = false;
    return s;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("grid enumeration") {
    auto s = SweepSpec::defaults(1);
    CHECK(s.grid_size() == 3 * 4 * 2);
    const auto grid = enumerate_grid(s);
    REQUIRE(grid.size() == s.grid_size());
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i].index == i);
        seeds.insert(grid[i].seed);
    }
    CHECK(seeds.size() == grid.size());
    // Seeds depend only on the master seed and the point index.
    CHECK(enumerate_grid(s)[5].seed == grid[5].seed);
    s.seed = 2;
    CHECK(enumerate_grid(s)[5].seed != grid[5].seed);
}

TEST_CASE("validation names the offending key") {
    auto s = SweepSpec::defaults(1);
    s.gamma = {1.5};
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("gamma"), InvalidArgument);
    s = SweepSpec::defaults(2);
    s.epsilon = {0.5};
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("epsilon"), InvalidArgument);
    s = SweepSpec::defaults(1);
    s.N_w = {2};
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("N_w"), InvalidArgument);
    s = SweepSpec::defaults(1);
    s.trials = 500;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("trials"), InvalidArgument);
    s = SweepSpec::defaults(1);
    s.K = {1, 2};
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("K"), InvalidArgument);
    CHECK_NOTHROW(SweepSpec::defaults(3).validate());
    CHECK_NOTHROW(SweepSpec::defaults(1, true).validate());
}

TEST_CASE("scaling fit recovers an exact power law") {
    std::vector<double> x, y;
    for (double v : {1e2, 1e3, 1e4, 1e5}) {
        x.push_back(v);
        y.push_back(3.0 * std::pow(v, -0.75));
    }
    const auto f = fit_scaling(x, y);
    CHECK(f.slope == Approx(-0.75).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == Approx(3.0).epsilon(1e-10));
    CHECK(f.r_squared == Approx(1.0));
    CHECK(f.points == 4);

    y[0] = 1e9;
    const bool keep[] = {false, true, true, true};
    CHECK(fit_scaling(x, y, keep).slope == Approx(-0.75).epsilon(1e-12));
    const bool too_few[] = {false, false, true, true};
    CHECK_THROWS_AS(fit_scaling(x, y, too_few), InvalidArgument);
}

TEST_CASE("point records") {
    PointRecord r;
    r.set("a", 1.5);
    r.set("b", std::int64_t{3});
    r.set_rule("x", true);
    r.set_rule("y", std::nullopt);
    CHECK(r.number("a") == 1.5);
    CHECK(r.number("b") == 3.0);
    REQUIRE(r.find("rule_x"));
    CHECK(std::get<std::string>(*r.find("rule_x")) == "pass");
    CHECK(std::get<std::string>(*r.find("rule_y")) == "na");
    CHECK(r.find("missing") == nullptr);
}

TEST_CASE("analytic theorem 1 sweep: regime flags and fits") {
    auto s = analytic(1);
    s.n = {10'000, 1'000'000, 100'000'000};
    s.m = {10};
    s.gamma = {2};
    const auto report = run_sweep(s);
    CHECK(report.experiment == "theorem1");
    CHECK(report.schema == kReportSchema);
    CHECK(report.points.size() == 3);
    for (const auto& p : report.points) {
        CHECK(p.number("P_f") > 0.0);
        CHECK(p.number("bits_lower_bound") <= p.number("bits") * (1 + 1e-12));
    }
    REQUIRE(report.fits.size() == 1);
    CHECK(report.fits[0].axis == "n");
    CHECK(report.fits[0].fit.slope == Approx(0.5).epsilon(1e-3));
    CHECK(report.all_pass());
}

TEST_CASE("regime flags mark out-of-regime points") {
    auto s = analytic(1);
    s.n = {100};
    s.m = {300};
    s.gamma = {4};
    const auto report = run_sweep(s);
    REQUIRE(report.points.size() == 1);
    CHECK(std::get<bool>(*report.points[0].find("flag_density")) == false);
    CHECK(std::get<bool>(*report.points[0].find("regime_valid")) == false);
}

TEST_CASE("theorem 3 power order falls with the warden count") {
    auto s = analytic(3);
    s.n = {1'000'000};
    s.m = {300};
    s.gamma = {2};
    s.N_w = {1, 2, 4, 8};
    const auto report = run_sweep(s);
    REQUIRE(report.points.size() == 4);
    for (std::size_t i = 1; i < 4; ++i) CHECK(report.points[i].number("P_f") < report.points[i - 1].number("P_f"));
}

TEST_CASE("simulated sweep is independent of the worker count") {
    auto s = SweepSpec::defaults(2);
    s.n = {10'000};
    s.m = {10, 30};
    s.gamma = {2};
    s.trials = 1000;
    s.decode_trials = 1000;
    s.codebook_cap = 32;
    s.workers = 1;
    const auto a = run_sweep(s);
    s.workers = 3;
    const auto b = run_sweep(s);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        REQUIRE(a.points[i].fields.size() == b.points[i].fields.size());
        for (std::size_t f = 0; f < a.points[i].fields.size(); ++f) {
            CAPTURE(a.points[i].fields[f].name);
            CHECK(a.points[i].fields[f].value == b.points[i].fields[f].value);
        }
    }
}

TEST_CASE("converse sweep reports bounds per K") {
    auto s = SweepSpec::defaults(1, true);
    s.n = {1'000'000};
    s.m = {100};
    s.gamma = {2};
    s.simulate = false;
    const auto report = run_sweep(s);
    CHECK(report.experiment == "theorem1_converse");
    REQUIRE(report.points.size() == 4);
    for (const auto& p : report.points) {
        CHECK(p.number("P_k_tx") == Approx(p.number("K") * p.number("P_f")));
        CHECK(p.number("fa_bound") >= 0.0);
    }
}

TEST_CASE("report rule bookkeeping") {
    ExperimentReport r;
    PointRecord p;
    p.set_rule("good", true);
    p.set_rule("bad", false);
    r.points.push_back(p);
    r.refresh_rules();
    CHECK(r.rules.size() == 2);
    CHECK(r.failures() == 1);
    CHECK_FALSE(r.all_pass());
}

}  // TEST_SUITE
