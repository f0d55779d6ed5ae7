#include <filesystem>
#include <sstream>
#include <string>

#include "covert/config.hpp"
#include "covert/errors.hpp"
#include "doctest.h"

using namespace covert;

namespace {

std::string emit(const ExperimentReport& r, OutputFormat f) {
    std::ostringstream out;
    emit_report(r, f, out);
    return out.str();
}

ExperimentReport sample_report() {
    ExperimentReport r;
    r.experiment = "demo";
    r.seed = 17;
    PointRecord p;
    p.index = 0;
    p.seed = 123456789012345ULL;
    p.set("x", 0.1);
    p.set("whole", 2.0);
    p.set("count", std::int64_t{42});
    p.set("flag", true);
    p.set("label", std::string("a,b \"q\""));
    p.set("missing", std::nan(""));
    p.set_rule("ok", true);
    r.points.push_back(p);
    PointRecord q = p;
    q.index = 1;
    q.set("x", 1.0 / 3.0);
    r.points.push_back(q);
    FitRecord fit;
    fit.axis = "n";
    fit.response = "bits";
    fit.group = "gamma=2";
    fit.fit = {0.5000001, -1.25, 0.999999, 3};
    fit.expected_slope = 0.5;
    fit.tolerance = 1e-3;
    fit.pass = true;
    r.fits.push_back(fit);
    r.refresh_rules();
    return r;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal file applies defaults") {
    const auto parsed = parse_config("theorem = 1\n");
    const auto defaults = SweepSpec::defaults(1);
    CHECK(parsed.spec.theorem == 1);
    CHECK(parsed.spec.n == defaults.n);
    CHECK(parsed.spec.m == defaults.m);
    CHECK(parsed.spec.trials == defaults.trials);
    CHECK(parsed.has("theorem"));
    CHECK_FALSE(parsed.has("n"));
}

TEST_CASE("lists, comments and counts") {
    const auto parsed = parse_config(
        "# header\n"
        "theorem = 1   # trailing\n"
        "n = 1e4, 2e4, 4e4\n"
        "m = 10, 30\n"
        "gamma = 2\n"
        "synthesis = statistic\n"
        "moment_constant = published\n");
    CHECK(parsed.spec.grid_size() == 6);
    CHECK(parsed.spec.n[1] == 20'000);
    CHECK(parsed.spec.synthesis == SynthesisMode::statistic);
    CHECK(parsed.spec.moment_constant == MomentConstant::published);
}

TEST_CASE("invalid input is rejected with the key") {
    CHECK_THROWS_WITH_AS(parse_config("theorem = 1\ngamma = 1.5\n"), doctest::Contains("gamma"), InvalidArgument);
    CHECK_THROWS_WITH_AS(parse_config("theorem = 1\nbogus = 3\n"), doctest::Contains("bogus: unknown key"),
                         InvalidArgument);
    CHECK_THROWS_WITH_AS(parse_config("theorem = 1\nn = 1e4\nn = 1e5\n"), doctest::Contains("more than once"),
                         InvalidArgument);
    CHECK_THROWS_WITH_AS(parse_config("n = 1e4\n"), doctest::Contains("theorem"), InvalidArgument);
    CHECK_THROWS_WITH_AS(parse_config("theorem = 1\nn = 1.5\n"), doctest::Contains("n:"), InvalidArgument);
    CHECK_THROWS_WITH_AS(parse_config("theorem = 1\ntrials = 1000, 2000\n"), doctest::Contains("single value"),
                         InvalidArgument);
    CHECK_THROWS_AS(parse_config("theorem = 2\n", 1), InvalidArgument);
    CHECK_THROWS_AS(parse_config("theorem = 1\nnot a pair\n"), InvalidArgument);
}

TEST_CASE("theorem may come from the caller") {
    const auto parsed = parse_config("n = 1e4\n", 3);
    CHECK(parsed.spec.theorem == 3);
    CHECK(parsed.spec.N_w == SweepSpec::defaults(3).N_w);
}

TEST_CASE("output formats") {
    CHECK(parse_output_format("csv") == OutputFormat::csv);
    CHECK(parse_output_format("jsonl") == OutputFormat::json_lines);
    CHECK(parse_output_format("json-lines") == OutputFormat::json_lines);
    CHECK_THROWS_AS(parse_output_format("xml"), InvalidArgument);
    CHECK(file_extension(OutputFormat::csv) == ".csv");
}

TEST_CASE("doubles print with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2.0");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("empty report gives a header-only CSV") {
    ExperimentReport r;
    r.experiment = "empty";
    const auto csv = emit(r, OutputFormat::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
    CHECK(csv.rfind("schema,", 0) == 0);
    const auto jsonl = emit(r, OutputFormat::json_lines);
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 1);
    CHECK(jsonl.find(std::string(kReportSchema)) != std::string::npos);
}

TEST_CASE("reports round-trip through CSV and JSON lines") {
    const auto original = sample_report();
    for (auto format : {OutputFormat::csv, OutputFormat::json_lines}) {
        const auto text = emit(original, format);
        CHECK(text.find(std::string(kReportSchema)) != std::string::npos);
        const auto back = parse_report(text, format);
        CHECK(back.experiment == original.experiment);
        CHECK(back.seed == original.seed);
        CHECK(back.schema == original.schema);
        REQUIRE(back.points.size() == 2);
        CHECK(back.points[1].seed == original.points[1].seed);
        CHECK(back.points[1].number("x") == 1.0 / 3.0);
        CHECK(back.points[0].number("whole") == 2.0);
        CHECK(std::get<std::int64_t>(*back.points[0].find("count")) == 42);
        CHECK(std::get<bool>(*back.points[0].find("flag")) == true);
        CHECK(std::get<std::string>(*back.points[0].find("label")) == "a,b \"q\"");
        CHECK(std::isnan(back.points[0].number("missing")));
        REQUIRE(back.fits.size() == 1);
        CHECK(back.fits[0].fit.slope == 0.5000001);
        CHECK(back.fits[0].group == "gamma=2");
        CHECK(back.fits[0].pass);
        // Emitting the parsed report reproduces the bytes.
        CHECK(emit(back, format) == text);
    }
}

TEST_CASE("write_report reports unwritable paths") {
    CHECK_THROWS_AS(write_report(sample_report(), OutputFormat::csv, "/nonexistent-dir/x/report.csv"), IoError);
}

}  // TEST_SUITE
