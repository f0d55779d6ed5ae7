#pragma once

// Parameter sweeps for the three covertness theorems and the radiometer
// converse, log-log scaling fits, and the report they produce.
//
// A grid point is one combination of axis values. Each point gets its own
// seed derived from the master seed and its grid index, so a report is a
// pure function of (spec, master seed) for any worker count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "covert/analytics.hpp"
#include "covert/montecarlo.hpp"

namespace covert {

inline constexpr std::string_view kReportSchema = "covert-report-v1";

/// Linearising log2(1 + x) costs a relative error of about x/2; points above
/// this are outside the regime where the throughput laws are exact.
inline constexpr double kSmallLogArgument = 1e-3;

struct SweepSpec {
    int theorem = 1;
    bool converse = false;

    std::vector<std::uint64_t> n{10'000, 100'000, 1'000'000};
    std::vector<double> m{10, 30, 100, 300};
    std::vector<std::size_t> N_w{1};
    std::vector<double> gamma{2, 4};
    std::vector<double> P_r{1};
    std::vector<double> epsilon{0.1};
    std::vector<double> rho{0.5};
    std::vector<double> zeta{0.1};
    std::vector<double> lambda{0.1};
    std::vector<double> lambda_prime{0.05};
    /// Converse: codeword power is K times the covert budget.
    std::vector<double> K{1};
    std::vector<double> xi{1};
    std::vector<double> sigma2_w0{1};
    std::vector<double> sigma2_b0{1};

    std::size_t trials = 10'000;
    std::size_t decode_trials = 1'000;
    std::size_t codebook_cap = 1'024;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    double confidence = kDefaultConfidence;
    SynthesisMode synthesis = SynthesisMode::automatic;
    MomentConstant moment_constant = MomentConstant::exact;
    /// When false only closed forms are evaluated.
    bool simulate = true;

    // Overrides used by the single-experiment `detect` and `decode` runs.
    std::optional<DetectorKind> detector;
    std::optional<double> P_f;
    std::optional<double> radiometer_t;
    std::optional<double> rate;
    std::optional<double> sigma2_b;

    /// Defaults for a theorem: Theorem 3 sweeps N_w over {1, 2, 4} and the
    /// converse sweeps K over {1, 100, 1e4, 1e6}.
    static SweepSpec defaults(int theorem, bool converse = false);

    /// Throws InvalidArgument naming the offending key. Axes the experiment
    /// does not use must hold a single value.
    void validate() const;
    std::size_t grid_size() const;
};

/// Axis values of one grid point.
struct GridPoint {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    ScenarioParams params;
    double epsilon = 0.0;
    double rho = 0.0;
    double zeta = 0.0;
    double lambda = 0.0;
    double lambda_prime = 0.0;
    double K = 0.0;
    double xi = 0.0;
};

/// Row-major product of the axes in declaration order, n varying slowest.
std::vector<GridPoint> enumerate_grid(const SweepSpec& spec);

using FieldValue = std::variant<double, std::int64_t, bool, std::string>;

struct Field {
    std::string name;
    FieldValue value;
};

inline constexpr std::string_view kRulePass = "pass";
inline constexpr std::string_view kRuleFail = "fail";
inline constexpr std::string_view kRuleSkipped = "na";

struct PointRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<Field> fields;

    void set(std::string name, FieldValue value);
    /// Stored as field "rule_<name>" with value pass, fail or na.
    void set_rule(std::string_view name, std::optional<bool> passed);
    const FieldValue* find(std::string_view name) const;
    double number(std::string_view name) const;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// OLS on (ln x, ln y) over points with keep[i] true (all when empty).
/// Rejects fewer than 3 kept points, non-positive values, or x spanning
/// less than one decade.
ScalingFit fit_scaling(std::span<const double> x, std::span<const double> y, std::span<const bool> keep = {});

struct FitRecord {
    std::string axis;
    std::string response;
    /// Fixed values of the other axes, e.g. "gamma=2;n=1000000".
    std::string group;
    ScalingFit fit;
    double expected_slope = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RuleOutcome {
    std::string name;
    /// Grid index, or nullopt for rules about fits.
    std::optional<std::size_t> point;
    bool pass = false;
};

struct ExperimentReport {
    std::string experiment;
    std::string schema{kReportSchema};
    std::uint64_t seed = 0;
    std::vector<PointRecord> points;
    std::vector<FitRecord> fits;
    std::vector<RuleOutcome> rules;

    bool all_pass() const noexcept;
    std::size_t failures() const noexcept;
    /// Rebuilds `rules` from the points' rule_* fields and the fits.
    void refresh_rules();
};

ExperimentReport run_theorem1(const SweepSpec& spec);
ExperimentReport run_theorem1_converse(const SweepSpec& spec);
ExperimentReport run_theorem2(const SweepSpec& spec);
ExperimentReport run_theorem3(const SweepSpec& spec);
/// Dispatches on spec.theorem and spec.converse.
ExperimentReport run_sweep(const SweepSpec& spec);

/// Detection error estimate at every grid point. Power is spec.P_f when set,
/// otherwise the covert budget of spec.theorem.
ExperimentReport run_detection(const SweepSpec& spec);

/// Decoding error estimate at every grid point. Rate and power default to the
/// theorem's; Bob's noise comes from sampled layouts unless spec.sigma2_b is set.
ExperimentReport run_decoding(const SweepSpec& spec);

}  // namespace covert
