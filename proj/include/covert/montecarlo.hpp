#pragma once

// Repeated-trial estimates of the wardens' error probabilities, Bob's
// decoding error and layout expectations, with confidence intervals.
//
// Every trial draws from its own counter-derived random stream, and both
// hypotheses are simulated on the same layout (paired design). Results are
// identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/analytics.hpp"
#include "covert/geometry.hpp"

namespace covert {

inline constexpr double kDefaultConfidence = 0.99;

/// Two-sided standard normal quantile for the given confidence level.
double normal_critical_value(double confidence);

struct WilsonInterval {
    double lower = 0.0;
    double upper = 0.0;
    double half_width() const noexcept { return 0.5 * (upper - lower); }
};

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double confidence = kDefaultConfidence);

struct ExpectationEstimate {
    double mean_hat = 0.0;
    double std_err = 0.0;
    std::size_t trials = 0;

    /// Normal-approximation half width.
    double ci_half_width(double confidence = kDefaultConfidence) const;
};

/// Mean and standard error (sample std / sqrt(trials)) of `values`.
ExpectationEstimate summarize(std::span<const double> values);

enum class DetectorKind { lrt, radiometer, joint_lrt };
enum class SynthesisMode { automatic, samples, statistic };

std::string_view to_string(DetectorKind kind);
std::string_view to_string(SynthesisMode mode);

struct DetectionEstimate {
    double p_fa_hat = 0.0;
    double p_md_hat = 0.0;
    /// Trials per hypothesis (H0 and H1 are both run on every layout).
    std::size_t trials = 0;
    std::size_t h0_trials = 0;
    std::size_t h1_trials = 0;
    /// Wilson half widths for each error probability.
    double fa_ci_half_width = 0.0;
    double md_ci_half_width = 0.0;
    /// Half width for P_FA + P_MD from the paired per-layout error counts.
    double ci_half_width = 0.0;
    double confidence = kDefaultConfidence;
    std::size_t resamples = 0;
    /// Per-layout sqrt(D/2) over the whole block and the Pinsker floor 1 - sqrt(D/2).
    ExpectationEstimate sqrt_half_divergence;
    ExpectationEstimate pinsker_floor;

    double error_sum() const noexcept { return p_fa_hat + p_md_hat; }
};

struct DetectionSetup {
    ScenarioParams params;
    WardenPlacement placement = WardenPlacement::midpoint();
    DetectorKind detector = DetectorKind::lrt;
    /// Alice's transmit power (per-symbol; for the radiometer, the codeword's exact power).
    double P_f = 0.0;
    /// Radiometer offset t (decides H1 iff S >= sigma_w^2 + t).
    double radiometer_t = 0.0;
    std::size_t trials = 10'000;
    std::uint64_t seed = 1;
    SynthesisMode synthesis = SynthesisMode::automatic;
    std::size_t workers = 1;
    double confidence = kDefaultConfidence;
    double window_margin = kMinWindowMargin;
};

/// Rejects trials < 1000.
DetectionEstimate estimate_detection_errors(const DetectionSetup& setup);

DetectionEstimate estimate_detection_errors(const ScenarioParams& params, const CovertBudget& budget,
                                            DetectorKind detector, std::size_t trials, std::uint64_t seed);

struct DecodeSetup {
    ScenarioParams params;
    WardenPlacement placement = WardenPlacement::midpoint();
    std::size_t n = 200;
    double P_f = 0.0;
    /// Requested rate; the codebook holds codebook_size(n, rate, codebook_cap) codewords.
    double rate = 0.0;
    std::size_t codebook_cap = std::size_t{1} << 16;
    /// When set, Bob's noise variance is fixed; otherwise it comes from sampled layouts.
    std::optional<double> bob_variance;
    std::size_t trials = 1'000;
    std::uint64_t seed = 1;
    SynthesisMode synthesis = SynthesisMode::automatic;
    std::size_t workers = 1;
    double confidence = kDefaultConfidence;
    double window_margin = kMinWindowMargin;
};

struct DecodeEstimate {
    ExpectationEstimate error;
    WilsonInterval interval;
    std::size_t num_codewords = 0;
    double achieved_rate = 0.0;
    /// Mean over trials of the clamped random-coding bound at the trial's sigma_b^2.
    double mean_upper_bound = 0.0;
    std::size_t resamples = 0;
};

/// Fresh codebook and uniformly random message per trial, ML decoding at Bob.
DecodeEstimate estimate_decode_error(const DecodeSetup& setup);

enum class LayoutFunctional { inv_sigma_w2, d_rw_gamma, sqrt_nD_over_2, sum_kl_terms };

/// Accepts "inv_sigma_w2", "d_rw_gamma", "sqrt_nD_over_2", "sum_kl_terms".
LayoutFunctional parse_layout_functional(std::string_view name);
std::string_view to_string(LayoutFunctional functional);

struct LayoutExpectationSetup {
    ScenarioParams params;
    WardenPlacement placement = WardenPlacement::midpoint();
    LayoutFunctional functional = LayoutFunctional::d_rw_gamma;
    /// Needed by sqrt_nD_over_2 and sum_kl_terms.
    double P_f = 0.0;
    std::size_t trials = 10'000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    double window_margin = kMinWindowMargin;
};

/// Monte Carlo mean of a layout functional. Single-warden functionals use warden 0;
/// sqrt_nD_over_2 uses the collaborating-warden divergence when N_w > 1.
ExpectationEstimate estimate_layout_expectation(const LayoutExpectationSetup& setup);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double ks_pvalue(double statistic, std::size_t sample_count);

}  // namespace covert
