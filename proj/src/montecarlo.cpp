#include "covert/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "covert/errors.hpp"
#include "covert/parallel.hpp"
#include "covert/random.hpp"
#include "covert/simkit.hpp"

namespace covert {
namespace {

using detail::require;

constexpr std::size_t kSampleLevelMaxN = 1024;
constexpr std::size_t kSampleLevelMaxDecodeWork = std::size_t{1} << 18;

bool use_samples(SynthesisMode mode, std::size_t work, std::size_t limit) {
    switch (mode) {
        case SynthesisMode::samples: return true;
        case SynthesisMode::statistic: return false;
        case SynthesisMode::automatic: return work <= limit;
    }
    return false;
}

std::vector<double> gaussian_codeword(std::size_t n, double power, Rng& rng) {
    std::normal_distribution<double> symbol(0.0, std::sqrt(power));
    std::vector<double> cw(n);
    for (double& s : cw) s = symbol(rng);
    return cw;
}

// Gaussian direction rescaled to empirical power exactly `power`.
std::vector<double> fixed_power_codeword(std::size_t n, double power, Rng& rng) {
    auto cw = gaussian_codeword(n, 1.0, rng);
    double energy = 0.0;
    for (double s : cw) energy += s * s;
    const double scale = std::sqrt(power * static_cast<double>(n) / energy);
    for (double& s : cw) s *= scale;
    return cw;
}

struct DetectionTrial {
    bool false_alarm = false;
    bool missed = false;
    double sqrt_half_divergence = 0.0;
    std::size_t resamples = 0;
};

DetectionTrial run_detection_trial(const DetectionSetup& s, std::size_t index, const PointProcessWindow& window) {
    Rng rng = make_stream(s.seed, StreamTag::detection, index);
    const auto draw = sample_layout(s.params.m, s.placement, window, rng);
    const auto profile = realize_noise_profile(draw.layout, s.params);
    const std::size_t n = static_cast<std::size_t>(s.params.n);
    const double dn = static_cast<double>(n);
    const double gamma = s.params.gamma;

    std::vector<double> d_wa;
    d_wa.reserve(draw.layout.wardens.size());
    for (const auto& w : draw.layout.wardens) d_wa.push_back(distance(w, draw.layout.alice));

    DetectionTrial trial;
    trial.resamples = draw.resamples;
    const bool samples = use_samples(s.synthesis, n, kSampleLevelMaxN);

    switch (s.detector) {
        case DetectorKind::lrt: {
            const double s0 = profile.warden_variance[0];
            const double s1 = s0 + s.P_f * std::pow(d_wa[0], -gamma);
            trial.sqrt_half_divergence = std::sqrt(0.5 * dn * scalar_gaussian_kl(s.P_f, d_wa[0], s0, gamma));
            if (!(s1 > s0)) {
                // Identical hypotheses: likelihood ratio is 1 everywhere and ties go to H1.
                trial.false_alarm = true;
                trial.missed = false;
                break;
            }
            if (samples) {
                const auto obs0 = synthesize_observations(ReceiverKind::warden, 0, s0, d_wa[0], gamma, {}, n, rng);
                const auto cw = gaussian_codeword(n, s.P_f, rng);
                const auto obs1 = synthesize_observations(ReceiverKind::warden, 0, s0, d_wa[0], gamma, cw, n, rng);
                trial.false_alarm = lrt(obs0, s0, s1).decision == Hypothesis::H1;
                trial.missed = lrt(obs1, s0, s1).decision == Hypothesis::H0;
            } else {
                const double e0 = sample_energy(s0, n, rng);
                const double e1 = sample_energy(s1, n, rng);
                trial.false_alarm = lrt_from_energy(e0, dn, s0, s1).decision == Hypothesis::H1;
                trial.missed = lrt_from_energy(e1, dn, s0, s1).decision == Hypothesis::H0;
            }
            break;
        }
        case DetectorKind::radiometer: {
            const double s0 = profile.warden_variance[0];
            trial.sqrt_half_divergence = std::sqrt(0.5 * dn * scalar_gaussian_kl(s.P_f, d_wa[0], s0, gamma));
            if (samples) {
                const auto obs0 = synthesize_observations(ReceiverKind::warden, 0, s0, d_wa[0], gamma, {}, n, rng);
                const auto cw = fixed_power_codeword(n, s.P_f, rng);
                const auto obs1 = synthesize_observations(ReceiverKind::warden, 0, s0, d_wa[0], gamma, cw, n, rng);
                trial.false_alarm = radiometer(obs0, s0, s.radiometer_t).decision == Hypothesis::H1;
                trial.missed = radiometer(obs1, s0, s.radiometer_t).decision == Hypothesis::H0;
            } else {
                const double e0 = sample_energy(s0, n, rng);
                const double signal_energy = dn * s.P_f * std::pow(d_wa[0], -gamma);
                const double e1 = sample_noncentral_energy(s0, signal_energy, n, rng);
                trial.false_alarm = radiometer_from_statistic(e0 / dn, s0, s.radiometer_t).decision == Hypothesis::H1;
                trial.missed = radiometer_from_statistic(e1 / dn, s0, s.radiometer_t).decision == Hypothesis::H0;
            }
            break;
        }
        case DetectorKind::joint_lrt: {
            const auto& sv = profile.warden_variance;
            trial.sqrt_half_divergence = std::sqrt(0.5 * multi_willie_kl(s.P_f, d_wa, sv, dn, gamma));
            if (!(s.P_f > 0.0)) {
                trial.false_alarm = true;
                trial.missed = false;
                break;
            }
            if (samples) {
                std::vector<ObservationSet> h0;
                std::vector<ObservationSet> h1;
                for (std::size_t k = 0; k < sv.size(); ++k)
                    h0.push_back(synthesize_observations(ReceiverKind::warden, k, sv[k], d_wa[k], gamma, {}, n, rng));
                const auto cw = gaussian_codeword(n, s.P_f, rng);
                for (std::size_t k = 0; k < sv.size(); ++k)
                    h1.push_back(synthesize_observations(ReceiverKind::warden, k, sv[k], d_wa[k], gamma, cw, n, rng));
                trial.false_alarm = joint_lrt(h0, sv, s.P_f, d_wa, gamma).decision == Hypothesis::H1;
                trial.missed = joint_lrt(h1, sv, s.P_f, d_wa, gamma).decision == Hypothesis::H0;
            } else {
                const auto w = joint_lrt_weights(sv, s.P_f, d_wa, gamma, dn);
                const double q0 = sample_energy(w.a, n, rng);
                const double q1 = sample_energy(w.a + s.P_f * w.a * w.a, n, rng);
                trial.false_alarm = q0 >= w.threshold;
                trial.missed = q1 < w.threshold;
            }
            break;
        }
    }
    return trial;
}

}  // namespace

double normal_critical_value(double confidence) {
    require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double confidence) {
    require(trials > 0, "Wilson interval needs at least one trial");
    require(successes <= trials, "successes exceed trials");
    const double z = normal_critical_value(confidence);
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ExpectationEstimate::ci_half_width(double confidence) const {
    return normal_critical_value(confidence) * std_err;
}

ExpectationEstimate summarize(std::span<const double> values) {
    require(!values.empty(), "cannot summarize an empty sample");
    ExpectationEstimate out;
    out.trials = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.mean_hat = mean;
    if (values.size() > 1) {
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        out.std_err = sd / std::sqrt(static_cast<double>(values.size()));
    }
    return out;
}

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::lrt: return "lrt";
        case DetectorKind::radiometer: return "radiometer";
        case DetectorKind::joint_lrt: return "joint_lrt";
    }
    return "?";
}

std::string_view to_string(SynthesisMode mode) {
    switch (mode) {
        case SynthesisMode::automatic: return "auto";
        case SynthesisMode::samples: return "samples";
        case SynthesisMode::statistic: return "statistic";
    }
    return "?";
}

DetectionEstimate estimate_detection_errors(const DetectionSetup& setup) {
    require(setup.trials >= 1000, "detection estimates need at least 1000 trials");
    setup.params.validate();
    require(setup.P_f >= 0.0, "P_f must be non-negative");
    if (setup.detector == DetectorKind::radiometer) require(setup.radiometer_t > 0.0, "radiometer needs t > 0");
    const std::size_t wardens =
        setup.placement.kind == WardenPlacement::Kind::midpoint ? 1 : setup.placement.count;
    require(wardens == setup.params.N_w, "warden placement count must equal N_w");

    const auto window = PointProcessWindow::around_warden_box(setup.window_margin);
    std::vector<DetectionTrial> trials(setup.trials);
    parallel_for(setup.trials, setup.workers,
                 [&](std::size_t i) { trials[i] = run_detection_trial(setup, i, window); });

    std::size_t fa = 0;
    std::size_t md = 0;
    std::vector<double> error_counts(trials.size());
    std::vector<double> sqrt_half(trials.size());
    std::vector<double> floors(trials.size());
    DetectionEstimate est;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        fa += trials[i].false_alarm;
        md += trials[i].missed;
        error_counts[i] = static_cast<double>(trials[i].false_alarm) + static_cast<double>(trials[i].missed);
        sqrt_half[i] = trials[i].sqrt_half_divergence;
        floors[i] = 1.0 - trials[i].sqrt_half_divergence;
        est.resamples += trials[i].resamples;
    }
    const double nt = static_cast<double>(setup.trials);
    est.trials = est.h0_trials = est.h1_trials = setup.trials;
    est.p_fa_hat = static_cast<double>(fa) / nt;
    est.p_md_hat = static_cast<double>(md) / nt;
    est.confidence = setup.confidence;
    est.fa_ci_half_width = wilson_interval(fa, setup.trials, setup.confidence).half_width();
    est.md_ci_half_width = wilson_interval(md, setup.trials, setup.confidence).half_width();
    est.ci_half_width = summarize(error_counts).ci_half_width(setup.confidence);
    est.sqrt_half_divergence = summarize(sqrt_half);
    est.pinsker_floor = summarize(floors);
    return est;
}

DetectionEstimate estimate_detection_errors(const ScenarioParams& params, const CovertBudget& budget,
                                            DetectorKind detector, std::size_t trials, std::uint64_t seed) {
    require(detector != DetectorKind::radiometer, "radiometer estimates need a threshold; use DetectionSetup");
    DetectionSetup setup;
    setup.params = params;
    setup.placement = params.N_w == 1 && !budget.conditioning_radius ? WardenPlacement::midpoint()
                                                                      : WardenPlacement::uniform(params.N_w);
    setup.detector = detector;
    setup.P_f = budget.P_f;
    setup.trials = trials;
    setup.seed = seed;
    return estimate_detection_errors(setup);
}

DecodeEstimate estimate_decode_error(const DecodeSetup& setup) {
    require(setup.trials >= 1000, "decoding estimates need at least 1000 trials");
    require(setup.n >= 1, "n must be >= 1");
    require(setup.P_f > 0.0, "P_f must be positive");
    if (setup.bob_variance) {
        require(*setup.bob_variance > 0.0, "Bob's noise variance must be positive");
    } else {
        setup.params.validate();
    }

    DecodeEstimate est;
    est.num_codewords = codebook_size(static_cast<double>(setup.n), setup.rate, setup.codebook_cap);
    est.achieved_rate = std::log2(static_cast<double>(est.num_codewords)) / static_cast<double>(setup.n);
    const bool samples = use_samples(setup.synthesis, est.num_codewords * setup.n, kSampleLevelMaxDecodeWork);
    const auto window = PointProcessWindow::around_warden_box(setup.window_margin);
    const double gamma = setup.params.gamma;

    std::vector<double> errors(setup.trials);
    std::vector<double> bounds(setup.trials);
    std::vector<std::size_t> resamples(setup.trials, 0);
    parallel_for(setup.trials, setup.workers, [&](std::size_t i) {
        Rng rng = make_stream(setup.seed, StreamTag::decoding, i);
        double sigma2_b = 0.0;
        if (setup.bob_variance) {
            sigma2_b = *setup.bob_variance;
        } else {
            const auto draw = sample_layout(setup.params.m, setup.placement, window, rng);
            sigma2_b = realize_noise_profile(draw.layout, setup.params).bob_variance;
            resamples[i] = draw.resamples;
        }
        bool error = false;
        if (samples) {
            const Codebook codebook(setup.n, est.num_codewords, setup.P_f, rng());
            std::uniform_int_distribution<std::size_t> message(0, codebook.size() - 1);
            const std::size_t sent = message(rng);
            const double d_ab = distance(kAlice, kBob);
            const auto obs = synthesize_observations(ReceiverKind::bob, 0, sigma2_b, d_ab, gamma,
                                                     codebook.codeword(sent), setup.n, rng);
            error = ml_decode(obs, codebook, d_ab, gamma) != sent;
        } else {
            error = sample_ml_decoding_error(setup.n, est.num_codewords, setup.P_f, sigma2_b, rng);
        }
        errors[i] = error ? 1.0 : 0.0;
        bounds[i] =
            bob_error_upper_bound(static_cast<double>(setup.n), est.achieved_rate, setup.P_f, sigma2_b).clamped();
    });

    est.error = summarize(errors);
    std::size_t error_count = 0;
    for (double e : errors) error_count += e > 0.5;
    est.interval = wilson_interval(error_count, setup.trials, setup.confidence);
    est.mean_upper_bound = summarize(bounds).mean_hat;
    for (auto r : resamples) est.resamples += r;
    return est;
}

LayoutFunctional parse_layout_functional(std::string_view name) {
    if (name == "inv_sigma_w2") return LayoutFunctional::inv_sigma_w2;
    if (name == "d_rw_gamma") return LayoutFunctional::d_rw_gamma;
    if (name == "sqrt_nD_over_2") return LayoutFunctional::sqrt_nD_over_2;
    if (name == "sum_kl_terms") return LayoutFunctional::sum_kl_terms;
    throw InvalidArgument("unknown layout functional '" + std::string(name) + "'");
}

std::string_view to_string(LayoutFunctional functional) {
    switch (functional) {
        case LayoutFunctional::inv_sigma_w2: return "inv_sigma_w2";
        case LayoutFunctional::d_rw_gamma: return "d_rw_gamma";
        case LayoutFunctional::sqrt_nD_over_2: return "sqrt_nD_over_2";
        case LayoutFunctional::sum_kl_terms: return "sum_kl_terms";
    }
    return "?";
}

ExpectationEstimate estimate_layout_expectation(const LayoutExpectationSetup& setup) {
    require(setup.trials >= 2, "layout expectation needs at least 2 trials");
    setup.params.validate();
    const bool needs_power = setup.functional == LayoutFunctional::sqrt_nD_over_2 ||
                             setup.functional == LayoutFunctional::sum_kl_terms;
    if (needs_power) require(setup.P_f >= 0.0, "functional needs a non-negative P_f");

    const auto window = PointProcessWindow::around_warden_box(setup.window_margin);
    const double gamma = setup.params.gamma;
    const double n = static_cast<double>(setup.params.n);
    std::vector<double> values(setup.trials);
    parallel_for(setup.trials, setup.workers, [&](std::size_t i) {
        Rng rng = make_stream(setup.seed, StreamTag::expectation, i);
        const auto draw = sample_layout(setup.params.m, setup.placement, window, rng);
        const auto& layout = draw.layout;
        switch (setup.functional) {
            case LayoutFunctional::d_rw_gamma:
                values[i] = std::pow(layout.nearest_jammer[0].distance, gamma);
                return;
            case LayoutFunctional::inv_sigma_w2:
                values[i] = 1.0 / realize_noise_profile(layout, setup.params).warden_variance[0];
                return;
            default:
                break;
        }
        const auto profile = realize_noise_profile(layout, setup.params);
        std::vector<double> d_wa;
        for (const auto& w : layout.wardens) d_wa.push_back(distance(w, layout.alice));
        if (setup.functional == LayoutFunctional::sum_kl_terms) {
            values[i] = collective_snr(setup.P_f, d_wa, profile.warden_variance, gamma);
        } else if (layout.wardens.size() == 1) {
            values[i] = std::sqrt(0.5 * n * scalar_gaussian_kl(setup.P_f, d_wa[0], profile.warden_variance[0], gamma));
        } else {
            values[i] = std::sqrt(0.5 * multi_willie_kl(setup.P_f, d_wa, profile.warden_variance, n, gamma));
        }
    });
    return summarize(values);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    require(!samples.empty(), "KS statistic needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_pvalue(double statistic, std::size_t sample_count) {
    require(sample_count > 0, "KS p-value needs samples");
    const double sn = std::sqrt(static_cast<double>(sample_count));
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    if (lambda < 0.05) return 1.0;
    double sum = 0.0;
    if (lambda < 1.18) {
        // Theta-function form of the CDF; the alternating tail series converges poorly here.
        for (int k = 1; k <= 20; ++k) {
            const double j = 2.0 * k - 1.0;
            sum += std::exp(-j * j * std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace covert
