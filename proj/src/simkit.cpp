#include "covert/simkit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "covert/errors.hpp"

namespace covert {
namespace {

using detail::require;

double chi_square(double dof, Rng& rng) {
    if (dof <= 0.0) return 0.0;
    std::gamma_distribution<double> dist(0.5 * dof, 2.0);
    return dist(rng);
}

double energy_of(std::span<const double> samples) {
    double sum = 0.0;
    for (double y : samples) sum += y * y;
    return sum;
}

}  // namespace

NoiseProfile realize_noise_profile(const NodeLayout& layout, const ScenarioParams& params) {
    params.validate();
    require(layout.wardens.size() == layout.nearest_jammer.size(), "layout has no jammer assignment for a warden");
    if (layout.friendly.empty()) throw NoJammerError();

    NoiseProfile profile;
    profile.warden_variance.reserve(layout.wardens.size());
    for (std::size_t k = 0; k < layout.wardens.size(); ++k) {
        const double d = layout.nearest_jammer[k].distance;
        require(d > 0.0, "jammer coincides with warden " + std::to_string(k));
        profile.warden_variance.push_back(params.warden_background(k) + params.P_r / std::pow(d, params.gamma));
    }

    profile.active_jammers = layout.active_jammers();
    profile.bob_variance = params.sigma2_b0;
    for (std::size_t j : profile.active_jammers) {
        const double d = distance(layout.friendly.at(j), layout.bob);
        require(d > 0.0, "active jammer coincides with Bob");
        profile.bob_variance += params.P_r / std::pow(d, params.gamma);
    }
    return profile;
}

Codebook::Codebook(std::size_t n, std::size_t num_codewords, double P_f, std::uint64_t seed)
    : n_(n), num_codewords_(num_codewords), P_f_(P_f), seed_(seed) {
    require(n >= 1, "codeword length must be >= 1");
    require(num_codewords >= 1, "codebook must hold at least one codeword");
    require(P_f > 0.0, "codeword power must be positive");
    Rng rng(seed);
    std::normal_distribution<double> symbol(0.0, std::sqrt(P_f));
    symbols_.resize(n * num_codewords);
    for (double& s : symbols_) s = symbol(rng);
}

std::span<const double> Codebook::codeword(std::size_t index) const {
    require(index < num_codewords_, "codeword index out of range");
    return std::span<const double>(symbols_).subspan(index * n_, n_);
}

std::size_t codebook_size(double n, double R, std::size_t cap) {
    require(n > 0.0 && R >= 0.0, "codebook size needs n > 0 and R >= 0");
    require(cap >= 2, "codebook cap must be at least 2");
    const double log2_size = n * R;
    if (log2_size >= std::log2(static_cast<double>(cap))) return cap;
    const auto size = static_cast<std::size_t>(std::floor(std::exp2(log2_size)));
    return std::max<std::size_t>(2, size);
}

ObservationSet synthesize_observations(ReceiverKind receiver, std::size_t receiver_index, double noise_variance,
                                       double distance_to_alice, double gamma, std::span<const double> codeword,
                                       std::size_t n, Rng& rng) {
    require(noise_variance > 0.0, "noise variance must be positive");
    require(n >= 1, "n must be >= 1");
    require(codeword.empty() || codeword.size() == n, "codeword length must equal n");
    require(distance_to_alice > 0.0, "distance to Alice must be positive");

    ObservationSet obs;
    obs.receiver = receiver;
    obs.receiver_index = receiver_index;
    obs.truth = codeword.empty() ? Hypothesis::H0 : Hypothesis::H1;
    obs.noise_variance = noise_variance;
    obs.samples.resize(n);

    std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance));
    const double gain = std::pow(distance_to_alice, -0.5 * gamma);
    for (std::size_t i = 0; i < n; ++i) {
        const double signal = codeword.empty() ? 0.0 : gain * codeword[i];
        obs.samples[i] = signal + noise(rng);
    }
    return obs;
}

DetectorOutcome radiometer_from_statistic(double mean_energy, double sigma2_w, double t) {
    require(t > 0.0, "radiometer threshold offset must be positive");
    DetectorOutcome out;
    out.statistic = mean_energy;
    out.threshold = sigma2_w + t;
    out.decision = mean_energy >= out.threshold ? Hypothesis::H1 : Hypothesis::H0;
    return out;
}

DetectorOutcome radiometer(const ObservationSet& obs, double sigma2_w, double t) {
    require(!obs.samples.empty(), "observation set is empty");
    return radiometer_from_statistic(energy_of(obs.samples) / static_cast<double>(obs.samples.size()), sigma2_w, t);
}

double lrt_threshold(double n, double sigma2_null, double sigma2_alt) {
    require(sigma2_null > 0.0, "null variance must be positive");
    require(sigma2_alt > sigma2_null, "likelihood-ratio test needs sigma2_alt > sigma2_null");
    // log LR = (E/2)(1/s0 - 1/s1) - (n/2) ln(s1/s0) >= 0.
    const double ratio_minus_one = (sigma2_alt - sigma2_null) / sigma2_null;
    return n * std::log1p(ratio_minus_one) * sigma2_null * sigma2_alt / (sigma2_alt - sigma2_null);
}

DetectorOutcome lrt_from_energy(double energy, double n, double sigma2_null, double sigma2_alt) {
    DetectorOutcome out;
    out.statistic = energy;
    out.threshold = lrt_threshold(n, sigma2_null, sigma2_alt);
    out.decision = energy >= out.threshold ? Hypothesis::H1 : Hypothesis::H0;
    return out;
}

DetectorOutcome lrt(const ObservationSet& obs, double sigma2_null, double sigma2_alt) {
    require(!obs.samples.empty(), "observation set is empty");
    return lrt_from_energy(energy_of(obs.samples), static_cast<double>(obs.samples.size()), sigma2_null, sigma2_alt);
}

JointLrtWeights joint_lrt_weights(std::span<const double> null_variances, double P_f,
                                  std::span<const double> alice_distances, double gamma, double n) {
    require(!null_variances.empty(), "at least one warden is required");
    require(null_variances.size() == alice_distances.size(), "variance and distance sequences differ in length");
    require(P_f > 0.0, "joint likelihood-ratio test needs P_f > 0");
    JointLrtWeights w;
    w.v.resize(null_variances.size());
    for (std::size_t k = 0; k < null_variances.size(); ++k) {
        require(null_variances[k] > 0.0, "variance must be positive");
        require(alice_distances[k] > 0.0, "distance must be positive");
        const double u = std::pow(alice_distances[k], -0.5 * gamma);
        w.v[k] = u / null_variances[k];
        w.a += u * u / null_variances[k];
    }
    const double pa = P_f * w.a;
    w.scale = P_f / (1.0 + pa);
    // scale * Q >= n ln(1 + P_f a)  (log|Sigma1|/|Sigma0| per symbol).
    w.threshold = n * std::log1p(pa) / w.scale;
    return w;
}

DetectorOutcome joint_lrt(std::span<const ObservationSet> observations, std::span<const double> null_variances,
                          double P_f, std::span<const double> alice_distances, double gamma) {
    require(!observations.empty(), "at least one warden is required");
    require(observations.size() == null_variances.size(), "observation and variance counts differ");
    const std::size_t n = observations.front().samples.size();
    for (const auto& o : observations) require(o.samples.size() == n, "wardens observed different block lengths");

    const auto w = joint_lrt_weights(null_variances, P_f, alice_distances, gamma, static_cast<double>(n));
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double projection = 0.0;
        for (std::size_t k = 0; k < observations.size(); ++k) projection += w.v[k] * observations[k].samples[i];
        q += projection * projection;
    }
    DetectorOutcome out;
    out.statistic = q;
    out.threshold = w.threshold;
    out.decision = q >= w.threshold ? Hypothesis::H1 : Hypothesis::H0;
    return out;
}

std::size_t ml_decode(const ObservationSet& obs, const Codebook& codebook, double distance_to_alice, double gamma) {
    require(codebook.size() >= 1, "codebook is empty");
    require(obs.samples.size() == codebook.n(), "observation length differs from codeword length");
    const double gain = std::pow(distance_to_alice, -0.5 * gamma);
    std::size_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < codebook.size(); ++l) {
        const auto cw = codebook.codeword(l);
        double metric = 0.0;
        for (std::size_t i = 0; i < cw.size(); ++i) {
            const double diff = obs.samples[i] - gain * cw[i];
            metric += diff * diff;
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = l;
        }
    }
    return best;
}

double sample_energy(double variance, std::size_t n, Rng& rng) {
    require(variance > 0.0, "variance must be positive");
    return variance * chi_square(static_cast<double>(n), rng);
}

double sample_noncentral_energy(double variance, double signal_energy, std::size_t n, Rng& rng) {
    require(variance > 0.0, "variance must be positive");
    require(signal_energy >= 0.0, "signal energy must be non-negative");
    require(n >= 1, "n must be >= 1");
    // Rotate the signal onto the first axis; the other n-1 axes are pure noise.
    std::normal_distribution<double> z(0.0, 1.0);
    const double first = std::sqrt(signal_energy) + std::sqrt(variance) * z(rng);
    return first * first + variance * chi_square(static_cast<double>(n - 1), rng);
}

bool sample_ml_decoding_error(std::size_t n, std::size_t num_codewords, double signal_power, double noise_variance,
                              Rng& rng) {
    require(n >= 1, "n must be >= 1");
    require(num_codewords >= 1, "codebook is empty");
    require(signal_power > 0.0 && noise_variance > 0.0, "powers must be positive");
    if (num_codewords == 1) return false;

    const double dn = static_cast<double>(n);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> message(0, num_codewords - 1);
    const std::size_t sent = message(rng);

    // y = c_sent + noise. Split noise = alpha y + w with w independent of y.
    const double total = signal_power + noise_variance;
    const double y_energy = total * chi_square(dn, rng);
    const double alpha = noise_variance / total;
    const double tau = signal_power * noise_variance / total;
    const double along = alpha * std::sqrt(y_energy) + std::sqrt(tau) * z(rng);
    const double true_metric = along * along + tau * chi_square(dn - 1.0, rng);

    // Every other codeword is an independent N(0, P I) vector, so given y its
    // distance is P * noncentral chi2_n(|y|^2 / P).
    const double y_norm = std::sqrt(y_energy);
    const double sp = std::sqrt(signal_power);
    for (std::size_t l = 0; l < num_codewords; ++l) {
        if (l == sent) continue;
        const double first = y_norm + sp * z(rng);
        const double metric = first * first + signal_power * chi_square(dn - 1.0, rng);
        if (metric < true_metric || (metric == true_metric && l < sent)) return true;
    }
    return false;
}

}  // namespace covert
