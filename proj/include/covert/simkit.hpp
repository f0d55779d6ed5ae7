#pragma once

// Sample-level synthesis of what each receiver hears, the wardens'
// detectors and Bob's maximum-likelihood decoder.
//
// Besides the sample-level path there are exact samplers for each
// detector's sufficient statistic (energy sums are scaled chi-square
// variates), which is what makes n = 10^6 Monte Carlo feasible.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "covert/analytics.hpp"
#include "covert/geometry.hpp"
#include "covert/random.hpp"

namespace covert {

struct NoiseProfile {
    /// sigma_{w_k}^2 = sigma_{w_k,0}^2 + P_r / d_{r_k,w_k}^gamma.
    std::vector<double> warden_variance;
    /// sigma_b^2 = sigma_b0^2 + sum over distinct active jammers P_r / d_{r,b}^gamma.
    double bob_variance = 0.0;
    std::vector<std::size_t> active_jammers;
};

/// Closest friendly node to each warden is on, all others are off.
NoiseProfile realize_noise_profile(const NodeLayout& layout, const ScenarioParams& params);

/// Random Gaussian codebook, row-major num_codewords x n.
class Codebook {
public:
    Codebook(std::size_t n, std::size_t num_codewords, double P_f, std::uint64_t seed);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return num_codewords_; }
    double power() const noexcept { return P_f_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const double> codeword(std::size_t index) const;

private:
    std::size_t n_;
    std::size_t num_codewords_;
    double P_f_;
    std::uint64_t seed_;
    std::vector<double> symbols_;
};

/// max(2, min(cap, floor(2^{nR}))).
std::size_t codebook_size(double n, double R, std::size_t cap);

enum class ReceiverKind { warden, bob };

struct ObservationSet {
    ReceiverKind receiver = ReceiverKind::warden;
    std::size_t receiver_index = 0;
    Hypothesis truth = Hypothesis::H0;
    double noise_variance = 0.0;
    std::vector<double> samples;
};

/// y_i = codeword_i / d^{gamma/2} + N(0, noise_variance). An empty codeword
/// means H0 (Alice silent); otherwise its length fixes n.
ObservationSet synthesize_observations(ReceiverKind receiver, std::size_t receiver_index, double noise_variance,
                                       double distance_to_alice, double gamma, std::span<const double> codeword,
                                       std::size_t n, Rng& rng);

struct DetectorOutcome {
    Hypothesis decision = Hypothesis::H0;
    double statistic = 0.0;
    double threshold = 0.0;
};

/// Power detector: S = (1/n) sum y_i^2, decides H1 iff S >= sigma2_w + t.
DetectorOutcome radiometer(const ObservationSet& obs, double sigma2_w, double t);
DetectorOutcome radiometer_from_statistic(double mean_energy, double sigma2_w, double t);

/// Equal-prior likelihood-ratio threshold on sum y_i^2 for N(0,s0) vs N(0,s1), s1 > s0.
double lrt_threshold(double n, double sigma2_null, double sigma2_alt);

/// Exact likelihood-ratio test for zero-mean Gaussians with known variances.
DetectorOutcome lrt(const ObservationSet& obs, double sigma2_null, double sigma2_alt);
DetectorOutcome lrt_from_energy(double energy, double n, double sigma2_null, double sigma2_alt);

/// Rank-one structure of the collaborating-warden test. With S = diag(s_k)
/// and u_k = d_k^{-gamma/2}: Sigma0^{-1} - Sigma1^{-1} = scale * v v^T,
/// v = S^{-1} u, a = u^T S^{-1} u, scale = P_f / (1 + P_f a).
struct JointLrtWeights {
    std::vector<double> v;
    double a = 0.0;
    double scale = 0.0;
    /// Decide H1 iff sum_i (v . y_i)^2 >= threshold.
    double threshold = 0.0;
};

JointLrtWeights joint_lrt_weights(std::span<const double> null_variances, double P_f,
                                  std::span<const double> alice_distances, double gamma, double n);

/// Fused likelihood-ratio decision over all wardens' observations.
DetectorOutcome joint_lrt(std::span<const ObservationSet> observations, std::span<const double> null_variances,
                          double P_f, std::span<const double> alice_distances, double gamma);

/// argmin_l || y - c_l / d^{gamma/2} ||^2, ties to the lowest index.
std::size_t ml_decode(const ObservationSet& obs, const Codebook& codebook, double distance_to_alice, double gamma);

// --- exact sufficient-statistic samplers --------------------------------

/// sum_{i<n} (sqrt(variance) Z_i)^2 = variance * chi2_n.
double sample_energy(double variance, std::size_t n, Rng& rng);

/// sum_{i<n} (s_i + sqrt(variance) Z_i)^2 for a fixed signal with sum s_i^2 = signal_energy.
double sample_noncentral_energy(double variance, double signal_energy, std::size_t n, Rng& rng);

/// One ML decoding trial over a fresh Gaussian codebook of `num_codewords`
/// codewords with per-symbol power `signal_power` (already path-loss scaled)
/// in noise `noise_variance`. Returns true on a decoding error. Draws the
/// joint law of the distances instead of the n-dimensional vectors.
bool sample_ml_decoding_error(std::size_t n, std::size_t num_codewords, double signal_power, double noise_variance,
                              Rng& rng);

}  // namespace covert
