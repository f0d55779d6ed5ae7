#pragma once

// Closed-form quantities for covert communication with nearest-node
// jamming: Gaussian KL divergences, covert power budgets, radiometer
// moments and Chebyshev bounds, Bob's decoding bounds and throughput.
//
// Divergences are in nats, rates in bits. Probability bounds keep their raw
// value; `ProbabilityBound::clamped()` is for reporting only.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace covert {

struct ScenarioParams {
    double gamma = 2.0;        ///< path-loss exponent, >= 2
    double P_r = 1.0;          ///< jammer symbol power
    double sigma2_w0 = 1.0;    ///< warden background noise (shared default)
    double sigma2_b0 = 1.0;    ///< Bob background noise
    double m = 100.0;          ///< friendly node density
    std::uint64_t n = 1'000'000;  ///< channel uses
    std::size_t N_w = 1;       ///< number of wardens
    /// Optional per-warden background noise; overrides sigma2_w0 when set.
    std::vector<double> sigma2_w0_per_warden;

    /// Throws InvalidArgument naming the first violated invariant.
    void validate() const;

    double warden_background(std::size_t k) const;
};

/// Which closed form to use for m^{gamma/2} E[1/sigma_w^2] <= m^{gamma/2} E[d^gamma]/P_r.
enum class MomentConstant {
    exact,      ///< Gamma(gamma/2+1) / (P_r pi^{gamma/2}), the actual Gamma moment
    published,  ///< Gamma(gamma/2+1) / (2 P_r pi^{gamma/2+1}), as printed (2*pi too small)
};

struct ProbabilityBound {
    double raw = 0.0;
    double clamped() const noexcept;
};

struct CovertBudget {
    double epsilon = 0.0;
    double c = 0.0;
    double P_f = 0.0;
    /// psi (single random warden) or kappa (collaborating wardens).
    std::optional<double> conditioning_radius;
    /// Taylor-expansion precondition of the KL bound holds at this (m, n).
    bool regime_ok = true;
};

struct RadiometerDesign {
    double threshold_t = 0.0;
    double eta1 = 0.0;
    double eta1_limit = 0.0;
    double eta2 = 0.0;
    double lambda = 0.0;
    double lambda_prime = 0.0;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

enum class Hypothesis { H0, H1 };

struct Throughput {
    double rate = 0.0;         ///< R, bits per channel use
    double bits = 0.0;         ///< exact nR
    double lower_bound = 0.0;  ///< closed-form lower bound on nR
    double log_argument = 0.0; ///< x inside log2(1 + x)
    bool regime_ok = true;     ///< x < 1, where log2(1+x) >= x
};

struct Thm3Rate {
    double delta = 0.0;
    double c1 = 0.0;
    Throughput throughput;                ///< lower_bound is the display with (zeta/2pi)^{gamma/2}
    double intermediate_lower_bound = 0.0;  ///< form that still carries sigma_b0^2
};

// --- divergences --------------------------------------------------------

/// P_f / (d^gamma sigma^2): Alice's received SNR at a listener.
double received_snr(double P_f, double d, double sigma2, double gamma);

/// D(N(0,s) || N(0,s(1+x))) per symbol with x = received_snr(...):
/// 0.5 [ln(1+x) - x/(1+x)]. Silent-vs-active direction.
double scalar_gaussian_kl(double P_f, double d_wa, double sigma2_w, double gamma);

/// D(N(0,s(1+x)) || N(0,s)) per symbol: 0.5 [x - ln(1+x)]. Active-vs-silent direction.
double scalar_gaussian_kl_reverse(double P_f, double d_wa, double sigma2_w, double gamma);

/// (x/2)^2, valid while x < 2; RegimeViolation otherwise.
double kl_quadratic_bound(double P_f, double d_wa, double sigma2_w, double gamma);

/// 1 - sqrt(n kl / 2): lower bound on P_FA + P_MD for the optimal test.
ProbabilityBound pinsker_detection_floor(double n, double kl_per_symbol);

/// Sum_k P_f / (d_k^gamma sigma_k^2).
double collective_snr(double P_f, std::span<const double> distances, std::span<const double> variances,
                      double gamma);

/// D(P_1 || P_0) over n uses for collaborating wardens: (n/2)(T - ln(1+T)).
double multi_willie_kl(double P_f, std::span<const double> distances, std::span<const double> variances,
                       double n, double gamma);

/// ln(|S + P_f U U^T| / |S|) = ln(1 + P_f sum u_k^2 / s_k).
double rank1_logdet_ratio(std::span<const double> variances, double P_f, std::span<const double> u);

/// (n/4) T^2, valid while T < 1; RegimeViolation otherwise.
double multi_willie_kl_bound(double P_f, std::span<const double> distances, std::span<const double> variances,
                             double n, double gamma);

// --- covert budgets -----------------------------------------------------

/// Upper bound on m^{gamma/2} E[1/sigma_w^2]; independent of m.
double expected_inv_noise_bound(double gamma, double P_r, MomentConstant constant = MomentConstant::exact);

/// Midpoint warden. c = eps sqrt(2) / 2^{gamma-1} / B, P_f = c m^{gamma/2} / sqrt(n).
CovertBudget covert_budget_thm1(double epsilon, const ScenarioParams& params,
                                MomentConstant constant = MomentConstant::exact);

/// Uniform random warden. psi = sqrt(2 eps / pi), c = eps 2 sqrt(2) psi^gamma / B.
/// Rejects eps >= pi/8 (psi must stay below 1/2).
CovertBudget covert_budget_thm2(double epsilon, const ScenarioParams& params,
                                MomentConstant constant = MomentConstant::exact);

/// N_w collaborating wardens. kappa = sqrt((2/pi)(1 - (1-eps/2)^{1/N_w})),
/// c = (eps/2) 2 sqrt(2) kappa^gamma / B, P_f = c m^{gamma/2} / (sqrt(n) N_w).
CovertBudget covert_budget_thm3(double epsilon, const ScenarioParams& params,
                                MomentConstant constant = MomentConstant::exact);

/// m^{gamma/2} / (sqrt(n) N_w^{1+gamma/2}): the order of the collaborating-warden
/// power once kappa^gamma ~ N_w^{-gamma/2} is folded into c.
double thm3_power_order(double m, double n, double N_w, double gamma);

// --- Bob's decoding -----------------------------------------------------

/// 2^{nR - (n/2) log2(1 + P_f/(2 sigma_b^2))}.
ProbabilityBound bob_error_upper_bound(double n, double R, double P_f, double sigma2_b);

/// (1 + c m^{gamma/2} sqrt(n) (1-rho) / (4 (sigma_b0^2 + P_r / floor^gamma)))^{-1}.
double bob_error_conditional_bound(double n, double rho, double c, double m, double gamma, double sigma2_b0,
                                   double P_r, double jammer_floor);

/// Rate (rho/2) log2(1 + c m^{gamma/2} / (2 sqrt(n) noise)) with noise =
/// sigma_b0^2 + P_r/floor^gamma, plus the lower bound sqrt(n) rho c m^{gamma/2} / (4 noise).
Throughput throughput_with_floor(double n, double rho, double c, double m, double gamma, double sigma2_b0,
                                 double P_r, double jammer_floor);

/// Midpoint warden: jammer floor 1/4.
Throughput throughput_lower_bound_thm1(double n, double rho, double c, double m, double gamma, double sigma2_b0,
                                       double P_r);

/// Random warden: floor phi = sqrt(zeta / (2 pi)).
double thm2_phi(double zeta);
Throughput throughput_thm2(double n, double rho, double c, double m, double gamma, double sigma2_b0, double P_r,
                           double zeta);

/// Collaborating wardens with delta = 0.5 sqrt(2 zeta / (pi N_w)) and c1 = c N_w^{gamma/2}.
Thm3Rate rate_thm3(double rho, double c, double m, double n, double gamma, std::size_t N_w, double sigma2_b0,
                   double P_r, double zeta);

// --- radiometer converse ------------------------------------------------

/// Mean and variance of S = (1/n) sum y_i^2 with noise variance sigma2_w and
/// received codeword power P_k (used only under H1).
Moments radiometer_moments(double sigma2_w, double P_k, double n, Hypothesis hypothesis);

/// Threshold t and conditioning radii eta1 (0.99 x its upper limit), eta2.
/// Requires 0 < lambda_prime < lambda <= 1.
RadiometerDesign radiometer_design(double lambda, double lambda_prime, const ScenarioParams& params);

/// (1 - e^{-m pi eta1^2}) + 2 (sigma_w0^2 + P_r/eta1^gamma)^2 / (n t^2).
double chebyshev_fa_bound(double sigma2_w0, double P_r, double eta1, double gamma, double n, double t, double m);

/// (1 - e^{-m pi eta2^2}) + [4 P_k s + 2 s^2] / (n (P_k - t)^2), s = sigma_w0^2 + P_r/eta2^gamma.
/// Rejects P_k <= t.
double chebyshev_md_bound(double P_k, double sigma2_w0, double P_r, double eta2, double gamma, double n, double t,
                          double m);

/// 1 - (P_U/(2 sigma_b^2) + 1/n) / (log2(xi)/n + R); vacuous (raw 0) when the
/// denominator is not positive.
ProbabilityBound converse_bob_error_floor(double P_U, double sigma2_b, double n, double R, double xi);

}  // namespace covert
