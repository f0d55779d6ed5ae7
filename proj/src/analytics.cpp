#include "covert/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "covert/errors.hpp"

namespace covert {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSeriesCutoff = 0.1;

using detail::require;

// ln(1+x) - x/(1+x), cancellation-free near 0 via sum_{k>=2} (-1)^k (k-1)/k x^k.
double log_minus_ratio(double x) {
    if (std::abs(x) < kSeriesCutoff) {
        double sum = 0.0;
        double power = x * x;
        for (int k = 2; k < 40; ++k) {
            const double term = ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1.0) / k * power;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= x;
        }
        return sum;
    }
    return std::log1p(x) - x / (1.0 + x);
}

// x - ln(1+x) via sum_{k>=2} (-1)^k x^k / k near 0.
double linear_minus_log(double x) {
    if (std::abs(x) < kSeriesCutoff) {
        double sum = 0.0;
        double power = x * x;
        for (int k = 2; k < 40; ++k) {
            const double term = ((k % 2 == 0) ? 1.0 : -1.0) * power / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= x;
        }
        return sum;
    }
    return x - std::log1p(x);
}

void require_positive(double value, const char* name) {
    require(std::isfinite(value) && value > 0.0, std::string(name) + " must be positive and finite");
}

void require_matching(std::span<const double> a, std::span<const double> b) {
    require(!a.empty(), "at least one warden is required");
    require(a.size() == b.size(), "distance and variance sequences differ in length");
}

double min_warden_background(const ScenarioParams& p) {
    if (p.sigma2_w0_per_warden.empty()) return p.sigma2_w0;
    return *std::min_element(p.sigma2_w0_per_warden.begin(), p.sigma2_w0_per_warden.end());
}

}  // namespace

void ScenarioParams::validate() const {
    require(std::isfinite(gamma) && gamma >= 2.0, "gamma must be >= 2");
    require_positive(P_r, "P_r");
    require_positive(sigma2_w0, "sigma2_w0");
    require_positive(sigma2_b0, "sigma2_b0");
    require_positive(m, "m");
    require(n >= 1, "n must be >= 1");
    require(N_w >= 1, "N_w must be >= 1");
    if (!sigma2_w0_per_warden.empty()) {
        require(sigma2_w0_per_warden.size() == N_w, "per-warden noise list must have N_w entries");
        for (double s : sigma2_w0_per_warden) require_positive(s, "per-warden sigma2_w0");
    }
}

double ScenarioParams::warden_background(std::size_t k) const {
    if (sigma2_w0_per_warden.empty()) return sigma2_w0;
    return sigma2_w0_per_warden.at(k);
}

double ProbabilityBound::clamped() const noexcept {
    if (std::isnan(raw)) return raw;
    return std::clamp(raw, 0.0, 1.0);
}

// --- divergences --------------------------------------------------------

double received_snr(double P_f, double d, double sigma2, double gamma) {
    require(std::isfinite(P_f) && P_f >= 0.0, "P_f must be non-negative");
    require_positive(d, "distance");
    require_positive(sigma2, "noise variance");
    require_positive(gamma, "gamma");
    return P_f / (std::pow(d, gamma) * sigma2);
}

double scalar_gaussian_kl(double P_f, double d_wa, double sigma2_w, double gamma) {
    return 0.5 * log_minus_ratio(received_snr(P_f, d_wa, sigma2_w, gamma));
}

double scalar_gaussian_kl_reverse(double P_f, double d_wa, double sigma2_w, double gamma) {
    return 0.5 * linear_minus_log(received_snr(P_f, d_wa, sigma2_w, gamma));
}

double kl_quadratic_bound(double P_f, double d_wa, double sigma2_w, double gamma) {
    const double x = received_snr(P_f, d_wa, sigma2_w, gamma);
    if (!(x < 2.0)) {
        throw RegimeViolation("quadratic KL bound needs P_f < 2 sigma_w^2 d^gamma (snr " + std::to_string(x) + ")");
    }
    return 0.25 * x * x;
}

ProbabilityBound pinsker_detection_floor(double n, double kl_per_symbol) {
    require(n > 0.0, "n must be positive");
    require(kl_per_symbol >= 0.0, "divergence must be non-negative");
    return {1.0 - std::sqrt(0.5 * n * kl_per_symbol)};
}

double collective_snr(double P_f, std::span<const double> distances, std::span<const double> variances,
                      double gamma) {
    require_matching(distances, variances);
    double total = 0.0;
    for (std::size_t k = 0; k < distances.size(); ++k) total += received_snr(P_f, distances[k], variances[k], gamma);
    return total;
}

double multi_willie_kl(double P_f, std::span<const double> distances, std::span<const double> variances, double n,
                       double gamma) {
    require(n > 0.0, "n must be positive");
    return 0.5 * n * linear_minus_log(collective_snr(P_f, distances, variances, gamma));
}

double rank1_logdet_ratio(std::span<const double> variances, double P_f, std::span<const double> u) {
    require_matching(variances, u);
    require(P_f >= 0.0, "P_f must be non-negative");
    double quad = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        require_positive(variances[k], "variance");
        quad += u[k] * u[k] / variances[k];
    }
    return std::log1p(P_f * quad);
}

double multi_willie_kl_bound(double P_f, std::span<const double> distances, std::span<const double> variances,
                             double n, double gamma) {
    require(n > 0.0, "n must be positive");
    const double T = collective_snr(P_f, distances, variances, gamma);
    if (!(T < 1.0)) throw RegimeViolation("collective KL bound needs sum of SNRs < 1 (got " + std::to_string(T) + ")");
    return 0.25 * n * T * T;
}

// --- covert budgets -----------------------------------------------------

double expected_inv_noise_bound(double gamma, double P_r, MomentConstant constant) {
    require(std::isfinite(gamma) && gamma >= 2.0, "gamma must be >= 2");
    require_positive(P_r, "P_r");
    const double g = std::tgamma(0.5 * gamma + 1.0);
    switch (constant) {
        case MomentConstant::exact:
            return g / (P_r * std::pow(kPi, 0.5 * gamma));
        case MomentConstant::published:
            return g / (2.0 * P_r * std::pow(kPi, 0.5 * gamma + 1.0));
    }
    return 0.0;
}

CovertBudget covert_budget_thm1(double epsilon, const ScenarioParams& params, MomentConstant constant) {
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    params.validate();
    const double B = expected_inv_noise_bound(params.gamma, params.P_r, constant);
    CovertBudget budget;
    budget.epsilon = epsilon;
    budget.c = epsilon * kSqrt2 / std::pow(2.0, params.gamma - 1.0) / B;
    budget.P_f = budget.c * std::pow(params.m, 0.5 * params.gamma) / std::sqrt(static_cast<double>(params.n));
    // Warden at d_{w,a} = 1/2.
    budget.regime_ok = budget.P_f < 2.0 * min_warden_background(params) * std::pow(0.5, params.gamma);
    return budget;
}

CovertBudget covert_budget_thm2(double epsilon, const ScenarioParams& params, MomentConstant constant) {
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    require(epsilon < kPi / 8.0, "epsilon must be below pi/8 so that psi < 1/2");
    params.validate();
    const double B = expected_inv_noise_bound(params.gamma, params.P_r, constant);
    const double psi = std::sqrt(2.0 * epsilon / kPi);
    CovertBudget budget;
    budget.epsilon = epsilon;
    budget.conditioning_radius = psi;
    budget.c = epsilon * 2.0 * kSqrt2 * std::pow(psi, params.gamma) / B;
    budget.P_f = budget.c * std::pow(params.m, 0.5 * params.gamma) / std::sqrt(static_cast<double>(params.n));
    budget.regime_ok = budget.P_f < 2.0 * min_warden_background(params) * std::pow(psi, params.gamma);
    return budget;
}

CovertBudget covert_budget_thm3(double epsilon, const ScenarioParams& params, MomentConstant constant) {
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    params.validate();
    const double N_w = static_cast<double>(params.N_w);
    // 1 - (1 - eps/2)^{1/N_w}, evaluated without cancellation.
    const double tail = -std::expm1(std::log1p(-0.5 * epsilon) / N_w);
    const double kappa = std::sqrt(2.0 / kPi * tail);
    require(kappa < 0.5, "kappa must be below 1/2 (got " + std::to_string(kappa) + ")");
    const double B = expected_inv_noise_bound(params.gamma, params.P_r, constant);
    CovertBudget budget;
    budget.epsilon = epsilon;
    budget.conditioning_radius = kappa;
    budget.c = 0.5 * epsilon * 2.0 * kSqrt2 * std::pow(kappa, params.gamma) / B;
    budget.P_f = budget.c * std::pow(params.m, 0.5 * params.gamma) / (std::sqrt(static_cast<double>(params.n)) * N_w);
    // With every d_{w_k,a} > kappa the collective SNR stays below N_w P_f / (kappa^gamma sigma_w0^2).
    budget.regime_ok = N_w * budget.P_f / (std::pow(kappa, params.gamma) * min_warden_background(params)) < 1.0;
    return budget;
}

double thm3_power_order(double m, double n, double N_w, double gamma) {
    require_positive(m, "m");
    require_positive(n, "n");
    require_positive(N_w, "N_w");
    return std::pow(m, 0.5 * gamma) / (std::sqrt(n) * std::pow(N_w, 1.0 + 0.5 * gamma));
}

// --- Bob's decoding -----------------------------------------------------

ProbabilityBound bob_error_upper_bound(double n, double R, double P_f, double sigma2_b) {
    require(n > 0.0, "n must be positive");
    require(R >= 0.0, "rate must be non-negative");
    require(P_f >= 0.0, "P_f must be non-negative");
    require_positive(sigma2_b, "sigma2_b");
    const double exponent = n * R - 0.5 * n * std::log2(1.0 + P_f / (2.0 * sigma2_b));
    return {std::exp2(exponent)};
}

double bob_error_conditional_bound(double n, double rho, double c, double m, double gamma, double sigma2_b0,
                                   double P_r, double jammer_floor) {
    require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
    require_positive(jammer_floor, "jammer floor distance");
    const double noise = sigma2_b0 + P_r / std::pow(jammer_floor, gamma);
    return 1.0 / (1.0 + c * std::pow(m, 0.5 * gamma) * std::sqrt(n) * (1.0 - rho) / (4.0 * noise));
}

Throughput throughput_with_floor(double n, double rho, double c, double m, double gamma, double sigma2_b0, double P_r,
                                 double jammer_floor) {
    require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
    require_positive(n, "n");
    require_positive(c, "c");
    require_positive(jammer_floor, "jammer floor distance");
    const double noise = sigma2_b0 + P_r / std::pow(jammer_floor, gamma);
    const double mg = std::pow(m, 0.5 * gamma);
    Throughput out;
    out.log_argument = c * mg / (2.0 * std::sqrt(n) * noise);
    out.rate = 0.5 * rho * std::log2(1.0 + out.log_argument);
    out.bits = n * out.rate;
    out.lower_bound = std::sqrt(n) * rho * c * mg / (4.0 * noise);
    out.regime_ok = out.log_argument < 1.0;
    return out;
}

Throughput throughput_lower_bound_thm1(double n, double rho, double c, double m, double gamma, double sigma2_b0,
                                       double P_r) {
    return throughput_with_floor(n, rho, c, m, gamma, sigma2_b0, P_r, 0.25);
}

double thm2_phi(double zeta) {
    require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0,1)");
    return std::sqrt(zeta / (2.0 * kPi));
}

Throughput throughput_thm2(double n, double rho, double c, double m, double gamma, double sigma2_b0, double P_r,
                           double zeta) {
    return throughput_with_floor(n, rho, c, m, gamma, sigma2_b0, P_r, thm2_phi(zeta));
}

Thm3Rate rate_thm3(double rho, double c, double m, double n, double gamma, std::size_t N_w, double sigma2_b0,
                   double P_r, double zeta) {
    require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
    require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0,1)");
    require(N_w >= 1, "N_w must be >= 1");
    require_positive(n, "n");
    const double nw = static_cast<double>(N_w);
    Thm3Rate out;
    out.delta = 0.5 * std::sqrt(2.0 * zeta / (kPi * nw));
    out.c1 = c * std::pow(nw, 0.5 * gamma);
    const double mg = std::pow(m, 0.5 * gamma);
    const double spread = std::pow(nw, 1.0 + 0.5 * gamma);
    const double noise = sigma2_b0 + nw * P_r / std::pow(out.delta, gamma);

    Throughput& t = out.throughput;
    t.log_argument = out.c1 * mg / (2.0 * spread * std::sqrt(n) * noise);
    t.rate = 0.5 * rho * std::log2(1.0 + t.log_argument);
    t.bits = n * t.rate;
    t.lower_bound = std::sqrt(n) * rho * out.c1 * mg * std::pow(zeta / (2.0 * kPi), 0.5 * gamma) /
                    (4.0 * std::pow(nw, 2.0 + gamma) * P_r);
    t.regime_ok = t.log_argument < 1.0;
    out.intermediate_lower_bound = std::sqrt(n) * rho * out.c1 * mg / (4.0 * spread * noise);
    return out;
}

// --- radiometer converse ------------------------------------------------

Moments radiometer_moments(double sigma2_w, double P_k, double n, Hypothesis hypothesis) {
    require_positive(sigma2_w, "sigma2_w");
    require(P_k >= 0.0, "P_k must be non-negative");
    require_positive(n, "n");
    if (hypothesis == Hypothesis::H0) return {sigma2_w, 2.0 * sigma2_w * sigma2_w / n};
    return {sigma2_w + P_k, (4.0 * P_k * sigma2_w + 2.0 * sigma2_w * sigma2_w) / n};
}

RadiometerDesign radiometer_design(double lambda, double lambda_prime, const ScenarioParams& params) {
    require(lambda_prime > 0.0 && lambda_prime < lambda && lambda <= 1.0, "need 0 < lambda' < lambda <= 1");
    params.validate();
    const double mpi = params.m * kPi;
    const double n = static_cast<double>(params.n);
    RadiometerDesign d;
    d.lambda = lambda;
    d.lambda_prime = lambda_prime;
    d.eta1_limit = std::sqrt(std::log(4.0 / (4.0 - lambda)) / mpi);
    d.eta1 = 0.99 * d.eta1_limit;
    d.threshold_t = 2.0 * kSqrt2 / std::sqrt(n * lambda) *
                    (params.sigma2_w0 + params.P_r / std::pow(d.eta1, params.gamma));
    d.eta2 = std::sqrt(std::log(2.0 / (2.0 - lambda + lambda_prime)) / mpi);
    return d;
}

double chebyshev_fa_bound(double sigma2_w0, double P_r, double eta1, double gamma, double n, double t, double m) {
    require_positive(t, "threshold t");
    require_positive(eta1, "eta1");
    const double s = sigma2_w0 + P_r / std::pow(eta1, gamma);
    return -std::expm1(-m * kPi * eta1 * eta1) + 2.0 * s * s / (n * t * t);
}

double chebyshev_md_bound(double P_k, double sigma2_w0, double P_r, double eta2, double gamma, double n, double t,
                          double m) {
    require(P_k > t, "radiometer cannot separate: P_k must exceed the threshold t");
    require_positive(eta2, "eta2");
    const double s = sigma2_w0 + P_r / std::pow(eta2, gamma);
    const double gap = P_k - t;
    return -std::expm1(-m * kPi * eta2 * eta2) + (4.0 * P_k * s + 2.0 * s * s) / (n * gap * gap);
}

ProbabilityBound converse_bob_error_floor(double P_U, double sigma2_b, double n, double R, double xi) {
    require(R > 0.0, "rate must be positive");
    require(xi > 0.0 && xi <= 1.0, "codeword fraction xi must lie in (0,1]");
    require_positive(sigma2_b, "sigma2_b");
    require_positive(n, "n");
    const double denominator = std::log2(xi) / n + R;
    if (!(denominator > 0.0)) return {0.0};
    return {1.0 - (P_U / (2.0 * sigma2_b) + 1.0 / n) / denominator};
}

}  // namespace covert
