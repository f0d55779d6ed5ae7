#include "covert/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "covert/errors.hpp"
#include "covert/random.hpp"

namespace covert {
namespace {

using detail::require;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

template <class T>
void require_axis(const std::vector<T>& axis, std::string_view key) {
    require(!axis.empty(), std::string(key) + ": grid axis must not be empty");
}

template <class T, class Pred>
void require_each(const std::vector<T>& axis, std::string_view key, Pred ok, std::string_view reason) {
    require_axis(axis, key);
    for (const auto& v : axis) require(ok(v), std::string(key) + ": " + std::string(reason));
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void record_params(PointRecord& rec, const GridPoint& p) {
    rec.set("n", as_int(p.params.n));
    rec.set("m", p.params.m);
    rec.set("N_w", as_int(p.params.N_w));
    rec.set("gamma", p.params.gamma);
    rec.set("P_r", p.params.P_r);
    rec.set("sigma2_w0", p.params.sigma2_w0);
    rec.set("sigma2_b0", p.params.sigma2_b0);
}

}  // namespace

void ExperimentReport::refresh_rules() {
    ExperimentReport& report = *this;
    report.rules.clear();
    for (const auto& rec : report.points) {
        for (const auto& f : rec.fields) {
            if (!f.name.starts_with("rule_")) continue;
            const auto* status = std::get_if<std::string>(&f.value);
            if (!status || *status == kRuleSkipped) continue;
            report.rules.push_back({f.name.substr(5), rec.index, *status == kRulePass});
        }
    }
    for (const auto& fit : report.fits) report.rules.push_back({"fit_" + fit.axis, std::nullopt, fit.pass});
}

namespace {

WardenPlacement placement_for(int theorem, std::size_t N_w) {
    if (theorem == 1 && N_w == 1) return WardenPlacement::midpoint();
    return WardenPlacement::uniform(N_w);
}

CovertBudget budget_for(int theorem, const GridPoint& p, MomentConstant constant) {
    switch (theorem) {
        case 1: return covert_budget_thm1(p.epsilon, p.params, constant);
        case 2: return covert_budget_thm2(p.epsilon, p.params, constant);
        default: return covert_budget_thm3(p.epsilon, p.params, constant);
    }
}

Throughput throughput_for(int theorem, const GridPoint& p, double c) {
    const auto& s = p.params;
    const double n = static_cast<double>(s.n);
    switch (theorem) {
        case 1: return throughput_lower_bound_thm1(n, p.rho, c, s.m, s.gamma, s.sigma2_b0, s.P_r);
        case 2: return throughput_thm2(n, p.rho, c, s.m, s.gamma, s.sigma2_b0, s.P_r, p.zeta);
        default: return rate_thm3(p.rho, c, s.m, n, s.gamma, s.N_w, s.sigma2_b0, s.P_r, p.zeta).throughput;
    }
}

DetectorKind default_detector(int theorem) { return theorem == 3 ? DetectorKind::joint_lrt : DetectorKind::lrt; }

DetectionSetup detection_setup(const SweepSpec& spec, const GridPoint& p, DetectorKind detector, double P_f) {
    DetectionSetup setup;
    setup.params = p.params;
    setup.placement = placement_for(spec.theorem, p.params.N_w);
    setup.detector = detector;
    setup.P_f = P_f;
    setup.trials = spec.trials;
    setup.seed = p.seed;
    setup.synthesis = spec.synthesis;
    setup.workers = spec.workers;
    setup.confidence = spec.confidence;
    return setup;
}

DecodeSetup decode_setup(const SweepSpec& spec, const GridPoint& p, double P_f, double rate) {
    DecodeSetup setup;
    setup.params = p.params;
    setup.placement = placement_for(spec.theorem, p.params.N_w);
    setup.n = static_cast<std::size_t>(p.params.n);
    setup.P_f = P_f;
    setup.rate = rate;
    setup.codebook_cap = spec.codebook_cap;
    setup.bob_variance = spec.sigma2_b;
    setup.trials = spec.decode_trials;
    setup.seed = p.seed;
    setup.synthesis = spec.synthesis;
    setup.workers = spec.workers;
    setup.confidence = spec.confidence;
    return setup;
}

void record_detection(PointRecord& rec, const DetectionEstimate* est, double confidence) {
    rec.set("p_fa", est ? est->p_fa_hat : kNaN);
    rec.set("p_md", est ? est->p_md_hat : kNaN);
    rec.set("error_sum", est ? est->error_sum() : kNaN);
    rec.set("fa_ci", est ? est->fa_ci_half_width : kNaN);
    rec.set("md_ci", est ? est->md_ci_half_width : kNaN);
    rec.set("error_sum_ci", est ? est->ci_half_width : kNaN);
    rec.set("sqrt_half_kl", est ? est->sqrt_half_divergence.mean_hat : kNaN);
    rec.set("pinsker_floor", est ? est->pinsker_floor.mean_hat : kNaN);
    rec.set("pinsker_floor_ci", est ? est->pinsker_floor.ci_half_width(confidence) : kNaN);
    rec.set("resamples", static_cast<std::int64_t>(est ? est->resamples : 0));
}

std::optional<bool> pinsker_rule(const DetectionEstimate* est, double confidence) {
    if (!est) return std::nullopt;
    return est->error_sum() + est->ci_half_width >=
           est->pinsker_floor.mean_hat - est->pinsker_floor.ci_half_width(confidence);
}

void record_decoding(PointRecord& rec, const DecodeEstimate* est) {
    rec.set("decode_codewords", static_cast<std::int64_t>(est ? est->num_codewords : 0));
    rec.set("decode_rate", est ? est->achieved_rate : kNaN);
    rec.set("decode_error", est ? est->error.mean_hat : kNaN);
    rec.set("decode_error_lower", est ? est->interval.lower : kNaN);
    rec.set("decode_error_upper", est ? est->interval.upper : kNaN);
    rec.set("decode_bound", est ? est->mean_upper_bound : kNaN);
}

std::optional<bool> decode_bound_rule(const DecodeEstimate* est) {
    if (!est) return std::nullopt;
    return est->interval.lower <= est->mean_upper_bound;
}

// Values of the other swept axes, e.g. "gamma=2;n=1000000".
std::string group_key(const SweepSpec& spec, const GridPoint& p, std::string_view excluded) {
    std::string key;
    auto add = [&](std::string_view name, std::size_t axis_size, double v) {
        if (name == excluded || axis_size < 2) return;
        if (!key.empty()) key += ';';
        key += std::string(name) + '=' + format_number(v);
    };
    add("n", spec.n.size(), static_cast<double>(p.params.n));
    add("m", spec.m.size(), p.params.m);
    add("N_w", spec.N_w.size(), static_cast<double>(p.params.N_w));
    add("gamma", spec.gamma.size(), p.params.gamma);
    add("P_r", spec.P_r.size(), p.params.P_r);
    add("epsilon", spec.epsilon.size(), p.epsilon);
    add("rho", spec.rho.size(), p.rho);
    add("zeta", spec.zeta.size(), p.zeta);
    add("sigma2_w0", spec.sigma2_w0.size(), p.params.sigma2_w0);
    add("sigma2_b0", spec.sigma2_b0.size(), p.params.sigma2_b0);
    return key.empty() ? "all" : key;
}

double axis_value(const GridPoint& p, std::string_view axis) {
    if (axis == "n") return static_cast<double>(p.params.n);
    if (axis == "m") return p.params.m;
    return static_cast<double>(p.params.N_w);
}

struct FitAxis {
    std::string axis;
    // Expected slope as a function of gamma.
    double (*expected)(double gamma);
    double tolerance;
};

void fit_throughput(ExperimentReport& report, const SweepSpec& sweep, const std::vector<GridPoint>& grid,
                    const FitAxis& spec) {
    struct Group {
        std::vector<double> x, y;
        std::vector<char> keep;
        double gamma = 0.0;
    };
    std::map<std::string, Group> groups;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& rec = report.points[i];
        auto& g = groups[group_key(sweep, grid[i], spec.axis)];
        g.gamma = grid[i].params.gamma;
        g.x.push_back(axis_value(grid[i], spec.axis));
        g.y.push_back(rec.number("bits"));
        const auto* valid = rec.find("regime_valid");
        g.keep.push_back(valid && std::get<bool>(*valid) && std::isfinite(g.y.back()) && g.y.back() > 0.0);
    }
    for (const auto& [key, g] : groups) {
        std::vector<double> x;
        std::vector<double> y;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            if (!g.keep[i]) continue;
            x.push_back(g.x[i]);
            y.push_back(g.y[i]);
        }
        if (x.size() < 3) continue;
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        if (*hi < 10.0 * *lo * (1.0 - 1e-12)) continue;
        FitRecord fit;
        fit.axis = spec.axis;
        fit.response = "bits";
        fit.group = key;
        fit.fit = fit_scaling(x, y);
        fit.expected_slope = spec.expected(g.gamma);
        fit.tolerance = spec.tolerance;
        fit.pass = std::abs(fit.fit.slope - fit.expected_slope) <= fit.tolerance;
        report.fits.push_back(std::move(fit));
    }
}

ExperimentReport run_achievability(const SweepSpec& spec, int theorem) {
    SweepSpec s = spec;
    s.theorem = theorem;
    s.validate();
    const auto grid = enumerate_grid(s);

    ExperimentReport report;
    report.experiment = "theorem" + std::to_string(theorem);
    report.seed = s.seed;
    for (const auto& p : grid) {
        PointRecord rec;
        rec.index = p.index;
        rec.seed = p.seed;
        record_params(rec, p);
        rec.set("epsilon", p.epsilon);
        rec.set("rho", p.rho);
        rec.set("zeta", p.zeta);

        std::optional<CovertBudget> budget;
        try {
            budget = budget_for(theorem, p, s.moment_constant);
        } catch (const RegimeViolation&) {
            // Conditioning radius out of range; flagged below.
        }
        const auto& sp = p.params;
        const double n = static_cast<double>(sp.n);
        std::optional<Throughput> thr;
        if (budget) thr = throughput_for(theorem, p, budget->c);

        rec.set("c", budget ? budget->c : kNaN);
        rec.set("P_f", budget ? budget->P_f : kNaN);
        rec.set("conditioning_radius", budget && budget->conditioning_radius ? *budget->conditioning_radius : kNaN);
        rec.set("rate", thr ? thr->rate : kNaN);
        rec.set("bits", thr ? thr->bits : kNaN);
        rec.set("bits_lower_bound", thr ? thr->lower_bound : kNaN);
        rec.set("log_argument", thr ? thr->log_argument : kNaN);
        if (theorem == 3)
            rec.set("power_order", thm3_power_order(sp.m, n, static_cast<double>(sp.N_w), sp.gamma));

        const bool flag_budget = budget.has_value();
        const bool flag_taylor = budget && budget->regime_ok;
        const bool flag_small_log = thr && thr->log_argument <= kSmallLogArgument;
        const bool flag_density = std::pow(sp.m, sp.gamma) < n;
        const bool flag_wardens =
            theorem != 3 || static_cast<double>(sp.N_w) <= std::pow(sp.m, sp.gamma / (sp.gamma + 2.0));
        const bool valid = flag_budget && flag_taylor && flag_small_log && flag_density && flag_wardens;
        rec.set("flag_budget", flag_budget);
        rec.set("flag_taylor", flag_taylor);
        rec.set("flag_small_log", flag_small_log);
        rec.set("flag_density", flag_density);
        rec.set("flag_wardens", flag_wardens);
        rec.set("regime_valid", valid);

        std::optional<DetectionEstimate> det;
        std::optional<DecodeEstimate> dec;
        if (s.simulate && budget) {
            det = estimate_detection_errors(detection_setup(s, p, default_detector(theorem), budget->P_f));
            dec = estimate_decode_error(decode_setup(s, p, budget->P_f, thr->rate));
        }
        record_detection(rec, det ? &*det : nullptr, s.confidence);
        record_decoding(rec, dec ? &*dec : nullptr);

        std::optional<bool> covert_rule;
        std::optional<bool> floor_rule;
        std::optional<bool> bound_rule;
        std::optional<bool> zeta_rule;
        if (valid && det) {
            covert_rule = det->error_sum() >= 1.0 - p.epsilon - det->ci_half_width;
            floor_rule = pinsker_rule(&*det, s.confidence);
        }
        if (valid && dec) {
            bound_rule = decode_bound_rule(&*dec);
            if (theorem != 1) zeta_rule = dec->interval.lower < p.zeta;
        }
        rec.set_rule("detection_covert", covert_rule);
        rec.set_rule("pinsker_floor", floor_rule);
        rec.set_rule("decode_bound", bound_rule);
        if (theorem != 1) rec.set_rule("decode_zeta", zeta_rule);
        report.points.push_back(std::move(rec));
    }

    if (theorem == 1) fit_throughput(report, s, grid, {"n", [](double) { return 0.5; }, 1e-3});
    if (theorem != 3) fit_throughput(report, s, grid, {"m", [](double g) { return g / 2.0; }, 0.05});
    if (theorem == 3) fit_throughput(report, s, grid, {"N_w", [](double g) { return -(2.0 + g); }, 0.2});
    report.refresh_rules();
    return report;
}

}  // namespace

SweepSpec SweepSpec::defaults(int theorem, bool converse) {
    SweepSpec s;
    s.theorem = theorem;
    s.converse = converse;
    if (theorem == 3) s.N_w = {1, 2, 4};
    if (converse) s.K = {1, 100, 1e4, 1e6};
    return s;
}

void SweepSpec::validate() const {
    require(theorem >= 1 && theorem <= 3, "theorem: must be 1, 2 or 3");
    require(!converse || theorem == 1, "converse: only Theorem 1 has a converse sweep");
    require_each(n, "n", [](std::uint64_t v) { return v >= 1; }, "must be >= 1");
    require_each(m, "m", [](double v) { return std::isfinite(v) && v > 0.0; }, "must be positive");
    require_each(N_w, "N_w", [](std::size_t v) { return v >= 1; }, "must be >= 1");
    if (theorem != 3)
        require_each(N_w, "N_w", [](std::size_t v) { return v == 1; }, "Theorems 1 and 2 have a single warden");
    require_each(gamma, "gamma", [](double v) { return std::isfinite(v) && v >= 2.0; }, "must be >= 2");
    require_each(P_r, "P_r", [](double v) { return std::isfinite(v) && v > 0.0; }, "must be positive");
    const double eps_max = theorem == 2 ? std::numbers::pi / 8.0 : 1.0;
    require_each(epsilon, "epsilon", [=](double v) { return v > 0.0 && v < eps_max; },
                 theorem == 2 ? "must lie in (0, pi/8)" : "must lie in (0, 1)");
    require_each(rho, "rho", [](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)");
    require_each(zeta, "zeta", [](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)");
    require_each(lambda, "lambda", [](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0, 1]");
    require_each(lambda_prime, "lambda_prime", [](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)");
    for (double l : lambda)
        for (double lp : lambda_prime) require(lp < l, "lambda_prime: must be below every lambda");
    require_each(K, "K", [](double v) { return std::isfinite(v) && v > 0.0; }, "must be positive");
    require_each(xi, "xi", [](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0, 1]");
    require_each(sigma2_w0, "sigma2_w0", [](double v) { return std::isfinite(v) && v > 0.0; }, "must be positive");
    require_each(sigma2_b0, "sigma2_b0", [](double v) { return std::isfinite(v) && v > 0.0; }, "must be positive");
    auto single = [](const auto& axis, std::string_view key, std::string_view why) {
        require(axis.size() == 1, std::string(key) + ": " + std::string(why) + "; give a single value");
    };
    if (converse) {
        single(rho, "rho", "not used by converse sweeps");
        single(zeta, "zeta", "not used by converse sweeps");
    } else {
        single(lambda, "lambda", "only used by converse sweeps");
        single(lambda_prime, "lambda_prime", "only used by converse sweeps");
        single(K, "K", "only used by converse sweeps");
        single(xi, "xi", "only used by converse sweeps");
        if (theorem == 1) single(zeta, "zeta", "not used by Theorem 1 sweeps");
    }
    require(trials >= 1000, "trials: must be >= 1000");
    require(decode_trials >= 1000, "decode_trials: must be >= 1000");
    require(codebook_cap >= 2, "codebook_cap: must be >= 2");
    require(workers >= 1, "workers: must be >= 1");
    require(confidence > 0.0 && confidence < 1.0, "confidence: must lie in (0, 1)");
    require(!P_f || (std::isfinite(*P_f) && *P_f >= 0.0), "P_f: must be non-negative");
    require(!radiometer_t || *radiometer_t > 0.0, "t: must be positive");
    require(!rate || *rate >= 0.0, "rate: must be non-negative");
    require(!sigma2_b || *sigma2_b > 0.0, "sigma2_b: must be positive");
}

std::size_t SweepSpec::grid_size() const {
    return n.size() * m.size() * N_w.size() * gamma.size() * P_r.size() * epsilon.size() * rho.size() *
           zeta.size() * lambda.size() * lambda_prime.size() * K.size() * xi.size() * sigma2_w0.size() *
           sigma2_b0.size();
}

std::vector<GridPoint> enumerate_grid(const SweepSpec& spec) {
    const std::vector<std::size_t> radix{spec.n.size(),      spec.m.size(),      spec.N_w.size(),
                                         spec.gamma.size(),  spec.P_r.size(),    spec.epsilon.size(),
                                         spec.rho.size(),    spec.zeta.size(),   spec.lambda.size(),
                                         spec.lambda_prime.size(), spec.K.size(), spec.xi.size(),
                                         spec.sigma2_w0.size(), spec.sigma2_b0.size()};
    const std::size_t total = spec.grid_size();
    std::vector<GridPoint> grid;
    grid.reserve(total);
    std::vector<std::size_t> digit(radix.size(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        GridPoint p;
        p.index = idx;
        p.seed = derive_seed(spec.seed, StreamTag::grid_point, idx);
        p.params.n = spec.n[digit[0]];
        p.params.m = spec.m[digit[1]];
        p.params.N_w = spec.N_w[digit[2]];
        p.params.gamma = spec.gamma[digit[3]];
        p.params.P_r = spec.P_r[digit[4]];
        p.epsilon = spec.epsilon[digit[5]];
        p.rho = spec.rho[digit[6]];
        p.zeta = spec.zeta[digit[7]];
        p.lambda = spec.lambda[digit[8]];
        p.lambda_prime = spec.lambda_prime[digit[9]];
        p.K = spec.K[digit[10]];
        p.xi = spec.xi[digit[11]];
        p.params.sigma2_w0 = spec.sigma2_w0[digit[12]];
        p.params.sigma2_b0 = spec.sigma2_b0[digit[13]];
        grid.push_back(std::move(p));
        for (std::size_t k = radix.size(); k-- > 0;) {
            if (++digit[k] < radix[k]) break;
            digit[k] = 0;
        }
    }
    return grid;
}

void PointRecord::set(std::string name, FieldValue value) {
    for (auto& f : fields) {
        if (f.name == name) {
            f.value = std::move(value);
            return;
        }
    }
    fields.push_back({std::move(name), std::move(value)});
}

void PointRecord::set_rule(std::string_view name, std::optional<bool> passed) {
    std::string status(passed ? (*passed ? kRulePass : kRuleFail) : kRuleSkipped);
    set("rule_" + std::string(name), std::move(status));
}

const FieldValue* PointRecord::find(std::string_view name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f.value;
    return nullptr;
}

double PointRecord::number(std::string_view name) const {
    const auto* v = find(name);
    require(v != nullptr, "record has no field '" + std::string(name) + "'");
    if (const auto* d = std::get_if<double>(v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
    throw InvalidArgument("field '" + std::string(name) + "' is not numeric");
}

ScalingFit fit_scaling(std::span<const double> x, std::span<const double> y, std::span<const bool> keep) {
    require(x.size() == y.size(), "fit_scaling: x and y differ in length");
    require(keep.empty() || keep.size() == x.size(), "fit_scaling: filter length differs");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!keep.empty() && !keep[i]) continue;
        require(x[i] > 0.0 && y[i] > 0.0, "fit_scaling: values must be positive for a log-log fit");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    require(lx.size() >= 3, "fit_scaling: needs at least 3 regime-valid points");
    const auto [lo, hi] = std::minmax_element(lx.begin(), lx.end());
    require(*hi - *lo >= std::log(10.0) - 1e-12, "fit_scaling: x must span at least one decade");

    const double k = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    ScalingFit fit;
    fit.points = lx.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

bool ExperimentReport::all_pass() const noexcept { return failures() == 0; }

std::size_t ExperimentReport::failures() const noexcept {
    return static_cast<std::size_t>(std::count_if(rules.begin(), rules.end(), [](const auto& r) { return !r.pass; }));
}

ExperimentReport run_theorem1(const SweepSpec& spec) { return run_achievability(spec, 1); }
ExperimentReport run_theorem2(const SweepSpec& spec) { return run_achievability(spec, 2); }
ExperimentReport run_theorem3(const SweepSpec& spec) { return run_achievability(spec, 3); }

ExperimentReport run_theorem1_converse(const SweepSpec& spec) {
    SweepSpec s = spec;
    s.theorem = 1;
    s.converse = true;
    s.validate();
    const auto grid = enumerate_grid(s);

    ExperimentReport report;
    report.experiment = "theorem1_converse";
    report.seed = s.seed;
    for (const auto& p : grid) {
        const auto& sp = p.params;
        const double n = static_cast<double>(sp.n);
        PointRecord rec;
        rec.index = p.index;
        rec.seed = p.seed;
        record_params(rec, p);
        rec.set("epsilon", p.epsilon);
        rec.set("lambda", p.lambda);
        rec.set("lambda_prime", p.lambda_prime);
        rec.set("K", p.K);
        rec.set("xi", p.xi);

        const auto budget = covert_budget_thm1(p.epsilon, sp, s.moment_constant);
        const double P_k_tx = p.K * budget.P_f;
        const double P_k = P_k_tx / std::pow(distance(kAlice, kMidpoint), sp.gamma);
        const auto design = radiometer_design(p.lambda, p.lambda_prime, sp);
        const bool above = P_k > design.threshold_t;
        const double fa_bound = chebyshev_fa_bound(sp.sigma2_w0, sp.P_r, design.eta1, sp.gamma, n,
                                                   design.threshold_t, sp.m);
        const double md_bound = above ? chebyshev_md_bound(P_k, sp.sigma2_w0, sp.P_r, design.eta2, sp.gamma, n,
                                                           design.threshold_t, sp.m)
                                      : kNaN;
        rec.set("c", budget.c);
        rec.set("P_f", budget.P_f);
        rec.set("P_k_tx", P_k_tx);
        rec.set("P_k", P_k);
        rec.set("t", design.threshold_t);
        rec.set("eta1", design.eta1);
        rec.set("eta2", design.eta2);
        rec.set("fa_bound", fa_bound);
        rec.set("md_bound", md_bound);
        rec.set("flag_above_threshold", above);

        std::optional<DetectionEstimate> det;
        if (s.simulate && above) {
            auto setup = detection_setup(s, p, DetectorKind::radiometer, P_k_tx);
            setup.radiometer_t = design.threshold_t;
            det = estimate_detection_errors(setup);
        }
        record_detection(rec, det ? &*det : nullptr, s.confidence);

        // Bob at an over-covert rate K m^{gamma/2}/sqrt(n) with the covert power.
        const double bob_rate = p.K * std::pow(sp.m, sp.gamma / 2.0) / std::sqrt(n);
        rec.set("bob_rate", bob_rate);
        rec.set("bob_error_floor", converse_bob_error_floor(budget.P_f, sp.sigma2_b0, n, bob_rate, p.xi).clamped());

        std::optional<bool> fa_rule;
        std::optional<bool> md_rule;
        std::optional<bool> sum_rule;
        if (det) {
            fa_rule = det->p_fa_hat - det->fa_ci_half_width <= fa_bound;
            md_rule = det->p_md_hat - det->md_ci_half_width <= md_bound;
            if (fa_bound < p.lambda / 2.0 && md_bound < p.lambda / 2.0)
                sum_rule = det->error_sum() <= p.lambda + det->ci_half_width;
        }
        rec.set_rule("fa_bound", fa_rule);
        rec.set_rule("md_bound", md_rule);
        rec.set_rule("converse_sum", sum_rule);
        report.points.push_back(std::move(rec));
    }
    report.refresh_rules();
    return report;
}

ExperimentReport run_sweep(const SweepSpec& spec) {
    if (spec.converse) return run_theorem1_converse(spec);
    switch (spec.theorem) {
        case 1: return run_theorem1(spec);
        case 2: return run_theorem2(spec);
        case 3: return run_theorem3(spec);
        default: throw InvalidArgument("theorem: must be 1, 2 or 3");
    }
}

ExperimentReport run_detection(const SweepSpec& spec) {
    spec.validate();
    const DetectorKind detector = spec.detector.value_or(default_detector(spec.theorem));
    const auto grid = enumerate_grid(spec);

    ExperimentReport report;
    report.experiment = "detect";
    report.seed = spec.seed;
    for (const auto& p : grid) {
        PointRecord rec;
        rec.index = p.index;
        rec.seed = p.seed;
        record_params(rec, p);
        rec.set("detector", std::string(to_string(detector)));
        const double P_f = spec.P_f ? *spec.P_f : budget_for(spec.theorem, p, spec.moment_constant).P_f;
        double t = kNaN;
        if (detector == DetectorKind::radiometer)
            t = spec.radiometer_t ? *spec.radiometer_t
                                  : radiometer_design(p.lambda, p.lambda_prime, p.params).threshold_t;
        rec.set("P_f", P_f);
        rec.set("t", t);
        auto setup = detection_setup(spec, p, detector, P_f);
        if (detector == DetectorKind::radiometer) setup.radiometer_t = t;
        const auto est = estimate_detection_errors(setup);
        record_detection(rec, &est, spec.confidence);
        rec.set_rule("pinsker_floor", pinsker_rule(&est, spec.confidence));
        report.points.push_back(std::move(rec));
    }
    report.refresh_rules();
    return report;
}

ExperimentReport run_decoding(const SweepSpec& spec) {
    spec.validate();
    const auto grid = enumerate_grid(spec);

    ExperimentReport report;
    report.experiment = "decode";
    report.seed = spec.seed;
    for (const auto& p : grid) {
        PointRecord rec;
        rec.index = p.index;
        rec.seed = p.seed;
        record_params(rec, p);
        double P_f = 0.0;
        double rate = 0.0;
        if (spec.P_f && spec.rate) {
            P_f = *spec.P_f;
            rate = *spec.rate;
        } else {
            const auto budget = budget_for(spec.theorem, p, spec.moment_constant);
            P_f = spec.P_f.value_or(budget.P_f);
            rate = spec.rate.value_or(throughput_for(spec.theorem, p, budget.c).rate);
        }
        rec.set("P_f", P_f);
        rec.set("requested_rate", rate);
        rec.set("sigma2_b", spec.sigma2_b.value_or(kNaN));
        const auto est = estimate_decode_error(decode_setup(spec, p, P_f, rate));
        record_decoding(rec, &est);
        rec.set_rule("decode_bound", decode_bound_rule(&est));
        report.points.push_back(std::move(rec));
    }
    report.refresh_rules();
    return report;
}

}  // namespace covert
