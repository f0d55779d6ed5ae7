// covertsim: sweeps, single experiments and the self-check suite.
//
//   covertsim verify [--full]
//   covertsim sweep --theorem {1|2|3} --params FILE [--converse]
//   covertsim detect --params FILE
//   covertsim decode --params FILE
//
// Common options: --out DIR, --format csv|jsonl, --seed S, --workers W.
// COVERT_WORKERS sets the default worker count. Exit status is 0 when every
// rule passes, 1 when a rule fails and 2 on errors.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "covert/config.hpp"
#include "covert/engine.hpp"
#include "covert/errors.hpp"
#include "covert/parallel.hpp"
#include "criteria.hpp"

namespace {

struct CommonOptions {
    std::string out_dir;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--out", o.out_dir, "Output directory (default: stdout)");
    cmd.add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl", "json-lines"}));
    cmd.add_option("--seed", o.seed, "Master seed (overrides the parameter file)");
    cmd.add_option("--workers", o.workers, "Worker threads (default: $COVERT_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw covert::IoError("cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

covert::SweepSpec load_spec(const std::string& params_path, std::optional<int> theorem, bool converse,
                            const CommonOptions& o) {
    auto parsed = covert::parse_config(read_file(params_path), theorem);
    auto& spec = parsed.spec;
    if (converse) {
        if (!parsed.has("K")) spec.K = covert::SweepSpec::defaults(spec.theorem, true).K;
        spec.converse = true;
    }
    if (o.seed) spec.seed = *o.seed;
    if (o.workers) spec.workers = *o.workers;
    else if (!parsed.has("workers")) spec.workers = covert::default_worker_count();
    spec.validate();
    return spec;
}

int emit(const covert::ExperimentReport& report, const CommonOptions& o) {
    const auto format = covert::parse_output_format(o.format);
    if (o.out_dir.empty()) {
        covert::emit_report(report, format, std::cout);
    } else {
        std::filesystem::create_directories(o.out_dir);
        const auto path =
            std::filesystem::path(o.out_dir) / (report.experiment + std::string(covert::file_extension(format)));
        covert::write_report(report, format, path);
        std::cerr << "wrote " << path.string() << '\n';
    }
    std::cerr << report.experiment << ": " << report.points.size() << " points, " << report.fits.size()
              << " fits, " << report.rules.size() << " rules, " << report.failures() << " failed (seed "
              << report.seed << ")\n";
    return report.all_pass() ? 0 : 1;
}

covert::ExperimentReport verify_report(const std::vector<covert::acceptance::CriterionResult>& results,
                                       std::uint64_t seed) {
    covert::ExperimentReport report;
    report.experiment = "verify";
    report.seed = seed;
    for (const auto& r : results) {
        covert::PointRecord rec;
        rec.index = static_cast<std::size_t>(r.id - 1);
        rec.seed = seed;
        rec.set("criterion", static_cast<std::int64_t>(r.id));
        rec.set("title", r.title);
        std::string detail = r.error;
        for (const auto& c : r.checks) {
            if (!detail.empty()) detail += " | ";
            detail += std::string(c.pass ? "ok " : "FAIL ") + c.label + ": " + c.detail;
        }
        rec.set("detail", detail);
        rec.set("seconds", r.seconds);
        rec.set_rule("criterion", r.pass());
        report.points.push_back(std::move(rec));
    }
    report.refresh_rules();
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covert communication with friendly jamming: sweeps and Monte Carlo experiments"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string params_path;
    int theorem = 1;
    bool converse = false;
    bool full = false;
    std::vector<int> criteria;

    auto* verify = app.add_subcommand("verify", "Run the oracle and acceptance checks");
    verify->add_flag("--full", full, "Use 1e6 layouts for the covertness expectation (slow)");
    verify->add_option("--criterion", criteria, "Only these criteria (1-9)")->check(CLI::Range(1, 9));
    add_common(*verify, common);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep for one theorem");
    sweep->add_option("--theorem", theorem, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
    sweep->add_option("--params", params_path, "Parameter file")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--converse", converse, "Radiometer converse sweep (Theorem 1 only)");
    add_common(*sweep, common);

    auto* detect = app.add_subcommand("detect", "Detection experiment at every grid point");
    detect->add_option("--params", params_path, "Parameter file")->required()->check(CLI::ExistingFile);
    add_common(*detect, common);

    auto* decode = app.add_subcommand("decode", "Decoding experiment at every grid point");
    decode->add_option("--params", params_path, "Parameter file")->required()->check(CLI::ExistingFile);
    add_common(*decode, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            covert::acceptance::Options options;
            options.quick = !full;
            if (common.seed) options.seed = *common.seed;
            options.workers = common.workers.value_or(covert::default_worker_count());
            const auto results = covert::acceptance::run_acceptance(options, criteria, std::cerr);
            return emit(verify_report(results, options.seed), common);
        }
        if (sweep->parsed()) return emit(covert::run_sweep(load_spec(params_path, theorem, converse, common)), common);
        if (detect->parsed()) return emit(covert::run_detection(load_spec(params_path, std::nullopt, false, common)), common);
        if (decode->parsed()) return emit(covert::run_decoding(load_spec(params_path, std::nullopt, false, common)), common);
    } catch (const std::exception& e) {
        std::cerr << "covertsim: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
