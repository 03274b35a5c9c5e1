// saturn: command-line front end for sweeps and diagnostics.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saturn/config.hpp"
#include "saturn/diagnostics.hpp"
#include "saturn/errors.hpp"
#include "saturn/experiment.hpp"
#include "saturn/quadrature.hpp"
#include "saturn/report.hpp"
#include "saturn/rkhs_analysis.hpp"

namespace fs = std::filesystem;
using namespace saturn;

namespace {

int run_sweep_command(const std::string &config_path, const std::string &out_dir, std::vector<std::string> overrides,
                      bool express, bool quiet) {
    if (const char *env = std::getenv("SATURN_SEED"); env && *env) {
        overrides.insert(overrides.begin(), std::string("base_seed=") + env);
    }
    if (express) overrides.push_back("trials=" + std::to_string(express_trials));
    const ExperimentConfig config = parse_config(config_path, overrides);

    ProgressCallback progress;
    if (!quiet) {
        progress = [](std::size_t done, std::size_t total) {
            std::cerr << "\r" << done << "/" << total << " jobs" << (done == total ? "\n" : "") << std::flush;
        };
    }
    const SweepResult result = run_sweep(config, progress);

    const fs::path out(out_dir);
    emit_sweep_csv(result, out);
    emit_rate_table(result, out);
    emit_loglog_plot_data(result, out / "plots");
    {
        std::ofstream echo(out / "config.yaml");
        echo << to_yaml(config);
        if (!echo) throw Error(ErrorKind::io, "cannot write '" + (out / "config.yaml").string() + "'");
    }
    std::cout << format_rate_table(result);
    std::cout << "elapsed " << format6(result.elapsed_seconds) << " s, output in " << out.string() << "\n";
    return 0;
}

int run_bias_var_command(const std::string &kernel_id, const std::string &fstar, long n,
                         const std::vector<double> &lambdas, double sigma, std::uint64_t seed) {
    const Kernel kernel = Kernel::parse(kernel_id);
    const Target target = make_target(kernel, fstar);
    if (n < 1) throw Error(ErrorKind::configuration, "invalid field 'n': must be positive");
    const Dataset data = generate_dataset(kernel.domain(), target.function, sigma, n, seed);
    const Quadrature quad = kernel.domain() == Domain::unit_interval
                                ? Quadrature::simpson()
                                : Quadrature::monte_carlo_sphere(Quadrature::default_mc_points,
                                                                 derive_seed(seed, {~0ull}));
    const GramSpectrum spectrum = decompose_gram(kernel, data.inputs);
    std::vector<BiasVarReport> rows;
    for (double lambda : lambdas) {
        rows.push_back(empirical_bias_variance(kernel, spectrum, target.function, data.inputs, lambda, sigma, quad));
    }
    write_bias_variance_csv(std::cout, rows);
    return 0;
}

int run_effective_dim_command(const std::string &kernel_id, double p, const std::vector<double> &lambdas) {
    const EigenSystem eigsys = eigen_system(Kernel::parse(kernel_id));
    std::cout << "lambda,p,effective_dimension\n";
    for (double lambda : lambdas) {
        std::cout << format6(lambda) << "," << format6(p) << "," << format6(effective_dimension(eigsys, lambda, p))
                  << "\n";
    }
    return 0;
}

int run_rates_command(const std::string &from, std::string out_dir, std::string kind) {
    TrialsFile file = read_trials_csv(from);
    if (kind.empty()) kind = file.kernel.rfind("truncpow", 0) == 0 ? "theta" : "alpha";
    if (kind != "alpha" && kind != "theta") {
        throw Error(ErrorKind::configuration, "invalid field 'schedule-kind': expected alpha or theta");
    }
    const SweepResult result = summarize(file.kernel, file.fstar,
                                         kind == "alpha" ? ScheduleKind::alpha : ScheduleKind::theta,
                                         std::move(file.trials));
    if (out_dir.empty()) out_dir = fs::path(from).parent_path().string();
    if (out_dir.empty()) out_dir = ".";
    emit_rate_table(result, out_dir);
    emit_loglog_plot_data(result, fs::path(out_dir) / "plots");
    std::cout << format_rate_table(result);
    return 0;
}

int run_check_command(std::uint64_t seed) {
    const auto results = run_invariant_suite(seed);
    int failed = 0;
    for (const auto &r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
        failed += r.passed ? 0 : 1;
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spectral kernel regression experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    bool express = false, quiet = false;
    auto *sweep = app.add_subcommand("sweep", "Run a rate sweep from a YAML config");
    sweep->add_option("--config", config_path, "YAML config file")->required();
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--set", overrides, "Override key=value (dotted keys for nested fields)");
    sweep->add_flag("--express", express, "Use a reduced trial count");
    sweep->add_flag("--quiet", quiet, "No progress output");

    std::string kernel_id = "min", fstar = "e2";
    long n = 1024;
    std::vector<double> lambdas;
    double sigma = 0.2;
    std::uint64_t seed = 0;
    auto *bias_var = app.add_subcommand("bias-var", "Exact bias and variance of KRR on one random design");
    bias_var->add_option("--kernel", kernel_id, "Kernel id")->capture_default_str();
    bias_var->add_option("--fstar", fstar, "Target id")->capture_default_str();
    bias_var->add_option("--n", n, "Sample size")->capture_default_str();
    bias_var->add_option("--lambda", lambdas, "Regularization (repeatable)")->required();
    bias_var->add_option("--sigma", sigma, "Noise level")->capture_default_str();
    bias_var->add_option("--seed", seed, "Design seed")->capture_default_str();

    double p = 2.0;
    std::string ed_kernel = "heavyside";
    std::vector<double> ed_lambdas;
    auto *effdim = app.add_subcommand("effective-dim", "Effective dimension N_p(lambda)");
    effdim->add_option("--kernel", ed_kernel, "Kernel id")->capture_default_str();
    effdim->add_option("--p", p, "Exponent p >= 1")->capture_default_str();
    effdim->add_option("--lambda", ed_lambdas, "Regularization (repeatable)")->required();

    std::string from, rates_out, kind;
    auto *rates = app.add_subcommand("rates", "Refit rates from a trials.csv");
    rates->add_option("--from", from, "trials.csv")->required();
    rates->add_option("--out", rates_out, "Output directory (default: next to trials.csv)");
    rates->add_option("--schedule-kind", kind, "alpha or theta (default from the kernel)");

    std::uint64_t check_seed = 0;
    auto *check = app.add_subcommand("check", "Run the numerical invariant suite");
    check->add_option("--seed", check_seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sweep) return run_sweep_command(config_path, out_dir, overrides, express, quiet);
        if (*bias_var) return run_bias_var_command(kernel_id, fstar, n, lambdas, sigma, seed);
        if (*effdim) return run_effective_dim_command(ed_kernel, p, ed_lambdas);
        if (*rates) return run_rates_command(from, rates_out, kind);
        if (*check) return run_check_command(check_seed);
    } catch (const Error &e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
