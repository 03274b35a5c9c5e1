// Acceptance run: one PASS/FAIL line per criterion on stdout, rate tables
// and timings on stderr. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "saturn/diagnostics.hpp"
#include "saturn/estimators.hpp"
#include "saturn/experiment.hpp"
#include "saturn/report.hpp"
#include "saturn/rkhs_analysis.hpp"

using namespace saturn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TargetFunction as_target(const SourceFunction &f) {
    return [f](std::span<const double> x) { return f(x); };
}

ExperimentConfig interval_sweep(const std::string &kernel, std::vector<FilterId> algs) {
    ExperimentConfig c;
    c.kernel = kernel;
    c.fstar = "e2";
    c.algorithms = std::move(algs);
    c.schedule.kind = ScheduleKind::alpha;
    c.schedule.values = {1.5, 2.0, 2.5, 3.0, 3.5};
    c.schedule.c = 0.01;
    c.n_grid = {256, 512, 1024, 2048, 4096};
    c.trials = 100;
    c.noise_sigma = 0.2;
    c.base_seed = 0;
    return c;
}

SweepResult sweep(const ExperimentConfig &c) {
    const SweepResult r = run_sweep(c);
    std::cerr << format_rate_table(r) << "elapsed " << r.elapsed_seconds << " s\n";
    return r;
}

double rate(const SweepResult &r, FilterId a, double v) {
    const RateRow *row = r.rate(a, v);
    return row ? row->fit.rate : std::nan("");
}

// rates must sit within tol of the reference values, listed in schedule order
bool within(const SweepResult &r, FilterId a, const std::vector<double> &values, const std::vector<double> &ref,
            double tol, std::string &detail) {
    bool ok = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double got = rate(r, a, values[i]);
        const bool cell = std::abs(got - ref[i]) <= tol;
        ok = ok && cell;
        detail += " " + fmt("%.3f", got) + (cell ? "" : "(!)");
    }
    return ok;
}

const std::vector<double> alphas = {1.5, 2.0, 2.5, 3.0, 3.5};

std::optional<SweepResult> min_sweep;

const SweepResult &min_kernel_sweep() {
    if (!min_sweep) min_sweep = sweep(interval_sweep("min", {FilterId::krr, FilterId::gradient_flow}));
    return *min_sweep;
}

Outcome criterion1() {
    const SweepResult &r = min_kernel_sweep();
    Outcome o;
    o.detail = "krr rates";
    const bool close = within(r, FilterId::krr, alphas, {.76, .80, .73, .62, .54}, 0.06, o.detail);
    std::size_t best = 0;
    for (std::size_t i = 1; i < alphas.size(); ++i)
        if (rate(r, FilterId::krr, alphas[i]) > rate(r, FilterId::krr, alphas[best])) best = i;
    o.detail += "; argmax alpha=" + fmt("%g", alphas[best]);
    o.pass = close && alphas[best] == 2.0;
    return o;
}

Outcome criterion2() {
    const SweepResult &r = min_kernel_sweep();
    Outcome o;
    o.detail = "gf rates";
    const bool close = within(r, FilterId::gradient_flow, alphas, {.74, .78, .81, .83, .85}, 0.06, o.detail);
    bool monotone = true;
    for (std::size_t i = 1; i < alphas.size(); ++i)
        monotone = monotone && rate(r, FilterId::gradient_flow, alphas[i]) >= rate(r, FilterId::gradient_flow, alphas[i - 1]) - 0.03;
    o.detail += monotone ? "; nondecreasing" : "; not nondecreasing";
    o.pass = close && monotone;
    return o;
}

Outcome criterion3() {
    const SweepResult r = sweep(interval_sweep("heavyside", {FilterId::krr, FilterId::spectral_cutoff}));
    double best = 0.0;
    for (double a : alphas) best = std::max(best, rate(r, FilterId::krr, a));
    const double at2 = rate(r, FilterId::krr, 2.0);
    const double cut = rate(r, FilterId::spectral_cutoff, 3.5);
    // the reference table reports two decimals, so a maximum within 0.01 counts as attained
    const bool krr_ok = std::abs(at2 - 0.80) <= 0.06 && at2 >= best - 0.01;
    const bool cut_ok = std::abs(cut - 0.88) <= 0.08;
    return {krr_ok && cut_ok, "krr alpha=2 " + fmt("%.3f", at2) + " (max " + fmt("%.3f", best) + "), cut alpha=3.5 " +
                                  fmt("%.3f", cut)};
}

Outcome criterion4() {
    ExperimentConfig c;
    c.kernel = "truncpow3";
    c.fstar = "Y11";
    c.algorithms = {FilterId::krr, FilterId::gradient_flow};
    c.schedule.kind = ScheduleKind::theta;
    c.schedule.values = {0.6, 0.4, 0.3, 0.2};
    c.schedule.c = 0.01;
    c.n_grid = {256, 512, 1024, 2048, 4096};
    c.trials = 50;
    c.noise_sigma = 0.2;
    c.base_seed = 0;
    c.quadrature.mc_points = 200000;
    const SweepResult r = sweep(c);
    const std::vector<double> thetas = {0.6, 0.4, 0.3, 0.2};
    double best_theta = thetas[0];
    for (double t : thetas)
        if (rate(r, FilterId::krr, t) > rate(r, FilterId::krr, best_theta)) best_theta = t;
    const double k4 = rate(r, FilterId::krr, 0.4), k2 = rate(r, FilterId::krr, 0.2);
    const double g2 = rate(r, FilterId::gradient_flow, 0.2);
    const bool ok = best_theta == 0.4 && std::abs(k4 - 0.77) <= 0.10 && std::abs(k2 - 0.45) <= 0.10 &&
                    std::abs(g2 - 0.96) <= 0.10 && r.elapsed_seconds <= 1800.0;
    return {ok, "krr argmax theta=" + fmt("%g", best_theta) + ", krr theta=0.4 " + fmt("%.3f", k4) + ", krr theta=0.2 " +
                    fmt("%.3f", k2) + ", gf theta=0.2 " + fmt("%.3f", g2) + ", " + fmt("%.0f", r.elapsed_seconds) +
                    " s for 50 trials"};
}

Outcome criterion5() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> size(2, 32), which(0, 1), index(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Quadrature q = Quadrature::simpson(2049);
    int ok = 0;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Kernel k = which(rng) ? Kernel::min_interval() : Kernel::heavyside_interval();
        const SourceFunction f = SourceFunction::eigenfunction(eigen_system(k), index(rng));
        const PointSet x = PointSet::interval(oracle::uniform_points(rng, size(rng)));
        const double lambda = std::pow(10.0, -4 + 3 * u(rng));
        const double sigma = 0.1 + 0.9 * u(rng);
        const BiasVarReport r = empirical_bias_variance(k, as_target(f), x, lambda, sigma, q);
        const auto [mean, se] = monte_carlo_conditional_risk(k, as_target(f), x, lambda, sigma, q, 20000, 1000 + t);
        const double z = std::abs(mean - r.total) / se;
        worst = std::max(worst, z);
        ok += z <= 3.0;
    }
    return {ok == 10, std::to_string(ok) + "/10 within 3 SE, worst " + fmt("%.2f", worst) + " SE"};
}

Outcome criterion6() {
    // λ = n^{-1/(2+β)}, min kernel, f* = e2. The intervals are fixed from the
    // population quantities over the λ range before looking at any design.
    const Kernel k = Kernel::min_interval();
    const EigenSystem es = eigen_system(k);
    const double beta = es.beta();
    const SourceFunction e2 = SourceFunction::eigenfunction(es, 2);
    const std::vector<long> ns = {256, 512, 1024, 2048, 4096};
    const auto lambda_of = [&](long n) { return std::pow(static_cast<double>(n), -1.0 / (2.0 + beta)); };
    double bias_lo = 1e300, bias_hi = 0.0, var_lo = 1e300, var_hi = 0.0;
    for (long n : ns) {
        const double l = lambda_of(n);
        const double pb = population_bias_sq(e2, l) / (l * l);
        const double pv = effective_dimension(es, l, 2.0) * std::pow(l, beta);
        bias_lo = std::min(bias_lo, pb);
        bias_hi = std::max(bias_hi, pb);
        var_lo = std::min(var_lo, pv);
        var_hi = std::max(var_hi, pv);
    }
    bias_lo /= 4;
    bias_hi *= 4;
    var_lo /= 4;
    var_hi *= 4;

    const Quadrature q = Quadrature::simpson(4097);
    const double sigma = 0.2;
    int bias_ok = 0, var_ok = 0;
    for (int t = 0; t < 100; ++t) {
        bool b = true, v = true;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const long n = ns[i];
            const double l = lambda_of(n);
            const Dataset d = generate_dataset(Domain::unit_interval, as_target(e2), 0.0, n,
                                               derive_seed(6, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)}));
            const BiasVarReport r = empirical_bias_variance(k, as_target(e2), d.inputs, l, sigma, q);
            const double br = r.bias_sq / (l * l);
            const double vr = r.variance * static_cast<double>(n) * std::pow(l, beta) / (sigma * sigma);
            b = b && br >= bias_lo && br <= bias_hi;
            v = v && vr >= var_lo && vr <= var_hi;
        }
        bias_ok += b;
        var_ok += v;
    }
    return {bias_ok >= 95 && var_ok >= 95,
            "bias_sq/lambda^2 in [" + fmt("%.4g", bias_lo) + ", " + fmt("%.4g", bias_hi) + "] for " +
                std::to_string(bias_ok) + "/100, variance*n*lambda^beta/sigma^2 in [" + fmt("%.4g", var_lo) + ", " +
                fmt("%.4g", var_hi) + "] for " + std::to_string(var_ok) + "/100"};
}

Outcome criterion7() {
    const EigenSystem es = eigen_system(Kernel::heavyside_interval());
    double lo = 1e300, hi = 0.0;
    for (int j = 0; j <= 400; ++j) {
        const double lambda = std::pow(10.0, -6 + 0.01 * j);
        const double v = effective_dimension(es, lambda, 2.0) * std::sqrt(lambda);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double lambda = 1.0 / (std::numbers::pi * std::numbers::pi);
    const double n2 = effective_dimension(es, lambda, 2.0);
    // Σ (λ_i/(λ_i+λ))² with λ_i = 1/(π² i²), summed term by term
    const double series = oracle::effective_dimension_bruteforce(0.0, lambda, 2.0, 2000000);
    const bool ok = hi / lo < 2.0 && std::abs(n2 - series) <= 1e-4;
    return {ok, "max/min of N2*sqrt(lambda) " + fmt("%.4f", hi / lo) + ", N2(1/pi^2) " + fmt("%.6f", n2) +
                    " vs series " + fmt("%.6f", series) + " (stated 0.30672, gap " + fmt("%.2e", std::abs(n2 - 0.30672)) +
                    ")"};
}

Outcome criterion8() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> size(5, 400), which(0, 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Kernel k = which(rng) ? Kernel::min_interval() : Kernel::heavyside_interval();
        const int n = size(rng);
        const auto xs = oracle::uniform_points(rng, n);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y(i) = g(rng);
        const double lambda = std::pow(10.0, -5 + 4 * u(rng));
        const FittedRegressor reg = fit(k, FilterId::krr, Dataset(PointSet::interval(xs), y), lambda);
        const Eigen::VectorXd direct =
            oracle::krr_direct(oracle::gram([&](double a, double b) { return k.evaluate(a, b); }, xs, xs), y, lambda);
        worst = std::max(worst, (reg.dual_coefficients() - direct).norm() / direct.norm());
    }
    return {worst <= 1e-9, "worst relative difference " + fmt("%.2e", worst) + " over 20 instances"};
}

Outcome criterion9() {
    const Kernel k = Kernel::heavyside_interval();
    const EigenSystem es = eigen_system(k);
    const long n = 4096;
    const double lambda = 1.0 / std::sqrt(static_cast<double>(n));
    const ConcentrationBound cb = concentration_bound(es, k.kappa_sq(), n, lambda, 0.05);
    const TargetFunction zero = [](std::span<const double>) { return 0.0; };
    int covered = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Dataset d = generate_dataset(Domain::unit_interval, zero, 0.0, n, derive_seed(9, {static_cast<std::uint64_t>(t)}));
        const double v = operator_concentration_norm(es, d.inputs, lambda);
        worst = std::max(worst, v);
        covered += v <= cb.bound;
    }
    return {covered >= 90, std::to_string(covered) + "/100 covered, bound " + fmt("%.4f", cb.bound) + ", largest norm " +
                               fmt("%.4f", worst)};
}

}  // namespace

int main(int argc, char **argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    Outcome (*const criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                     criterion6, criterion7, criterion8, criterion9};
    int failed = 0;
    for (int i = 1; i <= 9; ++i) {
        if (!selected.empty() && !selected.count(i)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i - 1]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
        std::cerr << "criterion " << i << " took " << fmt("%.1f", seconds_since(t0)) << " s\n";
    }
    return failed == 0 ? 0 : 1;
}
