#include "saturn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "saturn/errors.hpp"
#include "saturn/quadrature.hpp"
#include "saturn/rkhs_analysis.hpp"

namespace saturn {

std::string_view to_string(ScheduleKind k) noexcept { return k == ScheduleKind::alpha ? "alpha" : "theta"; }

double Schedule::lambda(double value, long n, double beta) const {
    const auto nd = static_cast<double>(n);
    if (kind == ScheduleKind::alpha) return c * std::pow(nd, -1.0 / (value + beta));
    return c * std::pow(nd, -value);
}

Target make_target(const Kernel &kernel, std::string_view id) {
    const std::string sid(id);
    if (kernel.domain() == Domain::unit_interval) {
        if (id.size() >= 2 && id[0] == 'e') {
            int k = 0;
            try {
                std::size_t used = 0;
                k = std::stoi(sid.substr(1), &used);
                if (used != sid.size() - 1) k = 0;
            } catch (const std::exception &) {
                k = 0;
            }
            if (k >= 1) {
                const SourceFunction f = SourceFunction::eigenfunction(eigen_system(kernel), k);
                return {sid, [f](std::span<const double> p) { return f(p); }};
            }
        }
        throw Error(ErrorKind::configuration, "target '" + sid + "' is not an eigenfunction id (e1, e2, ...) for kernel " +
                                                  kernel.name());
    }
    int l = 0, m = 0;
    if (id == "Y11") {
        l = 1, m = 1;
    } else if (id == "Y2-2") {
        l = 2, m = -2;
    } else if (id == "Y32") {
        l = 3, m = 2;
    } else {
        throw Error(ErrorKind::configuration, "target '" + sid + "' is not a supported harmonic (Y11, Y2-2, Y32) for kernel " +
                                                  kernel.name());
    }
    return {sid, [l, m](std::span<const double> p) {
                return normalized_spherical_harmonic(l, m, SpherePoint(p[0], p[1], p[2]));
            }};
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string &field, const std::string &why) {
        throw Error(ErrorKind::configuration, "invalid field '" + field + "': " + why);
    };
    const Kernel k = Kernel::parse(kernel);
    make_target(k, fstar);
    if (algorithms.empty()) fail("algorithms", "at least one algorithm is required");
    if (std::set<FilterId>(algorithms.begin(), algorithms.end()).size() != algorithms.size())
        fail("algorithms", "duplicate algorithm");
    if (schedule.values.empty()) fail("schedule", "no schedule values");
    for (double v : schedule.values) {
        if (schedule.kind == ScheduleKind::alpha && !(v > 0.0)) fail("alphas", "alpha must be > 0");
        if (schedule.kind == ScheduleKind::theta && !(v > 0.0 && v < 1.0)) fail("thetas", "theta must lie in (0,1)");
    }
    if (std::set<double>(schedule.values.begin(), schedule.values.end()).size() != schedule.values.size())
        fail("schedule", "duplicate schedule value");
    if (!(schedule.c > 0.0) || !std::isfinite(schedule.c)) fail("c", "schedule constant must be positive");
    if (schedule.kind == ScheduleKind::alpha && !k.is_interval_markov()) {
        fail("alphas", "kernel " + k.name() +
                           " has no known eigenvalue decay rate beta; use a theta schedule (lambda = c n^-theta)");
    }
    if (n_grid.size() < 4) fail("n_grid", "rate fitting needs at least 4 sample sizes");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) fail("n_grid", "sample sizes must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n_grid", "sample sizes must be strictly increasing");
    }
    if (trials < 1) fail("trials", "must be >= 1");
    if (!(noise_sigma >= 0.0)) fail("noise_sigma", "must be nonnegative");
    if (quadrature.simpson_nodes < 3 || quadrature.simpson_nodes % 2 == 0)
        fail("quadrature.simpson_nodes", "must be odd and >= 3");
    if (quadrature.mc_points < 1) fail("quadrature.mc_points", "must be >= 1");
    if (workers < 1) fail("workers", "must be >= 1");
    if (eigensolver == EigenSolver::tridiagonal && !k.is_interval_markov())
        fail("eigensolver", "tridiagonal solver needs an interval kernel");
}

double RateFit::predict(double n) const { return std::exp(intercept) * std::pow(n, -rate); }

const RateRow *SweepResult::rate(FilterId algorithm, double schedule_value) const {
    for (const auto &r : rates)
        if (r.algorithm == algorithm && r.schedule_value == schedule_value) return &r;
    return nullptr;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (std::uint64_t i : indices) h = mix(h ^ mix(i + 0x632be59bd9b4e019ULL));
    return h;
}

Dataset generate_dataset(Domain domain, const TargetFunction &f_star, double sigma, long n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::empty_data, "dataset size must be >= 1");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::parameter, "noise sigma must be nonnegative");
    std::mt19937_64 rng(seed);
    const int d = dimension(domain);
    Eigen::MatrixXd x(d, n);
    if (domain == Domain::unit_interval) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (long i = 0; i < n; ++i) x(0, i) = u(rng);
    } else {
        std::normal_distribution<double> g;
        for (long i = 0; i < n; ++i) {
            double r = 0.0;
            do {
                for (int k = 0; k < 3; ++k) x(k, i) = g(rng);
                r = x.col(i).norm();
            } while (r == 0.0);
            x.col(i) /= r;
        }
    }
    PointSet inputs(domain, std::move(x));
    std::normal_distribution<double> noise;
    Eigen::VectorXd y(n);
    for (long i = 0; i < n; ++i) y(i) = f_star(inputs.point(i)) + sigma * noise(rng);
    return {std::move(inputs), std::move(y), sigma};
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw Error(ErrorKind::fit, "rate fit needs at least 2 points, got " + std::to_string(points.size()));
    const auto k = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto &[n, err] : points) {
        if (!(n > 0.0)) throw Error(ErrorKind::fit, "sample sizes must be positive");
        if (!(err > 0.0) || !std::isfinite(err))
            throw Error(ErrorKind::fit, "errors must be positive and finite for a log-log fit");
        mx += std::log(n);
        my += std::log(err);
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (const auto &[n, err] : points) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::fit, "rate fit needs at least 2 distinct sample sizes");
    const double slope = sxy / sxx;
    RateFit f;
    f.rate = -slope;
    f.intercept = my - slope * mx;
    if (points.size() > 2) {
        double ssr = 0.0;
        for (const auto &[n, err] : points) {
            const double r = std::log(err) - (f.intercept + slope * std::log(n));
            ssr += r * r;
        }
        f.stderr_slope = std::sqrt(ssr / (k - 2.0) / sxx);
    }
    return f;
}

SweepResult summarize(std::string kernel, std::string fstar, ScheduleKind kind, std::vector<TrialResult> trials) {
    auto key = [](const TrialResult &t) {
        return std::make_tuple(std::string(to_string(t.algorithm)), t.schedule_value, t.n, t.trial);
    };
    std::sort(trials.begin(), trials.end(), [&](const TrialResult &a, const TrialResult &b) { return key(a) < key(b); });

    SweepResult out;
    out.kernel = std::move(kernel);
    out.fstar = std::move(fstar);
    out.schedule_kind = kind;

    for (std::size_t i = 0; i < trials.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < trials.size() && trials[j].algorithm == trials[i].algorithm &&
               trials[j].schedule_value == trials[i].schedule_value && trials[j].n == trials[i].n) {
            sum += trials[j].l2_error;
            ++j;
        }
        CellSummary c;
        c.algorithm = trials[i].algorithm;
        c.schedule_value = trials[i].schedule_value;
        c.n = trials[i].n;
        c.count = static_cast<int>(j - i);
        c.mean_error = sum / c.count;
        if (c.count > 1) {
            double ss = 0.0;
            for (std::size_t k = i; k < j; ++k) ss += (trials[k].l2_error - c.mean_error) * (trials[k].l2_error - c.mean_error);
            c.std_error = std::sqrt(ss / (c.count - 1));
        }
        out.cells.push_back(c);
        i = j;
    }

    for (std::size_t i = 0; i < out.cells.size();) {
        std::size_t j = i;
        std::vector<std::pair<double, double>> pts;
        while (j < out.cells.size() && out.cells[j].algorithm == out.cells[i].algorithm &&
               out.cells[j].schedule_value == out.cells[i].schedule_value) {
            pts.emplace_back(static_cast<double>(out.cells[j].n), out.cells[j].mean_error);
            ++j;
        }
        try {
            out.rates.push_back({out.cells[i].algorithm, out.cells[i].schedule_value, fit_rate(pts)});
        } catch (const Error &e) {
            throw Error(ErrorKind::configuration, std::string(to_string(out.cells[i].algorithm)) + " " +
                                                      std::string(to_string(kind)) + "=" +
                                                      std::to_string(out.cells[i].schedule_value) + ": " + e.what());
        }
        i = j;
    }
    out.trials = std::move(trials);
    return out;
}

SweepResult run_sweep(const ExperimentConfig &config, const ProgressCallback &progress) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const Kernel kernel = Kernel::parse(config.kernel);
    const Target target = make_target(kernel, config.fstar);
    const double beta = config.schedule.kind == ScheduleKind::alpha ? eigen_system(kernel).beta() : 0.0;

    const Quadrature quad = kernel.domain() == Domain::unit_interval
                                ? Quadrature::simpson(config.quadrature.simpson_nodes)
                                : Quadrature::monte_carlo_sphere(config.quadrature.mc_points,
                                                                 derive_seed(config.base_seed, {~std::uint64_t{0}}));
    const Eigen::VectorXd target_on_nodes = sample(target.function, quad.nodes());

    const std::size_t n_alg = config.algorithms.size();
    const std::size_t n_sched = config.schedule.values.size();
    const std::size_t n_sizes = config.n_grid.size();
    const auto n_trials = static_cast<std::size_t>(config.trials);
    const std::size_t cells_per_job = n_alg * n_sched;
    const std::size_t jobs = n_sizes * n_trials;

    std::vector<TrialResult> results(jobs * cells_per_job);
    std::atomic<std::size_t> next{0}, done{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto run_job = [&](std::size_t job) {
        const std::size_t ni = job / n_trials;
        const std::size_t t = job % n_trials;
        const long n = config.n_grid[ni];
        const Dataset data = generate_dataset(kernel.domain(), target.function, config.noise_sigma, n,
                                              derive_seed(config.base_seed, {ni, t}));
        const FactoredSpectrum spectrum = decompose_gram_factored(kernel, data.inputs, config.eigensolver);
        const Eigen::VectorXd projected = spectrum.transpose_times(data.outputs);

        Eigen::MatrixXd filtered(n, static_cast<Eigen::Index>(cells_per_job));
        std::vector<double> lambdas(cells_per_job);
        for (std::size_t a = 0; a < n_alg; ++a) {
            for (std::size_t s = 0; s < n_sched; ++s) {
                const std::size_t col = a * n_sched + s;
                lambdas[col] = config.schedule.lambda(config.schedule.values[s], n, beta);
                for (Eigen::Index k = 0; k < n; ++k) {
                    filtered(k, static_cast<Eigen::Index>(col)) =
                        filter_value(config.algorithms[a], spectrum.eigenvalues()(k), lambdas[col]) * projected(k) /
                        static_cast<double>(n);
                }
            }
        }
        const Eigen::MatrixXd duals = spectrum.times(filtered);
        if (!duals.allFinite()) throw Error(ErrorKind::numeric, "non-finite dual coefficients");
        const Eigen::MatrixXd predicted = kernel.apply(quad.nodes(), data.inputs, duals);
        for (std::size_t a = 0; a < n_alg; ++a) {
            for (std::size_t s = 0; s < n_sched; ++s) {
                const std::size_t col = a * n_sched + s;
                TrialResult &r = results[((a * n_sched + s) * n_sizes + ni) * n_trials + t];
                r.algorithm = config.algorithms[a];
                r.schedule_value = config.schedule.values[s];
                r.n = n;
                r.trial = static_cast<int>(t);
                r.lambda = lambdas[col];
                r.l2_error = l2_error(predicted.col(static_cast<Eigen::Index>(col)), target_on_nodes, quad);
            }
        }
    };

    auto worker = [&] {
        for (;;) {
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            const std::size_t job = next.fetch_add(1);
            if (job >= jobs) return;
            try {
                run_job(job);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(failure_mutex);
                progress(d, jobs);
            }
        }
    };

    const auto threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(config.workers), jobs));
    if (threads > 1) {
        set_blas_threads(1);
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    } else {
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult out = summarize(kernel.name(), target.id, config.schedule.kind, std::move(results));
    out.config = config;
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace saturn
