#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saturn/estimators.hpp"
#include "saturn/kernels.hpp"
#include "saturn/linalg.hpp"
#include "saturn/spectral_filters.hpp"

namespace saturn {

enum class ScheduleKind { alpha, theta };

std::string_view to_string(ScheduleKind k) noexcept;

/// λ = c n^{-1/(α+β)} (alpha) or λ = c n^{-θ} (theta).
struct Schedule {
    ScheduleKind kind = ScheduleKind::alpha;
    std::vector<double> values;
    double c = 0.01;

    [[nodiscard]] double lambda(double value, long n, double beta) const;
};

/// A regression target by stable id: "e<k>" (k-th eigenfunction of an
/// interval kernel) or "Y11", "Y2-2", "Y32" (unit-norm spherical harmonics).
struct Target {
    std::string id;
    TargetFunction function;
};

Target make_target(const Kernel &kernel, std::string_view id);

struct QuadratureSpec {
    int simpson_nodes = 8193;
    int mc_points = 200000;
};

struct ExperimentConfig {
    std::string kernel = "min";
    std::string fstar = "e2";
    std::vector<FilterId> algorithms;
    Schedule schedule;
    std::vector<long> n_grid{256, 512, 1024, 2048, 4096};
    int trials = 100;
    double noise_sigma = 0.2;
    std::uint64_t base_seed = 0;
    QuadratureSpec quadrature;
    int workers = 1;
    EigenSolver eigensolver = EigenSolver::automatic;

    /// Throws ErrorKind::configuration describing the first invalid field.
    void validate() const;
};

inline constexpr int express_trials = 20;

struct TrialResult {
    FilterId algorithm = FilterId::krr;
    double schedule_value = 0.0;
    long n = 0;
    int trial = 0;
    double lambda = 0.0;
    double l2_error = 0.0;
};

struct CellSummary {
    FilterId algorithm = FilterId::krr;
    double schedule_value = 0.0;
    long n = 0;
    double mean_error = 0.0;
    double std_error = 0.0;  // sample standard deviation over trials; 0 for one trial
    int count = 0;
};

/// log err = -rate · log n + intercept, fitted by least squares.
struct RateFit {
    double rate = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;

    [[nodiscard]] double predict(double n) const;
};

struct RateRow {
    FilterId algorithm = FilterId::krr;
    double schedule_value = 0.0;
    RateFit fit;
};

struct SweepResult {
    std::string kernel;
    std::string fstar;
    ScheduleKind schedule_kind = ScheduleKind::alpha;
    std::optional<ExperimentConfig> config;
    std::vector<TrialResult> trials;  // sorted by (algorithm id, schedule value, n, trial)
    std::vector<CellSummary> cells;   // sorted by (algorithm id, schedule value, n)
    std::vector<RateRow> rates;       // sorted by (algorithm id, schedule value)
    double elapsed_seconds = 0.0;

    [[nodiscard]] const RateRow *rate(FilterId algorithm, double schedule_value) const;
};

/// SplitMix64 chain over (base, indices...).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices);

/// x_i i.i.d. uniform on the domain, y_i = f*(x_i) + σ ε_i, deterministic in `seed`.
Dataset generate_dataset(Domain domain, const TargetFunction &f_star, double sigma, long n, std::uint64_t seed);

/// Throws ErrorKind::fit for fewer than 2 points, repeated n only, or nonpositive errors.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

/// Groups trials into cells and fits one rate per (algorithm, schedule value).
SweepResult summarize(std::string kernel, std::string fstar, ScheduleKind kind, std::vector<TrialResult> trials);

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (n, trial) job; all algorithms and schedule values of a job
/// share one dataset and one Gram decomposition. Deterministic for a config
/// regardless of the worker count.
SweepResult run_sweep(const ExperimentConfig &config, const ProgressCallback &progress = {});

}  // namespace saturn
