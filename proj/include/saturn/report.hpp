#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "saturn/diagnostics.hpp"
#include "saturn/experiment.hpp"

namespace saturn {

/// "%.6g", the fixed format of every derived column.
std::string format6(double v);
/// Shortest decimal that reads back to the same double.
std::string format_exact(double v);

/// trials.csv (lambda and l2_error printed exactly so summaries can be
/// re-derived) and summary.csv. Creates `dir` if needed.
std::vector<std::filesystem::path> emit_sweep_csv(const SweepResult &result, const std::filesystem::path &dir);

/// rates.csv and the plain-text rates.txt; returns the csv path first.
std::vector<std::filesystem::path> emit_rate_table(const SweepResult &result, const std::filesystem::path &dir);

/// Plain-text table: one row per schedule value, one column per algorithm,
/// '*' after each algorithm's largest rate.
std::string format_rate_table(const SweepResult &result);

/// One plot_<alg>_<kind>_<value>.csv per (algorithm, schedule value).
std::vector<std::filesystem::path> emit_loglog_plot_data(const SweepResult &result, const std::filesystem::path &dir);

struct TrialsFile {
    std::string kernel;
    std::string fstar;
    std::vector<TrialResult> trials;
};

/// Reads a trials.csv written by emit_sweep_csv.
TrialsFile read_trials_csv(const std::filesystem::path &path);

void write_bias_variance_csv(std::ostream &os, const std::vector<BiasVarReport> &rows);

}  // namespace saturn
