#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "saturn/experiment.hpp"

namespace saturn {

/// YAML experiment configuration. Top-level keys:
///   kernel, fstar, algorithms, alphas | thetas, c, n_grid, trials,
///   noise_sigma, base_seed, workers, eigensolver,
///   quadrature: { simpson_nodes, mc_points }
/// `overrides` are "dotted.key=value" strings whose values are parsed as
/// YAML and win over the file.
ExperimentConfig parse_config(const std::string &path, const std::vector<std::string> &overrides = {});

/// Same, from YAML text; `source` names the text in error messages.
ExperimentConfig parse_config_text(const std::string &text, const std::vector<std::string> &overrides = {},
                                   const std::string &source = "<config>");

/// YAML echo of a config; parse_config_text(to_yaml(c)) == c.
std::string to_yaml(const ExperimentConfig &config);

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

}  // namespace saturn
