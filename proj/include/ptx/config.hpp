#pragma once

#include "ptx/ensemble.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ptx {

enum class Experiment { fig1, fig2, fig3, table2, integrals, custom };

std::string to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

// Everything one CLI invocation needs. Defaults: N = 100 in both
// reservoirs, every v and Gamma 0.1, t1 = t2 = 1, 50 runs of 500 samples.
struct ExperimentConfig {
  Experiment experiment = Experiment::fig1;
  EnsembleConfig ensemble;
  std::filesystem::path out_dir = "out";
  std::vector<double> gamma_grid;  // fig2 / fig3
  std::vector<Eigen::Index> table2_sizes{100, 400, 900, 1600};
  int table2_samples = 100;
  bool high_statistics = false;  // table2 with 10^4 samples

  // Samples per size actually used by table2.
  int table2_sample_count() const { return high_statistics ? 10000 : table2_samples; }
};

// Flat "key = value" text, one parameter per line, '#' starts a comment.
// Unknown keys, malformed values and failed validation raise ConfigError
// naming the line or key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Re-validates a config after programmatic overrides.
void validate_config(const ExperimentConfig& cfg);

// Canonical resolved parameters, one "key = value" per line in fixed order.
// Feeding this text back to parse_config reproduces the config.
std::string canonical_config(const ExperimentConfig& cfg);

// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace ptx
