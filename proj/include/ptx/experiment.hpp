#pragma once

#include "ptx/analytic.hpp"
#include "ptx/config.hpp"
#include "ptx/ensemble.hpp"
#include "ptx/self_energy_moments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ptx {

inline constexpr const char* kArtifactVersion = "1.0.0";

// One pass/fail verdict against a pinned threshold. group collects the
// verdicts belonging to one acceptance property.
struct CheckOutcome {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SubstreamRange {
  std::string label;  // e.g. "run 3" or "N=400"
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

struct RunManifest {
  std::string experiment;
  std::string status = "ok";  // ok | failed
  std::string error;
  std::string config_hash;
  std::string config_text;  // canonical_config, loadable as a config file
  std::uint64_t master_seed = 0;
  std::vector<SubstreamRange> substreams;
  std::int64_t excluded_samples = 0;
  double duration_seconds = 0.0;
  std::string version = kArtifactVersion;
  std::vector<std::string> outputs;  // file names inside out_dir
  std::vector<CheckOutcome> checks;
};

struct Table2Row {
  Eigen::Index size = 0;
  std::int64_t n_samples = 0;
  SelfEnergyMoments sampled;
  AnalyticMoments analytic;
};

// Sampled vs analytic self-energy moments for every table2 size. Reservoir
// scale v_a and width Gamma_a; channel scales v2 (k) and v3 (k'). Size index
// i draws its samples from substreams starting at i * 2^32.
std::vector<Table2Row> table2_rows(const ExperimentConfig& cfg);
std::uint64_t table2_first_substream(std::size_t size_index);

// The fixed verification grid of the integrals preset.
std::vector<IntegralValue> integral_table();

// Thresholds of the --check mode.
CheckOutcome check_fig1(const HistogramSet& h, const FitResult& fit);
std::vector<CheckOutcome> check_small_width(const std::vector<ScanPoint>& scan);
std::vector<CheckOutcome> check_crossover(const std::vector<ScanPoint>& scan);
std::vector<CheckOutcome> check_table2(const std::vector<Table2Row>& rows);
std::vector<CheckOutcome> check_integrals(const std::vector<IntegralValue>& rows);

// Runs the preset, writes its CSV files and manifest.json into out_dir and
// evaluates the checks. On a library error the manifest is written with
// status "failed" and the error is rethrown.
RunManifest run_experiment(const ExperimentConfig& cfg);

std::string manifest_json(const RunManifest& m);

}  // namespace ptx
