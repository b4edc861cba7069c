#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "binembed/embedders.hpp"
#include "binembed/metrics.hpp"

#include "json.hpp"

namespace binembed {

/// Configuration for one named experiment. Defaults reproduce the desk-scale
/// study: 200 points on subspaces of dimension 3 and 6 inside R^128, sample
/// counts 4..100 in steps of 4, 20 seeds.
struct ExperimentConfig {
  std::string name;
  int n = 128;
  std::vector<int> dims = {3, 6};
  int p = 200;
  std::vector<int> m_grid;           // default 4,8,...,100
  std::vector<std::uint64_t> seeds;  // default 0..19
  std::vector<double> deltas = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::string output_path;  // prefix: writes <prefix>.csv and <prefix>.json

  static ExperimentConfig from_json(const nlohmann::json& j);
  void validate() const;
};

/// One grid cell result: distortion report for (operator kind, subspace
/// dim, sample count, seed).
struct GridRow {
  std::string kind;
  int d = 0;
  int m = 0;
  std::uint64_t seed = 0;
  DistortionReport report;
};

// Distortion reports over the full (kind, d, m, seed) grid, in that order.
// Clouds depend on (d, seed) only; operators on (kind, seed) only, with
// rows nested in m, so curves across m share their randomness.
std::vector<GridRow> distortion_grid(int n, const std::vector<int>& dims, int p,
                                     const std::vector<int>& m_grid,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::vector<OpKind>& kinds);

/// Across-seed mean and standard error for one (kind, d, m) cell.
struct CellMean {
  std::string kind;
  int d = 0;
  int m = 0;
  int n_seeds = 0;
  double mean_bin = 0, se_bin = 0;
  double mean_lin = 0, se_lin = 0;
  double mean_nlin = 0, se_nlin = 0;
};

std::vector<CellMean> summarize(const std::vector<GridRow>& rows);

struct ExperimentResult {
  std::string csv_path;
  std::string json_path;
  int rows = 0;
};

// Runs the named experiment and writes <output_path>.csv plus a JSON
// summary ("schema": 1). Reruns with the same config are byte-identical.
ExperimentResult run(const ExperimentConfig& config);

// Command-line entry point (subcommands embed, distortion, width,
// complexity, experiment). Returns the process exit code: 0 success,
// 2 usage error, 1 runtime error.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace binembed
