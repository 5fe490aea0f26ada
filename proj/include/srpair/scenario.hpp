#pragma once

#include <string>
#include <vector>

#include "srpair/analysis.hpp"

namespace srpair {

// A fully resolved run configuration, assembled from a JSON config file
// and/or command-line flags. One scenario describes one invocation of a
// subcommand; every output file embeds the resolved scenario as JSON so
// that runs can be reproduced exactly.
struct Scenario {
  std::string kind;  // lifetime | hbt | sweep | fit | oracle-check
  SystemParams params;

  // Environmental realism layers.
  double wander_sigma = 0.0;   // ueV, spectral wandering width
  int nodes = 21;              // Gauss-Hermite nodes (odd)
  double irf_sigma = 0.15;     // ns, excitation timing jitter (lifetime traces)
  double detector_sigma = 0.15;   // ns, HBT timing response (g2 traces)

  // Output time grid in ns. Lifetime traces are simulated on [0, stop] and
  // reported on [start, stop] (start may be negative to show the broadened
  // rising edge). HBT traces use [0, stop] and are mirrored to [-stop, stop].
  double grid_start = 0.0;
  double grid_stop = 10.0;
  double grid_step = 0.004;

  // Mean detunings to sweep (ueV); empty means a single run at params.delta.
  std::vector<double> sweep;

  // Lifetime runs model the optical gate on emitter 2: gated keeps both
  // emitters, ungated removes emitter 2 (gamma2 = 0, single-emitter decay).
  // The default emits both variants side by side for comparison.
  enum class Gating { kBoth, kGatedOnly, kUngatedOnly };
  Gating gating = Gating::kBoth;

  std::string out_dir = ".";
  std::string format = "csv";  // csv | json for tabular outputs
  long seed = 0;               // reserved; no stochastic modes yet

  // fit inputs
  struct FitInput {
    double detuning = 0.0;  // ueV, mean detuning of the dataset
    std::string path;
  };
  std::vector<FitInput> fit_datasets;
  double init_gamma_d = 1.0;
  double init_sigma = 0.5;

  static Scenario defaults(const std::string& kind);
  static Scenario from_json(const std::string& text, const std::string& origin);
  static Scenario from_file(const std::string& path);

  // Compact JSON echo of the resolved configuration (deterministic key
  // order), embedded in every output header.
  std::string to_json() const;

  // Cross-field checks (grid sanity, kind-specific pump constraints).
  void validate() const;
};

// Each runner writes its outputs under scenario.out_dir and returns the
// paths written, in order.
std::vector<std::string> run_lifetime(const Scenario& sc);
std::vector<std::string> run_hbt(const Scenario& sc);
std::vector<std::string> run_sweep(const Scenario& sc);
std::vector<std::string> run_fit(const Scenario& sc);

// Compares main-path results against the independent oracles and prints a
// pass/fail table to `out`. Returns true when every row passes. When
// out_path is nonempty the table is also written there as JSON.
bool run_oracle_check(const Scenario& sc, std::ostream& out, const std::string& out_path);

struct PlotStyle {
  bool log_y = false;
  std::string title;
};

// Reads traces from CSV files and renders them into one SVG. g2 traces get
// horizontal reference lines at 0.5 and 1.
std::string export_plot(const std::vector<std::string>& trace_paths, const std::string& out_svg,
                        const PlotStyle& style);

}  // namespace srpair
