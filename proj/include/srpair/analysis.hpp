#pragma once

#include <array>
#include <optional>
#include <vector>

#include "srpair/ensemble.hpp"

namespace srpair {

// Threshold crossing times of a decaying trace. The trace must have a
// unique global maximum; for each threshold f the metric is the first time
// after the peak where the trace falls below f * peak_value, located by
// linear interpolation between samples. Crossing times are absolute (on the
// trace's own axis, >= peak_time); durations are crossing - peak_time.
// Thresholds never reached give infinity.
struct DecayMetrics {
  double peak_time = 0.0;
  double peak_value = 0.0;
  std::vector<double> thresholds;
  std::vector<double> crossing_times;
  // Half-sample value ambiguity mapped through the local slope; a
  // resolution heuristic, not a statistical error bar.
  std::vector<double> uncertainties;
};

DecayMetrics threshold_times(const TimeSeries& trace, const std::vector<double>& thresholds);

// Dominant oscillation period of a trace (e.g. the detuning beat in g2).
// The trailing-mean baseline is removed, the residual is Hann-windowed and
// zero-padded, and the strongest interior spectral peak above the noise
// floor is refined by parabolic interpolation. Returns nullopt when no
// credible peak exists (monotone or overdamped traces).
std::optional<double> beat_period(const TimeSeries& trace);

// One measured correlation histogram: a mean detuning and g2 samples on a
// uniform tau grid (tau may include negative values; the model is even).
// errors, when nonempty, are per-sample standard deviations and switch the
// objective to inverse-variance weights.
struct FitDataset {
  double mean_detuning = 0.0;  // ueV
  std::vector<double> taus;
  std::vector<double> values;
  std::vector<double> errors;
};

struct FitOptions {
  double detector_sigma = 0.15;   // ns, timing response of the HBT setup
  int nodes = 15;                 // Gauss-Hermite nodes for the wandering average
  int max_iterations = 400;
  double tolerance = 1e-10;       // simplex spread on the objective
};

// Joint weighted least squares for the dephasing rate and the wandering
// width, shared across all datasets; all other parameters are held at
// `fixed`. Nelder-Mead with a deterministic start and one restart.
// covariance is the 2x2 Gauss-Newton estimate at the optimum, scaled by the
// residual variance; order (gamma_d, sigma).
struct FitResult {
  double gamma_d = 0.0;
  double sigma = 0.0;
  double residual = 0.0;  // sum of squared residuals at the optimum
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::array<double, 4> covariance{};  // row-major (gd,gd) (gd,s) (s,gd) (s,s)
};

FitResult fit_parameters(const std::vector<FitDataset>& datasets, const SystemParams& fixed,
                         double gamma_d_init, double sigma_init, const FitOptions& options);

}  // namespace srpair
