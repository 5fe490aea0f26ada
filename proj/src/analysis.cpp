#include "srpair/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Iterative radix-2 FFT, in place. Length must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

}  // namespace

DecayMetrics threshold_times(const TimeSeries& trace, const std::vector<double>& thresholds) {
  const std::size_t n = trace.times.size();
  if (n < 3 || trace.values.size() != n) {
    throw ValidationError("threshold extraction needs at least three samples");
  }
  for (double eps : thresholds) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw ValidationError("thresholds must lie strictly between 0 and 1");
    }
  }

  std::size_t peak = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (trace.values[i] > trace.values[peak]) peak = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != peak && trace.values[i] == trace.values[peak]) {
      throw ValidationError("trace has no unique global maximum");
    }
  }

  DecayMetrics metrics;
  metrics.peak_time = trace.times[peak];
  metrics.peak_value = trace.values[peak];
  metrics.thresholds = thresholds;

  for (double eps : thresholds) {
    const double target = eps * metrics.peak_value;
    double crossing = kInf;
    double uncertainty = kInf;
    for (std::size_t i = peak; i + 1 < n; ++i) {
      if (trace.values[i] >= target && trace.values[i + 1] < target) {
        // First downward crossing after the peak, located on the linear
        // segment. The quoted uncertainty is the half-sample value
        // ambiguity mapped through the local slope, which for a linear
        // segment is half the local sample spacing; a resolution
        // heuristic, not a statistical error bar.
        const double dv = trace.values[i] - trace.values[i + 1];
        const double dt = trace.times[i + 1] - trace.times[i];
        crossing = trace.times[i] + dt * (trace.values[i] - target) / dv;
        uncertainty = 0.5 * std::abs(dv) * (dt / dv);
        break;
      }
    }
    metrics.crossing_times.push_back(crossing);
    metrics.uncertainties.push_back(uncertainty);
  }
  return metrics;
}

std::optional<double> beat_period(const TimeSeries& trace) {
  const std::size_t n = trace.times.size();
  if (n < 16 || trace.values.size() != n) return std::nullopt;
  const double h = trace.times[1] - trace.times[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(trace.times[i] - trace.times[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ValidationError("beat extraction requires a uniformly sampled trace");
    }
  }

  // Remove the settled baseline (mean of the trailing quarter) so the DC
  // bin does not swamp the oscillation, then Hann-window against leakage.
  double baseline = 0.0;
  const std::size_t tail = std::max<std::size_t>(n / 4, 1);
  for (std::size_t i = n - tail; i < n; ++i) baseline += trace.values[i];
  baseline /= static_cast<double>(tail);

  std::size_t m = 1;
  while (m < 8 * n) m <<= 1;
  std::vector<std::complex<double>> buf(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / static_cast<double>(n - 1)));
    buf[i] = w * (trace.values[i] - baseline);
  }
  fft_pow2(buf);

  std::vector<double> mag(m / 2);
  for (std::size_t k = 0; k < m / 2; ++k) mag[k] = std::abs(buf[k]);

  // Only peaks with at least ~1.5 oscillation periods inside the window
  // are trustworthy; below that the window leakage dominates. One window
  // length corresponds to m / n padded bins.
  const std::size_t k_min =
      static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(m) / static_cast<double>(n)));
  if (k_min + 2 >= m / 2) return std::nullopt;

  const double floor_level = median_of(std::vector<double>(mag.begin() + 1, mag.end()));
  double best_mag = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = std::max<std::size_t>(k_min, 2); k + 1 < m / 2; ++k) {
    if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] > best_mag) {
      best_mag = mag[k];
      best_k = k;
    }
  }
  if (best_k == 0) return std::nullopt;
  if (best_mag < 3.0 * floor_level) return std::nullopt;

  // Parabolic refinement on the log magnitudes of the three bins around
  // the peak.
  const double la = std::log(std::max(mag[best_k - 1], 1e-300));
  const double lb = std::log(std::max(mag[best_k], 1e-300));
  const double lc = std::log(std::max(mag[best_k + 1], 1e-300));
  const double denom = la - 2.0 * lb + lc;
  double shift = 0.0;
  if (denom < 0.0) shift = 0.5 * (la - lc) / denom;
  shift = std::clamp(shift, -0.5, 0.5);

  const double freq = (static_cast<double>(best_k) + shift) / (static_cast<double>(m) * h);
  if (freq <= 0.0) return std::nullopt;
  return 1.0 / freq;
}

namespace {

// Sum of squared (optionally inverse-variance weighted) residuals of the
// measurement model against all datasets, with shared free parameters.
struct Objective {
  const std::vector<FitDataset>* datasets;
  const SystemParams* fixed;
  const FitOptions* options;
  mutable int evaluations = 0;

  double operator()(double gamma_d, double sigma) const {
    ++evaluations;
    // Barrier keeps the simplex out of the unphysical region without
    // discontinuities at the boundary that would stall it.
    if (gamma_d < 0.0 || sigma < 0.0) {
      return 1e30 * (1.0 - std::min(gamma_d, 0.0) - std::min(sigma, 0.0));
    }
    double sse = 0.0;
    for (const FitDataset& ds : *datasets) {
      SystemParams p = *fixed;
      p.gamma_d = gamma_d;
      p.delta = ds.mean_detuning;

      // Fold negative delays onto the even model before evaluating.
      std::vector<double> folded(ds.taus.size());
      for (std::size_t i = 0; i < ds.taus.size(); ++i) folded[i] = std::abs(ds.taus[i]);
      std::vector<std::size_t> order(folded.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return folded[a] < folded[b]; });
      std::vector<double> unique_taus;
      unique_taus.reserve(folded.size());
      for (std::size_t idx : order) {
        if (unique_taus.empty() || folded[idx] > unique_taus.back() + 1e-12) {
          unique_taus.push_back(folded[idx]);
        }
      }

      InstrumentResponse det{options->detector_sigma};
      const TimeSeries model = measured_g2(p, sigma, options->nodes, unique_taus, det);

      const bool weighted = !ds.errors.empty();
      for (std::size_t i = 0; i < ds.taus.size(); ++i) {
        const double tau = std::abs(ds.taus[i]);
        const auto it = std::lower_bound(unique_taus.begin(), unique_taus.end(), tau - 1e-12);
        const std::size_t j = static_cast<std::size_t>(it - unique_taus.begin());
        const double r = model.values[std::min(j, unique_taus.size() - 1)] - ds.values[i];
        if (weighted) {
          const double e = ds.errors[i];
          if (!(e > 0.0)) {
            throw ValidationError("dataset error bars must be positive");
          }
          sse += (r / e) * (r / e);
        } else {
          sse += r * r;
        }
      }
    }
    return sse;
  }
};

struct SimplexPoint {
  double gd;
  double sig;
  double f;
};

void nelder_mead(const Objective& obj, std::array<SimplexPoint, 3>& simplex, int max_iter,
                 double tol, int& iterations, bool& converged) {
  auto order = [&]() {
    std::sort(simplex.begin(), simplex.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.f < b.f; });
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    ++iterations;
    const double spread = std::abs(simplex[2].f - simplex[0].f);
    const double size = std::max(std::abs(simplex[2].gd - simplex[0].gd) +
                                     std::abs(simplex[1].gd - simplex[0].gd),
                                 std::abs(simplex[2].sig - simplex[0].sig) +
                                     std::abs(simplex[1].sig - simplex[0].sig));
    if (spread <= tol * (1.0 + std::abs(simplex[0].f)) && size <= 1e-7) {
      converged = true;
      return;
    }

    const double cgd = 0.5 * (simplex[0].gd + simplex[1].gd);
    const double csig = 0.5 * (simplex[0].sig + simplex[1].sig);
    auto eval = [&](double gd, double sig) { return SimplexPoint{gd, sig, obj(gd, sig)}; };

    SimplexPoint reflect = eval(cgd + (cgd - simplex[2].gd), csig + (csig - simplex[2].sig));
    if (reflect.f < simplex[0].f) {
      SimplexPoint expand =
          eval(cgd + 2.0 * (cgd - simplex[2].gd), csig + 2.0 * (csig - simplex[2].sig));
      simplex[2] = (expand.f < reflect.f) ? expand : reflect;
    } else if (reflect.f < simplex[1].f) {
      simplex[2] = reflect;
    } else {
      const bool outside = reflect.f < simplex[2].f;
      SimplexPoint contract =
          outside ? eval(cgd + 0.5 * (reflect.gd - cgd), csig + 0.5 * (reflect.sig - csig))
                  : eval(cgd + 0.5 * (simplex[2].gd - cgd), csig + 0.5 * (simplex[2].sig - csig));
      if (contract.f < std::min(reflect.f, simplex[2].f)) {
        simplex[2] = contract;
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          simplex[i] = eval(simplex[0].gd + 0.5 * (simplex[i].gd - simplex[0].gd),
                            simplex[0].sig + 0.5 * (simplex[i].sig - simplex[0].sig));
        }
      }
    }
    order();
  }
  converged = false;
}

}  // namespace

FitResult fit_parameters(const std::vector<FitDataset>& datasets, const SystemParams& fixed,
                         double gamma_d_init, double sigma_init, const FitOptions& options) {
  if (datasets.empty()) {
    throw ValidationError("fit needs at least one dataset");
  }
  for (const FitDataset& ds : datasets) {
    if (ds.taus.size() != ds.values.size() || ds.taus.empty()) {
      throw ValidationError("fit dataset delays and values must match and be nonempty");
    }
    if (!ds.errors.empty() && ds.errors.size() != ds.taus.size()) {
      throw ValidationError("fit dataset error bars must match the sample count");
    }
  }
  if (gamma_d_init < 0.0 || sigma_init < 0.0) {
    throw ValidationError("fit initial values must be >= 0");
  }
  if (options.nodes < 1 || options.nodes % 2 == 0) {
    throw ValidationError("fit ensemble node count must be odd and >= 1");
  }

  Objective obj{&datasets, &fixed, &options};

  // Deterministic start simplex scaled to the initial guess, one refinement
  // restart around the best point found.
  const double step_gd = std::max(0.25 * gamma_d_init, 0.5);
  const double step_sig = std::max(0.25 * sigma_init, 0.25);
  auto eval = [&](double gd, double sig) { return SimplexPoint{gd, sig, obj(gd, sig)}; };

  std::array<SimplexPoint, 3> simplex = {
      eval(gamma_d_init, sigma_init),
      eval(gamma_d_init + step_gd, sigma_init),
      eval(gamma_d_init, sigma_init + step_sig),
  };

  FitResult result;
  bool converged = false;
  int iterations = 0;
  nelder_mead(obj, simplex, options.max_iterations, options.tolerance, iterations, converged);

  std::array<SimplexPoint, 3> restart = {
      simplex[0],
      eval(simplex[0].gd + 0.1 * step_gd, simplex[0].sig),
      eval(simplex[0].gd, simplex[0].sig + 0.1 * step_sig),
  };
  bool converged2 = false;
  nelder_mead(obj, restart, options.max_iterations, options.tolerance, iterations, converged2);
  const SimplexPoint best = (restart[0].f <= simplex[0].f) ? restart[0] : simplex[0];

  result.gamma_d = best.gd;
  result.sigma = best.sig;
  result.residual = best.f;
  result.converged = converged2 || converged;
  result.iterations = iterations;

  // Covariance from the central-difference Hessian of the objective. For
  // unweighted least squares the parameter covariance is 2 s^2 H^{-1} with
  // s^2 the residual variance; with error bars supplied the objective is
  // already a chi-square and the factor is 2 H^{-1}.
  const double h_gd = std::max(1e-3, 1e-3 * std::abs(best.gd));
  const double h_sig = std::max(1e-3, 1e-3 * std::abs(best.sig));
  auto f = [&](double gd, double sig) { return obj(std::max(gd, 0.0), std::max(sig, 0.0)); };
  const double f0 = best.f;
  const double fpp = f(best.gd + h_gd, best.sig + h_sig);
  const double fpm = f(best.gd + h_gd, best.sig - h_sig);
  const double fmp = f(best.gd - h_gd, best.sig + h_sig);
  const double fmm = f(best.gd - h_gd, best.sig - h_sig);
  const double fxp = f(best.gd + h_gd, best.sig);
  const double fxm = f(best.gd - h_gd, best.sig);
  const double fyp = f(best.gd, best.sig + h_sig);
  const double fym = f(best.gd, best.sig - h_sig);
  const double hxx = (fxp - 2.0 * f0 + fxm) / (h_gd * h_gd);
  const double hyy = (fyp - 2.0 * f0 + fym) / (h_sig * h_sig);
  const double hxy = (fpp - fpm - fmp + fmm) / (4.0 * h_gd * h_sig);

  std::size_t samples = 0;
  bool weighted = false;
  for (const FitDataset& ds : datasets) {
    samples += ds.taus.size();
    weighted = weighted || !ds.errors.empty();
  }
  const double dof = static_cast<double>(samples > 2 ? samples - 2 : 1);
  const double scale = weighted ? 2.0 : 2.0 * (best.f / dof);
  const double det = hxx * hyy - hxy * hxy;
  if (det > 0.0 && hxx > 0.0) {
    result.covariance = {scale * hyy / det, -scale * hxy / det, -scale * hxy / det,
                         scale * hxx / det};
  } else {
    result.covariance = {kInf, kInf, kInf, kInf};
  }
  result.evaluations = obj.evaluations;
  return result;
}

}  // namespace srpair
