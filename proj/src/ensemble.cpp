#include "srpair/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double uniform_step(const std::vector<double>& times, const char* what) {
  if (times.size() < 2) {
    throw ValidationError(std::string(what) + " needs at least two samples");
  }
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    if (std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ValidationError(std::string(what) + " must be uniformly sampled");
    }
  }
  return h;
}

// Convolution of the piecewise-linear interpolant of (times, values),
// taken as zero outside the sampled window, with a centered Gaussian of
// width sigma, evaluated at t. Each segment [t_i, t_i+1] contributes the
// closed form
//   (v_i + m_i (t - t_i)) (Phi(z_b) - Phi(z_a)) + m_i sigma (phi(z_a) - phi(z_b)),
// z = (s - t) / sigma, so window edges (where the interpolant jumps to
// zero) are exact. Segments beyond 10 sigma carry < 8e-24 of the kernel
// mass and are skipped.
double convolve_point(const std::vector<double>& times, const std::vector<double>& values,
                      double sigma, double t) {
  const double lo = t - 10.0 * sigma;
  const double hi = t + 10.0 * sigma;
  auto begin = std::lower_bound(times.begin(), times.end(), lo);
  if (begin != times.begin()) --begin;
  auto end = std::upper_bound(times.begin(), times.end(), hi);
  double acc = 0.0;
  for (auto it = begin; it != end && (it + 1) != times.end(); ++it) {
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (i + 1 >= times.size()) break;
    const double a = times[i];
    const double b = times[i + 1];
    if (a > hi || b < lo) continue;
    const double slope = (values[i + 1] - values[i]) / (b - a);
    const double za = (a - t) / sigma;
    const double zb = (b - t) / sigma;
    acc += (values[i] + slope * (t - a)) * (normal_cdf(zb) - normal_cdf(za));
    acc += slope * sigma * (normal_pdf(za) - normal_pdf(zb));
  }
  return acc;
}

void check_resolved(double step, double sigma) {
  if (step > 0.5 * sigma) {
    std::ostringstream msg;
    msg << "sample spacing " << step << " ns under-resolves the response width " << sigma
        << " ns (need spacing <= sigma/2)";
    throw ValidationError(msg.str());
  }
}

// Unnormalized intensity of one fixed-detuning run, shared by the ensemble
// averages.
std::vector<double> raw_intensity(const SystemParams& params, const Density4& rho0,
                                  const std::vector<double>& times) {
  const TimeSeries t = intensity_trace(params, rho0, times, /*normalize=*/false);
  return t.values;
}

}  // namespace

WanderingEnsemble gauss_hermite_ensemble(double mean, double sigma, int n_nodes) {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma < 0.0) {
    throw ValidationError("ensemble mean and sigma must be finite, sigma >= 0");
  }
  if (n_nodes < 1 || n_nodes % 2 == 0) {
    throw ValidationError("ensemble node count must be odd and >= 1");
  }

  WanderingEnsemble ens;
  ens.mean_detuning = mean;
  ens.sigma = sigma;
  if (sigma == 0.0) {
    ens.detunings = {mean};
    ens.weights = {1.0};
    return ens;
  }

  // Golub-Welsch: Gauss-Hermite abscissae are the eigenvalues of the
  // Jacobi matrix with off-diagonal sqrt(k/2); the probability weights are
  // the squared first components of the normalized eigenvectors.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int k = 1; k < n_nodes; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Gauss-Hermite eigensolve failed");
  }
  const Eigen::VectorXd x = solver.eigenvalues();
  Eigen::VectorXd w(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    const double first = solver.eigenvectors()(0, k);
    w(k) = first * first;
  }

  // Enforce the exact +/- symmetry of the rule (the eigensolver breaks it
  // at roundoff level); the center node of an odd rule sits exactly at the
  // mean.
  ens.detunings.resize(n_nodes);
  ens.weights.resize(n_nodes);
  double wsum = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    const int mirror = n_nodes - 1 - k;
    const double xs = 0.5 * (x(k) - x(mirror));
    const double ws = 0.5 * (w(k) + w(mirror));
    ens.detunings[k] = mean + std::sqrt(2.0) * sigma * xs;
    ens.weights[k] = ws;
    wsum += ws;
  }
  for (double& ws : ens.weights) ws /= wsum;
  return ens;
}

TimeSeries wandering_average_intensity(const SystemParams& params, const WanderingEnsemble& ens,
                                       const Density4& rho0, const std::vector<double>& times) {
  if (ens.detunings.size() != ens.weights.size() || ens.detunings.empty()) {
    throw ValidationError("ensemble has no nodes");
  }
  std::vector<double> acc(times.size(), 0.0);
  for (std::size_t k = 0; k < ens.detunings.size(); ++k) {
    const std::vector<double> node = raw_intensity(params.with_delta(ens.detunings[k]), rho0, times);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ens.weights[k] * node[i];
  }
  const double peak = *std::max_element(acc.begin(), acc.end());
  if (peak <= 0.0) {
    throw ValidationError("averaged intensity vanishes; normalized trace undefined");
  }
  TimeSeries out;
  out.times = times;
  out.values = std::move(acc);
  for (double& v : out.values) v /= peak;
  out.kind = "intensity";
  out.normalization = "peak";
  return out;
}

TimeSeries wandering_average_g2(const SystemParams& params, const WanderingEnsemble& ens,
                                const std::vector<double>& taus) {
  if (ens.detunings.size() != ens.weights.size() || ens.detunings.empty()) {
    throw ValidationError("ensemble has no nodes");
  }
  // Numerator and stationary intensity accumulate separately across the
  // drift, mirroring a long HBT integration; the ratio is taken at the end.
  std::vector<double> num(taus.size(), 0.0);
  double rate = 0.0;
  for (std::size_t k = 0; k < ens.detunings.size(); ++k) {
    const G2Parts parts = g2_parts(params.with_delta(ens.detunings[k]), taus);
    for (std::size_t i = 0; i < num.size(); ++i) num[i] += ens.weights[k] * parts.numerator[i];
    rate += ens.weights[k] * parts.stationary_intensity;
  }
  if (rate <= 0.0) {
    throw ValidationError("ensemble-averaged stationary intensity is zero; g2 undefined");
  }
  TimeSeries out;
  out.times = taus;
  out.values.resize(taus.size());
  for (std::size_t i = 0; i < num.size(); ++i) out.values[i] = num[i] / (rate * rate);
  out.kind = "g2";
  out.normalization = "uncorrelated";
  return out;
}

TimeSeries convolve_irf(const TimeSeries& trace, const InstrumentResponse& irf) {
  if (irf.sigma < 0.0 || !std::isfinite(irf.sigma)) {
    throw ValidationError("instrument response width must be finite and >= 0");
  }
  if (irf.sigma == 0.0) return trace;
  check_resolved(uniform_step(trace.times, "convolution input"), irf.sigma);

  TimeSeries out = trace;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    out.values[i] = convolve_point(trace.times, trace.values, irf.sigma, out.times[i]);
  }
  return out;
}

TimeSeries convolve_irf_extended(const TimeSeries& trace, const InstrumentResponse& irf,
                                 double start) {
  if (start > trace.times.front()) {
    throw ValidationError("extended convolution start must not lie inside the trace");
  }
  const double h = uniform_step(trace.times, "convolution input");
  const int extra =
      static_cast<int>(std::ceil((trace.times.front() - start) / h - 1e-9));

  TimeSeries out;
  out.kind = trace.kind;
  out.normalization = trace.normalization;
  out.times.reserve(trace.times.size() + static_cast<std::size_t>(std::max(extra, 0)));
  for (int k = extra; k >= 1; --k) out.times.push_back(trace.times.front() - k * h);
  out.times.insert(out.times.end(), trace.times.begin(), trace.times.end());

  if (irf.sigma == 0.0) {
    out.values.assign(out.times.size() - trace.times.size(), 0.0);
    out.values.insert(out.values.end(), trace.values.begin(), trace.values.end());
    return out;
  }
  check_resolved(h, irf.sigma);
  out.values.resize(out.times.size());
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    out.values[i] = convolve_point(trace.times, trace.values, irf.sigma, out.times[i]);
  }
  return out;
}

TimeSeries convolve_symmetric(const TimeSeries& trace, const InstrumentResponse& irf) {
  if (irf.sigma < 0.0 || !std::isfinite(irf.sigma)) {
    throw ValidationError("instrument response width must be finite and >= 0");
  }
  if (irf.sigma == 0.0) return trace;
  if (std::abs(trace.times.front()) > 1e-12) {
    throw ValidationError("symmetric convolution expects a trace starting at delay 0");
  }
  const double h = uniform_step(trace.times, "convolution input");
  check_resolved(h, irf.sigma);

  // Even reflection about tau = 0, then the same exact segment convolution
  // evaluated back on the nonnegative grid.
  const std::size_t n = trace.times.size();
  std::vector<double> times(2 * n - 1);
  std::vector<double> values(2 * n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) {
    times[i] = -trace.times[n - 1 - i];
    values[i] = trace.values[n - 1 - i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    times[n - 1 + i] = trace.times[i];
    values[n - 1 + i] = trace.values[i];
  }

  TimeSeries out = trace;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    out.values[i] = convolve_point(times, values, irf.sigma, out.times[i]);
  }
  return out;
}

TimeSeries measured_g2(const SystemParams& params, double wander_sigma, int nodes,
                       const std::vector<double>& taus, const InstrumentResponse& detector) {
  if (taus.empty()) {
    throw ValidationError("measured g2 needs at least one delay");
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!std::isfinite(taus[i]) || taus[i] < 0.0) {
      throw ValidationError("measured g2 delays must be finite and >= 0");
    }
    if (i > 0 && taus[i] <= taus[i - 1]) {
      throw ValidationError("measured g2 delays must be strictly increasing");
    }
  }
  if (detector.sigma < 0.0 || !std::isfinite(detector.sigma)) {
    throw ValidationError("detector response width must be finite and >= 0");
  }

  const WanderingEnsemble ens = gauss_hermite_ensemble(params.delta, wander_sigma, nodes);

  // Internal grid fine enough for the fastest beat in the ensemble and for
  // the detector kernel, extended past the last requested delay so the
  // convolution window never runs off the simulated support.
  double delta_max = 0.0;
  for (double d : ens.detunings) delta_max = std::max(delta_max, std::abs(detuning_to_angular(d)));
  const double stop = taus.back() + 10.0 * detector.sigma;
  const double span = std::max(stop, 1e-6);
  double step = span / 400.0;
  if (delta_max > 0.0) step = std::min(step, 2.0 * M_PI / delta_max / 12.0);
  if (detector.sigma > 0.0) step = std::min(step, detector.sigma / 3.0);
  step = std::max(step, span / 2000000.0);
  const std::size_t count = static_cast<std::size_t>(std::ceil(stop / step)) + 1;
  std::vector<double> fine(count);
  for (std::size_t i = 0; i < count; ++i) fine[i] = i * step;

  const TimeSeries raw = wandering_average_g2(params, ens, fine);

  TimeSeries out;
  out.times = taus;
  out.values.resize(taus.size());
  out.kind = "g2_measured";
  out.normalization = "uncorrelated";

  if (detector.sigma == 0.0) {
    // Piecewise-linear sampling of the raw grid (consistent with how the
    // convolution treats the trace).
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double t = std::min(taus[i], raw.times.back());
      const auto it = std::upper_bound(raw.times.begin(), raw.times.end(), t);
      std::size_t j = static_cast<std::size_t>(it - raw.times.begin());
      j = std::min(std::max<std::size_t>(j, 1), raw.times.size() - 1);
      const double t0 = raw.times[j - 1];
      const double t1 = raw.times[j];
      const double u = (t - t0) / (t1 - t0);
      out.values[i] = (1.0 - u) * raw.values[j - 1] + u * raw.values[j];
    }
    return out;
  }

  // Mirror to negative delays, then evaluate the exact segment convolution
  // at each requested delay.
  const std::size_t n = raw.times.size();
  std::vector<double> times(2 * n - 1);
  std::vector<double> values(2 * n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) {
    times[i] = -raw.times[n - 1 - i];
    values[i] = raw.values[n - 1 - i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    times[n - 1 + i] = raw.times[i];
    values[n - 1 + i] = raw.values[i];
  }
  for (std::size_t i = 0; i < taus.size(); ++i) {
    out.values[i] = convolve_point(times, values, detector.sigma, taus[i]);
  }
  return out;
}

}  // namespace srpair
