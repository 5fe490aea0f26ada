#include "srpair/observables.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

void validate_times(const std::vector<double>& times) {
  if (times.empty()) {
    throw ValidationError("time grid must not be empty");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw ValidationError("time grid must be finite");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw ValidationError("time grid must be strictly increasing");
    }
  }
}

// Adaptive Simpson on a vector-valued integrand, refining until every
// component of the local error estimate is below the interval's share of
// the tolerance.
using VecFn = std::function<Eigen::Vector3d(double)>;

Eigen::Vector3d simpson(const VecFn& f, double a, double b, const Eigen::Vector3d& fa,
                        const Eigen::Vector3d& fm, const Eigen::Vector3d& fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Eigen::Vector3d integrate_recursive(const VecFn& f, double a, double b,
                                    const Eigen::Vector3d& fa, const Eigen::Vector3d& fm,
                                    const Eigen::Vector3d& fb, const Eigen::Vector3d& whole,
                                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Eigen::Vector3d fl = f(0.5 * (a + m));
  const Eigen::Vector3d fr = f(0.5 * (m + b));
  const Eigen::Vector3d left = simpson(f, a, m, fa, fl, fm);
  const Eigen::Vector3d right = simpson(f, m, b, fm, fr, fb);
  const Eigen::Vector3d err = left + right - whole;
  if (err.cwiseAbs().maxCoeff() <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  if (depth <= 0) {
    throw NumericalError("photon budget quadrature failed to converge");
  }
  return integrate_recursive(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
         integrate_recursive(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
}

Eigen::Vector3d integrate_adaptive(const VecFn& f, double a, double b, double tol) {
  const Eigen::Vector3d fa = f(a);
  const Eigen::Vector3d fm = f(0.5 * (a + b));
  const Eigen::Vector3d fb = f(b);
  const Eigen::Vector3d whole = simpson(f, a, b, fa, fm, fb);
  return integrate_recursive(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double intensity(const SystemParams& params, const Density4& rho) {
  const Operator4 sigma = collective_operator(params.gamma1, params.gamma2);
  const double value = (sigma.adjoint() * sigma * rho).trace().real();
  if (value < -1e-12) {
    std::ostringstream msg;
    msg << "intensity " << value << " below roundoff floor";
    throw NumericalError(msg.str());
  }
  return std::max(value, 0.0);
}

TimeSeries intensity_trace(const SystemParams& params, const Density4& rho0,
                           const std::vector<double>& times, bool normalize) {
  params.validate();
  validate_times(times);
  validate_density(rho0);

  const SpectralDecomposition dec = decompose(build_liouvillian(params, /*with_pump=*/false));
  const std::vector<Density4> states = propagate(dec, rho0, times);

  TimeSeries out;
  out.times = times;
  out.values.reserve(times.size());
  for (const Density4& rho : states) out.values.push_back(intensity(params, rho));
  out.kind = "intensity";
  out.normalization = "none";
  if (normalize) {
    const double i0 = intensity(params, rho0);
    if (i0 <= 0.0) {
      throw ValidationError("initial intensity is zero; normalized trace undefined");
    }
    for (double& v : out.values) v /= i0;
    out.normalization = "initial";
  }
  return out;
}

G2Parts g2_parts(const SystemParams& params, const std::vector<double>& taus) {
  params.validate();
  if (params.gamma_p <= 0.0) {
    throw ValidationError("g2 requires an incoherent pump (gamma_p > 0)");
  }
  validate_times(taus);
  if (taus.front() < 0.0) {
    throw ValidationError("g2 delays must be >= 0 (negative branch is the mirror image)");
  }

  const Superoperator16 lv = build_liouvillian(params, /*with_pump=*/true);
  const SteadyState ss = steady_state(lv);

  const Operator4 sigma = collective_operator(params.gamma1, params.gamma2);
  const Operator4 sds = sigma.adjoint() * sigma;
  const Operator4 seed = sigma * ss.rho * sigma.adjoint();

  const SpectralDecomposition dec = decompose(lv);
  G2Parts parts;
  parts.stationary_intensity = intensity(params, ss.rho);
  parts.numerator.reserve(taus.size());
  for (double tau : taus) {
    const Operator4 evolved = apply_propagator(dec, seed, tau);
    parts.numerator.push_back(std::max((sds * evolved).trace().real(), 0.0));
  }
  return parts;
}

TimeSeries g2_trace(const SystemParams& params, const std::vector<double>& taus) {
  const G2Parts parts = g2_parts(params, taus);
  if (parts.stationary_intensity <= 0.0) {
    throw ValidationError("steady-state intensity is zero; g2 undefined");
  }
  TimeSeries out;
  out.times = taus;
  out.values.reserve(taus.size());
  const double denom = parts.stationary_intensity * parts.stationary_intensity;
  for (double num : parts.numerator) out.values.push_back(num / denom);
  out.kind = "g2";
  out.normalization = "uncorrelated";
  return out;
}

PhotonBudget photon_budget(const SystemParams& params, const Density4& rho0, double horizon) {
  params.validate();
  if (params.gamma_p != 0.0) {
    throw ValidationError("photon budget requires gamma_p = 0 (no pump)");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("photon budget horizon must be positive and finite");
  }
  validate_density(rho0);

  const SpectralDecomposition dec = decompose(build_liouvillian(params, /*with_pump=*/false));
  const Operator4 sigma = collective_operator(params.gamma1, params.gamma2);
  const Operator4 sds = sigma.adjoint() * sigma;
  const Operator4 n1 = number_operator(1);
  const Operator4 n2 = number_operator(2);

  // Rates draining the excitation number: the collective channel at
  // beta <Sigma^dag Sigma>, side channels at (1-beta) gamma_i <n_i>, and
  // the nonradiative channel at gamma_nr <n_1 + n_2>. Dephasing and the
  // Hamiltonian preserve the excitation number.
  const VecFn flux = [&](double t) {
    const Operator4 rho = apply_propagator(dec, rho0, t);
    const double p1 = (n1 * rho).trace().real();
    const double p2 = (n2 * rho).trace().real();
    Eigen::Vector3d f;
    f(0) = params.beta * std::max((sds * rho).trace().real(), 0.0);
    f(1) = (1.0 - params.beta) * (params.gamma1 * p1 + params.gamma2 * p2);
    f(2) = params.gamma_nr * (p1 + p2);
    return f;
  };

  const Eigen::Vector3d integrals = integrate_adaptive(flux, 0.0, horizon, 1e-9);
  const Operator4 rho_end = apply_propagator(dec, rho0, horizon);

  PhotonBudget budget;
  budget.waveguide = integrals(0);
  budget.leaked = integrals(1);
  budget.nonradiative = integrals(2);
  budget.remaining = ((n1 + n2) * rho_end).trace().real();
  return budget;
}

}  // namespace srpair
