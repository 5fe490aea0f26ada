#pragma once

#include <string>
#include <vector>

#include "srpair/dynamics.hpp"

namespace srpair {

// A sampled scalar trace. kind names the observable ("intensity", "g2",
// ...), normalization documents what the values are divided by ("peak",
// "initial", "none", "uncorrelated").
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string kind;
  std::string normalization = "none";
};

// Collective-channel emission rate tr(Sigma^dag Sigma rho) in photons/ns.
// The waveguide fraction beta is not applied here (it cancels in every
// normalized trace; the photon budget applies it explicitly). Tiny negative
// values from roundoff are clamped to zero.
double intensity(const SystemParams& params, const Density4& rho);

// Emission intensity after pulsed preparation in rho0, sampled on the given
// grid, without pump. normalize divides by the t = 0 value (which must be
// positive in that case); the raw trace is returned otherwise.
TimeSeries intensity_trace(const SystemParams& params, const Density4& rho0,
                           const std::vector<double>& times, bool normalize = true);

// Steady-state second-order correlation under continuous incoherent pumping,
//   g2(tau) = tr(Sigma^dag Sigma e^{L tau}[Sigma rho_ss Sigma^dag]) / I_ss^2,
// for tau >= 0, normalized so that an uncorrelated source gives 1. Requires
// gamma_p > 0 so that the steady state carries population.
TimeSeries g2_trace(const SystemParams& params, const std::vector<double>& taus);

// Unnormalized pieces of the same correlation: the numerator trace per
// delay and the stationary intensity. Ensemble averages need these
// separately (a long integration accumulates numerator and rate across
// drifting shots before normalizing).
struct G2Parts {
  std::vector<double> numerator;
  double stationary_intensity = 0.0;
};

G2Parts g2_parts(const SystemParams& params, const std::vector<double>& taus);

// Where the initial excitation ends up, integrated from t = 0 to horizon:
// photons emitted into the waveguide (beta fraction of the collective
// channel), photons leaked into the independent side channels, nonradiative
// losses, and excitation still stored at the horizon. The four parts add up
// to the initial excitation number. Only meaningful without pumping;
// gamma_p must be zero.
struct PhotonBudget {
  double waveguide = 0.0;
  double leaked = 0.0;
  double nonradiative = 0.0;
  double remaining = 0.0;
  double total() const { return waveguide + leaked + nonradiative + remaining; }
};

PhotonBudget photon_budget(const SystemParams& params, const Density4& rho0, double horizon);

}  // namespace srpair
