#pragma once

namespace srpair {

// Unit system used throughout: time in ns, rates in 1/ns, energies
// (detunings) in ueV. hbar is pinned here and nowhere else; a detuning
// Delta [ueV] enters the dynamics as the angular frequency Delta/hbar
// [rad/ns].
inline constexpr double kHbarUevNs = 0.6582119569;

inline constexpr double detuning_to_angular(double delta_uev) {
  return delta_uev / kHbarUevNs;
}

// Physical parameters of the two-emitter waveguide system.
//
// Each emitter i has a radiative rate gamma_i. A fraction beta of the
// radiative emission is routed through the shared waveguide mode, where the
// two emitters interfere; the remaining (1 - beta) leaks into independent
// side channels. gamma_d is a pure dephasing rate acting on each emitter,
// gamma_p an incoherent repump rate (used for intensity-correlation runs),
// and gamma_nr a nonradiative decay rate that never reaches any detector.
struct SystemParams {
  double gamma1 = 1.0;    // radiative decay rate of emitter 1 [1/ns]
  double gamma2 = 1.0;    // radiative decay rate of emitter 2 [1/ns]
  double beta = 1.0;      // waveguide coupling fraction, in [0, 1]
  double delta = 0.0;     // transition energy of emitter 1 minus emitter 2 [ueV]
  double gamma_d = 0.0;   // pure dephasing rate per emitter [1/ns]
  double gamma_p = 0.0;   // incoherent pump rate per emitter [1/ns]
  double gamma_nr = 0.0;  // nonradiative decay rate per emitter [1/ns]

  // Throws ValidationError on out-of-range or non-finite values.
  void validate() const;

  // Largest rate scale in the generator, including the detuning expressed
  // as an angular frequency. Used for step-size preconditions.
  double max_rate() const;

  // Copy with a different detuning; used by ensemble averaging.
  SystemParams with_delta(double delta_uev) const {
    SystemParams p = *this;
    p.delta = delta_uev;
    return p;
  }
};

}  // namespace srpair
