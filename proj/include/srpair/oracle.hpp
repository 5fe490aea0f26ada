#pragma once

#include <vector>

#include "srpair/operators.hpp"
#include "srpair/params.hpp"

namespace srpair::oracle {

// Independent cross-checks for the spectral propagator. Everything here is
// deliberately primitive: the master equation is integrated by first-order
// explicit Euler directly on 4x4 matrices, with the generator applied
// term by term. No vectorization, no eigendecompositions, no code shared
// with the production propagator beyond the operator definitions.

// Right-hand side L[rho] evaluated term by term on a 4x4 matrix.
Operator4 master_equation_rhs(const SystemParams& params, const Operator4& rho, bool with_pump);

// Explicit Euler integration of rho' = L[rho] from 0 to t_end in steps of
// dt. Requires dt * max_rate <= 1e-4 (else ValidationError) so that the
// first-order error stays well below typical comparison tolerances. The
// seed need not be a density matrix (correlation seeds are allowed).
Operator4 euler_propagate(const SystemParams& params, const Operator4& seed, double t_end,
                          double dt, bool with_pump);

// Same integration, recording the state at each requested time. Times must
// be sorted, nonnegative, and (within 1e-9) integer multiples of dt.
std::vector<Operator4> euler_trajectory(const SystemParams& params, const Operator4& seed,
                                        const std::vector<double>& times, double dt,
                                        bool with_pump);

// Closed forms for one emitter with decay gamma and pure dephasing gamma_d:
// excited population p0 e^{-gamma t}, |coherence| c0 e^{-(gamma + gamma_d) t / 2}.
struct SingleEmitterState {
  double excited_population = 0.0;
  double coherence_magnitude = 0.0;
};

SingleEmitterState analytic_single_emitter(double gamma, double gamma_d, double p0, double c0,
                                           double t);

// Normalized waveguide intensity I(t)/I(0) for two identical resonant
// emitters (gamma1 = gamma2 = gamma, delta = 0, no dephasing) prepared in
// the state reached by a single shared-channel emission from |e1 e2>, i.e.
// the bright superposition: exp(-(1 + beta) gamma t).
double analytic_dicke_pair(double gamma, double beta, double t);

// Decay eigenvalues of the single-excitation sector for two emitters fully
// characterized by their rates and the shared-channel fraction beta:
// eigenvalues of [[g1, b], [b, g2]] with b = beta sqrt(g1 g2). Returned as
// (fast, slow); at g1 = g2 = g these are (1 + beta) g and (1 - beta) g.
struct RatePair {
  double fast = 0.0;
  double slow = 0.0;
};

RatePair collective_rate_pair(double gamma1, double gamma2, double beta);

// Zero-delay g2 of two independent emitters with excited populations p1, p2
// and rates gamma1, gamma2 feeding one detector:
//   g2(0) = 2 gamma1 gamma2 p1 p2 / (gamma1 p1 + gamma2 p2)^2.
double independent_g2_zero(double gamma1, double gamma2, double p1, double p2);

}  // namespace srpair::oracle
