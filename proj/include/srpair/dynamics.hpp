#pragma once

#include <vector>

#include "srpair/superop.hpp"

namespace srpair {

// Spectral decomposition L = R diag(lambda) R^{-1} of a generator, used to
// evaluate exp(L t) at arbitrary times. When the eigenvector basis is too
// ill-conditioned to trust (defective or near-defective generators, e.g.
// two identical emitters decaying purely collectively), expm_fallback is
// set and propagation uses a scaling-and-squaring matrix exponential per
// requested time instead.
struct SpectralDecomposition {
  Superoperator16 liouvillian;
  Eigen::Matrix<std::complex<double>, 16, 1> eigenvalues;
  Superoperator16 right_vectors;
  Superoperator16 left_vectors;  // inverse of right_vectors
  double condition_estimate = 0.0;
  bool expm_fallback = false;
};

// Eigendecomposition with a reconstruction check. Never throws on a
// defective generator; it degrades to the exponential fallback.
SpectralDecomposition decompose(const Superoperator16& liouvillian);

// exp(L t) applied to an arbitrary seed matrix (not necessarily a state).
// Used for two-time correlation functions, where the seed is not a density
// matrix; no physicality checks are applied.
Operator4 apply_propagator(const SpectralDecomposition& dec, const Operator4& seed, double t);

// Evolves a density matrix to each requested time (times need not be
// sorted or start at zero; negative times are rejected). The input state
// is validated; outputs have trace and hermiticity defects checked.
std::vector<Density4> propagate(const SpectralDecomposition& dec, const Density4& rho0,
                                const std::vector<double>& times);

// Two-time correlation helper: e^{L tau} applied to a correlation seed for
// each delay in taus (nonnegative, any order).
std::vector<Operator4> regression_evolve(const SpectralDecomposition& dec, const Operator4& seed,
                                         const std::vector<double>& taus);

struct SteadyState {
  Density4 rho;
  bool unique = true;     // false if the nullspace of L is degenerate
  double residual = 0.0;  // ||L vec(rho)||_2 of the returned state
};

// Trace-one kernel element of L, computed from a least-squares solve of L
// augmented with the trace row. With degenerate kernels (e.g. no pump and
// no dephasing mixing) the solver still returns a valid state but flags it
// as non-unique.
SteadyState steady_state(const Superoperator16& liouvillian);

}  // namespace srpair
