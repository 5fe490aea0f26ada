#pragma once

#include <Eigen/Dense>
#include <complex>

#include "srpair/params.hpp"

namespace srpair {

// Two two-level emitters. Product basis, fixed ordering:
//   index 0 = |g1 g2>,  1 = |g1 e2>,  2 = |e1 g2>,  3 = |e1 e2>,
// i.e. index = 2 * (emitter 1 excited) + (emitter 2 excited). All 4x4
// operators and density matrices in the library use this ordering.
inline constexpr int kDim = 4;

enum BasisIndex : int { kGG = 0, kGE = 1, kEG = 2, kEE = 3 };

using Operator4 = Eigen::Matrix4cd;
using Density4 = Eigen::Matrix4cd;

// Lowering operator sigma_i^- for emitter 1 or 2 (argument is 1-based).
Operator4 lowering_operator(int emitter);

// Number operator sigma_i^+ sigma_i^- (projector onto emitter i excited).
Operator4 number_operator(int emitter);

// Hamiltonian divided by hbar, in rad/ns, for a splitting delta_uev between
// the two transition energies placed symmetrically about their mean:
//   H / hbar = (delta / 2) (n_1 - n_2),  delta = delta_uev / hbar.
Operator4 detuning_hamiltonian(double delta_uev);

// Collective jump operator of the shared waveguide channel,
//   Sigma = sqrt(gamma1) sigma_1^- + sqrt(gamma2) sigma_2^-.
// Emission through this operator interferes; emission through the
// individual side channels does not.
Operator4 collective_operator(double gamma1, double gamma2);

// Projector |i><i| onto one of the four basis states.
Density4 basis_state(BasisIndex i);

// Pure single-excitation state c_eg |e1 g2> + c_ge |g1 e2>, normalized.
Density4 single_excitation_state(std::complex<double> c_eg, std::complex<double> c_ge);

// Superradiant / subradiant combinations for the given rates: the bright
// state is the (normalized) image of Sigma^dagger acting on |g1 g2>, the
// dark state is its orthogonal complement in the single-excitation sector.
Density4 bright_state(double gamma1, double gamma2);
Density4 dark_state(double gamma1, double gamma2);

// Checks hermiticity, unit trace and positivity (up to tolerance); throws
// ValidationError on failure.
void validate_density(const Density4& rho, double tol = 1e-8);

}  // namespace srpair
