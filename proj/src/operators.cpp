#include "srpair/operators.hpp"

#include <cmath>
#include <sstream>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

bool all_finite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void SystemParams::validate() const {
  if (!all_finite({gamma1, gamma2, beta, delta, gamma_d, gamma_p, gamma_nr})) {
    throw ValidationError("system parameters must be finite");
  }
  auto check_rate = [](double v, const char* name) {
    if (v < 0.0) {
      std::ostringstream msg;
      msg << name << " must be >= 0, got " << v;
      throw ValidationError(msg.str());
    }
  };
  check_rate(gamma1, "gamma1");
  check_rate(gamma2, "gamma2");
  check_rate(gamma_d, "gamma_d");
  check_rate(gamma_p, "gamma_p");
  check_rate(gamma_nr, "gamma_nr");
  if (beta < 0.0 || beta > 1.0) {
    std::ostringstream msg;
    msg << "beta must lie in [0, 1], got " << beta;
    throw ValidationError(msg.str());
  }
}

double SystemParams::max_rate() const {
  double r = std::abs(detuning_to_angular(delta));
  for (double v : {gamma1, gamma2, gamma_d, gamma_p, gamma_nr}) r = std::max(r, v);
  return r;
}

Operator4 lowering_operator(int emitter) {
  if (emitter != 1 && emitter != 2) {
    throw ValidationError("emitter index must be 1 or 2");
  }
  Operator4 op = Operator4::Zero();
  if (emitter == 1) {
    // sigma_1^-: |e1 x> -> |g1 x>, i.e. 2 -> 0 and 3 -> 1.
    op(kGG, kEG) = 1.0;
    op(kGE, kEE) = 1.0;
  } else {
    // sigma_2^-: |x e2> -> |x g2>, i.e. 1 -> 0 and 3 -> 2.
    op(kGG, kGE) = 1.0;
    op(kEG, kEE) = 1.0;
  }
  return op;
}

Operator4 number_operator(int emitter) {
  const Operator4 low = lowering_operator(emitter);
  return low.adjoint() * low;
}

Operator4 detuning_hamiltonian(double delta_uev) {
  if (!std::isfinite(delta_uev)) {
    throw ValidationError("detuning must be finite");
  }
  const double half = 0.5 * detuning_to_angular(delta_uev);
  Operator4 h = Operator4::Zero();
  h(kGE, kGE) = -half;  // emitter 2 excited, energy -delta/2
  h(kEG, kEG) = +half;  // emitter 1 excited, energy +delta/2
  return h;
}

Operator4 collective_operator(double gamma1, double gamma2) {
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw ValidationError("collective operator rates must be >= 0");
  }
  return std::sqrt(gamma1) * lowering_operator(1) + std::sqrt(gamma2) * lowering_operator(2);
}

Density4 basis_state(BasisIndex i) {
  Density4 rho = Density4::Zero();
  rho(i, i) = 1.0;
  return rho;
}

Density4 single_excitation_state(std::complex<double> c_eg, std::complex<double> c_ge) {
  const double norm2 = std::norm(c_eg) + std::norm(c_ge);
  if (norm2 <= 0.0) {
    throw ValidationError("single-excitation amplitudes must not both vanish");
  }
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(kEG) = c_eg / std::sqrt(norm2);
  psi(kGE) = c_ge / std::sqrt(norm2);
  return psi * psi.adjoint();
}

Density4 bright_state(double gamma1, double gamma2) {
  return single_excitation_state(std::sqrt(gamma1), std::sqrt(gamma2));
}

Density4 dark_state(double gamma1, double gamma2) {
  return single_excitation_state(std::sqrt(gamma2), -std::sqrt(gamma1));
}

void validate_density(const Density4& rho, double tol) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    std::ostringstream msg;
    msg << "density operator not Hermitian (defect " << herm << ")";
    throw ValidationError(msg.str());
  }
  const double trace_defect = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
  if (trace_defect > tol) {
    std::ostringstream msg;
    msg << "density operator trace deviates from 1 by " << trace_defect;
    throw ValidationError(msg.str());
  }
  // Eigenvalues of the Hermitian part; tiny negatives are roundoff.
  Eigen::SelfAdjointEigenSolver<Density4> es((0.5 * (rho + rho.adjoint())).eval());
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -10.0 * tol - 1e-9) {
    std::ostringstream msg;
    msg << "density operator not positive semidefinite (min eigenvalue " << min_eig << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace srpair
