#include "srpair/dynamics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

using Cplx = std::complex<double>;

// Cheap positive-real-part guard: generators of dissipative dynamics must
// not have growing modes. Tiny positive parts are eigensolver roundoff.
void check_spectrum_stable(const Eigen::Matrix<Cplx, 16, 1>& eigenvalues) {
  for (int i = 0; i < kSuperDim; ++i) {
    if (eigenvalues(i).real() > 1e-8) {
      std::ostringstream msg;
      msg << "generator has a growing mode (eigenvalue real part " << eigenvalues(i).real()
          << ")";
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace

SpectralDecomposition decompose(const Superoperator16& liouvillian) {
  SpectralDecomposition dec;
  dec.liouvillian = liouvillian;

  Eigen::ComplexEigenSolver<Superoperator16> solver(liouvillian, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    dec.expm_fallback = true;
    dec.condition_estimate = std::numeric_limits<double>::infinity();
    return dec;
  }
  dec.eigenvalues = solver.eigenvalues();
  dec.right_vectors = solver.eigenvectors();
  check_spectrum_stable(dec.eigenvalues);

  // Condition of the eigenvector basis decides whether the decomposition
  // can be trusted. Defective generators (Jordan blocks, e.g. two identical
  // emitters decaying purely collectively) show up as a huge condition
  // number; for those we fall back to a scaling-and-squaring exponential
  // per requested time instead of silently losing accuracy.
  Eigen::JacobiSVD<Superoperator16> svd(dec.right_vectors,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(kSuperDim - 1);
  dec.condition_estimate = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (!std::isfinite(dec.condition_estimate) || dec.condition_estimate > 1e8) {
    dec.expm_fallback = true;
    return dec;
  }

  dec.left_vectors = svd.solve(Superoperator16::Identity());

  // Reconstruction check: R diag(lambda) R^{-1} must reproduce L.
  const Superoperator16 rebuilt =
      dec.right_vectors * dec.eigenvalues.asDiagonal() * dec.left_vectors;
  const double scale = std::max(1.0, liouvillian.norm());
  if ((rebuilt - liouvillian).norm() / scale >= 1e-8) {
    dec.expm_fallback = true;
  }
  return dec;
}

Operator4 apply_propagator(const SpectralDecomposition& dec, const Operator4& seed, double t) {
  if (!(t >= 0.0)) {
    throw ValidationError("propagation time must be >= 0");
  }
  const Vec16 v = vectorize(seed);
  Vec16 out;
  if (dec.expm_fallback) {
    out = (dec.liouvillian * t).exp() * v;
  } else {
    Vec16 coeff = dec.left_vectors * v;
    for (int i = 0; i < kSuperDim; ++i) coeff(i) *= std::exp(dec.eigenvalues(i) * t);
    out = dec.right_vectors * coeff;
  }
  return Eigen::Map<const Operator4>(out.data());
}

std::vector<Operator4> regression_evolve(const SpectralDecomposition& dec, const Operator4& seed,
                                         const std::vector<double>& taus) {
  std::vector<Operator4> out;
  out.reserve(taus.size());
  for (double tau : taus) out.push_back(apply_propagator(dec, seed, tau));
  return out;
}

std::vector<Density4> propagate(const SpectralDecomposition& dec, const Density4& rho0,
                                const std::vector<double>& times) {
  validate_density(rho0);
  std::vector<Density4> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) {
      throw ValidationError("propagation times must be >= 0");
    }
    Density4 rho = apply_propagator(dec, rho0, t);

    // Roundoff hygiene before enforcing the state invariants: symmetrize
    // and renormalize when the defects are clearly numerical noise; abort
    // with a diagnostic when they are not.
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const double trace_defect = std::abs(rho.trace() - Cplx(1.0, 0.0));
    if (herm > 1e-8 || trace_defect > 1e-8) {
      std::ostringstream msg;
      msg << "propagated state violates invariants at t = " << t << " (hermiticity " << herm
          << ", trace defect " << trace_defect << ")";
      throw NumericalError(msg.str());
    }
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    validate_density(rho);
    out.push_back(rho);
  }
  return out;
}

SteadyState steady_state(const Superoperator16& liouvillian) {
  // Kernel dimension from the singular spectrum; more than one vanishing
  // singular value means the stationary state is not unique (no pump, no
  // mixing) and the physical long-time limit is the ground state.
  Eigen::JacobiSVD<Superoperator16> svd(liouvillian);
  const double smax = svd.singularValues()(0);
  const double tol = 1e-10 * std::max(1.0, smax);
  int kernel_dim = 0;
  for (int i = 0; i < kSuperDim; ++i) {
    if (svd.singularValues()(i) < tol) ++kernel_dim;
  }

  SteadyState result;
  if (kernel_dim != 1) {
    result.rho = basis_state(kGG);
    result.unique = false;
    result.residual = (liouvillian * vectorize(result.rho)).norm();
    return result;
  }

  // Bordered least squares: minimize ||L x|| subject to trace one, solved
  // as the 17x16 system [L; trace_row] x = e_last.
  Eigen::Matrix<Cplx, 17, 16> bordered;
  bordered.topRows<16>() = liouvillian;
  bordered.bottomRows<1>() = trace_functional();
  Eigen::Matrix<Cplx, 17, 1> rhs = Eigen::Matrix<Cplx, 17, 1>::Zero();
  rhs(16) = 1.0;
  Vec16 x = bordered.colPivHouseholderQr().solve(rhs);

  Density4 rho = Eigen::Map<const Operator4>(x.data());
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  result.rho = rho;
  result.unique = true;
  result.residual = (liouvillian * vectorize(rho)).norm();
  if (result.residual > 1e-10) {
    std::ostringstream msg;
    msg << "steady-state residual " << result.residual << " exceeds 1e-10";
    throw NumericalError(msg.str());
  }
  validate_density(result.rho);
  return result;
}

}  // namespace srpair
