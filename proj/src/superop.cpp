#include "srpair/superop.hpp"

#include <complex>

#include <unsupported/Eigen/KroneckerProduct>

#include "srpair/errors.hpp"

namespace srpair {

namespace {

using Cplx = std::complex<double>;

Superoperator16 kron(const Operator4& a, const Operator4& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace

Vec16 vectorize(const Operator4& a) {
  // Column stacking: Eigen stores column-major, so a flat copy is exactly
  // vec(a)[i + 4 j] = a(i, j).
  return Eigen::Map<const Vec16>(a.data());
}

Operator4 devectorize(const Vec16& v) {
  // Inverse of the column stacking; valid for any operator, Hermitian or not.
  return Eigen::Map<const Operator4>(v.data());
}

Superoperator16 left_multiplier(const Operator4& a) {
  return kron(Operator4::Identity(), a);
}

Superoperator16 right_multiplier(const Operator4& b) {
  return kron(b.transpose(), Operator4::Identity());
}

Superoperator16 dissipator(const Operator4& op) {
  // D[O] rho = O rho O^dag - (1/2){O^dag O, rho}, vectorized with the
  // column-stacking identity vec(A rho B) = (B^T kron A) vec(rho).
  const Operator4 odo = op.adjoint() * op;
  Superoperator16 d = kron(op.conjugate(), op);
  d -= 0.5 * left_multiplier(odo);
  d -= 0.5 * right_multiplier(odo);
  return d;
}

TraceRow16 trace_functional() {
  TraceRow16 t = TraceRow16::Zero();
  for (int i = 0; i < kDim; ++i) t(i + kDim * i) = 1.0;
  return t;
}

Superoperator16 build_liouvillian(const SystemParams& params, bool with_pump) {
  params.validate();

  const Operator4 h = detuning_hamiltonian(params.delta);
  const Cplx i_unit(0.0, 1.0);
  Superoperator16 lv = -i_unit * (left_multiplier(h) - right_multiplier(h));

  // Radiative decay: a beta fraction through the interfering collective
  // channel, the rest through independent side channels.
  lv += params.beta * dissipator(collective_operator(params.gamma1, params.gamma2));
  lv += (1.0 - params.beta) * dissipator(std::sqrt(params.gamma1) * lowering_operator(1));
  lv += (1.0 - params.beta) * dissipator(std::sqrt(params.gamma2) * lowering_operator(2));

  // Pure dephasing on each emitter.
  if (params.gamma_d > 0.0) {
    const double amp = std::sqrt(params.gamma_d);
    lv += dissipator(amp * number_operator(1));
    lv += dissipator(amp * number_operator(2));
  }

  // Nonradiative decay bypasses the waveguide entirely, so it is a plain
  // individual channel, never part of the collective operator.
  if (params.gamma_nr > 0.0) {
    const double amp = std::sqrt(params.gamma_nr);
    lv += dissipator(amp * lowering_operator(1));
    lv += dissipator(amp * lowering_operator(2));
  }

  if (with_pump && params.gamma_p > 0.0) {
    const double amp = std::sqrt(params.gamma_p);
    lv += dissipator(amp * lowering_operator(1).adjoint());
    lv += dissipator(amp * lowering_operator(2).adjoint());
  }

  // Any Lindblad generator must annihilate the trace from the left.
  const double residual = (trace_functional() * lv).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw NumericalError("assembled generator does not preserve the trace");
  }
  return lv;
}

}  // namespace srpair
