#pragma once

#include <Eigen/Dense>

#include "srpair/operators.hpp"
#include "srpair/params.hpp"

namespace srpair {

// Superoperators act on vectorized 4x4 matrices. Vectorization is column
// stacking: vec(rho)[i + 4 j] = rho(i, j), which matches Eigen's native
// column-major storage and gives the identity vec(A rho B) = (B^T kron A) vec(rho).
inline constexpr int kSuperDim = 16;

using Superoperator16 = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vec16 = Eigen::Matrix<std::complex<double>, 16, 1>;
using TraceRow16 = Eigen::Matrix<std::complex<double>, 1, 16>;

Vec16 vectorize(const Operator4& a);

// Inverse of vectorize. If the result deviates from hermiticity by more
// than 1e-8 (Frobenius norm of rho - rho^dagger) a warning is printed to
// stderr; the matrix is returned as-is either way.
Operator4 devectorize(const Vec16& v);

// vec(A rho) = left_multiplier(A) vec(rho);  vec(rho B) = right_multiplier(B) vec(rho).
Superoperator16 left_multiplier(const Operator4& a);
Superoperator16 right_multiplier(const Operator4& b);

// Lindblad dissipator D[O] rho = O rho O^dag - (1/2){O^dag O, rho} in
// vectorized form. The rate is carried inside the operator (O = sqrt(rate) A).
Superoperator16 dissipator(const Operator4& op);

// Row functional t with t * vec(rho) = tr(rho).
TraceRow16 trace_functional();

// Full generator of the dynamics:
//   L = -i [H/hbar, .]
//     + beta D[Sigma]                            (shared waveguide channel)
//     + (1-beta) D[sqrt(gamma_i) sigma_i^-]      (independent side channels)
//     + D[sqrt(gamma_d) sigma_i^+ sigma_i^-]     (pure dephasing)
//     + D[sqrt(gamma_nr) sigma_i^-]              (nonradiative decay)
//     + D[sqrt(gamma_p) sigma_i^+]               (only if with_pump)
// Sigma = sqrt(gamma1) sigma_1^- + sqrt(gamma2) sigma_2^-. Parameters are
// validated; the returned generator is checked to preserve the trace.
Superoperator16 build_liouvillian(const SystemParams& params, bool with_pump);

}  // namespace srpair
