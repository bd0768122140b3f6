#pragma once

#include "types.hpp"
#include "velocity.hpp"

namespace kinsbp {

/// Diagonalization of the flux matrix of the associated linear hyperbolic
/// system u_t + A u_x = 0 in the variables u = [rho; g_1; ...; g_nv].
/// A = X Lambda X^{-1} with Lambda = diag(0, v_1/eps, ..., v_nv/eps).
struct HyperbolicDiag {
  Matrix A;
  Matrix X;
  Matrix Xinv;
  Vector lambda;
  Vector theta; // theta_k = (1 - w_k) / w_k

  static constexpr double check_tol = 1e-12;
};

Matrix build_flux_matrix(const VelocitySpace& vspace, double epsilon);

/// Fills X, X^{-1}, Lambda from their closed forms and verifies
/// |X X^{-1} - I| and |A - X Lambda X^{-1}| at build time.
HyperbolicDiag build_diagonalization(const VelocitySpace& vspace,
                                     double epsilon);

struct BoundaryConditionCount {
  int n_left = 0;  // characteristics entering from the left (v_k > 0)
  int n_right = 0; // characteristics entering from the right (v_k < 0)
  int n_none = 0;  // zero-speed characteristics needing no condition
};

BoundaryConditionCount boundary_condition_count(const VelocitySpace& vspace);

/// Characteristic variables z = X^{-1} [rho; g_1; ...; g_nv]:
/// z^1 = <g>_h and z^{k+1} = w_k (rho/eps + g_k).
Vector characteristic_variables(const HyperbolicDiag& diag, const Vector& u);

} // namespace kinsbp
