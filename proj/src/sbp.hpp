#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace kinsbp {

/// Diagonal-norm first-derivative SBP operator on a nodal set over [a, b].
///
/// The defining properties are D = H^{-1} Q with H diagonal positive,
/// Q + Q^T = E = tR tR^T - tL tL^T, and D x^k = k x^{k-1} for k <= degree.
struct SbpOperator1D {
  Vector nodes;   // strictly increasing; nodes(0) = a, nodes(n-1) = b
  Vector h;       // diagonal of the norm matrix H
  Matrix Q;       // H * D
  Matrix D;
  Vector tL, tR;  // boundary selector vectors (pick first/last nodal value)
  int degree = 0; // polynomial exactness degree p
  double a = -1.0;
  double b = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }
  Matrix boundary_matrix() const; // E = tR tR^T - tL tL^T
  Matrix skew_part() const;       // S = (Q - Q^T) / 2, so Q = S + E/2
};

/// Gauss-Lobatto quadrature on [-1, 1]: n >= 2 nodes including the endpoints,
/// exact for polynomials of degree <= 2n-3. Weights sum to 2.
void gauss_lobatto_rule(int n, Vector& nodes, Vector& weights);

/// Gauss-Lobatto collocation SBP operator on [-1, 1] with n nodes:
/// H carries the quadrature weights, D differentiates the degree-(n-1)
/// nodal interpolant exactly, and degree = n - 1.
SbpOperator1D build_glb_sbp(int n);

/// Affine transplant of an operator onto [a, b]. H picks up the Jacobian,
/// D the inverse Jacobian; Q is scale-invariant.
SbpOperator1D scale_to_interval(const SbpOperator1D& op, double a, double b);

struct SbpVerification {
  // exactness_error[k]: max nodal error of D x^k - k x^{k-1}, evaluated in
  // reference coordinates on [-1, 1] so thresholds are interval-independent.
  std::vector<double> exactness_error;
  double symmetry_defect = 0.0; // max entry of |Q + Q^T - E|
  bool pass = false;

  static constexpr double exactness_tol = 1e-12;
  static constexpr double symmetry_tol = 1e-13;

  double max_exactness_error() const;
  std::string to_table() const;
};

SbpVerification verify_sbp(const SbpOperator1D& op);

} // namespace kinsbp
