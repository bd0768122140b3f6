#include "diag_system.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinsbp {

Matrix build_flux_matrix(const VelocitySpace& vspace, double epsilon) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument,
          "build_flux_matrix: epsilon must be positive");
  const int nv = vspace.size();
  Matrix A = Matrix::Zero(nv + 1, nv + 1);
  for (int k = 0; k < nv; ++k) {
    A(0, 1 + k) = vspace.w(k) * vspace.v(k);
    A(1 + k, 0) = vspace.v(k) / (epsilon * epsilon);
    for (int l = 0; l < nv; ++l) {
      A(1 + k, 1 + l) = (l == k ? (1.0 - vspace.w(k)) * vspace.v(k)
                                : -vspace.w(l) * vspace.v(l)) /
                        epsilon;
    }
  }
  return A;
}

HyperbolicDiag build_diagonalization(const VelocitySpace& vspace,
                                     double epsilon) {
  const int nv = vspace.size();
  for (int k = 0; k < nv; ++k) {
    require(vspace.w(k) > 0.0, ErrorKind::InvalidArgument,
            "build_diagonalization: weights must be positive");
  }

  HyperbolicDiag d;
  d.A = build_flux_matrix(vspace, epsilon);
  d.lambda = Vector::Zero(nv + 1);
  d.theta = Vector::Zero(nv);
  d.X = Matrix::Zero(nv + 1, nv + 1);
  d.Xinv = Matrix::Zero(nv + 1, nv + 1);

  for (int k = 0; k < nv; ++k) {
    d.lambda(1 + k) = vspace.v(k) / epsilon;
    d.theta(k) = (1.0 - vspace.w(k)) / vspace.w(k);
  }

  d.X(0, 0) = -epsilon;
  for (int k = 0; k < nv; ++k) d.X(0, 1 + k) = epsilon;
  for (int k = 0; k < nv; ++k) {
    d.X(1 + k, 0) = 1.0;
    for (int l = 0; l < nv; ++l) d.X(1 + k, 1 + l) = (l == k) ? d.theta(k) : -1.0;
  }

  for (int k = 0; k < nv; ++k) {
    d.Xinv(0, 1 + k) = vspace.w(k);
    d.Xinv(1 + k, 0) = vspace.w(k) / epsilon;
    d.Xinv(1 + k, 1 + k) = vspace.w(k);
  }

  const double inv_defect =
      (d.X * d.Xinv - Matrix::Identity(nv + 1, nv + 1)).cwiseAbs().maxCoeff();
  const Matrix recomposed = d.X * d.lambda.asDiagonal() * d.Xinv;
  const double sim_defect = (d.A - recomposed).cwiseAbs().maxCoeff() /
                            (1.0 + d.A.cwiseAbs().maxCoeff());
  require(inv_defect <= HyperbolicDiag::check_tol &&
              sim_defect <= HyperbolicDiag::check_tol,
          ErrorKind::InvalidState,
          "build_diagonalization: closed-form matrices failed verification");
  return d;
}

BoundaryConditionCount boundary_condition_count(const VelocitySpace& vspace) {
  BoundaryConditionCount c;
  c.n_none = 1; // the lambda = 0 characteristic of the macro variable
  for (int k = 0; k < vspace.size(); ++k) {
    if (vspace.v(k) > 0.0) {
      ++c.n_left;
    } else if (vspace.v(k) < 0.0) {
      ++c.n_right;
    } else {
      ++c.n_none;
    }
  }
  return c;
}

Vector characteristic_variables(const HyperbolicDiag& diag, const Vector& u) {
  require(u.size() == diag.X.rows(), ErrorKind::InvalidArgument,
          "characteristic_variables: state size mismatch");
  return diag.Xinv * u;
}

} // namespace kinsbp
