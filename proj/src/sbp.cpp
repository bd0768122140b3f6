#include "sbp.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace kinsbp {

namespace {

// Legendre P_m(x) and P_m'(x) by the three-term recurrence.
void legendre(int m, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (m == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < m; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  if (x == 1.0 || x == -1.0) {
    const double sign = (x > 0.0 || m % 2 == 1) ? 1.0 : -1.0;
    dp = sign * 0.5 * m * (m + 1.0);
  } else {
    dp = m * (x * p1 - p0) / (x * x - 1.0);
  }
}

} // namespace

void gauss_lobatto_rule(int n, Vector& nodes, Vector& weights) {
  require(n >= 2, ErrorKind::InvalidArgument,
          "gauss_lobatto_rule: need at least 2 nodes, got " + std::to_string(n));

  nodes.resize(n);
  weights.resize(n);
  const int m = n - 1; // interior nodes are the roots of P_m'
  nodes(0) = -1.0;
  nodes(n - 1) = 1.0;

  constexpr double tol = 1e-14;
  constexpr int max_iter = 100;
  for (int i = 1; i < n - 1; ++i) {
    // Chebyshev-Lobatto starting guess
    double x = -std::cos(M_PI * i / m);
    for (int it = 0; it < max_iter; ++it) {
      double p, dp;
      legendre(m, x, p, dp);
      // Newton on P_m'; P_m'' from the Legendre ODE
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < tol) break;
    }
    nodes(i) = x;
  }

  // enforce exact symmetry of the node set
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (nodes(i) - nodes(n - 1 - i));
    nodes(i) = s;
    nodes(n - 1 - i) = -s;
  }
  if (n % 2 == 1) nodes(n / 2) = 0.0;

  for (int i = 0; i < n; ++i) {
    double p, dp;
    legendre(m, nodes(i), p, dp);
    weights(i) = 2.0 / (m * n * p * p);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (weights(i) + weights(n - 1 - i));
    weights(i) = w;
    weights(n - 1 - i) = w;
  }
}

Matrix SbpOperator1D::boundary_matrix() const {
  return tR * tR.transpose() - tL * tL.transpose();
}

Matrix SbpOperator1D::skew_part() const { return 0.5 * (Q - Q.transpose()); }

SbpOperator1D build_glb_sbp(int n) {
  SbpOperator1D op;
  gauss_lobatto_rule(n, op.nodes, op.h);
  op.degree = n - 1;
  op.a = -1.0;
  op.b = 1.0;

  // barycentric weights of the nodal interpolant
  Vector lambda = Vector::Ones(n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m != j) lambda(j) /= (op.nodes(j) - op.nodes(m));
    }
  }
  op.D = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      op.D(i, j) = (lambda(j) / lambda(i)) / (op.nodes(i) - op.nodes(j));
      row_sum += op.D(i, j);
    }
    op.D(i, i) = -row_sum; // exact annihilation of constants
  }

  op.Q = op.h.asDiagonal() * op.D;
  op.tL = Vector::Zero(n);
  op.tR = Vector::Zero(n);
  op.tL(0) = 1.0;
  op.tR(n - 1) = 1.0;
  return op;
}

SbpOperator1D scale_to_interval(const SbpOperator1D& op, double a, double b) {
  require(b > a, ErrorKind::InvalidArgument,
          "scale_to_interval: need b > a");
  const double jac = (b - a) / (op.b - op.a);
  SbpOperator1D out = op;
  out.a = a;
  out.b = b;
  for (int i = 0; i < op.size(); ++i) {
    out.nodes(i) = a + (op.nodes(i) - op.a) * jac;
  }
  out.nodes(0) = a;
  out.nodes(op.size() - 1) = b;
  out.h = op.h * jac;
  out.D = op.D / jac;
  // Q = H D is invariant under the affine map
  return out;
}

double SbpVerification::max_exactness_error() const {
  double m = 0.0;
  for (double e : exactness_error) m = std::max(m, e);
  return m;
}

std::string SbpVerification::to_table() const {
  std::ostringstream os;
  os << "degree  max|D x^k - k x^(k-1)|\n";
  for (std::size_t k = 0; k < exactness_error.size(); ++k) {
    os << "  " << k << "     " << exactness_error[k] << "\n";
  }
  os << "symmetry defect max|Q + Q^T - E| = " << symmetry_defect << "\n";
  os << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

SbpVerification verify_sbp(const SbpOperator1D& op) {
  const int n = op.size();
  SbpVerification rep;

  const Matrix defect =
      op.Q + op.Q.transpose() - op.boundary_matrix();
  rep.symmetry_defect = defect.cwiseAbs().maxCoeff();

  // exactness in reference coordinates: xi in [-1,1], Dhat = (b-a)/2 * D
  Vector xi(n);
  for (int i = 0; i < n; ++i) {
    xi(i) = (2.0 * op.nodes(i) - op.a - op.b) / (op.b - op.a);
  }
  const Matrix Dhat = 0.5 * (op.b - op.a) * op.D;

  rep.exactness_error.resize(op.degree + 1);
  Vector xk = Vector::Ones(n);
  Vector xkm1 = Vector::Zero(n);
  for (int k = 0; k <= op.degree; ++k) {
    const Vector err = Dhat * xk - double(k) * xkm1;
    rep.exactness_error[k] = err.cwiseAbs().maxCoeff();
    xkm1 = xk;
    xk = xk.cwiseProduct(xi);
  }

  rep.pass = rep.symmetry_defect <= SbpVerification::symmetry_tol &&
             rep.max_exactness_error() <= SbpVerification::exactness_tol;
  return rep;
}

} // namespace kinsbp
