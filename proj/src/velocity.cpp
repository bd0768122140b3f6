#include "velocity.hpp"

#include <cmath>

#include "errors.hpp"
#include "sbp.hpp"

namespace kinsbp {

VelocitySpace build_velocity_space(VelocityKind kind, int n_v) {
  VelocitySpace vs;
  vs.kind = kind;
  if (kind == VelocityKind::TwoVelocity) {
    vs.v = Vector(2);
    vs.v << -1.0, 1.0;
    vs.w = Vector::Constant(2, 0.5);
  } else {
    require(n_v >= 2, ErrorKind::InvalidArgument,
            "build_velocity_space: Gauss-Lobatto needs n_v >= 2");
    gauss_lobatto_rule(n_v, vs.v, vs.w);
    vs.w *= 0.5; // probability normalization, <1>_h = 1
  }
  const int n = vs.size();
  vs.v_plus.resize(n);
  vs.v_minus.resize(n);
  for (int k = 0; k < n; ++k) {
    vs.v_plus(k) = std::max(vs.v(k), 0.0);
    vs.v_minus(k) = std::min(vs.v(k), 0.0);
  }
  return vs;
}

double VelocitySpace::average(const Vector& values) const {
  require(values.size() == v.size(), ErrorKind::InvalidArgument,
          "velocity average: one value per velocity node required");
  return w.dot(values);
}

double VelocitySpace::weighted_average(const Vector& coef,
                                       const Vector& values) const {
  require(coef.size() == v.size() && values.size() == v.size(),
          ErrorKind::InvalidArgument,
          "velocity weighted_average: size mismatch");
  return w.cwiseProduct(coef).dot(values);
}

Vector VelocitySpace::average(const std::vector<Vector>& values) const {
  return weighted_average(Vector::Ones(size()), values);
}

Vector VelocitySpace::weighted_average(const Vector& coef,
                                       const std::vector<Vector>& values) const {
  require(static_cast<int>(values.size()) == size(), ErrorKind::InvalidArgument,
          "velocity weighted_average: one vector per velocity node required");
  require(coef.size() == v.size(), ErrorKind::InvalidArgument,
          "velocity weighted_average: coefficient size mismatch");
  const Eigen::Index len = values.empty() ? 0 : values.front().size();
  Vector out = Vector::Zero(len);
  for (int k = 0; k < size(); ++k) {
    require(values[k].size() == len, ErrorKind::InvalidArgument,
            "velocity weighted_average: value vectors must share length");
    out += w(k) * coef(k) * values[k];
  }
  return out;
}

bool VelocitySpace::is_symmetric(double tol) const {
  for (int k = 0; k < size(); ++k) {
    const int km = mirror(k);
    if (std::abs(v(k) + v(km)) > tol) return false;
    if (std::abs(w(k) - w(km)) > tol) return false;
  }
  return true;
}

} // namespace kinsbp
