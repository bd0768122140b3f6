#pragma once

#include <vector>

#include "types.hpp"

namespace kinsbp {

enum class VelocityKind {
  TwoVelocity,  // discrete set {-1, 1}, weights {1/2, 1/2}
  GaussLobatto, // n_v Gauss-Lobatto nodes on [-1, 1], weights normalized to 1
};

/// Velocity discretization realizing the normalized discrete average <.>_h.
///
/// Weights sum to one, the rule is symmetric (v_k = -v_{k'}, w_k = w_{k'} for
/// k + k' = n_v - 1 in zero-based indexing), and <v>_h = 0 exactly.
struct VelocitySpace {
  VelocityKind kind = VelocityKind::TwoVelocity;
  Vector v;       // velocity nodes in [-1, 1], increasing
  Vector w;       // normalized weights, sum = 1
  Vector v_plus;  // max(v, 0)
  Vector v_minus; // min(v, 0)

  int size() const { return static_cast<int>(v.size()); }

  // <coef * f>_h for scalar per-node values
  double average(const Vector& values) const;
  double weighted_average(const Vector& coef, const Vector& values) const;

  // componentwise <.>_h over one vector of nodal data per velocity node
  Vector average(const std::vector<Vector>& values) const;
  Vector weighted_average(const Vector& coef,
                          const std::vector<Vector>& values) const;

  double mean_v_squared() const { return weighted_average(v, v); }

  // index of the velocity partner under v -> -v
  int mirror(int k) const { return size() - 1 - k; }

  bool is_symmetric(double tol = 1e-14) const;
};

VelocitySpace build_velocity_space(VelocityKind kind, int n_v = 2);

} // namespace kinsbp
