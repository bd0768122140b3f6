#pragma once

#include <functional>
#include <vector>

#include "types.hpp"
#include "velocity.hpp"

namespace kinsbp {

enum class BoundaryKind { Periodic, Dirichlet };

/// One instance of the micro-macro transport model
///   d_t rho + d_x<v g>                                = -sigma_a rho + F_rho
///   d_t g + (v/eps)(d_x g - <v d_x g>) + (v/eps^2) d_x rho
///                           = -(sigma_s/eps^2 + sigma_a) g + F_g
/// with initial data, boundary data, and (optionally) an exact solution.
struct ProblemSpec {
  double epsilon = 1.0;
  std::function<double(double)> sigma_s; // of x, > 0
  std::function<double(double)> sigma_a; // of x, >= 0
  double x_left = 0.0;
  double x_right = 1.0;
  double final_time = 1.0;
  BoundaryKind bc = BoundaryKind::Periodic;
  std::function<double(double)> f_left;  // Dirichlet data for v > 0
  std::function<double(double)> f_right; // Dirichlet data for v < 0
  std::function<double(double)> rho0;
  std::function<double(double, double)> g0;          // (x, v); must have <g0>_h = 0
  std::function<double(double, double)> forcing_rho; // (x, t)
  std::function<double(double, double, double)> forcing_g; // (x, v, t)
  std::function<double(double, double)> exact_rho;          // (x, t), optional
  std::function<double(double, double, double)> exact_g;    // (x, v, t), optional
  std::vector<double> report_times;

  bool has_exact() const { return static_cast<bool>(exact_rho); }
};

/// Decay rate of the manufactured solution, r = -2 / (1 + sqrt(1 - 4 eps^2)).
double manufactured_rate(double epsilon);

/// Smooth periodic problem with exact solution
///   rho(x,t) = (1/r) e^{rt} sin x,   g(x,v,t) = v e^{rt} cos x
/// on [-pi, pi] with sigma_s = 1, sigma_a = 0, driven by
///   F_rho = (1 - <v^2>) e^{rt} sin x,
///   F_g   = (1/eps)(<v^2> - v^2) e^{rt} sin x,
/// where <v^2> is the discrete average of the given velocity space.
/// Requires 0 < eps <= 1/2 so that r is real.
ProblemSpec manufactured_problem(double epsilon, const VelocitySpace& vspace);

/// Variable scattering sigma_s(x) = 1 + 100 x^2 on [0,1] with eps = 1e-2,
/// homogeneous inflow data, zero initial data, and unit source in the macro
/// equation. Profiles are reported at t = 0.4.
ProblemSpec variable_scattering_problem();

/// Source-free variant of the variable-scattering problem with a nonzero
/// initial bump rho0(x) = sin(pi x); its energy decays monotonically, which
/// makes it the stability test for the Dirichlet boundary treatment.
ProblemSpec dirichlet_decay_problem();

/// Inflow problem on [0,1]: sigma_s = 1, sigma_a = 0, zero initial data,
/// f_L(v) = 1 for v > 0 and f_R(v) = 0 for v < 0. Profiles are reported at
/// t in {0.1, 0.4, 1.0, 1.6, 4.0}.
ProblemSpec inhomogeneous_dirichlet_problem(double epsilon);

} // namespace kinsbp
