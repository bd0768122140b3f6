#include "problems.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinsbp {

namespace {

double zero_of_x(double) { return 0.0; }
double one_of_x(double) { return 1.0; }

} // namespace

double manufactured_rate(double epsilon) {
  require(epsilon > 0.0 && epsilon <= 0.5, ErrorKind::InvalidArgument,
          "manufactured_rate: need 0 < epsilon <= 1/2 for a real rate");
  return -2.0 / (1.0 + std::sqrt(1.0 - 4.0 * epsilon * epsilon));
}

ProblemSpec manufactured_problem(double epsilon, const VelocitySpace& vspace) {
  const double r = manufactured_rate(epsilon);
  const double vs2 = vspace.mean_v_squared();

  ProblemSpec p;
  p.epsilon = epsilon;
  p.sigma_s = one_of_x;
  p.sigma_a = zero_of_x;
  p.x_left = -M_PI;
  p.x_right = M_PI;
  p.final_time = 1.0;
  p.bc = BoundaryKind::Periodic;
  p.exact_rho = [r](double x, double t) { return std::exp(r * t) * std::sin(x) / r; };
  p.exact_g = [r](double x, double v, double t) {
    return v * std::exp(r * t) * std::cos(x);
  };
  p.rho0 = [p_exact = p.exact_rho](double x) { return p_exact(x, 0.0); };
  p.g0 = [p_exact = p.exact_g](double x, double v) { return p_exact(x, v, 0.0); };
  p.forcing_rho = [r, vs2](double x, double t) {
    return (1.0 - vs2) * std::exp(r * t) * std::sin(x);
  };
  p.forcing_g = [r, vs2, epsilon](double x, double v, double t) {
    return (vs2 - v * v) * std::exp(r * t) * std::sin(x) / epsilon;
  };
  p.report_times = {1.0};
  return p;
}

ProblemSpec variable_scattering_problem() {
  ProblemSpec p;
  p.epsilon = 1e-2;
  p.sigma_s = [](double x) { return 1.0 + 100.0 * x * x; };
  p.sigma_a = zero_of_x;
  p.x_left = 0.0;
  p.x_right = 1.0;
  p.final_time = 0.4;
  p.bc = BoundaryKind::Dirichlet;
  p.f_left = [](double) { return 0.0; };
  p.f_right = [](double) { return 0.0; };
  p.rho0 = zero_of_x;
  p.g0 = [](double, double) { return 0.0; };
  // the unit source G enters the macro equation; its (I - Pi) projection
  // vanishes, so the micro forcing is zero
  p.forcing_rho = [](double, double) { return 1.0; };
  p.forcing_g = [](double, double, double) { return 0.0; };
  p.report_times = {0.4};
  return p;
}

ProblemSpec dirichlet_decay_problem() {
  ProblemSpec p = variable_scattering_problem();
  p.forcing_rho = [](double, double) { return 0.0; };
  p.rho0 = [](double x) { return std::sin(M_PI * x); };
  p.report_times.clear();
  return p;
}

ProblemSpec inhomogeneous_dirichlet_problem(double epsilon) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument,
          "inhomogeneous_dirichlet_problem: epsilon must be positive");
  ProblemSpec p;
  p.epsilon = epsilon;
  p.sigma_s = one_of_x;
  p.sigma_a = zero_of_x;
  p.x_left = 0.0;
  p.x_right = 1.0;
  p.final_time = 4.0;
  p.bc = BoundaryKind::Dirichlet;
  p.f_left = [](double) { return 1.0; };
  p.f_right = [](double) { return 0.0; };
  p.rho0 = zero_of_x;
  p.g0 = [](double, double) { return 0.0; };
  p.forcing_rho = [](double, double) { return 0.0; };
  p.forcing_g = [](double, double, double) { return 0.0; };
  p.report_times = {0.1, 0.4, 1.0, 1.6, 4.0};
  return p;
}

} // namespace kinsbp
