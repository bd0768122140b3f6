#pragma once

#include <optional>
#include <vector>

#include "problems.hpp"
#include "slab.hpp"
#include "types.hpp"
#include "velocity.hpp"

namespace kinsbp {

/// Nodal L-infinity errors against the problem's exact solution at time t.
struct ErrorReport {
  double err_rho = 0.0;
  double err_g = 0.0; // max over velocity nodes of the spatial L-inf error
  int elements = 0;   // K
  int nodes = 0;      // N
  double epsilon = 0.0;
};

ErrorReport compute_errors(const std::vector<SlabSolution>& solutions,
                           const ProblemSpec& problem,
                           const VelocitySpace& vspace, double t = 1.0);

struct ConvergenceRow {
  ErrorReport report;
  std::optional<double> order_rho; // empty on the first row or for zero errors
  std::optional<double> order_g;
};

/// Orders between consecutive rows of a K-refinement sweep:
/// log(e_i / e_{i+1}) / log(K_{i+1} / K_i).
std::vector<ConvergenceRow>
convergence_orders(const std::vector<ErrorReport>& reports);

/// Terms of the discrete energy identity of one slab, evaluated on the
/// computed solution. The identity reads
///   top = bottom - damping_rho - damping_g + sat_work_time
///         + forcing_work + mean_coupling_work + b_lr
/// with b_lr = 0 for periodic boundaries; `residual` is the defect.
struct EnergyLedger {
  double t_start = 0.0;
  double t_end = 0.0;
  double top_energy = 0.0;
  double bottom_energy = 0.0;
  double damping_rho = 0.0;
  double damping_g = 0.0;
  double init_mismatch_rho = 0.0; // (1/2)|rho_bot - data|_Hx^2
  double init_mismatch_g = 0.0;   // (eps^2/2)<|g_bot - data|_Hx^2>
  double sat_work_time = 0.0;
  double forcing_work = 0.0;
  double mean_coupling_work = 0.0;
  double b_lr = 0.0;
  double residual = 0.0;
  double residual_scale = 0.0;

  double relative_residual() const {
    return residual / (residual_scale > 0.0 ? residual_scale : 1.0);
  }
};

EnergyLedger energy_ledger(const SlabSolution& solution,
                           const ProblemSpec& problem,
                           const VelocitySpace& vspace);

/// Closed-form boundary quadratic form of the Dirichlet stability estimate
/// for homogeneous data:
///   (1/2eps)<v^-(rho+eps g)^2>|_L - (1/2eps)<v^+(rho+eps g)^2>|_R,
/// each face contribution non-positive. Must equal the SAT-work form of the
/// ledger whenever <g>_h = 0 and the data are homogeneous.
double dirichlet_boundary_form(const SlabSolution& solution, double epsilon,
                               const VelocitySpace& vspace,
                               const Vector& ht_weights);

struct MeanGReport {
  double defect = 0.0; // max over space-time nodes of |<g>_h|
  double g_max = 0.0;  // max over velocity nodes of |g|_inf
};

MeanGReport mean_g_defect(const std::vector<SlabSolution>& solutions,
                          const VelocitySpace& vspace);

/// L-infinity gap between two rho fields at their shared final time.
double ap_gap(const std::vector<SlabSolution>& kinetic,
              const std::vector<SlabSolution>& limit);

} // namespace kinsbp
