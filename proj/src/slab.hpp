#pragma once

#include <optional>
#include <vector>

#include "operators.hpp"
#include "problems.hpp"
#include "sbp.hpp"
#include "types.hpp"
#include "velocity.hpp"

namespace kinsbp {

enum class DtRule {
  MatchElements, // one slab per spatial element, width T / K
  TenDx,         // slab width 10 * element width, capped at T
  Explicit,      // `slabs` uniform slabs
};

struct RunConfig {
  int elements = 5; // K
  int nodes = 3;    // N: Gauss-Lobatto nodes per element and per slab
  int time_nodes = 0; // override for nodes per slab; 0 means use `nodes`
  VelocitySpace vspace = build_velocity_space(VelocityKind::GaussLobatto, 16);
  DtRule dt_rule = DtRule::MatchElements;
  int slabs = 1;            // used when dt_rule == Explicit
  double final_time = -1.0; // <= 0: use the problem's final time

  int nodes_per_slab() const { return time_nodes > 0 ? time_nodes : nodes; }
  void validate() const;
};

/// Grid and operators shared by every slab of a given width.
struct Discretization {
  std::vector<SbpOperator1D> space_ops; // per element, on its x-interval
  SbpOperator1D time_op;                // on [0, slab_width]
  PeriodicSpatialOp periodic;           // set when the problem is periodic
  OpenSpatialOp open;                   // set for Dirichlet boundaries
  bool periodic_bc = true;
  Vector x;  // global spatial nodes, elements concatenated
  Vector hx; // global spatial norm weights

  int elements() const { return static_cast<int>(space_ops.size()); }
  int nodes_per_element() const { return space_ops.front().size(); }
  int space_size() const { return static_cast<int>(x.size()); }
  const SparseMatrix& scheme_D() const {
    return periodic_bc ? periodic.Dx_tilde : open.D;
  }
};

Discretization make_discretization(const ProblemSpec& problem,
                                   const RunConfig& config, double slab_width);

/// Assembled linear system for one slab over all fields [rho; g_1; ...; g_nv].
struct SlabSystem {
  SparseMatrix matrix;
  Vector rhs;
  FieldLayout layout;
  double epsilon = 1.0;
  double t_start = 0.0;
  double slab_width = 1.0;
  bool micro_rows_scaled = true; // micro-equation rows premultiplied by eps^2
};

/// Nodal solution of one slab.
struct SlabSolution {
  double t_start = 0.0;
  double t_end = 1.0;
  Vector times; // temporal nodes in [t_start, t_end]
  Vector x;     // global spatial nodes
  int elements = 1;
  int nodes_per_element = 2;
  Matrix rho;             // nt x S
  std::vector<Matrix> g;  // nv entries, each nt x S
  Vector data_rho0;           // weakly imposed bottom data used by this slab
  std::vector<Vector> data_g0;

  int nt() const { return static_cast<int>(times.size()); }
  int space() const { return static_cast<int>(x.size()); }
  int nv() const { return static_cast<int>(g.size()); }

  Vector rho_bottom() const { return rho.row(0).transpose(); }
  Vector rho_top() const { return rho.row(nt() - 1).transpose(); }
  Vector g_bottom(int k) const { return g[k].row(0).transpose(); }
  Vector g_top(int k) const { return g[k].row(nt() - 1).transpose(); }
};

/// Samples of the problem's initial data on the spatial grid.
Vector sample_rho0(const ProblemSpec& problem, const Discretization& disc);
std::vector<Vector> sample_g0(const ProblemSpec& problem,
                              const Discretization& disc,
                              const VelocitySpace& vspace);

SlabSystem assemble_slab(const ProblemSpec& problem, const Discretization& disc,
                         const VelocitySpace& vspace, const Vector& bottom_rho,
                         const std::vector<Vector>& bottom_g, double t_start);

SlabSolution solve_slab(const SlabSystem& system, const Discretization& disc,
                        const Vector& bottom_rho,
                        const std::vector<Vector>& bottom_g);

/// Solves slab by slab; slab 1 penalizes the problem's initial data, each
/// later slab the top face of its predecessor.
std::vector<SlabSolution> march_slabs(const ProblemSpec& problem,
                                      const RunConfig& config);

/// Space-time discretization of the diffusion limit
///   Dt rho = Dx~((<v^2>/sigma_s) Dx~ rho) - sigma_a rho + SAT_{rho,0}
/// with the same temporal SATs and slab marching. Periodic problems only.
/// The returned solutions carry rho and no micro fields.
std::vector<SlabSolution> solve_limit_diffusion(const ProblemSpec& problem,
                                                const RunConfig& config);

/// Partition of [0, T] into slab boundaries according to the dt rule.
std::vector<double> slab_boundaries(const ProblemSpec& problem,
                                    const RunConfig& config);

struct Slice {
  double t = 0.0;
  Vector rho;
  std::vector<Vector> g;
};

/// Nodal values at a grid time; at slab junctions the later slab's bottom
/// face is returned. Fails if t is not a temporal node.
Slice extract_slice(const std::vector<SlabSolution>& solutions, double t);

/// Values at an arbitrary time inside the solved range, by evaluating the
/// slab-local polynomial interpolant in time.
Slice interpolate_slice(const std::vector<SlabSolution>& solutions, double t);

} // namespace kinsbp
