#pragma once

#include <functional>
#include <vector>

#include "sbp.hpp"
#include "types.hpp"
#include "velocity.hpp"

namespace kinsbp {

/// Index layout of the coupled space-time system for one slab.
/// Fields are ordered [rho; g_1; ...; g_nv]; within a field the ordering is
/// time-major, then element, then spatial node.
struct FieldLayout {
  int nt = 0;    // temporal nodes per slab (n_t + 1)
  int space = 0; // global spatial nodes S = K * (n_x + 1)
  int nv = 0;    // velocity nodes

  int field_size() const { return nt * space; }
  int total() const { return (nv + 1) * field_size(); }
  int idx(int field, int it, int s) const {
    return field * field_size() + it * space + s;
  }
};

/// Spatial derivative over K elements with the periodic boundary and
/// interface SATs absorbed. Qx_tilde = (I_K x Hx) Dx_tilde is skew-symmetric.
struct PeriodicSpatialOp {
  SparseMatrix Dx_tilde;
  SparseMatrix Qx_tilde;
  int elements = 1;
  int nodes_per_element = 2;

  int size() const { return elements * nodes_per_element; }
};

PeriodicSpatialOp build_periodic_op_single(const SbpOperator1D& space_op);
PeriodicSpatialOp
build_periodic_op_multielement(const std::vector<SbpOperator1D>& space_ops);

/// Spatial derivative over K elements with only the interior interface SATs
/// absorbed; the physical boundary faces are left free for Dirichlet SATs.
/// Q = (I_K x Hx) D satisfies Q + Q^T = tRg tRg^T - tLg tLg^T with the global
/// face selectors (first node of element 1, last node of element K).
struct OpenSpatialOp {
  SparseMatrix D;
  SparseMatrix Q;
  int elements = 1;
  int nodes_per_element = 2;

  int size() const { return elements * nodes_per_element; }
};

OpenSpatialOp build_open_op(const std::vector<SbpOperator1D>& space_ops);

/// Space-time operators for one slab, materialized through Kronecker
/// products: Dt = Dt_bar x I_space, Dx = I_time x Dx_block,
/// H = Ht_bar x Hx_block (diagonal).
struct SpaceTimeOps {
  SbpOperator1D time_op; // slab-local temporal SBP operator
  int elements = 1;
  int nodes_per_element = 2;
  int nt = 2;

  SparseMatrix Dt;
  SparseMatrix Dx;
  Vector H;  // diag of Ht_bar x Hx_block
  Vector Ht; // diag of Ht_bar x I_space
  Vector Hx; // diag of I_time x Hx_block

  int space_size() const { return elements * nodes_per_element; }
  int size() const { return nt * space_size(); }
  int idx(int it, int s) const { return it * space_size() + s; }

  // face selector index maps (tB, tT, tL, tR as index sets)
  int bottom(int s) const { return idx(0, s); }
  int top(int s) const { return idx(nt - 1, s); }
  int left(int it) const { return idx(it, 0); }
  int right(int it) const { return idx(it, space_size() - 1); }
};

SpaceTimeOps build_spacetime_ops(const SbpOperator1D& time_op,
                                 const std::vector<SbpOperator1D>& space_ops);

/// Contribution of the initial-condition SAT
///   SAT_{u,0} = -Ht^{-1} tB tB^T (u - u0)
/// in left-hand-side convention: `matrix` is added to the system operator and
/// `rhs` to the right-hand side. Both live on one field of size nt * space.
struct TemporalSatBlocks {
  SparseMatrix matrix;
  Vector rhs;
};

TemporalSatBlocks temporal_sat(const SbpOperator1D& time_op, int space_size,
                               const Vector& bottom_data);

/// Temporal SAT coupling a slab to its predecessor: identical blocks with the
/// previous slab's top-face trace in place of the initial data.
TemporalSatBlocks slab_interface_sat(const SbpOperator1D& time_op,
                                     int space_size,
                                     const Vector& top_of_previous);

/// Penalty configuration of the energy-stable Dirichlet boundary treatment.
/// The stable penalties are tau_rho = 1/(2 eps) and tau_g = 1/(2 eps^2).
struct DirichletSatConfig {
  double epsilon = 1.0;
  double tau_rho = 0.5;
  double tau_g = 0.5;
  std::function<double(double)> f_left;  // inflow data for v > 0
  std::function<double(double)> f_right; // inflow data for v < 0

  static DirichletSatConfig stable(double epsilon,
                                   std::function<double(double)> f_left,
                                   std::function<double(double)> f_right);
};

/// Dirichlet SAT blocks for the full coupled system, in left-hand-side
/// convention (matrix entries are added to the operator, `rhs` carries the
/// inhomogeneous boundary data). Rows/columns follow `layout`; entries are
/// unscaled physical-equation contributions (the assembler applies any row
/// scaling uniformly afterwards).
struct DirichletSatBlocks {
  std::vector<Triplet> matrix;
  Vector rhs;
};

DirichletSatBlocks dirichlet_sats(const DirichletSatConfig& cfg,
                                  const VelocitySpace& vspace,
                                  const FieldLayout& layout, double hx_left,
                                  double hx_right);

} // namespace kinsbp
