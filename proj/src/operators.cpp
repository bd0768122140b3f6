#include "operators.hpp"

#include "errors.hpp"

namespace kinsbp {

namespace {

void check_uniform_nodes(const std::vector<SbpOperator1D>& ops) {
  require(!ops.empty(), ErrorKind::InvalidArgument,
          "spatial operator list must not be empty");
  for (const auto& op : ops) {
    require(op.size() == ops.front().size(), ErrorKind::InvalidArgument,
            "all elements must share the node count");
  }
}

// Assembles the global spatial operator with interface SATs absorbed.
// Diagonal blocks are Q_bar with the face terms that have a neighbour
// removed; neighbour couplings are the +1/2 tR tL^T / -1/2 tL tR^T corner
// blocks. `periodic` adds the wrap couplings between element K and element 1.
SparseMatrix assemble_coupled_q(const std::vector<SbpOperator1D>& ops,
                                bool periodic) {
  const int K = static_cast<int>(ops.size());
  const int n = ops.front().size();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(K) * n * n + 4 * K);

  for (int e = 0; e < K; ++e) {
    const bool has_left = periodic || e > 0;
    const bool has_right = periodic || e < K - 1;
    Matrix block = ops[e].Q;
    if (has_right) block(n - 1, n - 1) -= 0.5;
    if (has_left) block(0, 0) += 0.5;
    const int base = e * n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (block(i, j) != 0.0) trip.emplace_back(base + i, base + j, block(i, j));
      }
    }
    if (has_right) {
      const int re = (e + 1) % K;
      trip.emplace_back(base + n - 1, re * n, 0.5);
    }
    if (has_left) {
      const int le = (e - 1 + K) % K;
      trip.emplace_back(base, le * n + n - 1, -0.5);
    }
  }

  SparseMatrix Q(K * n, K * n);
  Q.setFromTriplets(trip.begin(), trip.end());
  return Q;
}

SparseMatrix apply_inverse_norm(const std::vector<SbpOperator1D>& ops,
                                const SparseMatrix& Q) {
  const int K = static_cast<int>(ops.size());
  const int n = ops.front().size();
  Vector hinv(K * n);
  for (int e = 0; e < K; ++e) {
    for (int i = 0; i < n; ++i) hinv(e * n + i) = 1.0 / ops[e].h(i);
  }
  return hinv.asDiagonal() * Q;
}

} // namespace

PeriodicSpatialOp build_periodic_op_single(const SbpOperator1D& space_op) {
  return build_periodic_op_multielement({space_op});
}

PeriodicSpatialOp
build_periodic_op_multielement(const std::vector<SbpOperator1D>& space_ops) {
  check_uniform_nodes(space_ops);
  PeriodicSpatialOp op;
  op.elements = static_cast<int>(space_ops.size());
  op.nodes_per_element = space_ops.front().size();
  op.Qx_tilde = assemble_coupled_q(space_ops, /*periodic=*/true);
  op.Dx_tilde = apply_inverse_norm(space_ops, op.Qx_tilde);
  return op;
}

OpenSpatialOp build_open_op(const std::vector<SbpOperator1D>& space_ops) {
  check_uniform_nodes(space_ops);
  OpenSpatialOp op;
  op.elements = static_cast<int>(space_ops.size());
  op.nodes_per_element = space_ops.front().size();
  op.Q = assemble_coupled_q(space_ops, /*periodic=*/false);
  op.D = apply_inverse_norm(space_ops, op.Q);
  return op;
}

SpaceTimeOps build_spacetime_ops(const SbpOperator1D& time_op,
                                 const std::vector<SbpOperator1D>& space_ops) {
  check_uniform_nodes(space_ops);
  SpaceTimeOps st;
  st.time_op = time_op;
  st.elements = static_cast<int>(space_ops.size());
  st.nodes_per_element = space_ops.front().size();
  st.nt = time_op.size();

  const int S = st.space_size();
  const int M = st.size();
  const int n = st.nodes_per_element;

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(M) * st.nt);
  for (int it = 0; it < st.nt; ++it) {
    for (int jt = 0; jt < st.nt; ++jt) {
      const double d = time_op.D(it, jt);
      if (d == 0.0) continue;
      for (int s = 0; s < S; ++s) trip.emplace_back(st.idx(it, s), st.idx(jt, s), d);
    }
  }
  st.Dt.resize(M, M);
  st.Dt.setFromTriplets(trip.begin(), trip.end());

  trip.clear();
  trip.reserve(static_cast<std::size_t>(M) * n);
  for (int it = 0; it < st.nt; ++it) {
    for (int e = 0; e < st.elements; ++e) {
      const Matrix& D = space_ops[e].D;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (D(i, j) == 0.0) continue;
          trip.emplace_back(st.idx(it, e * n + i), st.idx(it, e * n + j), D(i, j));
        }
      }
    }
  }
  st.Dx.resize(M, M);
  st.Dx.setFromTriplets(trip.begin(), trip.end());

  st.Hx.resize(S);
  for (int e = 0; e < st.elements; ++e) {
    for (int i = 0; i < n; ++i) st.Hx(e * n + i) = space_ops[e].h(i);
  }
  st.H.resize(M);
  st.Ht.resize(M);
  for (int it = 0; it < st.nt; ++it) {
    for (int s = 0; s < S; ++s) {
      st.H(st.idx(it, s)) = time_op.h(it) * st.Hx(s);
      st.Ht(st.idx(it, s)) = time_op.h(it);
    }
  }
  st.Hx = Vector(M);
  for (int it = 0; it < st.nt; ++it) {
    for (int e = 0; e < st.elements; ++e) {
      for (int i = 0; i < n; ++i) {
        st.Hx(st.idx(it, e * n + i)) = space_ops[e].h(i);
      }
    }
  }
  return st;
}

TemporalSatBlocks temporal_sat(const SbpOperator1D& time_op, int space_size,
                               const Vector& bottom_data) {
  require(bottom_data.size() == space_size, ErrorKind::InvalidArgument,
          "temporal_sat: bottom data length must equal the spatial DOF count");
  const int nt = time_op.size();
  const int M = nt * space_size;
  const double w = 1.0 / time_op.h(0); // Ht^{-1} at the bottom face

  std::vector<Triplet> trip;
  trip.reserve(space_size);
  TemporalSatBlocks out;
  out.rhs = Vector::Zero(M);
  for (int s = 0; s < space_size; ++s) {
    trip.emplace_back(s, s, w); // bottom time row is it = 0
    out.rhs(s) = w * bottom_data(s);
  }
  out.matrix.resize(M, M);
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  return out;
}

TemporalSatBlocks slab_interface_sat(const SbpOperator1D& time_op,
                                     int space_size,
                                     const Vector& top_of_previous) {
  return temporal_sat(time_op, space_size, top_of_previous);
}

DirichletSatConfig
DirichletSatConfig::stable(double epsilon, std::function<double(double)> f_left,
                           std::function<double(double)> f_right) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument,
          "DirichletSatConfig: epsilon must be positive");
  DirichletSatConfig cfg;
  cfg.epsilon = epsilon;
  cfg.tau_rho = 0.5 / epsilon;
  cfg.tau_g = 0.5 / (epsilon * epsilon);
  cfg.f_left = std::move(f_left);
  cfg.f_right = std::move(f_right);
  return cfg;
}

DirichletSatBlocks dirichlet_sats(const DirichletSatConfig& cfg,
                                  const VelocitySpace& vspace,
                                  const FieldLayout& layout, double hx_left,
                                  double hx_right) {
  require(vspace.is_symmetric(), ErrorKind::Configuration,
          "dirichlet_sats: the velocity quadrature must be symmetric");
  require(layout.nv == vspace.size(), ErrorKind::InvalidArgument,
          "dirichlet_sats: layout/velocity size mismatch");

  const int nv = vspace.size();
  const double eps = cfg.epsilon;
  const int sL = 0;
  const int sR = layout.space - 1;
  const double cL = cfg.tau_rho / hx_left;
  const double cR = cfg.tau_rho / hx_right;
  const double gL = cfg.tau_g / hx_left;
  const double gR = cfg.tau_g / hx_right;

  const double mean_vp = vspace.average(vspace.v_plus);
  const double mean_vm = vspace.average(vspace.v_minus);
  double mean_vp_fL = 0.0, mean_vm_fR = 0.0;
  for (int k = 0; k < nv; ++k) {
    if (vspace.v(k) > 0.0) mean_vp_fL += vspace.w(k) * vspace.v(k) * cfg.f_left(vspace.v(k));
    if (vspace.v(k) < 0.0) mean_vm_fR += vspace.w(k) * vspace.v(k) * cfg.f_right(vspace.v(k));
  }

  DirichletSatBlocks out;
  out.rhs = Vector::Zero(layout.total());

  for (int it = 0; it < layout.nt; ++it) {
    const int rhoL = layout.idx(0, it, sL);
    const int rhoR = layout.idx(0, it, sR);

    // macro equation, -SAT_rho^L and -SAT_rho^R moved to the left-hand side
    out.matrix.emplace_back(rhoL, rhoL, cL * mean_vp);
    out.matrix.emplace_back(rhoR, rhoR, -cR * mean_vm);
    for (int l = 0; l < nv; ++l) {
      const double vp = vspace.v_plus(l);
      const double vm = vspace.v_minus(l);
      if (vp > 0.0) {
        out.matrix.emplace_back(rhoL, layout.idx(1 + l, it, sL),
                                cL * eps * vspace.w(l) * vp);
      }
      if (vm < 0.0) {
        out.matrix.emplace_back(rhoR, layout.idx(1 + l, it, sR),
                                -cR * eps * vspace.w(l) * vm);
      }
    }
    out.rhs(rhoL) += cL * mean_vp_fL;
    out.rhs(rhoR) += -cR * mean_vm_fR;

    // micro equations: -(SAT_LR^{g_k} - <SAT_LR^{g}>) on the left-hand side
    for (int k = 0; k < nv; ++k) {
      const double vk = vspace.v(k);
      const int gkL = layout.idx(1 + k, it, sL);
      const int gkR = layout.idx(1 + k, it, sR);

      if (vk > 0.0) {
        out.matrix.emplace_back(gkL, rhoL, gL * vk);
        out.matrix.emplace_back(gkL, gkL, gL * vk * eps);
        out.rhs(gkL) += gL * vk * cfg.f_left(vk);
      } else if (vk < 0.0) {
        out.matrix.emplace_back(gkR, rhoR, -gR * vk);
        out.matrix.emplace_back(gkR, gkR, -gR * vk * eps);
        out.rhs(gkR) += -gR * vk * cfg.f_right(vk);
      }

      // +<SAT_LR^{g}> acts on every micro row
      out.matrix.emplace_back(gkL, rhoL, -gL * mean_vp);
      out.matrix.emplace_back(gkR, rhoR, gR * mean_vm);
      for (int l = 0; l < nv; ++l) {
        const double vp = vspace.v_plus(l);
        const double vm = vspace.v_minus(l);
        if (vp > 0.0) {
          out.matrix.emplace_back(gkL, layout.idx(1 + l, it, sL),
                                  -gL * eps * vspace.w(l) * vp);
        }
        if (vm < 0.0) {
          out.matrix.emplace_back(gkR, layout.idx(1 + l, it, sR),
                                  gR * eps * vspace.w(l) * vm);
        }
      }
      out.rhs(gkL) += -gL * mean_vp_fL;
      out.rhs(gkR) += gR * mean_vm_fR;
    }
  }
  return out;
}

} // namespace kinsbp
