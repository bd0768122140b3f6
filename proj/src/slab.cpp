#include "slab.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace kinsbp {

namespace {

constexpr double solve_residual_tol = 1e-10;

using RowMajorSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

Vector sample(const std::function<double(double)>& f, const Vector& x) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = f(x(i));
  return out;
}

FieldLayout layout_of(const Discretization& disc, const VelocitySpace& vspace) {
  FieldLayout layout;
  layout.nt = disc.time_op.size();
  layout.space = disc.space_size();
  layout.nv = vspace.size();
  return layout;
}

Vector sigma_s_samples(const ProblemSpec& problem, const Discretization& disc) {
  Vector sig = sample(problem.sigma_s, disc.x);
  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    require(sig(i) > 0.0, ErrorKind::InvalidArgument,
            "invalid problem: sigma_s must be positive at every node");
  }
  return sig;
}

SparseMatrix build_slab_matrix(const ProblemSpec& problem,
                               const Discretization& disc,
                               const VelocitySpace& vspace) {
  const FieldLayout layout = layout_of(disc, vspace);
  const int nt = layout.nt;
  const int S = layout.space;
  const int nv = layout.nv;
  const double eps = problem.epsilon;
  const double eps2 = eps * eps;
  require(eps > 0.0, ErrorKind::InvalidArgument,
          "invalid problem: epsilon must be positive");

  const Vector sig_s = sigma_s_samples(problem, disc);
  const Vector sig_a = sample(problem.sigma_a, disc.x);
  const RowMajorSparse D = disc.scheme_D();
  const double ht0_inv = 1.0 / disc.time_op.h(0);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(layout.total()) *
               (nt + (nv + 1) * (disc.nodes_per_element() + 2)));

  // temporal derivative, all fields (micro rows carry the eps^2 scaling)
  for (int it = 0; it < nt; ++it) {
    for (int jt = 0; jt < nt; ++jt) {
      const double d = disc.time_op.D(it, jt);
      if (d == 0.0) continue;
      for (int s = 0; s < S; ++s) {
        trip.emplace_back(layout.idx(0, it, s), layout.idx(0, jt, s), d);
        for (int k = 0; k < nv; ++k) {
          trip.emplace_back(layout.idx(1 + k, it, s), layout.idx(1 + k, jt, s),
                            eps2 * d);
        }
      }
    }
  }

  // spatial transport through the absorbed operator
  for (int s = 0; s < S; ++s) {
    for (RowMajorSparse::InnerIterator iter(D, s); iter; ++iter) {
      const int s2 = static_cast<int>(iter.col());
      const double d = iter.value();
      for (int it = 0; it < nt; ++it) {
        const int rho_row = layout.idx(0, it, s);
        for (int l = 0; l < nv; ++l) {
          const double wl_vl = vspace.w(l) * vspace.v(l);
          if (wl_vl != 0.0) {
            trip.emplace_back(rho_row, layout.idx(1 + l, it, s2), wl_vl * d);
          }
        }
        for (int k = 0; k < nv; ++k) {
          const int gk_row = layout.idx(1 + k, it, s);
          const double vk = vspace.v(k);
          if (vk != 0.0) {
            trip.emplace_back(gk_row, layout.idx(0, it, s2), vk * d);
            trip.emplace_back(gk_row, layout.idx(1 + k, it, s2), eps * vk * d);
          }
          for (int l = 0; l < nv; ++l) {
            const double wl_vl = vspace.w(l) * vspace.v(l);
            if (wl_vl != 0.0) {
              trip.emplace_back(gk_row, layout.idx(1 + l, it, s2),
                                -eps * wl_vl * d);
            }
          }
        }
      }
    }
  }

  // reaction terms and the diagonal part of the initial-condition SAT
  for (int it = 0; it < nt; ++it) {
    const double sat = (it == 0) ? ht0_inv : 0.0;
    for (int s = 0; s < S; ++s) {
      trip.emplace_back(layout.idx(0, it, s), layout.idx(0, it, s),
                        sig_a(s) + sat);
      const double micro_diag = sig_s(s) + eps2 * sig_a(s) + eps2 * sat;
      for (int k = 0; k < nv; ++k) {
        trip.emplace_back(layout.idx(1 + k, it, s), layout.idx(1 + k, it, s),
                          micro_diag);
      }
    }
  }

  if (problem.bc == BoundaryKind::Dirichlet) {
    const auto cfg = DirichletSatConfig::stable(eps, problem.f_left,
                                                problem.f_right);
    const auto blocks =
        dirichlet_sats(cfg, vspace, layout, disc.hx(0), disc.hx(S - 1));
    for (const auto& t : blocks.matrix) {
      const bool micro = t.row() >= layout.field_size();
      trip.emplace_back(t.row(), t.col(), micro ? eps2 * t.value() : t.value());
    }
  }

  SparseMatrix A(layout.total(), layout.total());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Vector build_slab_rhs(const ProblemSpec& problem, const Discretization& disc,
                      const VelocitySpace& vspace, const Vector& bottom_rho,
                      const std::vector<Vector>& bottom_g, double t_start) {
  const FieldLayout layout = layout_of(disc, vspace);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double ht0_inv = 1.0 / disc.time_op.h(0);

  require(bottom_rho.size() == layout.space, ErrorKind::InvalidArgument,
          "slab rhs: bottom data length must equal the spatial DOF count");
  require(static_cast<int>(bottom_g.size()) == layout.nv,
          ErrorKind::InvalidArgument,
          "slab rhs: one bottom vector per velocity node required");

  Vector rhs = Vector::Zero(layout.total());
  for (int it = 0; it < layout.nt; ++it) {
    const double t = t_start + disc.time_op.nodes(it);
    for (int s = 0; s < layout.space; ++s) {
      rhs(layout.idx(0, it, s)) += problem.forcing_rho(disc.x(s), t);
      for (int k = 0; k < layout.nv; ++k) {
        rhs(layout.idx(1 + k, it, s)) +=
            eps2 * problem.forcing_g(disc.x(s), vspace.v(k), t);
      }
    }
  }
  for (int s = 0; s < layout.space; ++s) {
    rhs(layout.idx(0, 0, s)) += ht0_inv * bottom_rho(s);
    for (int k = 0; k < layout.nv; ++k) {
      require(bottom_g[k].size() == layout.space, ErrorKind::InvalidArgument,
              "slab rhs: bottom data length must equal the spatial DOF count");
      rhs(layout.idx(1 + k, 0, s)) += eps2 * ht0_inv * bottom_g[k](s);
    }
  }

  if (problem.bc == BoundaryKind::Dirichlet) {
    const auto cfg = DirichletSatConfig::stable(problem.epsilon, problem.f_left,
                                                problem.f_right);
    const auto blocks = dirichlet_sats(cfg, vspace, layout, disc.hx(0),
                                       disc.hx(layout.space - 1));
    rhs.head(layout.field_size()) += blocks.rhs.head(layout.field_size());
    rhs.tail(layout.total() - layout.field_size()) +=
        eps2 * blocks.rhs.tail(layout.total() - layout.field_size());
  }
  return rhs;
}

SlabSolution unpack_solution(const Vector& u, const Discretization& disc,
                             const FieldLayout& layout, double t_start,
                             const Vector& bottom_rho,
                             const std::vector<Vector>& bottom_g) {
  SlabSolution sol;
  sol.t_start = t_start;
  sol.t_end = t_start + disc.time_op.b;
  sol.times = disc.time_op.nodes.array() + t_start;
  sol.x = disc.x;
  sol.elements = disc.elements();
  sol.nodes_per_element = disc.nodes_per_element();
  sol.rho.resize(layout.nt, layout.space);
  sol.g.assign(layout.nv, Matrix(layout.nt, layout.space));
  for (int it = 0; it < layout.nt; ++it) {
    for (int s = 0; s < layout.space; ++s) {
      sol.rho(it, s) = u(layout.idx(0, it, s));
      for (int k = 0; k < layout.nv; ++k) {
        sol.g[k](it, s) = u(layout.idx(1 + k, it, s));
      }
    }
  }
  sol.data_rho0 = bottom_rho;
  sol.data_g0 = bottom_g;
  return sol;
}

void check_residual(const SparseMatrix& A, const Vector& u, const Vector& rhs,
                    int slab_index) {
  const double bn = rhs.norm();
  if (bn == 0.0) return;
  const double rn = (A * u - rhs).norm();
  if (!(rn / bn <= solve_residual_tol)) {
    std::ostringstream os;
    os << "slab " << slab_index << ": solve residual " << rn / bn
       << " exceeds " << solve_residual_tol;
    fail(ErrorKind::Solver, os.str());
  }
}

void factorize(SparseLU& lu, const SparseMatrix& A, int slab_index) {
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    std::ostringstream os;
    os << "slab " << slab_index << ": singular or failed sparse factorization";
    fail(ErrorKind::Solver, os.str());
  }
}

// ---- diffusion-limit system -------------------------------------------

SparseMatrix build_limit_matrix(const ProblemSpec& problem,
                                const Discretization& disc, double vs2) {
  const int nt = disc.time_op.size();
  const int S = disc.space_size();
  const Vector sig_s = sigma_s_samples(problem, disc);
  const Vector sig_a = sample(problem.sigma_a, disc.x);
  const double ht0_inv = 1.0 / disc.time_op.h(0);

  Vector coef(S);
  for (int s = 0; s < S; ++s) coef(s) = vs2 / sig_s(s);
  const SparseMatrix& Dx = disc.scheme_D();
  SparseMatrix L = Dx * coef.asDiagonal() * Dx;

  std::vector<Triplet> trip;
  const auto idx = [S](int it, int s) { return it * S + s; };
  for (int it = 0; it < nt; ++it) {
    for (int jt = 0; jt < nt; ++jt) {
      const double d = disc.time_op.D(it, jt);
      if (d == 0.0) continue;
      for (int s = 0; s < S; ++s) trip.emplace_back(idx(it, s), idx(jt, s), d);
    }
    for (int s = 0; s < S; ++s) {
      trip.emplace_back(idx(it, s), idx(it, s),
                        sig_a(s) + (it == 0 ? ht0_inv : 0.0));
    }
  }
  RowMajorSparse Lrm = L;
  for (int s = 0; s < S; ++s) {
    for (RowMajorSparse::InnerIterator iter(Lrm, s); iter; ++iter) {
      for (int it = 0; it < nt; ++it) {
        trip.emplace_back(idx(it, s), idx(it, static_cast<int>(iter.col())),
                          -iter.value());
      }
    }
  }
  SparseMatrix A(nt * S, nt * S);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Vector build_limit_rhs(const ProblemSpec& problem, const Discretization& disc,
                       const Vector& bottom_rho, double t_start) {
  const int nt = disc.time_op.size();
  const int S = disc.space_size();
  const double ht0_inv = 1.0 / disc.time_op.h(0);
  Vector rhs = Vector::Zero(nt * S);
  for (int it = 0; it < nt; ++it) {
    const double t = t_start + disc.time_op.nodes(it);
    for (int s = 0; s < S; ++s) {
      rhs(it * S + s) = problem.forcing_rho(disc.x(s), t);
    }
  }
  for (int s = 0; s < S; ++s) rhs(s) += ht0_inv * bottom_rho(s);
  return rhs;
}

} // namespace

void RunConfig::validate() const {
  require(elements >= 1, ErrorKind::Configuration,
          "config: element count must be at least 1");
  require(nodes >= 2, ErrorKind::Configuration,
          "config: need at least 2 nodes per element and slab");
  require(time_nodes == 0 || time_nodes >= 2, ErrorKind::Configuration,
          "config: need at least 2 temporal nodes per slab");
  require(dt_rule != DtRule::Explicit || slabs >= 1, ErrorKind::Configuration,
          "config: slab count must be at least 1");
}

Discretization make_discretization(const ProblemSpec& problem,
                                   const RunConfig& config, double slab_width) {
  require(slab_width > 0.0, ErrorKind::InvalidArgument,
          "make_discretization: slab width must be positive");
  Discretization disc;
  const SbpOperator1D ref = build_glb_sbp(config.nodes);
  const int K = config.elements;
  const int n = config.nodes;
  const double xL = problem.x_left;
  const double xR = problem.x_right;

  disc.space_ops.reserve(K);
  disc.x.resize(K * n);
  disc.hx.resize(K * n);
  for (int e = 0; e < K; ++e) {
    const double a = xL + (xR - xL) * e / K;
    const double b = xL + (xR - xL) * (e + 1) / K;
    disc.space_ops.push_back(scale_to_interval(ref, a, b));
    disc.x.segment(e * n, n) = disc.space_ops.back().nodes;
    disc.hx.segment(e * n, n) = disc.space_ops.back().h;
  }
  const SbpOperator1D time_ref = config.nodes_per_slab() == config.nodes
                                     ? ref
                                     : build_glb_sbp(config.nodes_per_slab());
  disc.time_op = scale_to_interval(time_ref, 0.0, slab_width);
  disc.periodic_bc = problem.bc == BoundaryKind::Periodic;
  if (disc.periodic_bc) {
    disc.periodic = build_periodic_op_multielement(disc.space_ops);
  } else {
    disc.open = build_open_op(disc.space_ops);
  }
  return disc;
}

Vector sample_rho0(const ProblemSpec& problem, const Discretization& disc) {
  return sample(problem.rho0, disc.x);
}

std::vector<Vector> sample_g0(const ProblemSpec& problem,
                              const Discretization& disc,
                              const VelocitySpace& vspace) {
  std::vector<Vector> g0(vspace.size());
  for (int k = 0; k < vspace.size(); ++k) {
    g0[k].resize(disc.x.size());
    for (Eigen::Index i = 0; i < disc.x.size(); ++i) {
      g0[k](i) = problem.g0(disc.x(i), vspace.v(k));
    }
  }
  return g0;
}

SlabSystem assemble_slab(const ProblemSpec& problem, const Discretization& disc,
                         const VelocitySpace& vspace, const Vector& bottom_rho,
                         const std::vector<Vector>& bottom_g, double t_start) {
  SlabSystem sys;
  sys.layout = layout_of(disc, vspace);
  sys.epsilon = problem.epsilon;
  sys.t_start = t_start;
  sys.slab_width = disc.time_op.b;
  sys.micro_rows_scaled = true;
  sys.matrix = build_slab_matrix(problem, disc, vspace);
  sys.rhs = build_slab_rhs(problem, disc, vspace, bottom_rho, bottom_g, t_start);
  return sys;
}

SlabSolution solve_slab(const SlabSystem& system, const Discretization& disc,
                        const Vector& bottom_rho,
                        const std::vector<Vector>& bottom_g) {
  SparseLU lu;
  factorize(lu, system.matrix, 0);
  const Vector u = lu.solve(system.rhs);
  check_residual(system.matrix, u, system.rhs, 0);
  return unpack_solution(u, disc, system.layout, system.t_start, bottom_rho,
                         bottom_g);
}

std::vector<double> slab_boundaries(const ProblemSpec& problem,
                                    const RunConfig& config) {
  config.validate();
  const double T =
      config.final_time > 0.0 ? config.final_time : problem.final_time;
  require(T > 0.0, ErrorKind::Configuration, "config: final time must be positive");

  std::vector<double> b;
  switch (config.dt_rule) {
  case DtRule::MatchElements: {
    const int m = config.elements;
    for (int j = 0; j <= m; ++j) b.push_back(T * j / m);
    break;
  }
  case DtRule::TenDx: {
    const double w =
        10.0 * (problem.x_right - problem.x_left) / config.elements;
    b.push_back(0.0);
    while (b.back() < T - 1e-12 * std::max(1.0, T)) {
      b.push_back(std::min(b.back() + w, T));
    }
    break;
  }
  case DtRule::Explicit: {
    const int m = config.slabs;
    for (int j = 0; j <= m; ++j) b.push_back(T * j / m);
    break;
  }
  }
  return b;
}

std::vector<SlabSolution> march_slabs(const ProblemSpec& problem,
                                      const RunConfig& config) {
  const std::vector<double> bounds = slab_boundaries(problem, config);
  const int n_slabs = static_cast<int>(bounds.size()) - 1;

  std::vector<SlabSolution> out;
  out.reserve(n_slabs);

  Discretization disc;
  SparseMatrix A;
  SparseLU lu;
  double cached_width = -1.0;
  FieldLayout layout;

  Vector bottom_rho;
  std::vector<Vector> bottom_g;
  for (int j = 0; j < n_slabs; ++j) {
    const double w = bounds[j + 1] - bounds[j];
    if (cached_width < 0.0 ||
        std::abs(w - cached_width) > 1e-12 * std::max(1.0, w)) {
      disc = make_discretization(problem, config, w);
      layout = layout_of(disc, config.vspace);
      A = build_slab_matrix(problem, disc, config.vspace);
      factorize(lu, A, j);
      cached_width = w;
    }
    if (j == 0) {
      bottom_rho = sample_rho0(problem, disc);
      bottom_g = sample_g0(problem, disc, config.vspace);
    } else {
      bottom_rho = out.back().rho_top();
      bottom_g.resize(config.vspace.size());
      for (int k = 0; k < config.vspace.size(); ++k) {
        bottom_g[k] = out.back().g_top(k);
      }
    }
    const Vector rhs =
        build_slab_rhs(problem, disc, config.vspace, bottom_rho, bottom_g,
                       bounds[j]);
    const Vector u = lu.solve(rhs);
    check_residual(A, u, rhs, j);
    out.push_back(
        unpack_solution(u, disc, layout, bounds[j], bottom_rho, bottom_g));
  }
  return out;
}

std::vector<SlabSolution> solve_limit_diffusion(const ProblemSpec& problem,
                                                const RunConfig& config) {
  require(problem.bc == BoundaryKind::Periodic, ErrorKind::Unsupported,
          "solve_limit_diffusion: only periodic problems are supported");
  const std::vector<double> bounds = slab_boundaries(problem, config);
  const int n_slabs = static_cast<int>(bounds.size()) - 1;
  const double vs2 = config.vspace.mean_v_squared();

  std::vector<SlabSolution> out;
  out.reserve(n_slabs);

  Discretization disc;
  SparseMatrix A;
  SparseLU lu;
  double cached_width = -1.0;

  Vector bottom_rho;
  for (int j = 0; j < n_slabs; ++j) {
    const double w = bounds[j + 1] - bounds[j];
    if (cached_width < 0.0 ||
        std::abs(w - cached_width) > 1e-12 * std::max(1.0, w)) {
      disc = make_discretization(problem, config, w);
      A = build_limit_matrix(problem, disc, vs2);
      factorize(lu, A, j);
      cached_width = w;
    }
    bottom_rho = (j == 0) ? sample_rho0(problem, disc) : out.back().rho_top();
    const Vector rhs = build_limit_rhs(problem, disc, bottom_rho, bounds[j]);
    const Vector u = lu.solve(rhs);
    check_residual(A, u, rhs, j);

    SlabSolution sol;
    sol.t_start = bounds[j];
    sol.t_end = bounds[j + 1];
    sol.times = disc.time_op.nodes.array() + bounds[j];
    sol.x = disc.x;
    sol.elements = disc.elements();
    sol.nodes_per_element = disc.nodes_per_element();
    const int nt = disc.time_op.size();
    const int S = disc.space_size();
    sol.rho.resize(nt, S);
    for (int it = 0; it < nt; ++it) {
      for (int s = 0; s < S; ++s) sol.rho(it, s) = u(it * S + s);
    }
    sol.data_rho0 = bottom_rho;
    out.push_back(std::move(sol));
  }
  return out;
}

namespace {

Slice slice_at_node(const SlabSolution& sol, int it) {
  Slice s;
  s.t = sol.times(it);
  s.rho = sol.rho.row(it).transpose();
  s.g.resize(sol.nv());
  for (int k = 0; k < sol.nv(); ++k) s.g[k] = sol.g[k].row(it).transpose();
  return s;
}

} // namespace

Slice extract_slice(const std::vector<SlabSolution>& solutions, double t) {
  require(!solutions.empty(), ErrorKind::InvalidState,
          "extract_slice: no solutions");
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  // later slabs take precedence so junctions return the bottom face
  for (auto it = solutions.rbegin(); it != solutions.rend(); ++it) {
    for (int i = 0; i < it->nt(); ++i) {
      if (std::abs(it->times(i) - t) <= tol) return slice_at_node(*it, i);
    }
  }
  double nearest = solutions.front().times(0);
  for (const auto& sol : solutions) {
    for (int i = 0; i < sol.nt(); ++i) {
      if (std::abs(sol.times(i) - t) < std::abs(nearest - t)) {
        nearest = sol.times(i);
      }
    }
  }
  std::ostringstream os;
  os << "extract_slice: t = " << t
     << " is not a temporal node; nearest node is " << nearest;
  fail(ErrorKind::InvalidArgument, os.str());
}

Slice interpolate_slice(const std::vector<SlabSolution>& solutions, double t) {
  require(!solutions.empty(), ErrorKind::InvalidState,
          "interpolate_slice: no solutions");
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  const SlabSolution* slab = nullptr;
  for (auto it = solutions.rbegin(); it != solutions.rend(); ++it) {
    if (t >= it->t_start - tol && t <= it->t_end + tol) {
      slab = &*it;
      break;
    }
  }
  require(slab != nullptr, ErrorKind::InvalidArgument,
          "interpolate_slice: t outside the solved time range");

  const int nt = slab->nt();
  for (int i = 0; i < nt; ++i) {
    if (std::abs(slab->times(i) - t) <= tol) return slice_at_node(*slab, i);
  }

  // barycentric Lagrange weights on the slab's temporal nodes
  Vector lambda = Vector::Ones(nt);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      if (j != i) lambda(i) /= (slab->times(i) - slab->times(j));
    }
  }
  Vector c(nt);
  double denom = 0.0;
  for (int i = 0; i < nt; ++i) {
    c(i) = lambda(i) / (t - slab->times(i));
    denom += c(i);
  }
  c /= denom;

  Slice s;
  s.t = t;
  s.rho = Vector::Zero(slab->space());
  s.g.assign(slab->nv(), Vector::Zero(slab->space()));
  for (int i = 0; i < nt; ++i) {
    s.rho += c(i) * slab->rho.row(i).transpose();
    for (int k = 0; k < slab->nv(); ++k) {
      s.g[k] += c(i) * slab->g[k].row(i).transpose();
    }
  }
  return s;
}

} // namespace kinsbp
