#include "kinsbp/kinsbp.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "csv.hpp"
#include "diag_system.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "operators.hpp"
#include "problems.hpp"
#include "sbp.hpp"
#include "slab.hpp"
#include "velocity.hpp"

struct kinsbp_problem {
  kinsbp_problem_kind kind;
  double epsilon;

  kinsbp::ProblemSpec make(const kinsbp::VelocitySpace& vspace) const {
    switch (kind) {
    case KINSBP_PROBLEM_MANUFACTURED:
      return kinsbp::manufactured_problem(epsilon, vspace);
    case KINSBP_PROBLEM_VARIABLE_SCATTERING:
      return kinsbp::variable_scattering_problem();
    case KINSBP_PROBLEM_DIRICHLET_DECAY:
      return kinsbp::dirichlet_decay_problem();
    case KINSBP_PROBLEM_INFLOW:
      return kinsbp::inhomogeneous_dirichlet_problem(epsilon);
    }
    kinsbp::fail(kinsbp::ErrorKind::InvalidArgument, "unknown problem kind");
  }
};

struct kinsbp_solution {
  std::vector<kinsbp::SlabSolution> slabs;
  kinsbp::ProblemSpec problem;
  kinsbp::VelocitySpace vspace;
  bool limit = false;
};

namespace {

thread_local std::string g_last_error;

kinsbp_status to_status(kinsbp::ErrorKind kind) {
  using kinsbp::ErrorKind;
  switch (kind) {
  case ErrorKind::InvalidArgument:
    return KINSBP_ERROR_INVALID_ARGUMENT;
  case ErrorKind::InvalidState:
    return KINSBP_ERROR_INVALID_STATE;
  case ErrorKind::Configuration:
    return KINSBP_ERROR_CONFIGURATION;
  case ErrorKind::Solver:
    return KINSBP_ERROR_SOLVER;
  case ErrorKind::Unsupported:
    return KINSBP_ERROR_UNSUPPORTED;
  }
  return KINSBP_ERROR_INTERNAL;
}

template <typename Fn> kinsbp_status guarded(Fn&& fn) {
  try {
    fn();
    return KINSBP_OK;
  } catch (const kinsbp::Error& err) {
    g_last_error = err.what();
    return to_status(err.kind());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return KINSBP_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KINSBP_ERROR_INTERNAL;
  }
}

void check_ptr(const void* p, const char* what) {
  kinsbp::require(p != nullptr, kinsbp::ErrorKind::InvalidArgument,
                  std::string(what) + " must not be null");
}

kinsbp::VelocitySpace velocity_from(const kinsbp_run_config& cfg) {
  const auto kind = cfg.velocity_kind == KINSBP_VELOCITY_TWO
                        ? kinsbp::VelocityKind::TwoVelocity
                        : kinsbp::VelocityKind::GaussLobatto;
  return kinsbp::build_velocity_space(kind, cfg.velocity_nodes);
}

kinsbp::RunConfig config_from(const kinsbp_run_config& cfg) {
  kinsbp::RunConfig rc;
  rc.elements = cfg.elements;
  rc.nodes = cfg.nodes;
  rc.time_nodes = cfg.time_nodes;
  rc.vspace = velocity_from(cfg);
  switch (cfg.dt_rule) {
  case KINSBP_DT_MATCH_ELEMENTS:
    rc.dt_rule = kinsbp::DtRule::MatchElements;
    break;
  case KINSBP_DT_TEN_DX:
    rc.dt_rule = kinsbp::DtRule::TenDx;
    break;
  case KINSBP_DT_EXPLICIT:
    rc.dt_rule = kinsbp::DtRule::Explicit;
    break;
  default:
    kinsbp::fail(kinsbp::ErrorKind::Configuration, "unknown dt rule");
  }
  rc.slabs = cfg.slabs;
  rc.final_time = cfg.final_time;
  return rc;
}

void fill_slice(const kinsbp_solution* s, const kinsbp::Slice& slice,
                double* rho, double* g) {
  const int S = static_cast<int>(slice.rho.size());
  if (rho != nullptr) {
    std::copy(slice.rho.data(), slice.rho.data() + S, rho);
  }
  if (g != nullptr) {
    kinsbp::require(!s->limit, kinsbp::ErrorKind::InvalidState,
                    "diffusion-limit solutions carry no micro fields");
    for (std::size_t k = 0; k < slice.g.size(); ++k) {
      std::copy(slice.g[k].data(), slice.g[k].data() + S, g + k * S);
    }
  }
}

} // namespace

extern "C" {

const char* kinsbp_version(void) { return "1.0.0"; }

const char* kinsbp_last_error(void) { return g_last_error.c_str(); }

void kinsbp_run_config_default(kinsbp_run_config* config) {
  if (config == nullptr) return;
  config->elements = 5;
  config->nodes = 3;
  config->time_nodes = 0;
  config->velocity_kind = KINSBP_VELOCITY_GAUSS_LOBATTO;
  config->velocity_nodes = 16;
  config->dt_rule = KINSBP_DT_MATCH_ELEMENTS;
  config->slabs = 1;
  config->final_time = -1.0;
}

kinsbp_status kinsbp_problem_create(kinsbp_problem_kind kind, double epsilon,
                                    kinsbp_problem** out) {
  return guarded([&] {
    check_ptr(out, "out");
    auto handle = std::make_unique<kinsbp_problem>();
    handle->kind = kind;
    handle->epsilon = epsilon;
    // validate eagerly so bad parameters fail at creation
    handle->make(kinsbp::build_velocity_space(kinsbp::VelocityKind::TwoVelocity));
    *out = handle.release();
  });
}

void kinsbp_problem_destroy(kinsbp_problem* problem) { delete problem; }

kinsbp_status kinsbp_problem_epsilon(const kinsbp_problem* problem,
                                     double* epsilon) {
  return guarded([&] {
    check_ptr(problem, "problem");
    check_ptr(epsilon, "epsilon");
    *epsilon = problem->make(kinsbp::build_velocity_space(
                                 kinsbp::VelocityKind::TwoVelocity))
                   .epsilon;
  });
}

kinsbp_status kinsbp_problem_final_time(const kinsbp_problem* problem,
                                        double* final_time) {
  return guarded([&] {
    check_ptr(problem, "problem");
    check_ptr(final_time, "final_time");
    *final_time = problem->make(kinsbp::build_velocity_space(
                                    kinsbp::VelocityKind::TwoVelocity))
                      .final_time;
  });
}

kinsbp_status kinsbp_problem_report_times(const kinsbp_problem* problem,
                                          double* times, int* count) {
  return guarded([&] {
    check_ptr(problem, "problem");
    check_ptr(count, "count");
    const auto spec = problem->make(
        kinsbp::build_velocity_space(kinsbp::VelocityKind::TwoVelocity));
    if (times != nullptr) {
      const int n = std::min<int>(*count, spec.report_times.size());
      std::copy_n(spec.report_times.begin(), n, times);
    }
    *count = static_cast<int>(spec.report_times.size());
  });
}

kinsbp_status kinsbp_solve(const kinsbp_problem* problem,
                           const kinsbp_run_config* config,
                           kinsbp_solution** out) {
  return guarded([&] {
    check_ptr(problem, "problem");
    check_ptr(config, "config");
    check_ptr(out, "out");
    auto sol = std::make_unique<kinsbp_solution>();
    sol->vspace = velocity_from(*config);
    sol->problem = problem->make(sol->vspace);
    kinsbp::RunConfig rc = config_from(*config);
    sol->slabs = kinsbp::march_slabs(sol->problem, rc);
    *out = sol.release();
  });
}

kinsbp_status kinsbp_solve_diffusion_limit(const kinsbp_problem* problem,
                                           const kinsbp_run_config* config,
                                           kinsbp_solution** out) {
  return guarded([&] {
    check_ptr(problem, "problem");
    check_ptr(config, "config");
    check_ptr(out, "out");
    auto sol = std::make_unique<kinsbp_solution>();
    sol->vspace = velocity_from(*config);
    sol->problem = problem->make(sol->vspace);
    sol->limit = true;
    kinsbp::RunConfig rc = config_from(*config);
    sol->slabs = kinsbp::solve_limit_diffusion(sol->problem, rc);
    *out = sol.release();
  });
}

void kinsbp_solution_destroy(kinsbp_solution* solution) { delete solution; }

kinsbp_status kinsbp_solution_slab_count(const kinsbp_solution* s, int* count) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(count, "count");
    *count = static_cast<int>(s->slabs.size());
  });
}

kinsbp_status kinsbp_solution_space_size(const kinsbp_solution* s, int* size) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(size, "size");
    *size = s->slabs.front().space();
  });
}

kinsbp_status kinsbp_solution_velocity_count(const kinsbp_solution* s,
                                             int* count) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(count, "count");
    *count = s->limit ? 0 : s->vspace.size();
  });
}

kinsbp_status kinsbp_solution_space_nodes(const kinsbp_solution* s, double* x) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(x, "x");
    const auto& nodes = s->slabs.front().x;
    std::copy(nodes.data(), nodes.data() + nodes.size(), x);
  });
}

kinsbp_status kinsbp_solution_velocity_nodes(const kinsbp_solution* s,
                                             double* v) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(v, "v");
    std::copy(s->vspace.v.data(), s->vspace.v.data() + s->vspace.size(), v);
  });
}

kinsbp_status kinsbp_solution_final_time(const kinsbp_solution* s, double* t) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(t, "t");
    *t = s->slabs.back().t_end;
  });
}

kinsbp_status kinsbp_solution_time_nodes(const kinsbp_solution* s,
                                         double* times, int* count) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(count, "count");
    std::vector<double> all;
    for (const auto& slab : s->slabs) {
      for (int i = 0; i < slab.nt(); ++i) {
        if (all.empty() || slab.times(i) > all.back() + 1e-12) {
          all.push_back(slab.times(i));
        }
      }
    }
    if (times != nullptr) {
      const int n = std::min<int>(*count, all.size());
      std::copy_n(all.begin(), n, times);
    }
    *count = static_cast<int>(all.size());
  });
}

kinsbp_status kinsbp_solution_slice(const kinsbp_solution* s, double t,
                                    double* rho, double* g) {
  return guarded([&] {
    check_ptr(s, "solution");
    fill_slice(s, kinsbp::extract_slice(s->slabs, t), rho, g);
  });
}

kinsbp_status kinsbp_solution_slice_interpolated(const kinsbp_solution* s,
                                                 double t, double* rho,
                                                 double* g) {
  return guarded([&] {
    check_ptr(s, "solution");
    fill_slice(s, kinsbp::interpolate_slice(s->slabs, t), rho, g);
  });
}

kinsbp_status kinsbp_solution_dump_csv(const kinsbp_solution* s,
                                       const char* path) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(path, "path");
    std::ofstream os(path);
    kinsbp::require(os.good(), kinsbp::ErrorKind::InvalidArgument,
                    std::string("cannot open ") + path);
    kinsbp::write_solution_dump(s->slabs, os);
  });
}

kinsbp_status kinsbp_solution_errors(const kinsbp_solution* s, double t,
                                     double* err_rho, double* err_g) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(err_rho, "err_rho");
    check_ptr(err_g, "err_g");
    const auto rep =
        kinsbp::compute_errors(s->slabs, s->problem, s->vspace, t);
    *err_rho = rep.err_rho;
    *err_g = rep.err_g;
  });
}

kinsbp_status kinsbp_solution_energy_ledger(const kinsbp_solution* s,
                                            int slab_index,
                                            kinsbp_energy_ledger* ledger) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(ledger, "ledger");
    kinsbp::require(!s->limit, kinsbp::ErrorKind::Unsupported,
                    "energy ledger applies to kinetic solutions");
    kinsbp::require(slab_index >= 0 &&
                        slab_index < static_cast<int>(s->slabs.size()),
                    kinsbp::ErrorKind::InvalidArgument,
                    "slab index out of range");
    const auto led = kinsbp::energy_ledger(s->slabs[slab_index], s->problem,
                                           s->vspace);
    ledger->t_start = led.t_start;
    ledger->t_end = led.t_end;
    ledger->top_energy = led.top_energy;
    ledger->bottom_energy = led.bottom_energy;
    ledger->damping_rho = led.damping_rho;
    ledger->damping_g = led.damping_g;
    ledger->init_mismatch_rho = led.init_mismatch_rho;
    ledger->init_mismatch_g = led.init_mismatch_g;
    ledger->sat_work_time = led.sat_work_time;
    ledger->forcing_work = led.forcing_work;
    ledger->mean_coupling_work = led.mean_coupling_work;
    ledger->b_lr = led.b_lr;
    ledger->residual = led.residual;
    ledger->residual_scale = led.residual_scale;
  });
}

kinsbp_status kinsbp_solution_mean_g_defect(const kinsbp_solution* s,
                                            double* defect, double* g_max) {
  return guarded([&] {
    check_ptr(s, "solution");
    check_ptr(defect, "defect");
    check_ptr(g_max, "g_max");
    kinsbp::require(!s->limit, kinsbp::ErrorKind::Unsupported,
                    "mean-g defect applies to kinetic solutions");
    const auto rep = kinsbp::mean_g_defect(s->slabs, s->vspace);
    *defect = rep.defect;
    *g_max = rep.g_max;
  });
}

kinsbp_status kinsbp_ap_gap(const kinsbp_solution* kinetic,
                            const kinsbp_solution* limit, double* gap) {
  return guarded([&] {
    check_ptr(kinetic, "kinetic");
    check_ptr(limit, "limit");
    check_ptr(gap, "gap");
    *gap = kinsbp::ap_gap(kinetic->slabs, limit->slabs);
  });
}

kinsbp_status kinsbp_convergence_order(double err_coarse, double err_fine,
                                       int elements_coarse, int elements_fine,
                                       double* order) {
  return guarded([&] {
    check_ptr(order, "order");
    kinsbp::require(err_coarse > 0.0 && err_fine > 0.0,
                    kinsbp::ErrorKind::InvalidArgument,
                    "order undefined for zero errors");
    kinsbp::require(elements_coarse > 0 && elements_fine > 0 &&
                        elements_coarse != elements_fine,
                    kinsbp::ErrorKind::InvalidArgument,
                    "element counts must be positive and distinct");
    *order = std::log(err_coarse / err_fine) /
             std::log(double(elements_fine) / elements_coarse);
  });
}

kinsbp_status kinsbp_verify_sbp(int nodes, double* max_exactness_err,
                                double* symmetry_defect, int* pass) {
  return guarded([&] {
    check_ptr(max_exactness_err, "max_exactness_err");
    check_ptr(symmetry_defect, "symmetry_defect");
    check_ptr(pass, "pass");
    const auto rep = kinsbp::verify_sbp(kinsbp::build_glb_sbp(nodes));
    *max_exactness_err = rep.max_exactness_error();
    *symmetry_defect = rep.symmetry_defect;
    *pass = rep.pass ? 1 : 0;
  });
}

kinsbp_status kinsbp_sbp_report(int nodes, char* buffer, size_t size) {
  return guarded([&] {
    check_ptr(buffer, "buffer");
    kinsbp::require(size > 0, kinsbp::ErrorKind::InvalidArgument,
                    "buffer size must be positive");
    const auto rep = kinsbp::verify_sbp(kinsbp::build_glb_sbp(nodes));
    const std::string table = rep.to_table();
    std::strncpy(buffer, table.c_str(), size - 1);
    buffer[size - 1] = '\0';
  });
}

kinsbp_status kinsbp_verify_skew(int nodes, int elements, double* max_defect,
                                 int* pass) {
  return guarded([&] {
    check_ptr(max_defect, "max_defect");
    check_ptr(pass, "pass");
    kinsbp::require(elements >= 1, kinsbp::ErrorKind::InvalidArgument,
                    "need at least one element");
    const auto ref = kinsbp::build_glb_sbp(nodes);
    std::vector<kinsbp::SbpOperator1D> ops;
    for (int e = 0; e < elements; ++e) {
      ops.push_back(kinsbp::scale_to_interval(ref, double(e) / elements,
                                              double(e + 1) / elements));
    }
    const auto per = kinsbp::build_periodic_op_multielement(ops);
    const kinsbp::SparseMatrix sym =
        kinsbp::SparseMatrix(per.Qx_tilde.transpose()) + per.Qx_tilde;
    double defect = 0.0;
    for (int c = 0; c < sym.outerSize(); ++c) {
      for (kinsbp::SparseMatrix::InnerIterator it(sym, c); it; ++it) {
        defect = std::max(defect, std::abs(it.value()));
      }
    }
    *max_defect = defect;
    *pass = defect <= 1e-13 ? 1 : 0;
  });
}

kinsbp_status kinsbp_verify_temporal(int nodes, double* min_real_eigenvalue,
                                     int* pass) {
  return guarded([&] {
    check_ptr(min_real_eigenvalue, "min_real_eigenvalue");
    check_ptr(pass, "pass");
    const auto op = kinsbp::build_glb_sbp(nodes);
    kinsbp::Matrix M = op.Q + op.tL * op.tL.transpose();
    M = op.h.cwiseInverse().asDiagonal() * M;
    const Eigen::EigenSolver<kinsbp::Matrix> es(M);
    *min_real_eigenvalue = es.eigenvalues().real().minCoeff();
    *pass = *min_real_eigenvalue >= -1e-12 ? 1 : 0;
  });
}

kinsbp_status kinsbp_verify_diagonalization(int velocity_nodes, double epsilon,
                                            double* similarity_residual,
                                            double* inverse_residual,
                                            int* pass) {
  return guarded([&] {
    check_ptr(similarity_residual, "similarity_residual");
    check_ptr(inverse_residual, "inverse_residual");
    check_ptr(pass, "pass");
    const auto vs = velocity_nodes == 2
                        ? kinsbp::build_velocity_space(
                              kinsbp::VelocityKind::TwoVelocity)
                        : kinsbp::build_velocity_space(
                              kinsbp::VelocityKind::GaussLobatto, velocity_nodes);
    const auto d = kinsbp::build_diagonalization(vs, epsilon);
    const int n = vs.size() + 1;
    *inverse_residual =
        (d.X * d.Xinv - kinsbp::Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    *similarity_residual =
        (d.A - d.X * d.lambda.asDiagonal() * d.Xinv).cwiseAbs().maxCoeff() /
        (1.0 + d.A.cwiseAbs().maxCoeff());
    *pass = (*inverse_residual <= 1e-12 && *similarity_residual <= 1e-12) ? 1 : 0;
  });
}

kinsbp_status kinsbp_boundary_condition_count(kinsbp_velocity_kind kind,
                                              int velocity_nodes, int* n_left,
                                              int* n_right, int* n_none) {
  return guarded([&] {
    check_ptr(n_left, "n_left");
    check_ptr(n_right, "n_right");
    check_ptr(n_none, "n_none");
    const auto vs =
        kind == KINSBP_VELOCITY_TWO
            ? kinsbp::build_velocity_space(kinsbp::VelocityKind::TwoVelocity)
            : kinsbp::build_velocity_space(kinsbp::VelocityKind::GaussLobatto,
                                           velocity_nodes);
    const auto c = kinsbp::boundary_condition_count(vs);
    *n_left = c.n_left;
    *n_right = c.n_right;
    *n_none = c.n_none;
  });
}

} // extern "C"
