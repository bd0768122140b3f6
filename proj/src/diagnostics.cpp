#include "diagnostics.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinsbp {

ErrorReport compute_errors(const std::vector<SlabSolution>& solutions,
                           const ProblemSpec& problem,
                           const VelocitySpace& vspace, double t) {
  require(problem.has_exact(), ErrorKind::InvalidArgument,
          "compute_errors: the problem has no exact solution");
  const Slice slice = extract_slice(solutions, t);
  const SlabSolution& front = solutions.front();

  ErrorReport rep;
  rep.elements = front.elements;
  rep.nodes = front.nodes_per_element;
  rep.epsilon = problem.epsilon;
  for (int s = 0; s < front.space(); ++s) {
    rep.err_rho = std::max(rep.err_rho,
                           std::abs(slice.rho(s) - problem.exact_rho(front.x(s), t)));
  }
  for (std::size_t k = 0; k < slice.g.size(); ++k) {
    for (int s = 0; s < front.space(); ++s) {
      const double ex = problem.exact_g(front.x(s), vspace.v(k), t);
      rep.err_g = std::max(rep.err_g, std::abs(slice.g[k](s) - ex));
    }
  }
  return rep;
}

std::vector<ConvergenceRow>
convergence_orders(const std::vector<ErrorReport>& reports) {
  require(reports.size() >= 2, ErrorKind::InvalidArgument,
          "convergence_orders: need at least two reports");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    require(reports[i].nodes == reports.front().nodes &&
                reports[i].epsilon == reports.front().epsilon,
            ErrorKind::InvalidArgument,
            "convergence_orders: reports must share N and epsilon");
    require(reports[i].elements != reports[i - 1].elements,
            ErrorKind::InvalidArgument,
            "convergence_orders: element counts must be distinct");
  }

  std::vector<ConvergenceRow> rows;
  rows.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    ConvergenceRow row;
    row.report = reports[i];
    if (i > 0) {
      const double ratio =
          std::log(double(reports[i].elements) / reports[i - 1].elements);
      if (reports[i - 1].err_rho > 0.0 && reports[i].err_rho > 0.0) {
        row.order_rho = std::log(reports[i - 1].err_rho / reports[i].err_rho) / ratio;
      }
      if (reports[i - 1].err_g > 0.0 && reports[i].err_g > 0.0) {
        row.order_g = std::log(reports[i - 1].err_g / reports[i].err_g) / ratio;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

double face_average(const VelocitySpace& vspace, const Vector& coef,
                    const std::vector<double>& values) {
  double sum = 0.0;
  for (int k = 0; k < vspace.size(); ++k) {
    sum += vspace.w(k) * coef(k) * values[k];
  }
  return sum;
}

} // namespace

EnergyLedger energy_ledger(const SlabSolution& sol, const ProblemSpec& problem,
                           const VelocitySpace& vspace) {
  RunConfig cfg;
  cfg.elements = sol.elements;
  cfg.nodes = sol.nodes_per_element;
  cfg.time_nodes = sol.nt(); // temporal grid may be decoupled from the spatial one
  cfg.vspace = vspace;
  const Discretization disc =
      make_discretization(problem, cfg, sol.t_end - sol.t_start);

  const int nt = sol.nt();
  const int S = sol.space();
  const int nv = sol.nv();
  const double eps = problem.epsilon;
  const double eps2 = eps * eps;
  const Vector& hx = disc.hx;
  const Vector& ht = disc.time_op.h;

  EnergyLedger led;
  led.t_start = sol.t_start;
  led.t_end = sol.t_end;

  const auto spatial_energy = [&](const Vector& u) {
    return u.cwiseProduct(u).dot(hx);
  };

  led.top_energy = 0.5 * spatial_energy(sol.rho_top());
  led.bottom_energy = 0.5 * spatial_energy(sol.rho_bottom());
  for (int k = 0; k < nv; ++k) {
    led.top_energy += 0.5 * eps2 * vspace.w(k) * spatial_energy(sol.g_top(k));
    led.bottom_energy +=
        0.5 * eps2 * vspace.w(k) * spatial_energy(sol.g_bottom(k));
  }

  Vector sig_s(S), sig_a(S);
  for (int s = 0; s < S; ++s) {
    sig_s(s) = problem.sigma_s(sol.x(s));
    sig_a(s) = problem.sigma_a(sol.x(s));
  }

  for (int it = 0; it < nt; ++it) {
    const double t = sol.times(it);
    for (int s = 0; s < S; ++s) {
      const double wts = ht(it) * hx(s);
      const double r = sol.rho(it, s);
      led.damping_rho += wts * sig_a(s) * r * r;
      led.forcing_work += wts * r * problem.forcing_rho(sol.x(s), t);
      for (int k = 0; k < nv; ++k) {
        const double gv = sol.g[k](it, s);
        led.damping_g +=
            vspace.w(k) * wts * (sig_s(s) + eps2 * sig_a(s)) * gv * gv;
        led.forcing_work += eps2 * vspace.w(k) * wts * gv *
                            problem.forcing_g(sol.x(s), vspace.v(k), t);
      }
    }
  }

  // initial-condition SAT work and mismatch energies
  {
    const Vector rb = sol.rho_bottom();
    const Vector dr = rb - sol.data_rho0;
    led.sat_work_time = -rb.cwiseProduct(dr).dot(hx);
    led.init_mismatch_rho = 0.5 * dr.cwiseProduct(dr).dot(hx);
    for (int k = 0; k < nv; ++k) {
      const Vector gb = sol.g_bottom(k);
      const Vector dg = gb - sol.data_g0[k];
      led.sat_work_time -= eps2 * vspace.w(k) * gb.cwiseProduct(dg).dot(hx);
      led.init_mismatch_g +=
          0.5 * eps2 * vspace.w(k) * dg.cwiseProduct(dg).dot(hx);
    }
  }

  // velocity-mean coupling term, zero up to the discrete <g> defect
  {
    const SparseMatrix& D = disc.scheme_D();
    for (int it = 0; it < nt; ++it) {
      Vector mean_g = Vector::Zero(S);
      Vector v_dg = Vector::Zero(S);
      for (int k = 0; k < nv; ++k) {
        const Vector gk = sol.g[k].row(it).transpose();
        mean_g += vspace.w(k) * gk;
        v_dg += vspace.w(k) * vspace.v(k) * (D * gk);
      }
      led.mean_coupling_work += eps * ht(it) * mean_g.cwiseProduct(v_dg).dot(hx);
    }
  }

  if (problem.bc == BoundaryKind::Dirichlet) {
    const double tau_rho = 0.5 / eps;
    const double tau_g = 0.5 / eps2;
    const int sL = 0;
    const int sR = S - 1;
    double w_rho = 0.0, w_g = 0.0, w_mean = 0.0, face_flux = 0.0;
    for (int it = 0; it < nt; ++it) {
      const double rL = sol.rho(it, sL);
      const double rR = sol.rho(it, sR);
      std::vector<double> pen_L(nv), pen_R(nv), gL(nv), gR(nv);
      for (int k = 0; k < nv; ++k) {
        gL[k] = sol.g[k](it, sL);
        gR[k] = sol.g[k](it, sR);
        pen_L[k] = rL + eps * gL[k] - problem.f_left(vspace.v(k));
        pen_R[k] = rR + eps * gR[k] - problem.f_right(vspace.v(k));
      }
      const double AL = face_average(vspace, vspace.v_plus, pen_L);
      const double AR = face_average(vspace, vspace.v_minus, pen_R);
      w_rho += ht(it) * (-tau_rho * rL * AL + tau_rho * rR * AR);

      double mean_gL = 0.0, mean_gR = 0.0, SL = 0.0, SR = 0.0;
      double self_L = 0.0, self_R = 0.0;
      for (int k = 0; k < nv; ++k) {
        mean_gL += vspace.w(k) * gL[k];
        mean_gR += vspace.w(k) * gR[k];
        const double vk = vspace.v(k);
        if (vk > 0.0) {
          self_L += vspace.w(k) * gL[k] * (-tau_g * vk) * pen_L[k];
          SL += vspace.w(k) * (-tau_g * vk) * pen_L[k];
        } else if (vk < 0.0) {
          self_R += vspace.w(k) * gR[k] * (tau_g * vk) * pen_R[k];
          SR += vspace.w(k) * (tau_g * vk) * pen_R[k];
        }
      }
      w_g += ht(it) * eps2 * (self_L + self_R);
      w_mean -= ht(it) * eps2 * (mean_gL * SL + mean_gR * SR);

      double vgR = 0.0, vgL = 0.0, gg = 0.0;
      for (int k = 0; k < nv; ++k) {
        vgR += vspace.w(k) * vspace.v(k) * gR[k];
        vgL += vspace.w(k) * vspace.v(k) * gL[k];
        gg += vspace.w(k) * vspace.v(k) * (gR[k] * gR[k] - gL[k] * gL[k]);
      }
      face_flux += ht(it) * (rR * vgR - rL * vgL + 0.5 * eps * gg);
    }
    led.b_lr = w_rho + w_g + w_mean - face_flux;
  }

  const double rhs = led.bottom_energy - led.damping_rho - led.damping_g +
                     led.sat_work_time + led.forcing_work +
                     led.mean_coupling_work + led.b_lr;
  led.residual = std::abs(led.top_energy - rhs);
  led.residual_scale = std::max(std::abs(led.top_energy), std::abs(rhs));
  return led;
}

double dirichlet_boundary_form(const SlabSolution& sol, double epsilon,
                               const VelocitySpace& vspace,
                               const Vector& ht_weights) {
  const int nv = sol.nv();
  const int sL = 0;
  const int sR = sol.space() - 1;
  double sum = 0.0;
  for (int it = 0; it < sol.nt(); ++it) {
    const double rL = sol.rho(it, sL);
    const double rR = sol.rho(it, sR);
    for (int k = 0; k < nv; ++k) {
      const double qL = rL + epsilon * sol.g[k](it, sL);
      const double qR = rR + epsilon * sol.g[k](it, sR);
      sum += ht_weights(it) * vspace.w(k) *
             (vspace.v_minus(k) * qL * qL - vspace.v_plus(k) * qR * qR);
    }
  }
  return sum / (2.0 * epsilon);
}

MeanGReport mean_g_defect(const std::vector<SlabSolution>& solutions,
                          const VelocitySpace& vspace) {
  MeanGReport rep;
  for (const auto& sol : solutions) {
    for (int it = 0; it < sol.nt(); ++it) {
      for (int s = 0; s < sol.space(); ++s) {
        double mean = 0.0;
        for (int k = 0; k < sol.nv(); ++k) {
          const double gv = sol.g[k](it, s);
          mean += vspace.w(k) * gv;
          rep.g_max = std::max(rep.g_max, std::abs(gv));
        }
        rep.defect = std::max(rep.defect, std::abs(mean));
      }
    }
  }
  return rep;
}

double ap_gap(const std::vector<SlabSolution>& kinetic,
              const std::vector<SlabSolution>& limit) {
  require(!kinetic.empty() && !limit.empty(), ErrorKind::InvalidArgument,
          "ap_gap: empty solution sequence");
  const SlabSolution& a = kinetic.back();
  const SlabSolution& b = limit.back();
  require(a.space() == b.space(), ErrorKind::InvalidArgument,
          "ap_gap: grids differ in size");
  require((a.x - b.x).cwiseAbs().maxCoeff() <= 1e-12, ErrorKind::InvalidArgument,
          "ap_gap: spatial grids differ");
  require(std::abs(a.t_end - b.t_end) <= 1e-12 * std::max(1.0, std::abs(a.t_end)),
          ErrorKind::InvalidArgument, "ap_gap: final times differ");
  return (a.rho_top() - b.rho_top()).cwiseAbs().maxCoeff();
}

} // namespace kinsbp
