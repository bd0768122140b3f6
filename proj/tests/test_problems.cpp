#include <doctest.h>

#include <cmath>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "problems.hpp"
#include "slab.hpp"

using namespace kinsbp;

TEST_CASE("manufactured decay rate") {
  CHECK(manufactured_rate(0.5) == doctest::Approx(-2.0));
  CHECK(manufactured_rate(1e-8) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK_THROWS_AS(manufactured_rate(0.6), Error);
  CHECK_THROWS_AS(manufactured_rate(0.0), Error);
}

TEST_CASE("manufactured solution approaches the diffusive profile") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto p = manufactured_problem(1e-8, vs);
  for (double x : {-2.0, 0.3, 1.7}) {
    for (double t : {0.0, 0.5, 1.0}) {
      CHECK(p.exact_rho(x, t) ==
            doctest::Approx(-std::exp(-t) * std::sin(x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("micro data has zero discrete mean") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto problems = {manufactured_problem(0.5, vs),
                         variable_scattering_problem(),
                         dirichlet_decay_problem(),
                         inhomogeneous_dirichlet_problem(1.0)};
  for (const auto& p : problems) {
    for (double x : {0.1, 0.5, 0.9}) {
      Vector g0(vs.size());
      for (int k = 0; k < vs.size(); ++k) g0(k) = p.g0(x, vs.v(k));
      CHECK(std::abs(vs.average(g0)) <= 1e-15);
    }
  }
  // the manufactured exact micro solution stays mean-free in time
  const auto p = manufactured_problem(0.1, vs);
  for (double t : {0.0, 0.7}) {
    Vector gv(vs.size());
    for (int k = 0; k < vs.size(); ++k) gv(k) = p.exact_g(1.1, vs.v(k), t);
    CHECK(std::abs(vs.average(gv)) <= 1e-15);
  }
}

TEST_CASE("variable scattering data") {
  const auto p = variable_scattering_problem();
  CHECK(p.sigma_s(0.5) == doctest::Approx(26.0));
  CHECK(p.epsilon == 1e-2);
  CHECK(p.rho0(0.37) == 0.0);
  CHECK(p.forcing_rho(0.2, 0.1) == 1.0);
  CHECK(p.forcing_g(0.2, -0.5, 0.1) == 0.0);
  CHECK(p.final_time == 0.4);
  CHECK(p.f_left(0.7) == 0.0);
  CHECK(p.f_right(-0.7) == 0.0);
}

TEST_CASE("variable scattering: refined solves self-converge at t = 0.4") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto p = variable_scattering_problem();

  // single coarse time slab with three temporal nodes, as in the profile runs
  const auto run = [&](int K, int N) {
    RunConfig cfg;
    cfg.elements = K;
    cfg.nodes = N;
    cfg.time_nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::Explicit;
    cfg.slabs = 1;
    return march_slabs(p, cfg);
  };

  const auto reference = run(300, 3);
  const Vector ref_top = reference.back().rho_top();
  const Vector ref_x = reference.back().x;

  const auto deviation = [&](const std::vector<SlabSolution>& sols) {
    // compare on the coarse run's nodes against the reference's nearest node
    const Vector top = sols.back().rho_top();
    const Vector& x = sols.back().x;
    double dev = 0.0;
    for (int s = 0; s < x.size(); ++s) {
      int best = 0;
      for (int r = 1; r < ref_x.size(); ++r) {
        if (std::abs(ref_x(r) - x(s)) < std::abs(ref_x(best) - x(s))) best = r;
      }
      dev = std::max(dev, std::abs(top(s) - ref_top(best)));
    }
    return dev;
  };

  const double dev_coarse = deviation(run(10, 2));
  const double dev_mid = deviation(run(75, 3));
  const double dev_fine = deviation(run(150, 3));
  CHECK(dev_fine < dev_mid);
  CHECK(dev_mid < dev_coarse);
  CHECK(dev_coarse > 1e-3); // the coarse run is visibly off
  CHECK(dev_fine < 2e-4);   // refined runs agree closely
}

TEST_CASE("inflow problem data and regimes") {
  const auto p1 = inhomogeneous_dirichlet_problem(1.0);
  CHECK(p1.f_left(0.5) == 1.0);
  CHECK(p1.f_right(-0.5) == 0.0);
  CHECK(p1.sigma_s(0.3) == 1.0);
  CHECK(p1.sigma_a(0.3) == 0.0);
  REQUIRE(p1.report_times.size() == 5);
  CHECK(p1.report_times.front() == 0.1);
  CHECK(p1.report_times.back() == 4.0);
  CHECK_THROWS_AS(inhomogeneous_dirichlet_problem(0.0), Error);

  // kinetic (eps = 1) and diffusive (eps = 1e-8) runs complete without failure
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  for (double eps : {1.0, 1e-8}) {
    RunConfig cfg;
    cfg.elements = 10;
    cfg.nodes = 2;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::TenDx;
    const auto sols = march_slabs(inhomogeneous_dirichlet_problem(eps), cfg);
    CHECK(sols.size() == 4);
    CHECK(std::isfinite(sols.back().rho_top().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("diffusive inflow approaches the linear steady profile") {
  // steady diffusion with rho(0) = 1, rho(1) = 0 is 1 - x; by t = 4 the
  // eps -> 0 inflow solution should be close to it
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto p = inhomogeneous_dirichlet_problem(1e-8);
  RunConfig cfg;
  cfg.elements = 10;
  cfg.nodes = 3;
  cfg.vspace = vs;
  cfg.dt_rule = DtRule::TenDx;
  const auto sols = march_slabs(p, cfg);
  const Vector top = sols.back().rho_top();
  const Vector& x = sols.back().x;
  double dev = 0.0;
  for (int s = 0; s < x.size(); ++s) {
    dev = std::max(dev, std::abs(top(s) - (1.0 - x(s))));
  }
  CHECK(dev < 5e-2);
}

namespace {

// barycentric evaluation of the element polynomial at arbitrary x
double eval_profile(const SlabSolution& sol, const Vector& values, double x) {
  const int n = sol.nodes_per_element;
  const int K = sol.elements;
  int e = 0;
  for (int cand = 0; cand < K; ++cand) {
    if (x >= sol.x(cand * n) - 1e-12 && x <= sol.x(cand * n + n - 1) + 1e-12) {
      e = cand;
      break;
    }
  }
  Vector nodes = sol.x.segment(e * n, n);
  Vector vals = values.segment(e * n, n);
  Vector lambda = Vector::Ones(n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m != j) lambda(j) /= (nodes(j) - nodes(m));
    }
  }
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(x - nodes(j)) < 1e-14) return vals(j);
    const double c = lambda(j) / (x - nodes(j));
    num += c * vals(j);
    den += c;
  }
  return num / den;
}

} // namespace

TEST_CASE("high-order source-problem profiles agree across meshes") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto p = variable_scattering_problem();
  const auto run = [&](int K, int N) {
    RunConfig cfg;
    cfg.elements = K;
    cfg.nodes = N;
    cfg.time_nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::Explicit;
    cfg.slabs = 1;
    return march_slabs(p, cfg);
  };
  const auto a = run(5, 7);
  const auto b = run(2, 20);
  const Vector top_a = a.back().rho_top();
  const Vector top_b = b.back().rho_top();
  double dev = 0.0;
  for (int s = 0; s < a.back().space(); ++s) {
    dev = std::max(dev, std::abs(top_a(s) -
                                 eval_profile(b.back(), top_b, a.back().x(s))));
  }
  CHECK(dev < 1e-3);
}

TEST_CASE("reproducible error-table anchor cells") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  const auto cell = [&](double eps, int N, int K) {
    RunConfig cfg;
    cfg.elements = K;
    cfg.nodes = N;
    cfg.vspace = vs;
    const auto p = manufactured_problem(eps, vs);
    return compute_errors(march_slabs(p, cfg), p, vs, 1.0);
  };
  CHECK(cell(1e-6, 3, 25).err_rho == doctest::Approx(1.24e-4).epsilon(0.05));
  CHECK(cell(1e-2, 3, 25).err_rho == doctest::Approx(1.24e-4).epsilon(0.05));
  CHECK(cell(1e-2, 5, 10).err_rho == doctest::Approx(2.91e-6).epsilon(0.10));
  CHECK(cell(1e-2, 5, 10).err_g == doctest::Approx(2.88e-6).epsilon(0.10));
  CHECK(cell(0.5, 7, 10).err_rho == doctest::Approx(3.40e-10).epsilon(0.10));
}
