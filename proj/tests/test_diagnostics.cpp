#include <doctest.h>

#include <cmath>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "problems.hpp"
#include "slab.hpp"

using namespace kinsbp;

TEST_CASE("errors vanish for an injected exact solution") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 4);
  const auto p = manufactured_problem(0.2, vs);
  RunConfig cfg;
  cfg.elements = 3;
  cfg.nodes = 3;
  cfg.vspace = vs;
  const auto disc = make_discretization(p, cfg, 1.0);

  SlabSolution sol;
  sol.t_start = 0.0;
  sol.t_end = 1.0;
  sol.times = disc.time_op.nodes;
  sol.x = disc.x;
  sol.elements = 3;
  sol.nodes_per_element = 3;
  sol.rho.resize(sol.nt(), sol.space());
  sol.g.assign(vs.size(), Matrix(sol.nt(), sol.space()));
  for (int it = 0; it < sol.nt(); ++it) {
    for (int s = 0; s < sol.space(); ++s) {
      sol.rho(it, s) = p.exact_rho(sol.x(s), sol.times(it));
      for (int k = 0; k < vs.size(); ++k) {
        sol.g[k](it, s) = p.exact_g(sol.x(s), vs.v(k), sol.times(it));
      }
    }
  }
  const auto rep = compute_errors({sol}, p, vs, 1.0);
  CHECK(rep.err_rho == 0.0);
  CHECK(rep.err_g == 0.0);

  auto no_exact = p;
  no_exact.exact_rho = nullptr;
  CHECK_THROWS_AS(compute_errors({sol}, no_exact, vs, 1.0), Error);
}

TEST_CASE("convergence order arithmetic") {
  const auto make = [](double err_rho, double err_g, int K) {
    ErrorReport r;
    r.err_rho = err_rho;
    r.err_g = err_g;
    r.elements = K;
    r.nodes = 2;
    r.epsilon = 0.5;
    return r;
  };

  SUBCASE("printed-table values") {
    const auto rows =
        convergence_orders({make(5.05e-2, 1.0, 5), make(2.35e-2, 0.5, 10)});
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].order_rho.has_value());
    CHECK(*rows[1].order_rho == doctest::Approx(1.10).epsilon(0.01));
    CHECK(*rows[1].order_g == doctest::Approx(1.0));
  }

  SUBCASE("halving per doubling is first order") {
    const auto rows = convergence_orders({make(1.0, 1.0, 5), make(0.5, 0.5, 10)});
    CHECK(*rows[1].order_rho == doctest::Approx(1.0));
  }

  SUBCASE("steep drop from the N=3 table") {
    const auto rows =
        convergence_orders({make(2.73e-2, 1.0, 5), make(2.16e-3, 0.5, 10)});
    CHECK(*rows[1].order_rho == doctest::Approx(3.66).epsilon(0.01));
  }

  SUBCASE("zero errors leave the order undefined") {
    const auto rows = convergence_orders({make(1e-3, 0.0, 5), make(0.0, 0.0, 10)});
    CHECK_FALSE(rows[1].order_rho.has_value());
    CHECK_FALSE(rows[1].order_g.has_value());
  }

  SUBCASE("mismatched sweeps are rejected") {
    auto a = make(1.0, 1.0, 5);
    auto b = make(0.5, 0.5, 5); // same K
    CHECK_THROWS_AS(convergence_orders({a, b}), Error);
    CHECK_THROWS_AS(convergence_orders({a}), Error);
  }
}

TEST_CASE("energy ledger closes the discrete identity") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);

  SUBCASE("zero solution has an all-zero ledger") {
    auto p = variable_scattering_problem(); // zero data, but drop the source
    p.forcing_rho = [](double, double) { return 0.0; };
    RunConfig cfg;
    cfg.elements = 4;
    cfg.nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::Explicit;
    cfg.slabs = 2;
    const auto sols = march_slabs(p, cfg);
    for (const auto& sol : sols) {
      const auto led = energy_ledger(sol, p, vs);
      CHECK(led.top_energy == 0.0);
      CHECK(led.bottom_energy == 0.0);
      CHECK(led.damping_rho == 0.0);
      CHECK(led.b_lr == 0.0);
      CHECK(led.residual == 0.0);
    }
  }

  SUBCASE("periodic manufactured run: relative residual at roundoff level") {
    const auto p = manufactured_problem(1e-2, vs);
    RunConfig cfg;
    cfg.elements = 10;
    cfg.nodes = 3;
    cfg.vspace = vs;
    const auto sols = march_slabs(p, cfg);
    for (const auto& sol : sols) {
      const auto led = energy_ledger(sol, p, vs);
      CHECK(led.relative_residual() <= 1e-8);
      CHECK(led.b_lr == 0.0); // periodic: no boundary term
    }
  }

  SUBCASE("Dirichlet decay: b_LR <= 0 and monotone top energy") {
    const auto p = dirichlet_decay_problem();
    RunConfig cfg;
    cfg.elements = 8;
    cfg.nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::Explicit;
    cfg.slabs = 12;
    cfg.final_time = 0.12;
    const auto sols = march_slabs(p, cfg);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& sol : sols) {
      const auto led = energy_ledger(sol, p, vs);
      CHECK(led.b_lr <= 1e-12);
      CHECK(led.relative_residual() <= 1e-8);
      CHECK(led.top_energy <= led.bottom_energy + 1e-14);
      CHECK(led.top_energy <= prev * (1.0 + 1e-12));
      prev = led.top_energy;
    }
  }

  SUBCASE("decoupled temporal grid keeps the identity closed") {
    const auto p = variable_scattering_problem();
    RunConfig cfg;
    cfg.elements = 10;
    cfg.nodes = 2;
    cfg.time_nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::Explicit;
    cfg.slabs = 1;
    const auto sols = march_slabs(p, cfg);
    const auto led = energy_ledger(sols[0], p, vs);
    CHECK(led.relative_residual() <= 1e-8);
  }

  SUBCASE("inhomogeneous data keeps the identity closed") {
    const auto p = inhomogeneous_dirichlet_problem(1.0);
    RunConfig cfg;
    cfg.elements = 5;
    cfg.nodes = 3;
    cfg.vspace = vs;
    cfg.dt_rule = DtRule::TenDx;
    const auto sols = march_slabs(p, cfg);
    for (const auto& sol : sols) {
      const auto led = energy_ledger(sol, p, vs);
      CHECK(led.relative_residual() <= 1e-8);
    }
  }
}

TEST_CASE("mean-g defect") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 8);

  SUBCASE("odd-in-v data is mean-free") {
    SlabSolution sol;
    sol.t_start = 0.0;
    sol.t_end = 1.0;
    sol.times = Vector::LinSpaced(2, 0.0, 1.0);
    sol.x = Vector::LinSpaced(5, 0.0, 1.0);
    sol.elements = 1;
    sol.nodes_per_element = 5;
    sol.g.assign(vs.size(), Matrix(2, 5));
    sol.rho = Matrix::Zero(2, 5);
    for (int k = 0; k < vs.size(); ++k) {
      for (int it = 0; it < 2; ++it) {
        for (int s = 0; s < 5; ++s) {
          sol.g[k](it, s) = vs.v(k) * (1.0 + it + s);
        }
      }
    }
    const auto rep = mean_g_defect({sol}, vs);
    CHECK(rep.defect <= 1e-14 * rep.g_max);

    // a constant-in-v perturbation is reported at its size
    for (int k = 0; k < vs.size(); ++k) sol.g[k].array() += 1e-3;
    const auto bad = mean_g_defect({sol}, vs);
    CHECK(bad.defect == doctest::Approx(1e-3).epsilon(1e-10));
  }

  SUBCASE("solver output keeps <g> at solver tolerance") {
    const auto p = manufactured_problem(1e-2, vs);
    RunConfig cfg;
    cfg.elements = 10;
    cfg.nodes = 3;
    cfg.vspace = vs;
    const auto sols = march_slabs(p, cfg);
    const auto rep = mean_g_defect(sols, vs);
    CHECK(rep.defect <= 1e-10 * rep.g_max);
  }
}

TEST_CASE("asymptotic-preserving gap") {
  const auto vs = build_velocity_space(VelocityKind::GaussLobatto, 16);
  RunConfig cfg;
  cfg.elements = 10;
  cfg.nodes = 3;
  cfg.vspace = vs;

  SUBCASE("identical inputs give zero gap") {
    const auto p = manufactured_problem(1e-6, vs);
    const auto lim = solve_limit_diffusion(p, cfg);
    CHECK(ap_gap(lim, lim) == 0.0);
  }

  SUBCASE("diffusive regime: kinetic matches the limit solve") {
    const auto p = manufactured_problem(1e-6, vs);
    const auto kin = march_slabs(p, cfg);
    const auto lim = solve_limit_diffusion(p, cfg);
    CHECK(ap_gap(kin, lim) <= 1e-4);
  }

  SUBCASE("kinetic regime: gap is order one and only reported") {
    const auto p = manufactured_problem(0.5, vs);
    const auto kin = march_slabs(p, cfg);
    const auto lim = solve_limit_diffusion(p, cfg);
    CHECK(ap_gap(kin, lim) > 1e-3);
  }

  SUBCASE("grid mismatch is rejected") {
    const auto p = manufactured_problem(1e-6, vs);
    const auto a = solve_limit_diffusion(p, cfg);
    auto cfg2 = cfg;
    cfg2.elements = 12;
    const auto b = solve_limit_diffusion(p, cfg2);
    CHECK_THROWS_AS(ap_gap(a, b), Error);
  }
}
