#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "sbp.hpp"

using namespace kinsbp;

namespace {

// Reference quadrature oracle: composite Simpson on [-1, 1], fine enough to
// resolve low-degree monomials to machine precision.
double simpson_integral(const std::function<double(double)>& f) {
  const int n = 2000; // even
  const double h = 2.0 / n;
  double sum = f(-1.0) + f(1.0);
  for (int i = 1; i < n; ++i) {
    sum += f(-1.0 + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double apply_rule(const Vector& nodes, const Vector& weights,
                  const std::function<double(double)>& f) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights(i) * f(nodes(i));
  return sum;
}

} // namespace

TEST_CASE("two-point Gauss-Lobatto rule is the trapezoid endpoints") {
  Vector x, w;
  gauss_lobatto_rule(2, x, w);
  CHECK(x(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("three-point rule weights from monomial exactness") {
  Vector x, w;
  gauss_lobatto_rule(3, x, w);
  CHECK(x(0) == doctest::Approx(-1.0));
  CHECK(x(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(x(2) == doctest::Approx(1.0));
  CHECK(w(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(w(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(w(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (int k = 0; k <= 3; ++k) {
    const auto mono = [k](double t) { return std::pow(t, k); };
    CHECK(apply_rule(x, w, mono) ==
          doctest::Approx(simpson_integral(mono)).epsilon(1e-10));
  }
}

TEST_CASE("five-point rule: exact through degree 2n-3, first failure at x^8") {
  Vector x, w;
  gauss_lobatto_rule(5, x, w);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  for (int k = 0; k <= 7; ++k) {
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    const auto mono = [k](double t) { return std::pow(t, k); };
    CHECK(std::abs(apply_rule(x, w, mono) - exact) < 1e-13);
  }
  // odd degrees stay exact by symmetry beyond the design order
  CHECK(std::abs(apply_rule(x, w, [](double t) { return std::pow(t, 9); })) <
        1e-14);
  const double e8 =
      std::abs(apply_rule(x, w, [](double t) { return std::pow(t, 8); }) -
               2.0 / 9.0);
  CHECK(e8 > 1e-3);
}

TEST_CASE("fewer than two nodes is rejected") {
  Vector x, w;
  CHECK_THROWS_AS(gauss_lobatto_rule(1, x, w), Error);
  CHECK_THROWS_AS(gauss_lobatto_rule(0, x, w), Error);
}

TEST_CASE("two-node SBP operator in closed form") {
  const auto op = build_glb_sbp(2);
  CHECK(op.D(0, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(op.D(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(op.D(1, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(op.D(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  const Matrix sym = op.Q + op.Q.transpose();
  CHECK(sym(0, 0) == doctest::Approx(-1.0));
  CHECK(sym(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(sym(0, 1)) < 1e-15);
}

TEST_CASE("derivative annihilates constants") {
  for (int n : {2, 3, 5, 9}) {
    const auto op = build_glb_sbp(n);
    CHECK((op.D * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("four-node operator differentiates cubics") {
  const auto op = build_glb_sbp(4);
  const Vector x3 = op.nodes.array().pow(3);
  const Vector want = 3.0 * op.nodes.array().pow(2);
  CHECK((op.D * x3 - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("SBP invariants for all node counts in use") {
  for (int n = 2; n <= 12; ++n) {
    const auto op = build_glb_sbp(n);
    const auto rep = verify_sbp(op);
    CHECK(rep.pass);
    CHECK(rep.symmetry_defect <= 1e-13);
    CHECK(rep.max_exactness_error() <= 1e-12);
    // Q = S + E/2 with S skew-symmetric
    const Matrix S = op.skew_part();
    CHECK((S + S.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((op.Q - S - 0.5 * op.boundary_matrix()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(op.tL(0) == 1.0);
    CHECK(op.tR(n - 1) == 1.0);
  }
}

TEST_CASE("interval scaling") {
  const auto ref = build_glb_sbp(2);

  SUBCASE("identity map") {
    const auto same = scale_to_interval(ref, -1.0, 1.0);
    CHECK((same.D - ref.D).cwiseAbs().maxCoeff() == 0.0);
    CHECK((same.h - ref.h).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("two nodes on [0, 0.5]") {
    const auto op = scale_to_interval(ref, 0.0, 0.5);
    CHECK(op.D(0, 0) == doctest::Approx(-2.0));
    CHECK(op.D(0, 1) == doctest::Approx(2.0));
    CHECK(op.D(1, 0) == doctest::Approx(-2.0));
    CHECK(op.D(1, 1) == doctest::Approx(2.0));
    CHECK(op.nodes(0) == 0.0);
    CHECK(op.nodes(1) == 0.5);
  }

  SUBCASE("Q is scale-invariant and invariants survive random intervals") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int n : {2, 4, 7}) {
      const auto op = build_glb_sbp(n);
      for (int trial = 0; trial < 10; ++trial) {
        double a = dist(rng), b = dist(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-3) b = a + 1.0;
        const auto scaled = scale_to_interval(op, a, b);
        CHECK((scaled.Q - op.Q).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(verify_sbp(scaled).pass);
      }
    }
  }

  SUBCASE("degenerate interval is rejected") {
    CHECK_THROWS_AS(scale_to_interval(ref, 1.0, 1.0), Error);
    CHECK_THROWS_AS(scale_to_interval(ref, 2.0, -1.0), Error);
  }
}

TEST_CASE("verification catches an injected symmetry defect") {
  auto op = build_glb_sbp(4);
  CHECK(verify_sbp(op).pass);
  op.Q(1, 2) += 1e-6;
  const auto rep = verify_sbp(op);
  CHECK(rep.symmetry_defect >= 1e-6);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("three-node operator misses cubics beyond its design order") {
  const auto op = build_glb_sbp(3);
  const Vector x3 = op.nodes.array().pow(3);
  const Vector want = 3.0 * op.nodes.array().pow(2);
  CHECK((op.D * x3 - want).cwiseAbs().maxCoeff() > 1e-3);
}
