#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "sbt/fock.hpp"
#include "sbt/specfun.hpp"

using namespace sbt;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double binom(int a, int b) { return std::round(std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0))); }

}  // namespace

TEST_CASE("multi-index sets") {
  for (int n = 1; n <= 3; ++n)
    for (int D = 0; D <= 6; ++D) CHECK(MultiIndexSet::make(n, D).size() == binom(D + n, n));
  auto s = MultiIndexSet::make(2, 2);
  std::vector<MultiIndex> want = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(s.indices == want);
  CHECK(MultiIndexSet::make(3, 4).indices == MultiIndexSet::make(3, 4).indices);
}

TEST_CASE("zeta values and norms") {
  std::vector<int> a0 = {0, 0}, a1 = {1};
  std::vector<cplx> z2 = {cplx(1.5, -2.0), cplx(0.3, 0.7)}, two = {2.0};
  CHECK(zeta(a0, z2).real() == 1.0);
  CHECK(zeta(a1, two).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // <zeta_alpha, zeta_alpha> in L^2((2 pi)^{-2} e^{-|z|^2/2} dz) by 4-D Gauss-Hermite.
  for (const auto& alpha : MultiIndexSet::make(2, 3).indices) {
    std::vector<double> c(4, 0.0), sc(4, std::sqrt(2.0));
    cplx norm = integrate_nd(
        [&](std::span<const double> p) {
          std::vector<cplx> z = {cplx(p[0], p[2]), cplx(p[1], p[3])};
          double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
          return std::norm(zeta(alpha, z).value()) * std::exp(-r2 / 2) / std::pow(2 * M_PI, 2);
        },
        hermite_tensor(8, 4), c, sc);
    CHECK(std::abs(norm - 1.0) <= 1e-9);
  }
  // Far beyond double range.
  std::vector<int> big = {60};
  std::vector<cplx> zbig = {cplx(1e200, 0)};
  CHECK(zeta(big, zbig).log_abs() == doctest::Approx(60 * std::log(1e200) - 30 * std::log(2.0) - 0.5 * std::lgamma(61.0)));
}

TEST_CASE("toeplitz entries") {
  SymbolSpec one = SymbolSpec::one(), gr = SymbolSpec::gauss_radial(1.0);
  for (int n = 1; n <= 2; ++n)
    for (const auto& a : MultiIndexSet::make(n, 3).indices) CHECK(toeplitz_entry(one, a, a, n).real() == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k) {
    std::vector<int> a = {k};
    CHECK(toeplitz_entry(gr, a, a, 1).real() == doctest::Approx(std::pow(2.0, -(k + 1))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(toeplitz_entry(SymbolSpec::gauss_yv({0.0, 0}, {0.6, 0}), std::vector<int>{0}, std::vector<int>{0}, 1), DivergenceError);
  CHECK_THROWS_AS(toeplitz_entry(gr, std::vector<int>{0}, std::vector<int>{0}, 3), RangeError);
}

TEST_CASE("radial symbols give diagonal matrices") {
  for (const SymbolSpec& g : {SymbolSpec::one(), SymbolSpec::gauss_radial(1.0), SymbolSpec::gauss_radial(-0.5),
                              SymbolSpec::poly_gauss_radial(2, 1.0), SymbolSpec::poly_gauss_radial(4, 0.5),
                              SymbolSpec::annulus(1.0, 2.0), SymbolSpec::gauss_h(1.5)})
    for (int n = 1; n <= 2; ++n) {
      ToeplitzMatrix m = toeplitz_matrix(g, n, 3);
      double off = 0.0;
      for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
          if (i != j) off = std::max(off, std::abs(m.entries(i, j)));
      CHECK(off <= 1e-9);
    }
}

TEST_CASE("non-radial real symbol gives a Hermitian, non-diagonal matrix") {
  SymbolSpec g = SymbolSpec::gauss_yv({-0.3, 0}, {-1.0, 0});
  ToeplitzMatrix m = toeplitz_matrix(g, 1, 6);
  CHECK((m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(std::abs(m.entries(0, 2)) > 1e-3);
  ToeplitzMatrix my = toeplitz_matrix(SymbolSpec::gauss_y(1.0), 2, 2);
  CHECK((my.entries - my.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("diagonal entries equal the radial sequence") {
  for (const SymbolSpec& g : {SymbolSpec::gauss_radial(1.0), SymbolSpec::poly_gauss_radial(2, 1.0), SymbolSpec::annulus(1.0, 2.0)})
    for (int n = 1; n <= 2; ++n) {
      SequenceReport r = radial_seq_direct(g, n, 4);
      for (const auto& a : MultiIndexSet::make(n, 4).indices)
        CHECK(rel(toeplitz_entry(g, a, a, n), r.entries[degree(a)].value) <= 1e-7);
    }
}

TEST_CASE("radial_seq_direct against closed forms") {
  SequenceReport one = radial_seq_direct(SymbolSpec::one(), 2, 30);
  for (const auto& e : one.entries) CHECK(std::abs(e.value - 1.0) <= 1e-12);
  CHECK(one.verdict == Verdict::Bounded);

  // e^{-a r^2/2}: R_k = (1+a)^{-(k+n)}
  for (int n = 1; n <= 3; ++n)
    for (double a : {1.0, 0.3, -0.5}) {
      SequenceReport r = radial_seq_direct(SymbolSpec::gauss_radial(a), n, 40);
      for (const auto& e : r.entries) CHECK(rel(e.value, std::pow(1 + a, -(e.k + n))) <= 1e-9);
      CHECK(r.verdict == (a > 0 ? Verdict::Bounded : Verdict::Unbounded));
    }
  SequenceReport half = radial_seq_direct(SymbolSpec::gauss_radial(1.0), 1, 40);
  CHECK(half.tail_ratio == doctest::Approx(0.5).epsilon(1e-6));

  // Annulus, n = 1: R_k = P(k+1, 2) - P(k+1, 1/2).
  SequenceReport ann = radial_seq_direct(SymbolSpec::annulus(1.0, 2.0), 1, 25);
  for (const auto& e : ann.entries) {
    double want = boost::math::gamma_p(e.k + 1.0, 2.0) - boost::math::gamma_p(e.k + 1.0, 0.5);
    CHECK(rel(e.value, want) <= 1e-9);
  }
  CHECK(ann.verdict == Verdict::Bounded);
  RadialProfile edge{[](double r) { return cplx(std::exp(r * r / 2)); }, DecayBudget{0.5, 0, 1.0, {}}};
  CHECK_THROWS_AS(radial_seq_direct(edge, 1, 10), DivergenceError);
}

TEST_CASE("heat-flow route matches the direct route") {
  for (const SymbolSpec& g : {SymbolSpec::one(), SymbolSpec::gauss_radial(1.0), SymbolSpec::poly_gauss_radial(2, 1.0),
                              SymbolSpec::annulus(1.0, 2.0), SymbolSpec::gauss_radial(-0.5), SymbolSpec::poly_gauss_radial(4, 1.0)})
    for (int n = 1; n <= 2; ++n) {
      SequenceReport d = radial_seq_direct(g, n, 20), h = radial_seq_heatflow(g, n, 20);
      for (int k = 0; k <= 20; ++k) CHECK(rel(h.entries[k].value, d.entries[k].value) <= 1e-7);
    }
  CHECK_THROWS_AS(radial_seq_heatflow(SymbolSpec::gauss_radial(1.0), 3, 5), RangeError);
  CHECK_THROWS_AS(radial_seq_heatflow(SymbolSpec::gauss_y(1.0), 1, 5), ConstraintError);
}

TEST_CASE("cor23 premise and verdict") {
  Cor23Result ann = cor23_check(SymbolSpec::annulus(1.0, 2.0), 1, 30);
  CHECK(ann.premise_holds);
  CHECK(ann.report.verdict == Verdict::Bounded);
  CHECK(ann.consistent);
  Cor23Result one = cor23_check(SymbolSpec::one(), 1, 30);
  CHECK_FALSE(one.premise_holds);
  CHECK(one.report.verdict == Verdict::Bounded);
  Cor23Result grow = cor23_check(SymbolSpec::gauss_radial(-0.5), 1, 30);
  CHECK_FALSE(grow.premise_holds);
  CHECK(grow.report.verdict == Verdict::Unbounded);
  CHECK(cor23_check(SymbolSpec::gauss_radial(1.0), 2, 30).premise_holds);
}

TEST_CASE("Laguerre L1 integrals") {
  // k = 0: int e^{-r^2/2} r^{1-beta} dr
  CHECK(laguerre_l1_integral(0, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(laguerre_l1_integral(0, 1.0, 1) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-10));
  // n = 2, k = 0: L = r e^{-r^2/2}
  CHECK(laguerre_l1_integral(0, 0.0, 2) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-10));
  std::vector<int> ks = {100, 141, 200, 283, 400, 566, 800};
  CHECK(std::abs(laguerre_l1_exponent(0.0, 1, ks).exponent - 0.5) <= 0.1);
  CHECK(std::abs(laguerre_l1_exponent(1.0, 1, ks).exponent) <= 0.1);
  ExponentFit n2 = laguerre_l1_exponent(0.0, 2, ks);
  CHECK(std::abs(n2.exponent - 0.5) <= 0.1);
  CHECK_THROWS_AS(laguerre_l1_integral(10, 2.0, 1), RangeError);
}

TEST_CASE("heat Bergman multiplier") {
  std::vector<double> xi1 = {0.7};
  MultiplierRoutes one = heat_bergman_multiplier(SymbolSpec::one(), 0.5, xi1);
  CHECK(std::abs(one.tilted - 1.0) <= 1e-12);
  CHECK(std::abs(one.convolution - 1.0) <= 1e-12);

  for (double a : {0.5, 1.0, 2.0})
    for (double t : {0.25, 0.5})
      for (int i = 0; i <= 20; ++i) {
        std::vector<double> xi = {-3.0 + 0.3 * i};
        SymbolSpec g = SymbolSpec::gauss_y(a);
        MultiplierRoutes r = heat_bergman_multiplier(g, t, xi);
        CHECK(r.discrepancy <= 1e-8);
        double c = 1 + 2 * t * a, at = 2 * t * xi[0];
        CHECK(rel(r.tilted, std::pow(c, -0.5) * std::exp(-a * at * at / c)) <= 1e-9);
        // flow of g0 at xi itself
        CHECK(rel(heat_flow(g, t / 2, xi), std::pow(c, -0.5) * std::exp(-a * xi[0] * xi[0] / c)) <= 1e-9);
        MultiplierRoutes p = heat_bergman_multiplier(to_profile(SymbolSpec::gauss_radial(2 * a)), t, xi);
        CHECK(rel(p.convolution, r.convolution) <= 1e-9);
        CHECK(p.discrepancy <= 1e-8);
      }
  std::vector<double> xi2 = {0.3, -0.4};
  CHECK(heat_bergman_multiplier(SymbolSpec::gauss_y(1.0), 0.25, xi2).discrepancy <= 1e-8);
  RadialProfile grow{[](double r) { return cplx(std::exp(r * r)); }, DecayBudget{1.0, 0, 1.0, {}}};
  CHECK_THROWS_AS(heat_bergman_multiplier(grow, 0.5, xi1), DivergenceError);
}

TEST_CASE("multiplier reproduces the sesquilinear form") {
  // n = 1, t = 0.5, f = e^{-x^2/2}: F(z) = e^{-z^2/4}/sqrt(2), |f^|^2 ~ e^{-xi^2}.
  const double t = 0.5;
  auto lhs = [&](const SymbolSpec& g0) {
    std::vector<double> c = {0.0, 0.0}, sc = {std::sqrt(2.0), 1.0};
    return integrate_nd(
               [&](std::span<const double> p) {
                 double x = p[0], y = p[1];
                 std::vector<double> yv = {y};
                 return g0.value(yv) * 0.5 * std::exp(-(x * x - y * y) / 2) * heat_q(t / 2, yv);
               },
               hermite_tensor(60, 2), c, sc)
        .real();
  };
  auto rhs = [&](const SymbolSpec& g0) {
    return integrate_line(
               [&](double xi) {
                 std::vector<double> v = {xi};
                 return heat_bergman_multiplier(g0, t, v).tilted * std::exp(-xi * xi);
               },
               0.0, 1.0, 1e-12)
        .real();
  };
  double c = lhs(SymbolSpec::one()) / rhs(SymbolSpec::one());
  for (double a : {0.5, 1.0, 3.0}) {
    SymbolSpec g = SymbolSpec::gauss_y(a);
    CHECK(std::abs(lhs(g) - c * rhs(g)) <= 1e-6 * std::abs(lhs(g)));
  }
}
