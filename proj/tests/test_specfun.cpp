#include <doctest.h>

#include <cmath>
#include <random>

#include "sbt/specfun.hpp"

using namespace sbt;

namespace {

// Explicit sums, evaluated in long double, as independent oracles.
long double laguerre_sum(int k, double a, double x) {
  long double s = 0.0L;
  for (int j = 0; j <= k; ++j) {
    long double binom = std::tgamma((long double)k + a + 1) /
                        (std::tgamma((long double)k - j + 1) * std::tgamma((long double)j + a + 1));
    s += (j % 2 ? -1 : 1) * binom * std::pow((long double)x, j) / std::tgamma((long double)j + 1);
  }
  return s;
}

std::complex<long double> hermite_H_sum(int k, std::complex<long double> x) {
  std::complex<long double> s = 0.0L;
  for (int m = 0; 2 * m <= k; ++m) {
    long double c = std::tgamma((long double)k + 1) / (std::tgamma((long double)m + 1) * std::tgamma((long double)k - 2 * m + 1));
    s += (m % 2 ? -c : c) * std::pow(2.0L * x, k - 2 * m);
  }
  return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("ScaledValue basics") {
  ScaledValue v(3.0);
  CHECK(std::abs(v.mantissa()) >= 1.0);
  CHECK(std::abs(v.mantissa()) < 2.0);
  CHECK(v.real() == 3.0);
  CHECK(ScaledValue().is_zero());
  ScaledValue big = ScaledValue::exp(1e6);
  CHECK(big.log_abs() == doctest::Approx(1e6).epsilon(1e-14));
  CHECK(std::isinf(big.real()));
  ScaledValue tiny = ScaledValue::exp(-1e6);
  CHECK((big * tiny).real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((ScaledValue(1e300) * ScaledValue(1e300) / ScaledValue(1e300)).real() == doctest::Approx(1e300));
  CHECK((ScaledValue(2.0) + ScaledValue(-2.0)).is_zero());
  CHECK((ScaledValue(1.0) + ScaledValue::exp(-1000.0)).real() == 1.0);
  CHECK((ScaledValue::exp(cplx(0.0, M_PI / 2))).value().imag() == doctest::Approx(1.0));
  CHECK(relative_difference(ScaledValue(1.0 + 1e-12), ScaledValue(1.0)) == doctest::Approx(1e-12).epsilon(1e-3));
}

TEST_CASE("ScaledValue multiplication is associative across 400 decades") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> m(-2.0, 2.0), ex(-700.0, 700.0);
  for (int i = 0; i < 500; ++i) {
    auto draw = [&] { return ScaledValue(cplx(m(rng), m(rng)), static_cast<std::int64_t>(ex(rng))); };
    ScaledValue a = draw(), b = draw(), c = draw();
    CHECK(relative_difference((a * b) * c, a * (b * c)) <= 1e-15);
  }
}

TEST_CASE("laguerre values") {
  CHECK(laguerre(0, 2.5, 7.0).real() == 1.0);
  CHECK(laguerre(1, 0.0, 2.0).real() == doctest::Approx(-1.0));
  CHECK(laguerre(2, 0.0, 2.0).real() == doctest::Approx(-1.0));
  for (int k : {3, 7, 15, 20})
    for (double a : {0.0, 1.0, 3.0})
      for (double x : {-3.0, 0.5, 2.0, 9.0}) {
        long double want = laguerre_sum(k, a, x);
        CHECK(std::abs(laguerre(k, a, x).real() - (double)want) <= 1e-11 * std::max(1.0L, std::abs(want)));
      }
  auto all = laguerre_all(30, 1.0, 3.0);
  for (int k = 0; k <= 30; ++k) CHECK(all[k].real() == doctest::Approx(laguerre(k, 1.0, 3.0).real()).epsilon(1e-14));
}

TEST_CASE("laguerre at negative arguments is positive and increasing") {
  for (double x : {-0.1, -2.0, -50.0}) {
    double prev = 0.0;
    for (int k = 0; k <= 200; ++k) {
      ScaledValue v = laguerre(k, 1.0, x);
      CHECK(v.real() > 0.0);
      CHECK(v.real() > prev);
      prev = v.real();
    }
  }
  // Far beyond double range.
  ScaledValue huge = laguerre(100000, 0.0, -400.0);
  CHECK(std::isfinite(huge.log_abs()));
  CHECK(huge.log_abs() > 1000.0);
}

TEST_CASE("normalized laguerre") {
  CHECK(normalized_laguerre(0, 1, 1.3) == doctest::Approx(std::exp(-1.3 * 1.3 / 2)));
  CHECK(normalized_laguerre(0, 2, 1.0) == doctest::Approx(0.60653).epsilon(1e-5));
  for (int k : {0, 3, 10, 40}) {
    DecayBudget b;
    b.gaussian_rate = -1.0;
    b.poly_degree = 4 * k;
    cplx v = radial_integral([k](double r) { return ScaledValue(2 * std::pow(normalized_laguerre(k, 1, r), 2)); }, b, 1);
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("hermite functions") {
  CHECK(hermite_fn(0, 0.0).real() == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-15));
  CHECK(hermite_fn(0, cplx(0, 1)).real() == doctest::Approx(std::pow(M_PI, -0.25) * std::exp(0.5)).epsilon(1e-15));
  CHECK(hermite_fn(0, cplx(0, 1)).real() == doctest::Approx(1.2384).epsilon(1e-5));
  const Rule1D& r = gauss_hermite(30);
  for (int j = 0; j <= 10; ++j)
    for (int k = 0; k <= 10; ++k) {
      double s = 0.0;
      for (int i = 0; i < r.m; ++i) s += r.scaled[i] * hermite_fn(j, r.nodes[i]).real() * hermite_fn(k, r.nodes[i]).real();
      CHECK(std::abs(s - (j == k)) <= 1e-10);
    }
}

TEST_CASE("hermite parity and explicit-series oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 40; ++i) {
    cplx x(u(rng), i % 2 ? u(rng) : 0.0);
    for (int k : {0, 1, 5, 12, 25}) {
      cplx a = hermite_fn(k, x), b = hermite_fn(k, -x);
      CHECK(std::abs(b - (k % 2 ? -a : a)) <= 1e-12 * std::max(1.0, std::abs(a)));
      std::complex<long double> xl(x.real(), x.imag());
      long double norm = std::pow(std::pow(2.0L, k) * std::tgamma((long double)k + 1) * std::sqrt(M_PIl), -0.5L);
      std::complex<long double> want = norm * hermite_H_sum(k, xl) * std::exp(-xl * xl / 2.0L);
      cplx w((double)want.real(), (double)want.imag());
      CHECK(std::abs(a - w) <= 1e-9 * std::max(1e-3, std::abs(w)));
    }
  }
  // |x| up to 50 on the imaginary axis stays finite in scaled form.
  CHECK(std::isfinite(hermite_fn_scaled(200, cplx(0, 50)).log_abs()));
}

TEST_CASE("heat_q") {
  std::vector<double> zero2 = {0.0, 0.0};
  CHECK(heat_q(0.25, zero2) == doctest::Approx(1 / M_PI).epsilon(1e-15));
  CHECK_THROWS_AS(heat_q(0.0, zero2), RangeError);
  for (std::size_t d = 1; d <= 3; ++d) {
    std::vector<double> c(d, 0.0), sc(d, std::sqrt(4 * 0.7));
    cplx mass = integrate_nd([](std::span<const double> p) { return heat_q(0.7, p); }, hermite_tensor(10, d), c, sc);
    CHECK(mass.real() == doctest::Approx(1.0).epsilon(1e-13));
  }
  // (q_1 * q_1)(0) = q_2(0) on R
  cplx conv = integrate_line([](double y) {
    double a[1] = {y}, b[1] = {-y};
    return cplx(heat_q(1.0, a) * heat_q(1.0, b), 0.0);
  }, 0.0, 1.0);
  CHECK(conv.real() == doctest::Approx(1 / std::sqrt(8 * M_PI)).epsilon(1e-13));
}

TEST_CASE("heat_flow closed forms and quadrature oracle") {
  std::vector<double> p = {0.3, -1.1, 0.4};
  CHECK(heat_flow(SymbolSpec::one(), 0.3, p).real() == doctest::Approx(1.0));
  double a = 0.8, s = 0.35;
  double y2 = 0.3 * 0.3 + 1.1 * 1.1 + 0.4 * 0.4;
  double want = std::pow(1 + 4 * s * a, -1.5) * std::exp(-a * y2 / (1 + 4 * s * a));
  CHECK(rel(heat_flow(SymbolSpec::gauss_y(a), s, p), want) <= 1e-14);

  std::vector<double> one = {1.0};
  SymbolSpec gy = SymbolSpec::gauss_y(1.0);
  CHECK(rel(heat_flow_quadrature(gy, 0.25, one), heat_flow(gy, 0.25, one)) <= 1e-9);

  std::vector<double> p2 = {0.4, -0.7};
  for (const SymbolSpec& g : {SymbolSpec::gauss_radial(1.0), SymbolSpec::poly_gauss_radial(2, 1.0),
                              SymbolSpec::poly_gauss_radial(4, 0.5), SymbolSpec::gauss_yv({-1, 0.2}, {0.3, 0})}) {
    CHECK(rel(heat_flow_quadrature(g, 0.25, p2, 1e-12), heat_flow(g, 0.25, p2)) <= 1e-10);
  }
  CHECK_THROWS_AS(heat_flow(SymbolSpec::gauss_radial(-0.9), 1.0, p2), DivergenceError);
}

TEST_CASE("radial convolution route against independent forms") {
  // Gaussian profile pushed through the general route, all d.
  for (int d = 1; d <= 4; ++d)
    for (double rho : {0.0, 0.5, 3.0, 25.0}) {
      RadialProfile g{[](double r) { return cplx(std::exp(-0.7 * r * r), 0.0); }, DecayBudget{-0.7, 0, 1.0, {}}};
      double s = 0.3, c = 1 + 4 * s * 0.7;
      double want = std::pow(c, -d / 2.0) * std::exp(-0.7 * rho * rho / c);
      CHECK(rel(heat_flow_radial(g, d, s, rho), want) <= 1e-12);
    }
  // r^p e^{-a r^2/2} closed forms against the convolution integral.
  for (int p : {2, 4, 6})
    for (int d = 1; d <= 4; ++d)
      for (double rho : {0.0, 0.8, 4.0}) {
        SymbolSpec g = SymbolSpec::poly_gauss_radial(p, 1.2);
        std::vector<double> pt(d, 0.0);
        pt[0] = rho;
        CHECK(rel(heat_flow(g, 0.35, pt), heat_flow_radial(to_profile(g), d, 0.35, rho)) <= 1e-11);
      }
  // Annulus on R: difference of error functions.
  SymbolSpec ann = SymbolSpec::annulus(1.0, 2.0);
  double s = 0.25, k = 2 * std::sqrt(s);
  for (double x : {0.0, 0.7, 1.5, 3.0}) {
    double want = 0.5 * (std::erf((x + 2) / k) - std::erf((x + 1) / k) + std::erf((2 - x) / k) - std::erf((1 - x) / k));
    double pt[1] = {x};
    CHECK(std::abs(heat_flow(ann, s, pt).real() - want) <= 1e-13);
  }
  // Annulus on R^2 at the origin.
  double origin[2] = {0.0, 0.0};
  CHECK(heat_flow(ann, s, origin).real() == doctest::Approx(std::exp(-1 / (4 * s)) - std::exp(-4 / (4 * s))).epsilon(1e-13));
}

TEST_CASE("twisted heat kernel") {
  CHECK(twisted_heat_p(1.0, 0.0, 1).real() == doctest::Approx(1 / (4 * M_PI * std::sinh(1.0))).epsilon(1e-15));
  CHECK(twisted_heat_p(1.0, 0.0, 1).real() == doctest::Approx(0.067715).epsilon(1e-5));
  CHECK(twisted_heat_p(0.5, 0.0, 2).real() == doctest::Approx(std::pow(4 * M_PI * std::sinh(0.5), -2)).epsilon(1e-15));
  CHECK((twisted_heat_p(0.7, 3.0, 1) / twisted_heat_p(0.7, 0.0, 1)).real() ==
        doctest::Approx(std::exp(-3.0 / (4 * std::tanh(0.7)))).epsilon(1e-14));
  double partial = 0.0;
  for (int k = 0; k <= 40; ++k) partial += std::exp(-(2 * k + 1.0)) / (2 * M_PI);
  CHECK(std::abs(partial - twisted_heat_p(1.0, 0.0, 1).real()) <= 1e-12);
  // Eigen-sum at nonzero radius, n = 1, 2; tail bound from |L_k^{n-1}(x) e^{-x/2}| <= C(k+n-1, k).
  for (int n : {1, 2})
    for (double rho2 : {0.5, 2.0}) {
      double t = 0.6, sum = 0.0;
      int K = 40;
      for (int k = 0; k <= K; ++k) sum += std::exp(-(2 * k + n) * t) * laguerre_function(k, n, rho2);
      sum /= std::pow(2 * M_PI, n);
      double tail = std::exp(-(2 * K + 2) * t) * (K + 10.0) * 10;
      CHECK(std::abs(sum - twisted_heat_p(t, rho2, n).real()) <= tail + 1e-15 * std::abs(sum));
    }
}

TEST_CASE("phi at imaginary arguments") {
  CHECK(phi_imaginary(0, 1, 0.7, Doubling::Double).real() == doctest::Approx(std::exp(0.7)));
  CHECK(phi_imaginary(1, 1, 1.0, Doubling::Double).real() == doctest::Approx(3 * M_E).epsilon(1e-14));
  CHECK(phi_imaginary(0, 1, 4.0, Doubling::Single).real() == doctest::Approx(M_E).epsilon(1e-14));
}

TEST_CASE("mehler kernel") {
  SpaceParams p{1, 0.25};
  cplx z0[1] = {0.0};
  CHECK(mehler_kernel_K(p, z0, z0).real() == doctest::Approx(1 / std::sqrt(std::sinh(1.0))));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    cplx z[1] = {{u(rng), u(rng)}}, w[1] = {{u(rng), u(rng)}};
    CHECK(std::abs(mehler_kernel_K(p, z, w) - std::conj(mehler_kernel_K(p, w, z))) <= 1e-13 * std::abs(mehler_kernel_K(p, z, w)));
  }
}

TEST_CASE("mehler kernel reproduces e^{-tH} Phi_0 on the U_t-weighted plane") {
  const double t = 0.25;
  SpaceParams p{1, t};
  auto U = [t](double x, double y) {
    return 4 / std::sqrt(std::sinh(4 * t)) * std::exp(std::tanh(2 * t) * x * x - y * y / std::tanh(2 * t));
  };
  auto F = [t](cplx w) { return std::exp(-t) * hermite_fn(0, w); };
  auto pairing = [&](cplx z, int m) {
    double cx = 0.5 + 0.5 / std::tanh(4 * t) - std::tanh(2 * t);
    double cy = -0.5 - 0.5 / std::tanh(4 * t) + 1 / std::tanh(2 * t);
    std::vector<double> center = {0.0, 0.0}, scale = {1 / std::sqrt(cx), 1 / std::sqrt(cy)};
    return integrate_nd([&](std::span<const double> q) {
      cplx w(q[0], q[1]);
      cplx zz[1] = {z}, ww[1] = {w};
      return F(w) * std::conj(mehler_kernel_K(p, ww, zz)) * U(q[0], q[1]);
    }, hermite_tensor(m, 2), center, scale);
  };
  cplx z(0.3, 0.2);
  cplx c0 = pairing(0.0, 60) / F(0.0);
  cplx at = pairing(z, 60);
  CHECK(rel(pairing(z, 80), at) <= 1e-10);
  CHECK(rel(at / c0, F(z)) <= 1e-6);
  CHECK(rel(c0, 4 * M_PI) <= 1e-9);
}

TEST_CASE("special hermite functions") {
  CHECK(special_hermite_fn(0, 0, 0.0, 0.0).real() == doctest::Approx(1 / std::sqrt(2 * M_PI)).epsilon(1e-15));
  CHECK_THROWS_AS(special_hermite_fn(13, 0, 0.0, 0.0), RangeError);
  // L^2(R^2) orthonormality for indices <= 3.
  const int M = 3;
  std::vector<double> c = {0.0, 0.0}, sc = {std::sqrt(2.0), std::sqrt(2.0)};
  TensorRule rule = hermite_tensor(24, 2);
  std::vector<std::vector<cplx>> vals;
  for (std::size_t i = 0; i < rule.size(); ++i) vals.push_back({});
  for (int a = 0; a <= M; ++a)
    for (int b = 0; b <= M; ++b)
      for (int mu = 0; mu <= M; ++mu)
        for (int nu = 0; nu <= M; ++nu) {
          if (a * 4 + b > mu * 4 + nu) continue;
          cplx ip = integrate_nd([&](std::span<const double> q) {
            auto tab = special_hermite_table(M, q[0], q[1]);
            return tab[a * (M + 1) + b] * std::conj(tab[mu * (M + 1) + nu]);
          }, rule, c, sc);
          CHECK(std::abs(ip - cplx(a == mu && b == nu)) <= 1e-8);
        }
}

TEST_CASE("special hermite extension matches direct contour integration") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const cplx I(0, 1);
  for (int i = 0; i < 10; ++i) {
    cplx z(u(rng), u(rng)), w(u(rng), u(rng));
    for (auto [a, b] : {std::pair{0, 0}, {1, 2}, {3, 1}, {4, 4}}) {
      cplx direct = integrate_line([&](double xi) {
        return std::exp(I * z * xi) * hermite_fn(a, xi + w / 2.0) * hermite_fn(b, xi - w / 2.0);
      }, 0.0, 1.0, 1e-13) / std::sqrt(2 * M_PI);
      CHECK(std::abs(special_hermite_fn(a, b, z, w) - direct) <= 1e-11);
    }
  }
}

TEST_CASE("diagonal special hermite functions are Laguerre functions") {
  // (2 pi)^{1/2} Phi_{k,k}(x,u) against phi_k(x,u), shapes compared after calibrating at the origin.
  for (int k = 0; k <= 4; ++k) {
    double c = std::sqrt(2 * M_PI) * special_hermite_fn(k, k, 0.0, 0.0).real() / laguerre_function(k, 1, 0.0);
    for (double x : {-1.2, 0.0, 0.5, 2.0})
      for (double u : {-0.3, 0.9}) {
        double lhs = std::sqrt(2 * M_PI) * special_hermite_fn(k, k, x, u).real();
        CHECK(std::abs(lhs - c * laguerre_function(k, 1, x * x + u * u)) <= 1e-12);
      }
    CHECK(std::abs(std::abs(c) - 1.0) <= 1e-12);
  }
}
