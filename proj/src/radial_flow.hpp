#pragma once

// Heat flow of a radial profile, templated on the scalar so the same code
// serves double and float128.

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "sbt/core.hpp"

namespace sbt::detail {

template <class Real>
struct Panel {
  using Rule = boost::math::quadrature::gauss<Real, 20>;
  // Gauss-Legendre on [lo, hi]; the rule stores nonnegative abscissae only.
  template <class F>
  static auto integrate(F&& f, Real lo, Real hi) -> decltype(f(lo)) {
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    Real mid = (lo + hi) / 2, h = (hi - lo) / 2;
    decltype(f(lo)) sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0)
        sum += w[i] * f(mid);
      else
        sum += w[i] * (f(mid - h * x[i]) + f(mid + h * x[i]));
    }
    return sum * h;
  }

  template <class F>
  static auto composite(F&& f, Real lo, Real hi, int panels) -> decltype(f(lo)) {
    Real step = (hi - lo) / panels;
    decltype(f(lo)) sum = 0;
    for (int p = 0; p < panels; ++p) sum += integrate(f, lo + p * step, lo + (p + 1) * step);
    return sum;
  }
};

template <class Real>
Real gamma_half_integer(Real v) {  // Gamma(v) for v a positive multiple of 1/2
  using std::sqrt;
  Real result = 1;
  Real x = v;
  while (x > 1) {
    x -= 1;
    result *= x;
  }
  if (x != 1) result *= sqrt(boost::math::constants::pi<Real>());
  return result;
}

// e^{-x} times the integral over the unit sphere S^{d-1} of e^{x w.e}.
template <class Real>
Real sphere_factor(int d, Real x) {
  using std::abs;
  using std::exp;
  using std::pow;
  using std::sqrt;
  const Real pi = boost::math::constants::pi<Real>();
  const Real eps = std::numeric_limits<Real>::epsilon();
  if (d == 1) return 1 + exp(-2 * x);
  Real nu = Real(d) / 2 - 1;
  Real pre = pow(2 * pi, Real(d) / 2);
  if (x < 40) {
    // x^{-nu} I_nu(x) = sum (x/2)^{2j} / (2^nu j! Gamma(j+nu+1))
    Real term = 1 / (pow(Real(2), nu) * gamma_half_integer(nu + 1));
    Real sum = term;
    Real q = x * x / 4;
    for (int j = 0; j < 400; ++j) {
      term *= q / ((j + 1) * (j + 1 + nu));
      sum += term;
      if (term < eps * sum) break;
    }
    return pre * sum * exp(-x);
  }
  // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) x^{-k}
  Real mu = 4 * nu * nu;
  Real term = 1, sum = 1;
  for (int k = 1; k < 200; ++k) {
    Real next = -term * (mu - Real(2 * k - 1) * (2 * k - 1)) / (8 * k * x);
    if (abs(next) >= abs(term)) break;
    term = next;
    sum += term;
    if (abs(term) < eps * abs(sum)) break;
  }
  return pre * pow(x, -nu) * sum / sqrt(2 * pi * x);
}

// Integration window for the radial convolution integral: the integrand is
// dominated by e^{rate r^2 - (r-rho)^2/(4s)}, which peaks at r_star.
template <class Real>
struct FlowWindow {
  Real lo, hi;
  int panels;
};

template <class Real>
FlowWindow<Real> flow_window(const DecayBudget& budget, Real s, Real rho, Real log_eps) {
  using std::ceil;
  using std::sqrt;
  Real rate = budget.support ? Real(0) : Real(budget.gaussian_rate);
  Real A = 1 / (4 * s) - rate;
  Real r_star = rho / (4 * s * A);
  Real width = sqrt((log_eps + 4 * (budget.poly_degree + 4)) / A);
  Real lo = r_star - width, hi = r_star + width;
  if (lo < 0) lo = 0;
  if (budget.support) {
    if (lo < budget.support->lo) lo = budget.support->lo;
    if (hi > budget.support->hi) hi = budget.support->hi;
  }
  if (!(hi > lo)) return {0, 0, 0};
  // Keep the exponent's variation per panel moderate.
  Real slope = 2 * A * (rho + hi + width) + 1;
  Real h = 0.5 / sqrt(A);
  if (h * slope > 8) h = 8 / slope;
  int panels = static_cast<int>(ceil(static_cast<double>((hi - lo) / h)));
  return {lo, hi, panels < 1 ? 1 : panels};
}

// (g * q_s)(x) on R^d at |x| = rho for a radial profile g(r) -> V.
template <class Real, class G>
auto radial_flow(G&& g, const DecayBudget& budget, int d, Real s, Real rho, Real log_eps)
    -> decltype(g(rho)) {
  using std::exp;
  using std::pow;
  using V = decltype(g(rho));
  FlowWindow<Real> win = flow_window<Real>(budget, s, rho, log_eps);
  if (win.panels == 0) return V(0);
  const Real pi = boost::math::constants::pi<Real>();
  auto integrand = [&](Real r) -> V {
    Real e = (r - rho) * (r - rho) / (4 * s);
    return g(r) * (exp(-e) * sphere_factor<Real>(d, r * rho / (2 * s)) * pow(r, d - 1));
  };
  V total = Panel<Real>::composite(integrand, win.lo, win.hi, win.panels);
  return total * pow(4 * pi * s, -Real(d) / 2);
}

// Gaussian coefficient a' with g = r^p e^{-a' r^2}, when the family has one.
inline bool gaussian_coefficient(const SymbolSpec& g, double& a_prime) {
  switch (g.kind) {
    case SymbolKind::One: a_prime = 0.0; return true;
    case SymbolKind::GaussRadial:
    case SymbolKind::PolyGaussRadial: a_prime = g.a / 2; return true;
    case SymbolKind::GaussH: a_prime = g.c; return true;
    case SymbolKind::GroupGauss: a_prime = g.b; return true;
    case SymbolKind::GaussY: a_prime = g.a; return true;
    default: return false;
  }
}

template <class Real>
Real radial_symbol(const SymbolSpec& g, Real r) {
  using std::exp;
  using std::pow;
  switch (g.kind) {
    case SymbolKind::Annulus: return (r >= Real(g.r0) && r < Real(g.r1)) ? Real(1) : Real(0);
    case SymbolKind::One: return 1;
    default: {
      double ap = 0.0;
      if (!gaussian_coefficient(g, ap)) throw ConstraintError(std::string(g.name()) + " is not a radial symbol");
      Real v = exp(-Real(ap) * r * r);
      if (g.kind == SymbolKind::PolyGaussRadial) v *= pow(r, g.p);
      return v;
    }
  }
}

// Flow of r^{2m} e^{-a' r^2} on R^d: (-d/da')^m of c^{-d/2} e^{-a' rho^2/c},
// c = 1 + 4 s a', read off a truncated Taylor series in a'.
template <class Real>
Real gaussian_moment_flow(Real ap, int m, int d, Real s, Real rho) {
  using std::exp;
  using std::pow;
  Real c = 1 + 4 * s * ap;
  Real q = 4 * s / c;
  Real rho2 = rho * rho;
  std::vector<Real> A(m + 1), B(m + 1), E(m + 1);
  A[0] = 1;
  for (int j = 1; j <= m; ++j) A[j] = A[j - 1] * (-Real(d) / 2 - (j - 1)) / j * q;
  B[0] = -ap * rho2 / c;
  Real mq = 1;  // (-q)^{j-1}
  for (int j = 1; j <= m; ++j) {
    B[j] = -rho2 / (c * c) * mq;
    mq *= -q;
  }
  E[0] = exp(B[0]);
  for (int j = 1; j <= m; ++j) {
    Real acc = 0;
    for (int i = 1; i <= j; ++i) acc += i * B[i] * E[j - i];
    E[j] = acc / j;
  }
  Real coef = 0;
  for (int j = 0; j <= m; ++j) coef += A[j] * E[m - j];
  Real fact = 1;
  for (int j = 2; j <= m; ++j) fact *= j;
  return (m % 2 ? -1 : 1) * fact * coef * pow(c, -Real(d) / 2);
}

// Heat flow of a radial builtin symbol: closed form for r^p e^{-a' r^2},
// the radial convolution integral for the annulus.
template <class Real>
Real radial_symbol_flow(const SymbolSpec& g, int d, Real s, Real rho, Real log_eps) {
  double ap = 0.0;
  int p = g.kind == SymbolKind::PolyGaussRadial ? g.p : 0;
  if (gaussian_coefficient(g, ap) && p % 2 == 0) return gaussian_moment_flow<Real>(Real(ap), p / 2, d, s, rho);
  return radial_flow<Real>([&](Real r) { return radial_symbol<Real>(g, r); }, g.decay, d, s, rho, log_eps);
}

}  // namespace sbt::detail
