#include "sbt/specfun.hpp"

#include <cmath>

#include "radial_flow.hpp"

namespace sbt {

namespace {

constexpr double kLogBig = 600.0 * 0.6931471805599453;  // rescale threshold 2^600

double norm2(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return s;
}

}  // namespace

std::vector<ScaledValue> laguerre_all(int kmax, double a, double x) {
  if (kmax < 0) throw RangeError("laguerre: k must be nonnegative");
  std::vector<ScaledValue> out;
  out.reserve(kmax + 1);
  // L_prev, L_cur share the exponent e.
  double prev = 0.0, cur = 1.0;
  std::int64_t e = 0;
  out.emplace_back(1.0);
  for (int j = 0; j < kmax; ++j) {
    double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 0x1p600) {
      cur = std::ldexp(cur, -600);
      prev = std::ldexp(prev, -600);
      e += 600;
    }
    out.emplace_back(ScaledValue(cur) * ScaledValue(1.0, e));
  }
  return out;
}

ScaledValue laguerre(int k, double a, double x) {
  if (k < 0) throw RangeError("laguerre: k must be nonnegative");
  double prev = 0.0, cur = 1.0;
  std::int64_t e = 0;
  for (int j = 0; j < k; ++j) {
    double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 0x1p600) {
      cur = std::ldexp(cur, -600);
      prev = std::ldexp(prev, -600);
      e += 600;
    }
  }
  return ScaledValue(cur) * ScaledValue(1.0, e);
}

double normalized_laguerre(int k, int n, double r) {
  double log_ratio = 0.5 * (std::lgamma(k + 1.0) + std::lgamma(double(n)) - std::lgamma(double(k + n)));
  double x = r * r;
  ScaledValue v = laguerre(k, n - 1.0, x) * ScaledValue::exp(log_ratio - x / 2);
  if (n > 1) v *= ScaledValue(std::pow(r, n - 1));
  return v.real();
}

ScaledValue hermite_poly(int k, cplx x) {
  if (k < 0) throw RangeError("hermite: k must be nonnegative");
  cplx prev = 0.0, cur = std::pow(M_PI, -0.25);
  std::int64_t e = 0;
  for (int j = 0; j < k; ++j) {
    cplx next = std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(double(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 0x1p600) {
      cur = cplx(std::ldexp(cur.real(), -600), std::ldexp(cur.imag(), -600));
      prev = cplx(std::ldexp(prev.real(), -600), std::ldexp(prev.imag(), -600));
      e += 600;
    }
  }
  return ScaledValue(cur) * ScaledValue(1.0, e);
}

ScaledValue hermite_fn_scaled(int k, cplx x) { return hermite_poly(k, x) * ScaledValue::exp(-x * x / 2.0); }

cplx hermite_fn(int k, cplx x) { return hermite_fn_scaled(k, x).value(); }

double heat_q(double s, std::span<const double> point) {
  if (!(s > 0.0)) throw RangeError("heat_q: s must be positive");
  double d = static_cast<double>(point.size());
  return std::pow(4 * M_PI * s, -d / 2) * std::exp(-norm2(point) / (4 * s));
}

namespace {

void check_flow_budget(const DecayBudget& b, double s) {
  if (b.support) return;
  if (!(b.gaussian_rate < 1.0 / (4 * s)))
    throw DivergenceError("heat flow diverges: symbol growth rate must be below 1/(4s)");
}

// (e^{alpha |y|^2} * q_s)(y) on R^d
cplx gauss_flow(cplx alpha, double s, int d, double y2) {
  cplx c = 1.0 - 4.0 * s * alpha;
  return std::pow(c, -d / 2.0) * std::exp(alpha * y2 / c);
}

}  // namespace

cplx heat_flow(const SymbolSpec& g, double s, std::span<const double> point) {
  if (!(s > 0.0)) throw RangeError("heat_flow: s must be positive");
  check_flow_budget(g.decay, s);
  const int d = static_cast<int>(point.size());
  switch (g.kind) {
    case SymbolKind::GaussYV: {
      if (d % 2 != 0) throw ShapeError("gauss-yv needs an even-dimensional point (y, v)");
      auto y = point.first(d / 2), v = point.subspan(d / 2);
      return gauss_flow(g.alpha, s, d / 2, norm2(y)) * gauss_flow(g.beta, s, d / 2, norm2(v));
    }
    case SymbolKind::GaussY:
      return gauss_flow(-g.a, s, d, norm2(point));
    default:
      return detail::radial_symbol_flow<double>(g, d, s, std::sqrt(norm2(point)), 40.0);
  }
}

cplx heat_flow_radial(const RadialProfile& g, int d, double s, double rho) {
  if (!(s > 0.0)) throw RangeError("heat_flow: s must be positive");
  check_flow_budget(g.budget, s);
  return detail::radial_flow<double>(g.f, g.budget, d, s, rho, 40.0);
}

cplx heat_flow_quadrature(const SymbolSpec& g, double s, std::span<const double> point, double tol) {
  if (!(s > 0.0)) throw RangeError("heat_flow: s must be positive");
  check_flow_budget(g.decay, s);
  const std::size_t d = point.size();
  if (d == 0 || d > 4) throw ShapeError("heat_flow_quadrature supports dimensions 1..4");
  std::vector<double> scale(d, std::sqrt(4 * s));
  std::vector<double> diff(d);
  auto f = [&](std::span<const double> y) {
    for (std::size_t j = 0; j < d; ++j) diff[j] = point[j] - y[j];
    return g.value(y) * heat_q(s, diff);
  };
  int m_max = d <= 2 ? 256 : 64;
  cplx prev = integrate_nd(f, hermite_tensor(16, d), point, scale);
  for (int m = 32; m <= m_max; m *= 2) {
    cplx cur = integrate_nd(f, hermite_tensor(m, d), point, scale);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  throw AccuracyError("heat_flow_quadrature did not converge", std::abs(prev), std::abs(prev));
}

ScaledValue twisted_heat_p(double t, double rho2, int n) {
  if (!(t > 0.0)) throw RangeError("twisted_heat_p: t must be positive");
  return ScaledValue::exp(-n * std::log(4 * M_PI * std::sinh(t)) - rho2 / (4 * std::tanh(t)));
}

ScaledValue phi_imaginary(int k, int n, double rho2, Doubling doubling) {
  if (doubling == Doubling::Double) return laguerre(k, n - 1.0, -2 * rho2) * ScaledValue::exp(rho2);
  return laguerre(k, n - 1.0, -rho2 / 2) * ScaledValue::exp(rho2 / 4);
}

double laguerre_function(int k, int n, double rho2) {
  return (laguerre(k, n - 1.0, rho2 / 2) * ScaledValue::exp(-rho2 / 4)).real();
}

cplx mehler_kernel_K(const SpaceParams& params, std::span<const cplx> z, std::span<const cplx> w) {
  if (z.size() != w.size() || z.size() != static_cast<std::size_t>(params.n))
    throw ShapeError("mehler_kernel_K: z and w must have length n");
  double s4 = std::sinh(4 * params.t);
  double cth = 1.0 / std::tanh(4 * params.t);
  cplx quad = 0.0, cross = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    cplx wb = std::conj(w[j]);
    quad += z[j] * z[j] + wb * wb;
    cross += z[j] * wb;
  }
  return std::pow(s4, -params.n / 2.0) * std::exp(-0.5 * cth * quad + cross / s4);
}

std::vector<cplx> special_hermite_table(int max_index, cplx z, cplx w) {
  if (max_index < 0 || max_index > kMaxSpecialHermite) throw RangeError("special_hermite: index out of range");
  const int M = max_index;
  const Rule1D& rule = gauss_hermite(M + 2);
  std::vector<cplx> out((M + 1) * (M + 1), 0.0);
  std::vector<cplx> ha(M + 1), hb(M + 1);
  auto fill = [M](std::vector<cplx>& h, cplx x) {
    h[0] = std::pow(M_PI, -0.25);
    if (M >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int j = 1; j < M; ++j) h[j + 1] = std::sqrt(2.0 / (j + 1)) * x * h[j] - std::sqrt(double(j) / (j + 1)) * h[j - 1];
  };
  const cplx I(0.0, 1.0);
  for (int i = 0; i < rule.m; ++i) {
    cplx base = rule.nodes[i] + I * z / 2.0;
    fill(ha, base + w / 2.0);
    fill(hb, base - w / 2.0);
    for (int a = 0; a <= M; ++a)
      for (int b = 0; b <= M; ++b) out[a * (M + 1) + b] += rule.weights[i] * ha[a] * hb[b];
  }
  cplx pre = std::exp(-(z * z + w * w) / 4.0) / std::sqrt(2 * M_PI);
  for (auto& v : out) v *= pre;
  return out;
}

cplx special_hermite_fn(int alpha, int beta, cplx z, cplx w) {
  if (alpha < 0 || beta < 0 || alpha > kMaxSpecialHermite || beta > kMaxSpecialHermite)
    throw RangeError("special_hermite_fn: indices must lie in [0, 12]");
  int M = std::max(alpha, beta);
  return special_hermite_table(M, z, w)[alpha * (M + 1) + beta];
}

}  // namespace sbt
