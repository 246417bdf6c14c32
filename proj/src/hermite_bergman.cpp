#include "sbt/hermite_bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbt/parallel.hpp"
#include "scaled_profile.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/scaled_value.hpp"
#include "sbt/specfun.hpp"

namespace sbt {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void check_point(const SpaceParams& params, std::size_t a, std::size_t b, const char* what) {
  if (a != static_cast<std::size_t>(params.n) || b != static_cast<std::size_t>(params.n))
    throw ShapeError(std::string(what) + ": both halves must have length n");
}

double log_weight_U(const SpaceParams& params, double x2, double y2) {
  const double t = params.t;
  return params.n * (2 * std::numbers::ln2 - 0.5 * std::log(std::sinh(4 * t))) + std::tanh(2 * t) * x2 -
         y2 / std::tanh(2 * t);
}

// log K_t(w, z) at n = 1; K is holomorphic in w and antiholomorphic in z.
cplx log_mehler(double t, cplx w, cplx z) {
  double s4 = std::sinh(4 * t);
  cplx zb = std::conj(z);
  return -0.5 * std::log(s4) - 0.5 / std::tanh(4 * t) * (w * w + zb * zb) + w * zb / s4;
}

cplx berezin_quadrature_raw(const SymbolSpec& g, double t, cplx z) {
  const double s4 = std::sinh(4 * t);
  const SpaceParams p1{1, t};
  const double log_kzz = log_mehler(t, z, z).real();
  auto f = [&](std::span<const double> w) -> cplx {
    cplx wc(w[0], w[1]);
    double lk = 2 * log_mehler(t, wc, z).real() + log_weight_U(p1, w[0] * w[0], w[1] * w[1]) - log_kzz;
    return g.value(w) * std::exp(lk);
  };
  const double center[2] = {z.real(), z.imag()};
  const double scale[2] = {std::sqrt(s4), std::sqrt(s4)};
  cplx prev = integrate_nd(f, hermite_tensor(24, 2), center, scale);
  for (int m = 48; m <= 384; m *= 2) {
    cplx cur = integrate_nd(f, hermite_tensor(m, 2), center, scale);
    if (std::abs(cur - prev) <= 1e-12 * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  throw AccuracyError("berezin: quadrature did not converge", std::abs(prev), 0.0);
}

double log_ratio_k(int k, int n) { return std::lgamma(k + 1.0) + std::lgamma(double(n)) - std::lgamma(double(k + n)); }

}  // namespace

double weight_U(const SpaceParams& params, std::span<const double> x, std::span<const double> y) {
  check_point(params, x.size(), y.size(), "weight_U");
  return std::exp(log_weight_U(params, norm2(x), norm2(y)));
}

cplx symbol_flow(const SymbolSpec& g, const SpaceParams& params, double s, std::span<const double> point) {
  if (point.size() != static_cast<std::size_t>(2 * params.n)) throw ShapeError("symbol_flow: point must lie in R^{2n}");
  double top = 0.5 * std::sinh(4 * params.t);
  if (!(s > 0.0 && s < top)) throw RangeError("symbol_flow: s must lie in (0, sinh(4t)/2)");
  return heat_flow(g, s, point);
}

BerezinRoutes berezin(const SymbolSpec& g, const SpaceParams& params, cplx z) {
  if (params.n != 1) throw RangeError("berezin: only n = 1 is supported");
  if (g.kind == SymbolKind::GroupGauss) throw ConstraintError("berezin: group-gauss is not a symbol on C");
  const double t = params.t, s4 = std::sinh(4 * t);
  if (!g.decay.support && g.decay.gaussian_rate >= 1.0 / s4)
    throw DivergenceError("berezin: symbol grows too fast for the weight");
  BerezinRoutes out;
  out.kappa = berezin_quadrature_raw(SymbolSpec::one(), t, 0.0).real();
  out.quadrature = berezin_quadrature_raw(g, t, z) / out.kappa;
  const double pt[2] = {z.real(), z.imag()};
  out.heatflow = heat_flow(g, s4 / 4, pt);
  return out;
}

cplx weyl_symbol_map(const SymbolSpec& g, const SpaceParams& params, std::span<const double> x,
                     std::span<const double> xi) {
  check_point(params, x.size(), xi.size(), "weyl_symbol_map");
  const double t = params.t;
  std::vector<double> pt(2 * params.n);
  for (int j = 0; j < params.n; ++j) {
    pt[j] = std::cosh(2 * t) * x[j];
    pt[params.n + j] = -std::sinh(2 * t) * xi[j];
  }
  return heat_flow(g, std::sinh(4 * t) / 8, pt);
}

RadialityResult radiality_check(const std::function<cplx(std::span<const double>)>& fn, int dim,
                                std::span<const double> radii, int samples, double tol) {
  if (dim < 1) throw ShapeError("radiality_check: dimension must be positive");
  if (samples < 2) throw RangeError("radiality_check: need at least two samples per sphere");
  // Unit directions, fixed for reproducibility.
  std::vector<std::vector<double>> dirs(samples, std::vector<double>(dim));
  if (dim == 1) {
    for (int j = 0; j < samples; ++j) dirs[j][0] = j % 2 ? -1.0 : 1.0;
  } else if (dim == 2) {
    for (int j = 0; j < samples; ++j) {
      double th = 2 * kPi * (j + 0.5) / samples;
      dirs[j] = {std::cos(th), std::sin(th)};
    }
  } else {
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    const int pairs = (dim + 1) / 2;
    if (2 * pairs > static_cast<int>(std::size(primes))) throw RangeError("radiality_check: dimension too large");
    auto halton = [](int i, int b) {
      double f = 1.0, r = 0.0;
      for (; i > 0; i /= b) {
        f /= b;
        r += f * (i % b);
      }
      return r;
    };
    for (int j = 0; j < samples; ++j) {
      std::vector<double> g(2 * pairs);
      for (int q = 0; q < pairs; ++q) {
        double u1 = halton(j + 1, primes[2 * q]), u2 = halton(j + 1, primes[2 * q + 1]);
        double rad = std::sqrt(-2 * std::log(u1));
        g[2 * q] = rad * std::cos(2 * kPi * u2);
        g[2 * q + 1] = rad * std::sin(2 * kPi * u2);
      }
      g.resize(dim);
      double nrm = std::sqrt(norm2(g));
      for (int i = 0; i < dim; ++i) dirs[j][i] = g[i] / nrm;
    }
  }
  RadialityResult res;
  std::vector<double> pt(dim);
  std::vector<cplx> vals(samples);
  for (double r : radii) {
    cplx mean = 0.0;
    for (int j = 0; j < samples; ++j) {
      for (int i = 0; i < dim; ++i) pt[i] = r * dirs[j][i];
      vals[j] = fn(pt);
      mean += vals[j];
    }
    mean /= double(samples);
    double var = 0.0;
    for (cplx v : vals) var += std::norm(v - mean);
    double dev = std::sqrt(var / samples) / std::max(std::abs(mean), 1e-300);
    res.max_rel_dev = std::max(res.max_rel_dev, dev);
  }
  res.is_radial = res.max_rel_dev <= tol;
  return res;
}

std::function<cplx(std::span<const double>)> remark38_profile(cplx alpha, cplx beta, double t) {
  if (!(t > 0.0)) throw ConstraintError("t must be positive");
  cplx ay = 1.0 / (std::tanh(2 * t) + alpha);
  cplx bv = 1.0 / std::tanh(2 * t) - beta;
  return [ay, bv](std::span<const double> p) -> cplx {
    if (p.size() % 2) throw ShapeError("remark38_profile: point must have even length");
    auto h = p.size() / 2;
    return std::exp(-ay * norm2(p.first(h)) - bv * norm2(p.subspan(h)));
  };
}

Example36Result example36(cplx alpha, double t, int n, int kmax) {
  if (!(t > 0.0)) throw ConstraintError("t must be positive");
  if (n < 1) throw ConstraintError("n must be positive");
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  const double th = std::tanh(2 * t), ct = 1.0 / th, s4 = std::sinh(4 * t);
  if (std::abs(alpha + th) < 1e-14) throw SingularityError("example36: alpha = -tanh 2t");
  if (std::abs(2.0 - alpha * s4) < 1e-14) throw SingularityError("example36: alpha sinh 4t = 2");
  Example36Result out;
  out.beta = alpha * ct / (alpha + th);
  out.lambda = alpha * ct * s4 / (2.0 - alpha * s4);
  const cplx lam = out.lambda;
  if (std::abs(1.0 - lam) < 1e-14) throw SingularityError("example36: lambda = 1");
  if (std::abs(1.0 + lam) < 1e-14) throw SingularityError("example36: lambda = -1");
  out.ratio = (1.0 + lam) / (1.0 - lam);
  out.verdict = std::abs(out.ratio) <= 1.0 ? Verdict::Bounded : Verdict::Unbounded;

  // int_0^inf r^{2k+2n-1} e^{-b r^2} dr / (2^k k!) with b = (1-lambda)/(2(1+lambda)),
  // on the ray r^2 in e^{-i arg b} R_+ so that b r^2 is real.
  const cplx b = (1.0 - lam) / (2.0 * (1.0 + lam));
  const cplx rot = std::polar(1.0 / std::abs(b), -std::arg(b));
  auto moment = [&](int k) -> ScaledValue {
    const int deg = k + n - 1;
    const Rule1D& rule = gauss_laguerre(deg / 2 + 8, 0.0);
    ScaledValue sum;
    for (int i = 0; i < rule.m; ++i)
      sum += ScaledValue(rule.weights[i]) * ScaledValue::exp(deg * std::log(rule.nodes[i]));
    ScaledValue r = ScaledValue::exp(double(k + n) * std::log(rot)) * cplx(0.5);
    return sum * r * ScaledValue::exp(-k * std::numbers::ln2 - std::lgamma(k + 1.0) + log_ratio_k(k, n));
  };
  std::vector<ScaledValue> raw(kmax + 1);
  parallel_for(kmax + 1, [&](std::size_t k) { raw[k] = moment(static_cast<int>(k)); });
  std::vector<SequenceEntry> entries(kmax + 1);
  for (int k = 0; k <= kmax; ++k) entries[k] = {k, (raw[k] / raw[0]).value()};
  out.sequence = make_report(std::move(entries));
  return out;
}

std::vector<cplx> example36_laguerre_form(cplx lambda, int n, int kmax) {
  if (!(lambda.real() < 1.0)) throw DivergenceError("example36_laguerre_form: needs Re lambda < 1");
  // int e^{lambda r^2} L_k^{n-1}(2 r^2) e^{-r^2} r^{2n-1} dr; substitute s = r^2 and
  // rotate so that (1 - lambda) s is real.
  const cplx p = 1.0 - lambda;
  const cplx rot = std::polar(1.0 / std::abs(p), -std::arg(p));
  const Rule1D& rule = gauss_laguerre(kmax / 2 + n + 16, double(n - 1));
  std::vector<cplx> out(kmax + 1);
  // rot^n is common to every k and cancels in the normalization.
  std::vector<cplx> sums(kmax + 1, 0.0);
  for (int i = 0; i < rule.m; ++i) {
    cplx x = 2.0 * rot * rule.nodes[i];
    cplx l0 = 1.0, l1 = double(n) - x;
    sums[0] += rule.weights[i] * l0;
    if (kmax >= 1) sums[1] += rule.weights[i] * l1;
    for (int k = 1; k < kmax; ++k) {
      cplx l2 = ((2.0 * k + n - x) * l1 - double(k + n - 1) * l0) / double(k + 1);
      l0 = l1;
      l1 = l2;
      sums[k + 1] += rule.weights[i] * l1;
    }
  }
  for (int k = 0; k <= kmax; ++k) {
    cplx v = sums[k] * std::exp(log_ratio_k(k, n)) / sums[0];
    out[k] = k % 2 ? -v : v;
  }
  return out;
}

namespace {

// tilted(r) = h(r) e^{r^2}; budget describes h.
HermiteMultiplier multiplier_impl(const std::function<ScaledValue(double)>& tilted, const DecayBudget& hb,
                                  const SpaceParams& params, int kmax) {
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  if (!hb.support && !(hb.gaussian_rate < -1.0))
    throw DivergenceError("multiplier_from_h: h must decay faster than e^{-|z|^2}");
  const int n = params.n;
  const double t = params.t;
  // |S^{2n-1}| = 2 pi^n / (n-1)!
  const double log_sphere = std::numbers::ln2 + n * std::log(kPi) - std::lgamma(double(n));
  std::vector<SequenceEntry> entries(kmax + 1);
  parallel_for(kmax + 1, [&](std::size_t i) {
    const int k = static_cast<int>(i);
    DecayBudget b = hb;
    b.gaussian_rate += 1.0;
    b.poly_degree += 2 * k;
    auto f = [&](double r) -> ScaledValue {
      ScaledValue hv = tilted(r);
      if (hv.is_zero()) return hv;
      return hv * laguerre(k, n - 1, -2 * r * r);
    };
    ScaledValue I = radial_integral_scaled(f, b, n);
    I *= ScaledValue::exp(-2.0 * (2 * k + n) * t + log_ratio_k(k, n) + log_sphere);
    entries[i] = {k, I.value()};
  });
  return {params, make_report(std::move(entries))};
}

}  // namespace

HermiteMultiplier multiplier_from_h(const RadialProfile& h, const SpaceParams& params, int kmax) {
  auto tilted = [&](double r) { return ScaledValue(h.f(r)) * ScaledValue::exp(r * r); };
  return multiplier_impl(tilted, h.budget, params, kmax);
}

HermiteMultiplier multiplier_from_h(const SymbolSpec& h, const SpaceParams& params, int kmax) {
  if (!h.is_radial() || h.kind == SymbolKind::GroupGauss)
    throw ConstraintError(std::string(h.name()) + " is not a radial symbol on R^{2n}");
  // h alone underflows long before h e^{r^2} is negligible when the rate is close to -1.
  auto tilted = detail::scaled_profile(h, 1.0);
  return multiplier_impl(tilted, h.decay, params, kmax);
}

double gauss_h_multiplier(double c, const SpaceParams& params, int k) {
  if (!(c > 1.0)) throw DivergenceError("gauss-h multiplier needs c > 1");
  const int n = params.n;
  return std::exp(-2.0 * (2 * k + n) * params.t + n * std::log(kPi) + k * std::log(c + 1) -
                  (k + n) * std::log(c - 1));
}

GaussSymbol g_from_gauss_h(double c, const SpaceParams& params) {
  if (!(c > 0.0)) throw ConstraintError("gauss-h needs c > 0");
  const int n = params.n;
  const double t = params.t;
  GaussSymbol out;
  out.constant = std::pow(kPi / c, n / 2.0) * std::exp(-log_weight_U(params, 0.0, 0.0));
  out.shape = SymbolSpec::gauss_yv(1.0 / c - std::tanh(2 * t), 1.0 / std::tanh(2 * t) - c);
  return out;
}

cplx g_from_h(const SymbolSpec& h, const SpaceParams& params, std::span<const double> xi,
              std::span<const double> v) {
  check_point(params, xi.size(), v.size(), "g_from_h");
  if (h.kind == SymbolKind::GaussH) {
    GaussSymbol gs = g_from_gauss_h(h.c, params);
    std::vector<double> pt(xi.begin(), xi.end());
    pt.insert(pt.end(), v.begin(), v.end());
    return gs.constant * gs.shape.value(pt);
  }
  if (!h.is_radial() || h.kind == SymbolKind::GroupGauss)
    throw ConstraintError(std::string(h.name()) + " is not a radial symbol on R^{2n}");
  return g_from_h_quadrature(to_profile(h), params, xi, v);
}

cplx g_from_h_quadrature(const RadialProfile& h, const SpaceParams& params, std::span<const double> xi,
                         std::span<const double> v) {
  check_point(params, xi.size(), v.size(), "g_from_h");
  const int n = params.n;
  if (n > 4) throw RangeError("g_from_h: quadrature supports n <= 4");
  if (h.budget.support || !(h.budget.gaussian_rate < 0.0))
    throw ConstraintError("g_from_h: quadrature needs a Gaussian-decaying profile");
  const double c = -h.budget.gaussian_rate;
  const double v2 = norm2(v);
  auto f = [&](std::span<const double> y) -> cplx {
    double dot = 0.0;
    for (int j = 0; j < n; ++j) dot += y[j] * xi[j];
    return h.f(std::sqrt(norm2(y) + v2)) * std::exp(-2 * dot);
  };
  std::vector<double> center(n), scale(n, 1.0 / std::sqrt(c));
  for (int j = 0; j < n; ++j) center[j] = -xi[j] / c;
  int m = n > 2 ? 16 : 24;
  cplx prev = integrate_nd(f, hermite_tensor(m, n), center, scale);
  for (m *= 2; m <= (n > 2 ? 64 : 256); m *= 2) {
    cplx cur = integrate_nd(f, hermite_tensor(m, n), center, scale);
    if (std::abs(cur - prev) <= 1e-11 * std::max(std::abs(cur), 1e-300))
      return cur * std::exp(-log_weight_U(params, norm2(xi), v2));
    prev = cur;
  }
  throw AccuracyError("g_from_h: quadrature did not converge", std::abs(prev), 0.0);
}

GutzmerResult gutzmer_hermite_n1(std::span<const std::pair<int, cplx>> coeffs, double y, double v) {
  int kmax = 0;
  for (auto& [k, c] : coeffs) {
    if (k < 0) throw RangeError("gutzmer: negative index");
    kmax = std::max(kmax, k);
  }
  GutzmerResult res;
  for (auto& [k, c] : coeffs) res.rhs += std::norm(c) * phi_imaginary(k, 1, y * y + v * v, Doubling::Double).real();

  // For sigma = e^{i theta}: |pi(sigma.(iy, iv)) F(xi)|^2 = e^{-2 Y xi} |F(xi + i V)|^2.
  auto slice = [&](double th) {
    double Y = y * std::cos(th) - v * std::sin(th);
    double V = v * std::cos(th) + y * std::sin(th);
    auto f = [&](double xi) -> cplx {
      cplx F = 0.0;
      for (auto& [k, c] : coeffs) F += c * hermite_fn(k, cplx(xi, V));
      return std::exp(-2 * Y * xi) * std::norm(F);
    };
    return integrate_line(f, -Y, 1.0, 1e-13, 2 * kmax + 24).real();
  };
  auto trapezoid = [&](int M) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += slice(2 * kPi * j / M);
    return s / M;
  };
  double prev = trapezoid(16);
  for (int M = 32; M <= 1024; M *= 2) {
    double cur = trapezoid(M);
    if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) {
      res.lhs = cur;
      return res;
    }
    prev = cur;
  }
  throw AccuracyError("gutzmer: angular average did not converge", prev, 0.0);
}

}  // namespace sbt
