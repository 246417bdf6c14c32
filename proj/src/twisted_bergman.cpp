#include "sbt/twisted_bergman.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "sbt/parallel.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/specfun.hpp"
#include "scaled_profile.hpp"

namespace sbt {

namespace {

constexpr double kPi = std::numbers::pi;

double log_ratio_k(int k, int n) { return std::lgamma(k + 1.0) + std::lgamma(double(n)) - std::lgamma(double(k + n)); }

// |S^{2n-1}| = 2 pi^n / (n-1)!
double log_sphere(int n) { return std::numbers::ln2 + n * std::log(kPi) - std::lgamma(double(n)); }

void check_n1(const SpaceParams& params, const char* what) {
  if (params.n != 1) throw RangeError(std::string(what) + ": only n = 1 is supported");
}

// int g0(r) p_{2t}(2r) phi_k(2ir) over R^{2n}; g0 carries its own budget.
ScaledValue weighted_moment(const std::function<ScaledValue(double)>& g0, const DecayBudget& gb,
                            const SpaceParams& params, int k) {
  const int n = params.n;
  const double t = params.t;
  DecayBudget b = gb;
  b.gaussian_rate += 1.0 - 1.0 / std::tanh(2 * t);
  b.poly_degree += 2 * k;
  auto f = [&](double r) -> ScaledValue {
    ScaledValue gv = g0(r);
    if (gv.is_zero()) return gv;
    return gv * twisted_heat_p(2 * t, 4 * r * r, n) * phi_imaginary(k, n, r * r, Doubling::Double);
  };
  ScaledValue I = radial_integral_scaled(f, b, n);
  return I * ScaledValue::exp(log_sphere(n));
}

void check_diag_guard(const DecayBudget& b, const SpaceParams& params) {
  double lim = 1.0 / std::tanh(2 * params.t) - 1.0;
  if (!b.support && !(b.gaussian_rate < lim))
    throw DivergenceError("diag_seq: g0 must grow slower than e^{(coth 2t - 1)|(y,v)|^2}");
}

SequenceReport diag_impl(const std::function<ScaledValue(double)>& g0, const DecayBudget& gb,
                         const SpaceParams& params, int kmax) {
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  check_diag_guard(gb, params);
  const int n = params.n;
  const double t = params.t;
  auto one = [](double) { return ScaledValue(1.0); };
  const ScaledValue cal = weighted_moment(one, DecayBudget{}, params, 0) * ScaledValue::exp(-2.0 * n * t);
  std::vector<SequenceEntry> entries(kmax + 1);
  parallel_for(kmax + 1, [&](std::size_t i) {
    const int k = static_cast<int>(i);
    ScaledValue v = weighted_moment(g0, gb, params, k) * ScaledValue::exp(-2.0 * (2 * k + n) * t + log_ratio_k(k, n));
    entries[i] = {k, (v / cal).value()};
  });
  return make_report(std::move(entries));
}

using IndexPair = std::pair<int, int>;

// entries(i, j) = int g tau phi_j conj(tau phi_i) W_t at n = 1, by nested
// Gauss-Hermite: (x, u) around the peak (ta - v, tb + y) of the Gaussian factor,
// (y, v) around the peak of the remaining e^{-c|(y,v)|^2 + (tb y - ta v)/2}.
Eigen::MatrixXcd gram_estimate(const TwistedSymbol& g, double c, const SpaceParams& params, double ta, double tb,
                               const std::vector<IndexPair>& idx, int m_out, int m_in) {
  const double t = params.t;
  int M = 0;
  for (auto [a, b] : idx) M = std::max({M, a, b});
  const std::size_t d = idx.size();
  std::vector<double> damp(d);
  for (std::size_t i = 0; i < d; ++i) damp[i] = std::exp(-(2 * idx[i].second + 1) * t);
  const Rule1D& ro = gauss_hermite(m_out);
  const Rule1D& ri = gauss_hermite(m_in);
  const double so = 1.0 / std::sqrt(c), si = std::sqrt(2.0);
  const double yc = tb / (4 * c), vc = -ta / (4 * c);
  const double log_p0 = -std::log(4 * kPi * std::sinh(2 * t));
  const double cth = 1.0 / std::tanh(2 * t);

  std::vector<Eigen::MatrixXcd> rows(m_out, Eigen::MatrixXcd::Zero(d, d));
  parallel_for(m_out, [&](std::size_t oy) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd phi(d);
    const double y = yc + so * ro.nodes[oy];
    for (int ov = 0; ov < m_out; ++ov) {
      const double v = vc + so * ro.nodes[ov];
      const double wout = so * so * ro.scaled[oy] * ro.scaled[ov];
      for (int ix = 0; ix < m_in; ++ix) {
        const double x = ta - v + si * ri.nodes[ix];
        for (int iu = 0; iu < m_in; ++iu) {
          const double u = tb + y + si * ri.nodes[iu];
          cplx gv = g(x, y, u, v);
          if (gv == 0.0) continue;
          const cplx z(x, y), w(u, v);
          auto table = special_hermite_table(M, z - ta, w - tb);
          cplx phase = std::exp(cplx(0, -0.5) * (ta * w - tb * z));
          for (std::size_t i = 0; i < d; ++i)
            phi[i] = damp[i] * phase * table[idx[i].first * (M + 1) + idx[i].second];
          double log_w = u * y - v * x + log_p0 - cth * (y * y + v * v);
          cplx weight = wout * si * si * ri.scaled[ix] * ri.scaled[iu] * std::exp(log_w) * gv;
          acc.noalias() += weight * phi.conjugate() * phi.transpose();
        }
      }
    }
    rows[oy] = acc;
  });
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  for (auto& r : rows) total += r;
  return total;
}

Eigen::MatrixXcd gram(const TwistedSymbol& g, double rate, const SpaceParams& params, double ta, double tb,
                      const std::vector<IndexPair>& idx) {
  check_n1(params, "twisted matrix entries");
  for (auto [a, b] : idx)
    if (a < 0 || b < 0 || a > kMaxTwistedIndex || b > kMaxTwistedIndex)
      throw RangeError("twisted matrix entries: indices must lie in [0, 3]");
  const double c = 1.0 / std::tanh(2 * params.t) - 1.0 - rate;
  if (!(c > 0.0)) throw DivergenceError("twisted matrix entries: g must grow slower than e^{(coth 2t - 1)|(y,v)|^2}");
  Eigen::MatrixXcd prev = gram_estimate(g, c, params, ta, tb, idx, 20, 12);
  for (auto [mo, mi] : {std::pair{40, 20}, {80, 32}}) {
    Eigen::MatrixXcd cur = gram_estimate(g, c, params, ta, tb, idx, mo, mi);
    double scale = cur.cwiseAbs().maxCoeff();
    if ((cur - prev).cwiseAbs().maxCoeff() <= 1e-10 * scale) return cur;
    prev = std::move(cur);
  }
  throw AccuracyError("twisted matrix entries: quadrature did not converge", prev.cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace

ScaledValue weight_W(const SpaceParams& params, const TwistedPoint& point) {
  const auto n = static_cast<std::size_t>(params.n);
  if (point.z.size() != n || point.w.size() != n) throw ShapeError("weight_W: z and w must have length n");
  double mod = 0.0, r2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double x = point.z[j].real(), y = point.z[j].imag(), u = point.w[j].real(), v = point.w[j].imag();
    mod += u * y - v * x;
    r2 += y * y + v * v;
  }
  return ScaledValue::exp(mod) * twisted_heat_p(2 * params.t, 4 * r2, params.n);
}

Identity37Result verify_identity_37(const SpaceParams& params, int kmax) {
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  const int n = params.n;
  const double t = params.t;
  auto one = [](double) { return ScaledValue(1.0); };
  std::vector<ScaledValue> I(kmax + 1);
  parallel_for(kmax + 1, [&](std::size_t k) { I[k] = weighted_moment(one, DecayBudget{}, params, static_cast<int>(k)); });
  Identity37Result res;
  res.kappa = {"identity37", (I[0] * ScaledValue::exp(-2.0 * n * t)).real()};
  res.ratios.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    ScaledValue closed = ScaledValue::exp(-log_ratio_k(k, n) + (2 * k + n) * 2 * t) * res.kappa.kappa;
    res.ratios[k] = (I[k] / closed).real();
    res.max_rel_err = std::max(res.max_rel_err, std::abs(res.ratios[k] - 1.0));
  }
  return res;
}

Lemma43Result verify_lemma_43(const SpaceParams& params, int k, double x, double u) {
  check_n1(params, "verify_lemma_43");
  if (k < 0 || k > 8) throw RangeError("verify_lemma_43: k must lie in [0, 8]");
  const double t = params.t;
  const double cth = 1.0 / std::tanh(t);
  // e^{-coth t |p - c|^2/4 + |p|^2/4} peaks at c coth t / (coth t - 1).
  auto lhs_at = [&](int kk, double xx, double uu) {
    auto f = [&](std::span<const double> p) -> cplx {
      double y = p[0], v = p[1];
      double d2 = (xx - y) * (xx - y) + (uu - v) * (uu - v);
      double r2 = y * y + v * v;
      double log_mag = -std::log(4 * kPi * std::sinh(t)) - cth * d2 / 4 + r2 / 4;
      return std::exp(cplx(log_mag, 0.5 * (uu * y - v * xx))) * laguerre(kk, 0.0, -r2 / 2).real();
    };
    const double sh = cth / (cth - 1.0);
    const double center[2] = {xx * sh, uu * sh};
    const double sc = 2.0 / std::sqrt(cth - 1.0);
    const double scale[2] = {sc, sc};
    cplx prev = integrate_nd(f, hermite_tensor(24, 2), center, scale);
    for (int m = 48; m <= 192; m *= 2) {
      cplx cur = integrate_nd(f, hermite_tensor(m, 2), center, scale);
      if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur;
      prev = cur;
    }
    throw AccuracyError("verify_lemma_43: quadrature did not converge", std::abs(prev), 0.0);
  };
  Lemma43Result res;
  res.kappa = lhs_at(0, 0.0, 0.0).real() / std::exp(t);
  res.lhs = lhs_at(k, x, u);
  res.rhs = res.kappa * std::exp((2 * k + 1) * t) * phi_imaginary(k, 1, x * x + u * u, Doubling::Single).real();
  return res;
}

SequenceReport diag_seq(const RadialProfile& g0, const SpaceParams& params, int kmax) {
  auto f = [&](double r) { return ScaledValue(g0.f(r)); };
  return diag_impl(f, g0.budget, params, kmax);
}

SequenceReport diag_seq(const SymbolSpec& g0, const SpaceParams& params, int kmax) {
  if (!g0.is_radial()) throw ConstraintError(std::string(g0.name()) + " is not a radial symbol");
  return diag_impl(detail::scaled_profile(g0, 0.0), g0.decay, params, kmax);
}

TwistedSymbol twisted_symbol(const SymbolSpec& g0) {
  if (!g0.is_radial()) throw ConstraintError(std::string(g0.name()) + " is not a radial symbol");
  return [g0](double, double y, double, double v) -> cplx { return g0.radial_value(std::hypot(y, v)); };
}

cplx matrix_entry_twisted(const TwistedSymbol& g, double rate, const SpaceParams& params, int a, int b, int mu,
                          int nu) {
  return matrix_entry_translated(g, rate, params, 0.0, 0.0, a, b, mu, nu);
}

cplx matrix_entry_twisted(const SymbolSpec& g0, const SpaceParams& params, int a, int b, int mu, int nu) {
  if (g0.decay.support) throw ConstraintError("matrix_entry_twisted: compactly supported symbols are not supported");
  return matrix_entry_twisted(twisted_symbol(g0), g0.decay.gaussian_rate, params, a, b, mu, nu);
}

cplx matrix_entry_translated(const TwistedSymbol& g, double rate, const SpaceParams& params, double ta, double tb,
                             int a, int b, int mu, int nu) {
  std::vector<IndexPair> idx = {{mu, nu}, {a, b}};
  if (a == mu && b == nu) idx.pop_back();
  Eigen::MatrixXcd m = gram(g, rate, params, ta, tb, idx);
  // entries(i, j) pairs phi_j with conj(phi_i)
  return m(0, idx.size() - 1);
}

TwistedFunction twisted_translate(double a, double b, TwistedFunction f) {
  return [a, b, f = std::move(f)](cplx z, cplx w) {
    return std::exp(cplx(0, -0.5) * (a * w - b * z)) * f(z - a, w - b);
  };
}

double invariance_check_48(const TwistedSymbol& g, double rate, const SpaceParams& params, double ta, double tb,
                           int max_index) {
  if (max_index < 0 || max_index > 2) throw RangeError("invariance_check_48: max_index must lie in [0, 2]");
  std::vector<IndexPair> idx;
  for (int a = 0; a <= max_index; ++a)
    for (int b = 0; b <= max_index; ++b) idx.push_back({a, b});
  Eigen::MatrixXcd plain = gram(g, rate, params, 0.0, 0.0, idx);
  Eigen::MatrixXcd moved = gram(g, rate, params, ta, tb, idx);
  double scale = plain.diagonal().cwiseAbs().maxCoeff();
  return (moved - plain).cwiseAbs().maxCoeff() / scale;
}

TwistedGutzmer gutzmer_twisted_n1(std::span<const TwistedCoefficient> coeffs, double y, double v) {
  int M = 0;
  for (const auto& c : coeffs) {
    if (c.alpha < 0 || c.beta < 0 || c.alpha > kMaxSpecialHermite || c.beta > kMaxSpecialHermite)
      throw RangeError("gutzmer_twisted_n1: indices must lie in [0, 12]");
    M = std::max({M, c.alpha, c.beta});
  }
  TwistedGutzmer res;
  for (const auto& c : coeffs) res.rhs += std::norm(c.c) * phi_imaginary(c.beta, 1, y * y + v * v, Doubling::Double).real();

  // sigma_theta rotates (z, w) and keeps z^2 + w^2, so the Gaussian part of
  // |F(sigma(z,w))|^2 e^{uy - vx} peaks at (x, u) = (-v, y) for every theta.
  auto estimate = [&](int m, int steps) {
    const Rule1D& r = gauss_hermite(m);
    const double si = std::sqrt(2.0);
    std::vector<double> part(steps, 0.0);
    parallel_for(steps, [&](std::size_t j) {
      double th = 2 * kPi * j / steps, ct = std::cos(th), st = std::sin(th);
      double s = 0.0;
      for (int ix = 0; ix < m; ++ix) {
        double x = -v + si * r.nodes[ix];
        for (int iu = 0; iu < m; ++iu) {
          double u = y + si * r.nodes[iu];
          cplx z(x, y), w(u, v);
          cplx Z = ct * z - st * w, W = ct * w + st * z;
          auto table = special_hermite_table(M, Z, W);
          cplx F = 0.0;
          for (const auto& c : coeffs) F += c.c * table[c.alpha * (M + 1) + c.beta];
          s += 2 * r.scaled[ix] * r.scaled[iu] * std::exp(u * y - v * x) * std::norm(F);
        }
      }
      part[j] = s;
    });
    double total = 0.0;
    for (double p : part) total += p;
    return total / steps;
  };
  double prev = estimate(2 * M + 12, 4 * M + 16);
  for (int q = 1; q <= 3; ++q) {
    double cur = estimate((2 * M + 12) << q, (4 * M + 16) << q);
    if (std::abs(cur - prev) <= 1e-11 * std::abs(cur)) {
      res.lhs = cur;
      return res;
    }
    prev = cur;
  }
  throw AccuracyError("gutzmer_twisted_n1: quadrature did not converge", prev, 0.0);
}

}  // namespace sbt
