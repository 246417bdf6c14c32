#include "sbt/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace sbt {

namespace {

// Jacobi matrix of an orthonormal family: x p_j = a_{j+1} p_{j+1} + b_j p_j + a_j p_{j-1}.
struct Recurrence {
  std::function<double(int)> b;  // j >= 0
  std::function<double(int)> a;  // j >= 1
  double log_mu0 = 0.0;
};

struct Eval {
  double pm = 0.0, dpm = 0.0;  // p_m, p_m' sharing the scale e^{log_scale}
  double log_sumsq = 0.0;      // log sum_{j<m} p_j^2
};

Eval evaluate(const Recurrence& rec, int m, double x) {
  double p_prev = 0.0, dp_prev = 0.0;
  double p = std::exp(-0.5 * rec.log_mu0), dp = 0.0;
  double log_scale = 0.0;
  double sumsq = 0.0;
  for (int j = 0; j < m; ++j) {
    sumsq += p * p;
    double a_next = rec.a(j + 1);
    double a_j = j > 0 ? rec.a(j) : 0.0;
    double p_next = ((x - rec.b(j)) * p - a_j * p_prev) / a_next;
    double dp_next = ((x - rec.b(j)) * dp + p - a_j * dp_prev) / a_next;
    p_prev = p;
    dp_prev = dp;
    p = p_next;
    dp = dp_next;
    double big = std::max(std::abs(p), std::abs(dp));
    if (big > 1e120) {
      const double f = 1e-120;
      p *= f, dp *= f, p_prev *= f, dp_prev *= f;
      sumsq *= f * f;
      log_scale += 120 * std::log(10.0);
    }
  }
  return Eval{p, dp, std::log(sumsq) + 2 * log_scale};
}

Rule1D build_gauss(RuleKind kind, int m, const Recurrence& rec, bool symmetric) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 1));
  for (int j = 0; j < m; ++j) diag(j) = rec.b(j);
  for (int j = 1; j < m; ++j) sub(j - 1) = rec.a(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::EigenvaluesOnly);
  Rule1D r;
  r.kind = kind;
  r.m = m;
  r.nodes.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      Eval e = evaluate(rec, m, x);
      if (e.dpm == 0.0) break;
      double dx = e.pm / e.dpm;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    r.nodes[i] = x;
  }
  std::sort(r.nodes.begin(), r.nodes.end());
  if (symmetric) {
    for (int i = 0; i < m / 2; ++i) {
      double v = 0.5 * (r.nodes[m - 1 - i] - r.nodes[i]);
      r.nodes[i] = -v;
      r.nodes[m - 1 - i] = v;
    }
    if (m % 2) r.nodes[m / 2] = 0.0;
  }
  r.weights.resize(m);
  r.scaled.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = r.nodes[i];
    double logw = -evaluate(rec, m, x).log_sumsq;
    r.weights[i] = std::exp(logw);
    double shift = kind == RuleKind::GaussHermite ? x * x : kind == RuleKind::GaussLaguerre ? x : 0.0;
    r.scaled[i] = std::exp(logw + shift);
  }
  return r;
}

using Key = std::tuple<int, int, double>;

class RuleCache {
 public:
  template <class Build>
  const Rule1D& get(const Key& key, Build&& build) {
    {
      std::shared_lock lock(mu_);
      auto it = rules_.find(key);
      if (it != rules_.end()) return *it->second;
    }
    auto fresh = std::make_unique<Rule1D>(build());
    std::unique_lock lock(mu_);
    auto [it, inserted] = rules_.emplace(key, std::move(fresh));
    return *it->second;
  }

 private:
  std::shared_mutex mu_;
  std::map<Key, std::unique_ptr<Rule1D>> rules_;
};

RuleCache& cache() {
  static RuleCache c;
  return c;
}

}  // namespace

const Rule1D& gauss_hermite(int m) {
  if (m < 1 || m > kMaxHermite) throw RangeError("gauss_hermite: m must be in [1, 512]");
  return cache().get(Key{0, m, 0.0}, [m] {
    Recurrence rec{[](int) { return 0.0; }, [](int j) { return std::sqrt(j / 2.0); }, 0.5 * std::log(M_PI)};
    return build_gauss(RuleKind::GaussHermite, m, rec, true);
  });
}

const Rule1D& gauss_laguerre(int m, double alpha) {
  if (m < 1 || m > kMaxLaguerre) throw RangeError("gauss_laguerre: m must be in [1, 2048]");
  if (!(alpha > -1.0)) throw RangeError("gauss_laguerre: alpha must exceed -1");
  return cache().get(Key{1, m, alpha}, [m, alpha] {
    Recurrence rec{[alpha](int j) { return 2.0 * j + 1.0 + alpha; },
                   [alpha](int j) { return std::sqrt(j * (j + alpha)); }, std::lgamma(alpha + 1.0)};
    Rule1D r = build_gauss(RuleKind::GaussLaguerre, m, rec, false);
    r.alpha = alpha;
    return r;
  });
}

const Rule1D& gauss_legendre(int m) {
  if (m < 1 || m > kMaxLaguerre) throw RangeError("gauss_legendre: m must be in [1, 2048]");
  return cache().get(Key{2, m, 0.0}, [m] {
    Recurrence rec{[](int) { return 0.0; }, [](int j) { return j / std::sqrt(4.0 * j * j - 1.0); },
                   std::log(2.0)};
    Rule1D r = build_gauss(RuleKind::GaussLegendre, m, rec, true);
    r.lo = -1.0;
    r.hi = 1.0;
    return r;
  });
}

Rule1D gauss_legendre(int m, double lo, double hi) {
  Rule1D r = gauss_legendre(m);
  double h = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < m; ++i) {
    r.nodes[i] = mid + h * r.nodes[i];
    r.weights[i] *= h;
    r.scaled[i] *= h;
  }
  r.lo = lo;
  r.hi = hi;
  return r;
}

Rule1D truncated_uniform(int m, double lo, double hi) {
  if (m < 1) throw RangeError("truncated_uniform: m must be positive");
  Rule1D r;
  r.kind = RuleKind::TruncatedUniform;
  r.m = m;
  r.lo = lo;
  r.hi = hi;
  double h = (hi - lo) / m;
  for (int i = 0; i < m; ++i) {
    r.nodes.push_back(lo + (i + 0.5) * h);
    r.weights.push_back(h);
    r.scaled.push_back(h);
  }
  return r;
}

std::size_t TensorRule::size() const {
  std::size_t s = 1;
  for (const auto& f : factors) s *= f.nodes.size();
  return s;
}

TensorRule hermite_tensor(int m, std::size_t d) {
  TensorRule t;
  t.factors.assign(d, gauss_hermite(m));
  return t;
}

cplx integrate_nd_fn(const std::function<cplx(std::span<const double>)>& f, const TensorRule& rule,
                     std::span<const double> center, std::span<const double> scale) {
  return integrate_nd(f, rule, center, scale);
}

namespace {

struct Estimate {
  ScaledValue value;
  ScaledValue magnitude;
};

bool agree(const Estimate& prev, const Estimate& cur, double tol) {
  ScaledValue diff = cur.value - prev.value;
  if (diff.is_zero()) return true;
  if (!cur.value.is_zero() && relative_difference(prev.value, cur.value) <= tol) return true;
  return (diff / cur.magnitude).abs() <= 1e-13;
}

}  // namespace

namespace {

Estimate estimate_radial(const std::function<ScaledValue(double)>& f, const DecayBudget& budget, int n, int m) {
  Estimate e;
  if (budget.support) {
    const Rule1D& r = gauss_legendre(m);
    double lo = budget.support->lo, hi = budget.support->hi;
    double h = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < m; ++i) {
      double x = mid + h * r.nodes[i];
      ScaledValue term = ScaledValue(h * r.weights[i] * std::pow(x, 2 * n - 1)) * f(x);
      e.value += term;
      e.magnitude += ScaledValue(std::abs(term.mantissa()), term.exponent2());
    }
    return e;
  }
  // s = A r^2 turns r^{2n-1} dr into s^{n-1} ds / (2 A^n).
  double A = -budget.gaussian_rate;
  const Rule1D& r = gauss_laguerre(m, n - 1.0);
  for (int i = 0; i < m; ++i) {
    ScaledValue term = ScaledValue(r.scaled[i]) * f(std::sqrt(r.nodes[i] / A));
    e.value += term;
    e.magnitude += ScaledValue(std::abs(term.mantissa()), term.exponent2());
  }
  ScaledValue pre = ScaledValue::exp(-std::log(2.0) - n * std::log(A));
  e.value *= pre;
  e.magnitude *= pre;
  return e;
}

void check_radial(const DecayBudget& budget, int n) {
  if (n < 1) throw ConstraintError("radial_integral: n must be >= 1");
  if (!budget.support && !(budget.gaussian_rate < 0.0))
    throw DivergenceError("radial integrand does not decay: gaussian_rate must be negative");
}

}  // namespace

ScaledValue radial_estimate(const std::function<ScaledValue(double)>& f, const DecayBudget& budget, int n,
                            int m) {
  check_radial(budget, n);
  return estimate_radial(f, budget, n, m).value;
}

ScaledValue radial_integral_scaled(const std::function<ScaledValue(double)>& f, const DecayBudget& budget,
                                   int n, const RadialOptions& opt) {
  check_radial(budget, n);
  auto estimate = [&](int m) { return estimate_radial(f, budget, n, m); };

  int m = opt.m0 > 0 ? opt.m0 : 16 + budget.poly_degree;
  Estimate prev = estimate(m);
  Estimate older = prev;
  for (int d = 0; d < opt.max_doublings && 2 * m <= kMaxLaguerre; ++d) {
    m *= 2;
    Estimate cur = estimate(m);
    if (agree(prev, cur, opt.tol)) return cur.value;
    older = prev;
    prev = cur;
  }
  throw AccuracyError("radial_integral did not converge after doubling the rule", older.value.real(),
                      prev.value.real());
}

cplx radial_integral(const std::function<ScaledValue(double)>& f, const DecayBudget& budget, int n,
                     double tol) {
  RadialOptions opt;
  opt.tol = tol;
  return radial_integral_scaled(f, budget, n, opt).value();
}

cplx integrate_line(const std::function<cplx(double)>& f, double center, double scale, double tol, int m0) {
  auto estimate = [&](int m, double& mag) {
    const Rule1D& r = gauss_hermite(m);
    cplx total = 0.0;
    mag = 0.0;
    for (int i = 0; i < m; ++i) {
      cplx term = scale * r.scaled[i] * f(center + scale * r.nodes[i]);
      total += term;
      mag += std::abs(term);
    }
    return total;
  };
  double mag = 0.0;
  int m = m0;
  cplx prev = estimate(m, mag);
  while (2 * m <= kMaxHermite) {
    m *= 2;
    cplx cur = estimate(m, mag);
    double diff = std::abs(cur - prev);
    if (diff <= tol * std::abs(cur) || diff <= 1e-14 * mag) return cur;
    prev = cur;
  }
  throw AccuracyError("integrate_line did not converge", prev.real(), prev.real());
}

}  // namespace sbt
