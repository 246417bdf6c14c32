#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "sbt/core.hpp"
#include "sbt/scaled_value.hpp"

namespace sbt {

enum class RuleKind { GaussHermite, GaussLaguerre, GaussLegendre, TruncatedUniform };

// Nodes and weights of a 1-D rule. `scaled` holds the weights with the
// rule's own weight function divided out: w e^{x^2} for Hermite, w e^{x}
// for Laguerre, w otherwise. Extreme Hermite weights underflow for large m;
// the scaled weights never do.
struct Rule1D {
  RuleKind kind = RuleKind::GaussHermite;
  int m = 0;
  double alpha = 0.0;
  double lo = 0.0, hi = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled;
};

constexpr int kMaxHermite = 512;
constexpr int kMaxLaguerre = 2048;
constexpr double kDefaultTol = 1e-10;

// Rules are cached and never evicted, so references stay valid.
const Rule1D& gauss_hermite(int m);
const Rule1D& gauss_laguerre(int m, double alpha);
const Rule1D& gauss_legendre(int m);  // on [-1, 1]
Rule1D gauss_legendre(int m, double lo, double hi);
Rule1D truncated_uniform(int m, double lo, double hi);

struct TensorRule {
  std::vector<Rule1D> factors;
  std::size_t dimension() const { return factors.size(); }
  std::size_t size() const;
};

TensorRule hermite_tensor(int m, std::size_t d);

// sum_i prod_j (scale_j * scaled_w_j) f(center + scale * node). Hermite and
// Laguerre factors therefore integrate f against Lebesgue measure; the
// caller picks center/scale so that f looks Gaussian in the rule variable.
template <class F>
cplx integrate_nd(F&& f, const TensorRule& rule, std::span<const double> center,
                  std::span<const double> scale = {}) {
  const std::size_t d = rule.dimension();
  if (d == 0 || d > 4) throw ShapeError("integrate_nd supports dimensions 1..4");
  if (center.size() != d) throw ShapeError("recentering vector does not match rule dimension");
  if (!scale.empty() && scale.size() != d) throw ShapeError("scale vector does not match rule dimension");
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> point(d);
  cplx total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const Rule1D& r = rule.factors[j];
      double s = scale.empty() ? 1.0 : scale[j];
      point[j] = center[j] + s * r.nodes[idx[j]];
      w *= s * r.scaled[idx[j]];
    }
    total += w * cplx(f(std::span<const double>(point)));
    std::size_t j = d;
    while (j-- > 0) {
      if (++idx[j] < rule.factors[j].nodes.size()) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

// Type-erased overload for callers holding a std::function.
cplx integrate_nd_fn(const std::function<cplx(std::span<const double>)>& f, const TensorRule& rule,
                     std::span<const double> center, std::span<const double> scale = {});

struct RadialOptions {
  double tol = kDefaultTol;
  int m0 = 0;  // 0 = size from budget
  int max_doublings = 6;
};

// int_0^inf f(r) r^{2n-1} dr. The budget must describe the full integrand f.
ScaledValue radial_integral_scaled(const std::function<ScaledValue(double)>& f, const DecayBudget& budget,
                                   int n, const RadialOptions& opt = {});
cplx radial_integral(const std::function<ScaledValue(double)>& f, const DecayBudget& budget, int n,
                     double tol = kDefaultTol);
// Single estimate with an m-point rule, no doubling.
ScaledValue radial_estimate(const std::function<ScaledValue(double)>& f, const DecayBudget& budget, int n,
                            int m);

// int_R f(x) dx for f dominated by e^{-(x-center)^2/scale^2}; doubles the
// Gauss-Hermite size until two estimates agree.
cplx integrate_line(const std::function<cplx(double)>& f, double center, double scale,
                    double tol = kDefaultTol, int m0 = 16);

// Composite Gauss-Legendre on [lo, hi] with `panels` equal panels of m nodes.
template <class F>
cplx composite_legendre(F&& f, double lo, double hi, int panels, int m) {
  const Rule1D& r = gauss_legendre(m);
  double h = (hi - lo) / panels;
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * h;
    cplx part = 0.0;
    for (int i = 0; i < m; ++i) part += r.weights[i] * cplx(f(mid + 0.5 * h * r.nodes[i]));
    total += 0.5 * h * part;
  }
  return total;
}

}  // namespace sbt
