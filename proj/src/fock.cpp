#include "sbt/fock.hpp"

#include <boost/multiprecision/float128.hpp>
#include <algorithm>
#include <cmath>

#include "radial_flow.hpp"
#include "sbt/parallel.hpp"
#include "sbt/specfun.hpp"

namespace sbt {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kLn2 = 0.6931471805599453;

void check_dimension(int n) {
  if (n < 1) throw ConstraintError("n must be at least 1");
}

}  // namespace

MultiIndexSet MultiIndexSet::make(int n, int max_degree) {
  check_dimension(n);
  if (max_degree < 0) throw RangeError("max_degree must be nonnegative");
  MultiIndexSet s;
  s.n = n;
  s.max_degree = max_degree;
  for (int deg = 0; deg <= max_degree; ++deg) {
    // Odometer over compositions of deg, leading entry counting down.
    MultiIndex a(n, 0);
    a[0] = deg;
    while (true) {
      s.indices.push_back(a);
      int j = n - 2;
      while (j >= 0 && a[j] == 0) --j;
      if (j < 0) break;
      int tail = a[n - 1];
      a[n - 1] = 0;
      a[j] -= 1;
      a[j + 1] = tail + 1;
    }
  }
  return s;
}

int degree(std::span<const int> alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

ScaledValue zeta(std::span<const int> alpha, std::span<const cplx> z) {
  if (alpha.size() != z.size()) throw ShapeError("zeta: alpha and z must have the same length");
  double log_norm = 0.0;
  ScaledValue v(1.0);
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] < 0) throw RangeError("zeta: negative multi-index entry");
    ScaledValue zj(z[j]);
    for (int p = 0; p < alpha[j]; ++p) v *= zj;
    log_norm += 0.5 * std::lgamma(alpha[j] + 1.0) + 0.5 * alpha[j] * kLn2;
  }
  return v * ScaledValue::exp(-log_norm);
}

namespace {

// Gaussian rate of g along each coordinate of R^{2n} = (Re z, Im z).
std::vector<double> coordinate_rates(const SymbolSpec& g, int n) {
  std::vector<double> rates(2 * n, g.decay.gaussian_rate);
  if (g.kind == SymbolKind::GaussY) {
    for (int j = 0; j < n; ++j) rates[j] = 0.0;
  } else if (g.kind == SymbolKind::GaussYV) {
    for (int j = 0; j < n; ++j) {
      rates[j] = g.alpha.real();
      rates[n + j] = g.beta.real();
    }
  }
  return rates;
}

cplx fock_symbol(const SymbolSpec& g, std::span<const double> point, int n) {
  if (g.kind == SymbolKind::GaussY) return g.value(point.subspan(n));
  return g.value(point);
}

// (2 pi)^{-n} g zeta_alpha conj(zeta_beta) e^{-|z|^2/2} with the norms hoisted.
struct EntryIntegrand {
  const SymbolSpec& g;
  std::span<const int> alpha, beta;
  int n;
  double norm;

  EntryIntegrand(const SymbolSpec& g_, std::span<const int> a, std::span<const int> b, int n_)
      : g(g_), alpha(a), beta(b), n(n_) {
    double log_norm = -n * std::log(2 * M_PI);
    for (int j = 0; j < n; ++j)
      log_norm -= 0.5 * (std::lgamma(a[j] + 1.0) + std::lgamma(b[j] + 1.0) + (a[j] + b[j]) * kLn2);
    norm = std::exp(log_norm);
  }

  cplx operator()(std::span<const double> p) const {
    cplx prod = norm;
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx z(p[j], p[n + j]);
      r2 += std::norm(z);
      for (int q = 0; q < alpha[j]; ++q) prod *= z;
      for (int q = 0; q < beta[j]; ++q) prod *= std::conj(z);
    }
    if (prod == 0.0) return 0.0;
    return prod * std::exp(-r2 / 2) * fock_symbol(g, p, n);
  }
};

// Tensor Gauss-Hermite sum returning the integral and the integral of |f|.
template <class F>
cplx hermite_sum(const F& f, int m, std::span<const double> scale, double& mag) {
  const Rule1D& r = gauss_hermite(m);
  const std::size_t d = scale.size();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> point(d);
  cplx total = 0.0;
  mag = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      point[j] = scale[j] * r.nodes[idx[j]];
      w *= scale[j] * r.scaled[idx[j]];
    }
    cplx v = w * f(std::span<const double>(point));
    total += v;
    mag += std::abs(v);
    std::size_t j = d;
    while (j-- > 0) {
      if (++idx[j] < static_cast<std::size_t>(m)) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

// Radial symbols with compact support, in polar coordinates of each complex
// coordinate (and a second polar angle splitting |z1|, |z2| when n = 2).
cplx entry_polar(const SymbolSpec& g, std::span<const int> alpha, std::span<const int> beta, int n,
                 double tol) {
  const Support sup = *g.decay.support;
  const int deg = degree(alpha) + degree(beta);
  const int n_theta = 2 * deg + 8;
  const EntryIntegrand integrand(g, alpha, beta, n);
  auto estimate = [&](int panels) {
    const Rule1D& leg = gauss_legendre(20);
    std::vector<double> p(2 * n);
    double rh = (sup.hi - sup.lo) / panels;
    cplx total = 0.0;
    for (int pr = 0; pr < panels; ++pr)
      for (int i = 0; i < leg.m; ++i) {
        double R = sup.lo + rh * (pr + 0.5 + 0.5 * leg.nodes[i]);
        double wR = 0.5 * rh * leg.weights[i];
        if (n == 1) {
          for (int a = 0; a < n_theta; ++a) {
            double th = 2 * M_PI * a / n_theta;
            p[0] = R * std::cos(th);
            p[1] = R * std::sin(th);
            total += wR * R * (2 * M_PI / n_theta) * integrand(p);
          }
          continue;
        }
        for (int f = 0; f < leg.m; ++f) {
          double phi = M_PI / 4 * (1 + leg.nodes[f]);
          double wphi = M_PI / 4 * leg.weights[f];
          double r1 = R * std::cos(phi), r2 = R * std::sin(phi);
          double jac = wR * wphi * R * R * R * std::cos(phi) * std::sin(phi);
          for (int a = 0; a < n_theta; ++a)
            for (int b = 0; b < n_theta; ++b) {
              double t1 = 2 * M_PI * a / n_theta, t2 = 2 * M_PI * b / n_theta;
              p[0] = r1 * std::cos(t1);
              p[1] = r2 * std::cos(t2);
              p[2] = r1 * std::sin(t1);
              p[3] = r2 * std::sin(t2);
              double wt = std::pow(2 * M_PI / n_theta, 2);
              total += jac * wt * integrand(p);
            }
        }
      }
    return total;
  };
  cplx prev = estimate(2);
  for (int panels = 4; panels <= 64; panels *= 2) {
    cplx cur = estimate(panels);
    if (std::abs(cur - prev) <= tol * std::max(std::abs(cur), 1.0)) return cur;
    prev = cur;
  }
  throw AccuracyError("toeplitz_entry (polar) did not converge", std::abs(prev), std::abs(prev));
}

}  // namespace

cplx toeplitz_entry(const SymbolSpec& g, std::span<const int> alpha, std::span<const int> beta, int n,
                    double tol) {
  check_dimension(n);
  if (n > 2) throw RangeError("toeplitz_entry supports n <= 2");
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
    throw ShapeError("toeplitz_entry: multi-indices must have length n");
  if (g.kind == SymbolKind::GroupGauss) throw ConstraintError("group-gauss is not a Fock-space symbol");
  if (g.decay.support && g.is_radial()) return entry_polar(g, alpha, beta, n, tol);

  const std::size_t d = 2 * n;
  std::vector<double> rates = coordinate_rates(g, n), scale(d);
  for (std::size_t j = 0; j < d; ++j) {
    double net = 0.5 - rates[j];
    if (!(net > 0.0))
      throw DivergenceError("toeplitz_entry: symbol growth must stay below the e^{|z|^2/2} weight");
    scale[j] = 1.0 / std::sqrt(net);
  }
  const EntryIntegrand f(g, alpha, beta, n);
  const int deg = degree(alpha) + degree(beta) + g.decay.poly_degree;
  const int m_max = n == 1 ? 256 : 32;
  int m = std::max(8, deg / 2 + 4);
  double mag = 0.0;
  cplx prev = hermite_sum(f, m, scale, mag);
  while (2 * m <= m_max) {
    m *= 2;
    cplx cur = hermite_sum(f, m, scale, mag);
    if (std::abs(cur - prev) <= tol * std::max(std::abs(cur), mag)) return cur;
    prev = cur;
  }
  throw AccuracyError("toeplitz_entry did not converge", std::abs(prev), std::abs(prev));
}

ToeplitzMatrix toeplitz_matrix(const SymbolSpec& g, int n, int max_degree) {
  if (max_degree > kMaxMatrixDegree) throw RangeError("toeplitz_matrix: degree is capped at 6");
  ToeplitzMatrix m{MultiIndexSet::make(n, max_degree), {}};
  const std::size_t N = m.index_set.size();
  m.entries = Eigen::MatrixXcd::Zero(N, N);
  parallel_for(N * N, [&](std::size_t idx) {
    std::size_t i = idx / N, j = idx % N;
    m.entries(i, j) = toeplitz_entry(g, m.index_set.indices[j], m.index_set.indices[i], n);
  });
  return m;
}

namespace {

void check_fock_radial_budget(const DecayBudget& b) {
  if (!b.support && !(b.gaussian_rate < 0.5))
    throw DivergenceError("Fock radial sequence diverges: symbol growth rate must be below 1/2");
}

// log of k!(n-1)!/(k+n-1)!
double log_dim_ratio(int k, int n) { return std::lgamma(k + 1.0) + std::lgamma(double(n)) - std::lgamma(double(k + n)); }

cplx direct_entry(const RadialProfile& g, int n, int k) {
  DecayBudget b = g.budget;
  b.gaussian_rate -= 0.5;
  b.poly_degree += 2 * k;
  const double lc = -k * kLn2 - std::lgamma(k + 1.0);
  auto f = [&](double r) -> ScaledValue {
    cplx gv = g.f(r);
    if (gv == 0.0) return ScaledValue();
    if (!(r > 0.0)) return k == 0 ? ScaledValue(gv) : ScaledValue();
    return ScaledValue(gv) * ScaledValue::exp(2.0 * k * std::log(r) - r * r / 2 + lc);
  };
  ScaledValue I = radial_integral_scaled(f, b, n);
  // R_k(one) = (n-1)! 2^{n-1} before normalization.
  I *= ScaledValue::exp(log_dim_ratio(k, n) - std::lgamma(double(n)) - (n - 1) * kLn2);
  return I.value();
}

}  // namespace

SequenceReport radial_seq_direct(const RadialProfile& g, int n, int kmax) {
  check_dimension(n);
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  check_fock_radial_budget(g.budget);
  std::vector<SequenceEntry> entries(kmax + 1);
  parallel_for(kmax + 1, [&](std::size_t i) {
    int k = static_cast<int>(i);
    entries[i] = {k, direct_entry(g, n, k)};
  });
  return make_report(std::move(entries));
}

SequenceReport radial_seq_direct(const SymbolSpec& g, int n, int kmax) {
  return radial_seq_direct(to_profile(g), n, kmax);
}

SequenceReport radial_seq_heatflow(const SymbolSpec& g, int n, int kmax) {
  check_dimension(n);
  if (n > 2) throw RangeError("radial_seq_heatflow supports n <= 2");
  if (kmax < 0) throw RangeError("kmax must be nonnegative");
  if (!g.is_radial()) throw ConstraintError(std::string(g.name()) + " is not a radial symbol");
  check_fock_radial_budget(g.decay);

  const int d = 2 * n;
  const Quad s = Quad(1) / 4;
  const Quad log_eps = 90;
  // The outer integrand is h(rho) L_k^{n-1}(2 rho^2) e^{-rho^2} rho^{2n-1};
  // h decays like e^{rate_h rho^2}.
  double base2 = 2.0 * kmax + n + 20.0 * std::sqrt(kmax + n) + 100.0 + g.decay.poly_degree;
  double s_max;
  if (g.decay.support) {
    s_max = std::max(g.decay.support->hi + 10.0, std::sqrt(base2));
  } else {
    double rate = g.decay.gaussian_rate;
    double rate_h = rate / (1.0 - rate);
    s_max = std::sqrt(base2 / (1.0 - rate_h));
  }
  const double width = std::min(0.2, 1.0 / std::sqrt(2.0 * kmax + n));
  const int panels = static_cast<int>(std::ceil(s_max / width));
  const Quad step = Quad(s_max) / panels;
  const Quad a = n - 1;

  std::vector<std::vector<Quad>> partial(panels, std::vector<Quad>(kmax + 1, Quad(0)));
  parallel_for(panels, [&](std::size_t p) {
    using Rule = boost::math::quadrature::gauss<Quad, 20>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    Quad mid = step * (Quad(p) + Quad(0.5)), half = step / 2;
    auto add = [&](Quad rho, Quad weight) {
      Quad h = detail::radial_symbol_flow<Quad>(g, d, s, rho, log_eps);
      Quad base = weight * half * h * exp(-rho * rho) * pow(rho, 2 * n - 1);
      Quad X = 2 * rho * rho;
      Quad prev = 0, cur = 1;
      auto& acc = partial[p];
      acc[0] += base;
      for (int j = 0; j < kmax; ++j) {
        Quad next = ((2 * j + 1 + a - X) * cur - (j + a) * prev) / (j + 1);
        prev = cur;
        cur = next;
        acc[j + 1] += base * cur;
      }
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        add(mid, w[i]);
      } else {
        add(mid - half * x[i], w[i]);
        add(mid + half * x[i], w[i]);
      }
    }
  });
  std::vector<Quad> I(kmax + 1, Quad(0));
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k <= kmax; ++k) I[k] += partial[p][k];

  const cplx r0 = direct_entry(to_profile(g), n, 0);
  std::vector<SequenceEntry> entries(kmax + 1);
  Quad ratio = 1;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) ratio *= Quad(k) / Quad(k + n - 1);
    Quad rel = ratio * I[k] / I[0];
    if (k % 2) rel = -rel;
    entries[k] = {k, static_cast<double>(rel) * r0};
  }
  return make_report(std::move(entries));
}

Cor23Result cor23_check(const SymbolSpec& g, int n, int kmax) {
  check_dimension(n);
  Cor23Result out;
  const int samples = 121;
  double head = 0.0, tail = 0.0;
  bool finite = true;
  std::vector<double> point(2 * n, 0.0);
  for (int i = 0; i < samples; ++i) {
    double r = 1e-2 * std::pow(3000.0, double(i) / (samples - 1));
    point[0] = r;
    double v = std::abs(heat_flow(g, 0.25, point)) * r;
    if (!std::isfinite(v)) finite = false;
    (r <= 10.0 ? head : tail) = std::max(r <= 10.0 ? head : tail, v);
  }
  out.constant = std::max(head, tail);
  out.premise_holds = finite && tail <= 1.01 * head;
  out.report = radial_seq_direct(g, n, kmax);
  out.consistent = !out.premise_holds || out.report.verdict == Verdict::Bounded;
  return out;
}

double laguerre_l1_integral(int k, double beta, int n, int panel_refine) {
  check_dimension(n);
  if (k < 0) throw RangeError("k must be nonnegative");
  // |L| ~ r^{n-1} near 0, so the integrand is r^{n - beta}.
  if (!(beta < n + 1)) throw RangeError("laguerre_l1_exponent: beta must be below n + 1");
  const double kk = std::max(k, 1);
  const double r_max = std::sqrt(4.0 * k + 2 * n + 40.0 * std::cbrt(kk) + 50.0);
  const double width = M_PI / std::sqrt(4.0 * kk) / panel_refine;
  const int panels = static_cast<int>(std::ceil(r_max / width));
  const Rule1D& leg = gauss_legendre(16);
  const double h = r_max / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double part = 0.0;
    for (int i = 0; i < leg.m; ++i) {
      double r = h * (p + 0.5 + 0.5 * leg.nodes[i]);
      part += leg.weights[i] * std::abs(normalized_laguerre(k, n, r)) * std::pow(r, 1.0 - beta);
    }
    total += 0.5 * h * part;
  }
  return total;
}

ExponentFit laguerre_l1_exponent(double beta, int n, std::span<const int> ks) {
  if (ks.size() < 2) throw InsufficientDataError("laguerre_l1_exponent needs at least two k values");
  ExponentFit fit;
  fit.ks.assign(ks.begin(), ks.end());
  fit.integrals.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    if (ks[i] < 1) throw RangeError("laguerre_l1_exponent: k values must be positive");
    double coarse = laguerre_l1_integral(ks[i], beta, n, 1);
    double fine = laguerre_l1_integral(ks[i], beta, n, 2);
    if (std::abs(fine - coarse) > 1e-3 * std::abs(fine))
      throw AccuracyError("laguerre_l1_exponent: paneling not resolved", coarse, fine);
    fit.integrals[i] = fine;
  });
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mx += std::log(double(ks[i]));
    my += std::log(fit.integrals[i]);
  }
  mx /= ks.size();
  my /= ks.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double dx = std::log(double(ks[i])) - mx;
    sxy += dx * (std::log(fit.integrals[i]) - my);
    sxx += dx * dx;
  }
  fit.exponent = sxy / sxx;
  return fit;
}

namespace {

template <class G>
cplx tilted_integral(G&& g0, double t, std::span<const double> xi) {
  const std::size_t n = xi.size();
  if (n == 0 || n > 4) throw ShapeError("heat_bergman_multiplier supports dimensions 1..4");
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;
  std::vector<double> center(n), scale(n, std::sqrt(2 * t));
  for (std::size_t j = 0; j < n; ++j) center[j] = -2 * t * xi[j];
  auto f = [&](std::span<const double> y) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += y[j] * xi[j];
    return g0(y) * std::exp(-2 * t * xi2 - 2 * dot) * heat_q(t / 2, y);
  };
  const int m_max = n <= 2 ? 256 : 32;
  int m = 16;
  cplx prev = integrate_nd(f, hermite_tensor(m, n), center, scale);
  while (2 * m <= m_max) {
    m *= 2;
    cplx cur = integrate_nd(f, hermite_tensor(m, n), center, scale);
    if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw AccuracyError("heat_bergman_multiplier: tilted integral did not converge", std::abs(prev),
                      std::abs(prev));
}

void check_multiplier_guard(const DecayBudget& b, double t) {
  if (!(t > 0.0)) throw RangeError("heat_bergman_multiplier: t must be positive");
  if (!b.support && !(b.gaussian_rate < 1.0 / (2 * t)))
    throw DivergenceError("heat_bergman_multiplier: symbol growth rate must be below 1/(2t)");
}

MultiplierRoutes finish(cplx tilted, cplx conv) {
  return {tilted, conv, std::abs(tilted - conv) / std::abs(conv)};
}

}  // namespace

MultiplierRoutes heat_bergman_multiplier(const SymbolSpec& g0, double t, std::span<const double> xi) {
  check_multiplier_guard(g0.decay, t);
  cplx tilted = tilted_integral([&](std::span<const double> y) { return g0.value(y); }, t, xi);
  std::vector<double> at(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) at[j] = -2 * t * xi[j];
  return finish(tilted, heat_flow(g0, t / 2, at));
}

MultiplierRoutes heat_bergman_multiplier(const RadialProfile& g0, double t, std::span<const double> xi) {
  check_multiplier_guard(g0.budget, t);
  cplx tilted = tilted_integral(
      [&](std::span<const double> y) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        return g0.f(std::sqrt(r2));
      },
      t, xi);
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;
  cplx conv = heat_flow_radial(g0, static_cast<int>(xi.size()), t / 2, 2 * t * std::sqrt(xi2));
  return finish(tilted, conv);
}

}  // namespace sbt
