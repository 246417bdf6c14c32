#include "sbt/compact_group.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sbt/parallel.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/scaled_value.hpp"
#include "scaled_profile.hpp"

namespace sbt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-13;

// H / sinh H
double h_over_sinh(double H) {
  if (std::abs(H) < 1e-4) {
    double h2 = H * H;
    return 1.0 - h2 / 6.0 + 7.0 * h2 * h2 / 360.0;
  }
  return H / std::sinh(H);
}

// sin(z) / z
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

double heat_constant(double s) { return 1.0 / (4.0 * s * std::sqrt(4.0 * kPi * s)); }

// dual_heat_gamma continued to complex H
cplx gamma_c(const RankOneModel& model, cplx H) {
  const double t = model.t;
  return heat_constant(t) * std::exp(-t * model.rho * model.rho) * 0.5 * (H / std::sinh(H)) *
         std::exp(-H * H / (4 * t));
}

std::function<ScaledValue(double)> lift(const RadialProfile& h) {
  return [f = h.f](double r) { return ScaledValue(f(r)); };
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConstraintError("lambda must be finite and >= 0");
}

cplx multiplier_impl(const std::function<ScaledValue(double)>& h, const DecayBudget& budget,
                     const RankOneModel& model, double lambda) {
  check_lambda(lambda);
  const double mu = lambda + model.rho;
  if (budget.support) {
    // (8/mu) int_lo^hi h sinh(mu H) sinh H dH
    const auto [lo, hi] = *budget.support;
    auto f = [&](double H) { return (h(H) * ScaledValue(std::sinh(mu * H) * std::sinh(H))).value(); };
    cplx prev = composite_legendre(f, lo, hi, 8, 32);
    for (int panels = 16; panels <= 1024; panels *= 2) {
      cplx cur = composite_legendre(f, lo, hi, panels, 32);
      if (std::abs(cur - prev) <= kQuadTol * std::abs(cur)) return 8.0 / mu * cur;
      prev = cur;
    }
    throw AccuracyError("multiplier_a: support quadrature did not converge", std::abs(prev), std::abs(prev));
  }
  const double rate = budget.gaussian_rate;
  if (!(rate < 0.0))
    throw DivergenceError("multiplier_a: h must decay like a Gaussian; rate " + std::to_string(rate));
  // h even, so int h sinh(mu H) sinh H = int h e^{mu H} sinh H. The e^{(mu+1)H}
  // part peaks at (mu+1)/(2|rate|); pull its height out of the integrand.
  const double A = -rate;
  const double shift = (mu + 1) * (mu + 1) / (4 * A);
  auto f = [&](double H) -> cplx {
    ScaledValue hv = h(std::abs(H));
    if (hv.is_zero()) return 0.0;
    double e = (mu + 1) * H - shift;
    return (hv * ScaledValue::exp(e) * ScaledValue(0.5 * -std::expm1(-2 * H))).value();
  };
  cplx I = integrate_line(f, mu / (2 * A), 1 / std::sqrt(A), kQuadTol, 32);
  ScaledValue out = ScaledValue(4.0 / mu * I) * ScaledValue::exp(shift);
  cplx v = out.value();
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw RangeError("multiplier_a overflows double at lambda = " + std::to_string(lambda));
  return v;
}

SequenceReport criterion_impl(const std::function<cplx(double)>& g0, const DecayBudget& budget,
                              const RankOneModel& model, std::span<const double> lambdas) {
  const double t = model.t;
  const double inv8t = 1.0 / (8 * t);
  if (!budget.support && !(budget.gaussian_rate < inv8t))
    throw DivergenceError("criterion_55: g0 grows like e^{" + std::to_string(budget.gaussian_rate) +
                          " H^2}, needs rate < 1/(8t)");
  for (double l : lambdas) check_lambda(l);
  std::vector<SequenceEntry> entries(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double mu = lambdas[i] + model.rho;
    const double m = 4 * t * mu;
    auto f = [&](double H) -> cplx {
      double d = H - m;
      return g0(std::abs(H)) * H * std::exp(-d * d * inv8t);
    };
    cplx I;
    if (budget.support) {
      const auto [lo, hi] = *budget.support;
      I = composite_legendre(f, lo, hi, 64, 32) + composite_legendre(f, -hi, -lo, 64, 32);
    } else {
      const double A = inv8t - budget.gaussian_rate;
      I = integrate_line(f, m * inv8t / A, 1 / std::sqrt(A), kQuadTol, 32);
    }
    entries[i] = {static_cast<int>(i), cplx(std::abs(I) / mu)};
  });
  return make_report(std::move(entries));
}

}  // namespace

RankOneModel RankOneModel::make(double rho, double lattice_step, double t) {
  if (!(rho > 0) || !(lattice_step > 0) || !(t > 0))
    throw ConstraintError("RankOneModel: rho, lattice_step and t must be positive");
  return RankOneModel{rho, lattice_step, t};
}

std::vector<double> RankOneModel::lattice(int count) const {
  std::vector<double> out(std::max(count, 0));
  for (int k = 0; k < count; ++k) out[k] = k * lattice_step;
  return out;
}

cplx spherical_psi(cplx lambda, double H) {
  // sin(lambda H)/(lambda sinh H) = sinc(lambda H) * H / sinh H; lambda = 0 is the sinc limit.
  return sinc(lambda * H) * h_over_sinh(H);
}

double spherical_psi_imag(double mu, double H) {
  double x = mu * H;
  double shc = std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 + x * x * x * x / 120.0 : std::sinh(x) / x;
  return shc * h_over_sinh(H);
}

double jacobian_J1(double H) {
  double s = 2 * std::sinh(H);
  return s * s;
}

double dual_heat_gamma(const RankOneModel& model, double H) {
  const double t = model.t;
  return heat_constant(t) * std::exp(-t * model.rho * model.rho) * 0.5 * h_over_sinh(H) *
         std::exp(-H * H / (4 * t));
}

DefiningRelationResult verify_defining_relation(const RankOneModel& model, std::span<const double> lambdas) {
  if (lambdas.empty()) throw InsufficientDataError("defining relation needs at least one lambda");
  RankOneModel m2 = model;
  m2.t = 2 * model.t;
  DefiningRelationResult out;
  out.ratios.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double l = lambdas[i];
    double I;
    if (l < 0.5) {
      auto f = [&](double H) -> cplx { return dual_heat_gamma(m2, H) * spherical_psi(l, H) * jacobian_J1(H); };
      I = integrate_line(f, 0.0, std::sqrt(8 * model.t), kQuadTol, 32).real();
    } else {
      // On the real line the integral is e^{-2t lambda^2} out of O(1) oscillating
      // terms. psi_lambda = Im(e^{i lambda H}) / (lambda sinh H) there, and the
      // product with e^{i lambda H} is entire, so move the contour through its
      // saddle at H = 4it lambda, where it no longer oscillates.
      const double c = 4 * model.t * l;
      auto f = [&](double x) -> cplx {
        cplx H(x, c);
        cplx sh = std::sinh(H);
        return gamma_c(m2, H) * std::exp(cplx(0, l) * H) / (l * sh) * (4.0 * sh * sh);
      };
      I = integrate_line(f, 0.0, std::sqrt(8 * model.t), kQuadTol, 32).imag();
    }
    out.ratios[i] = I * std::exp(2 * model.t * (l * l + model.rho * model.rho));
  });
  out.calibration = out.ratios[0];
  for (double r : out.ratios) out.max_rel_spread = std::max(out.max_rel_spread, std::abs(r / out.calibration - 1));
  return out;
}

cplx multiplier_a(const SymbolSpec& h, const RankOneModel& model, double lambda) {
  return multiplier_impl(detail::scaled_profile(h, 0.0), h.decay, model, lambda);
}

cplx multiplier_a(const RadialProfile& h, const RankOneModel& model, double lambda) {
  return multiplier_impl(lift(h), h.budget, model, lambda);
}

double multiplier_a_gauss(double b, const RankOneModel& model, double lambda) {
  if (!(b > 0)) throw ConstraintError("multiplier_a_gauss: b must be positive");
  check_lambda(lambda);
  const double mu = lambda + model.rho;
  // (2/mu) sqrt(pi/b) (e^{(mu+1)^2/4b} - e^{(mu-1)^2/4b})
  const double hi = (mu + 1) * (mu + 1) / (4 * b);
  return 2.0 / mu * std::sqrt(kPi / b) * std::exp(hi) * -std::expm1(-mu / b);
}

SequenceReport criterion_55(const SymbolSpec& g0, const RankOneModel& model, std::span<const double> lambdas) {
  if (!g0.is_radial())
    throw ConstraintError(std::string(g0.name()) + " is not a function of H");
  return criterion_impl([g0](double H) { return cplx(g0.radial_value(H)); }, g0.decay, model, lambdas);
}

SequenceReport criterion_55(const RadialProfile& g0, const RankOneModel& model, std::span<const double> lambdas) {
  return criterion_impl(g0.f, g0.budget, model, lambdas);
}

}  // namespace sbt
