#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sbt/core.hpp"

namespace sbt {

// 4^n (sinh 4t)^{-n/2} e^{tanh(2t)|x|^2 - coth(2t)|y|^2}
double weight_U(const SpaceParams& params, std::span<const double> x, std::span<const double> y);

// g * q_s on R^{2n} for s in (0, sinh(4t)/2); errors outside that interval.
cplx symbol_flow(const SymbolSpec& g, const SpaceParams& params, double s, std::span<const double> point);

struct BerezinRoutes {
  cplx quadrature;  // <T_g k_z, k_z> over the U_t-weighted plane
  cplx heatflow;    // (g * q_{sinh(4t)/4})(z)
  double kappa = 0.0;  // int |K_t(w,0)|^2 U_t dw / K_t(0,0), measured at g = one
};
// n = 1; g is a function on R^2 = C.
BerezinRoutes berezin(const SymbolSpec& g, const SpaceParams& params, cplx z);

// sigma_t(x, xi) = (g * q_{sinh(4t)/8})(cosh(2t) x, -sinh(2t) xi)
cplx weyl_symbol_map(const SymbolSpec& g, const SpaceParams& params, std::span<const double> x,
                     std::span<const double> xi);

struct RadialityResult {
  bool is_radial = false;
  double max_rel_dev = 0.0;
};
// Relative standard deviation of fn over `samples` directions on each sphere.
// Directions are equispaced when dim = 2, Halton points mapped to the sphere otherwise.
RadialityResult radiality_check(const std::function<cplx(std::span<const double>)>& fn, int dim,
                                std::span<const double> radii, int samples, double tol);

// The profile e^{-|y|^2/(tanh 2t + alpha)} e^{-(coth 2t - beta)|v|^2} on R^{2n}.
std::function<cplx(std::span<const double>)> remark38_profile(cplx alpha, cplx beta, double t);

struct Example36Result {
  cplx beta;
  cplx lambda;
  cplx ratio;  // (1 + lambda) / (1 - lambda)
  Verdict verdict = Verdict::Inconclusive;
  SequenceReport sequence;  // normalized at k = 0
};
// For g = e^{alpha|y|^2 + beta|v|^2} with alpha coth 2t - beta tanh 2t = alpha beta.
Example36Result example36(cplx alpha, double t, int n = 1, int kmax = 20);
// The same sequence through (k!(n-1)!/(k+n-1)!) int e^{lambda|z|^2} phi_k(2z) dz,
// with the (-1)^k of the heat-flow route removed. Loses accuracy to
// cancellation when |ratio| is small; used as a cross-check.
std::vector<cplx> example36_laguerre_form(cplx lambda, int n, int kmax);

struct HermiteMultiplier {
  SpaceParams params;
  SequenceReport values;  // entry k holds m_t(2k + n)
};
HermiteMultiplier multiplier_from_h(const SymbolSpec& h, const SpaceParams& params, int kmax);
HermiteMultiplier multiplier_from_h(const RadialProfile& h, const SpaceParams& params, int kmax);
// e^{-2(2k+n)t} pi^n (c+1)^k / (c-1)^{k+n}
double gauss_h_multiplier(double c, const SpaceParams& params, int k);

// g(xi, v) = U_t(xi, v)^{-1} int e^{-2 y.xi} h(y, v) dy for radial h on R^{2n}.
cplx g_from_h(const SymbolSpec& h, const SpaceParams& params, std::span<const double> xi,
              std::span<const double> v);
cplx g_from_h_quadrature(const RadialProfile& h, const SpaceParams& params, std::span<const double> xi,
                         std::span<const double> v);
// g_from_h of gauss-h:c is constant * e^{alpha|xi|^2 + beta|v|^2}.
struct GaussSymbol {
  double constant = 1.0;
  SymbolSpec shape;
};
GaussSymbol g_from_gauss_h(double c, const SpaceParams& params);

struct GutzmerResult {
  double lhs = 0.0;
  double rhs = 0.0;
};
// n = 1, F = sum c_k Phi_k, evaluated at z = iy, w = iv.
GutzmerResult gutzmer_hermite_n1(std::span<const std::pair<int, cplx>> coeffs, double y, double v);

}  // namespace sbt
