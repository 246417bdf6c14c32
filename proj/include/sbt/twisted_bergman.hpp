#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sbt/core.hpp"
#include "sbt/scaled_value.hpp"

namespace sbt {

struct TwistedPoint {
  std::vector<cplx> z;  // x + iy
  std::vector<cplx> w;  // u + iv
};

struct CalibrationConstant {
  std::string context;
  double kappa = 0.0;
};

// e^{u.y - v.x} p_{2t}(2y, 2v)
ScaledValue weight_W(const SpaceParams& params, const TwistedPoint& point);

struct Identity37Result {
  CalibrationConstant kappa;  // I_0 / e^{2nt}; 4^{-n} with the heat kernel in use
  double max_rel_err = 0.0;
  std::vector<double> ratios;  // I_k / (kappa C(k+n-1, n-1) e^{(2k+n)2t})
};
// I_k = int p_{2t}(2y,2v) phi_k(2iy,2iv) dy dv against its closed form.
Identity37Result verify_identity_37(const SpaceParams& params, int kmax);

struct Lemma43Result {
  cplx lhs;
  cplx rhs;
  double kappa = 0.0;  // lhs at k = 0, x = u = 0 divided by e^t
};
// n = 1: int e^{i(u y - v x)/2} p_t(x-y, u-v) phi_k(iy, iv) dy dv = kappa e^{(2k+1)t} phi_k(ix, iu).
Lemma43Result verify_lemma_43(const SpaceParams& params, int k, double x, double u);

// e^{-(2k+n)2t} (k!(n-1)!/(k+n-1)!) int g0 p_{2t}(2y,2v) phi_k(2iy,2iv) dy dv,
// divided by its value for g0 = one at k = 0.
SequenceReport diag_seq(const SymbolSpec& g0, const SpaceParams& params, int kmax);
SequenceReport diag_seq(const RadialProfile& g0, const SpaceParams& params, int kmax);

// A symbol on C^2 at n = 1, evaluated at (x, y, u, v) with z = x+iy, w = u+iv.
using TwistedSymbol = std::function<cplx(double x, double y, double u, double v)>;
// g(z, w) = g0(|(y, v)|) for a radial g0.
TwistedSymbol twisted_symbol(const SymbolSpec& g0);

constexpr int kMaxTwistedIndex = 3;

// <T_g phi_{a,b}, phi_{m,nu}> = int g phi_{a,b} conj(phi_{m,nu}) W_t dz dw at n = 1,
// phi_{a,b} = e^{-(2b+1)t} Phi_{a,b}. `rate` bounds the Gaussian growth of g in (y, v).
cplx matrix_entry_twisted(const TwistedSymbol& g, double rate, const SpaceParams& params, int a, int b, int mu,
                          int nu);
cplx matrix_entry_twisted(const SymbolSpec& g0, const SpaceParams& params, int a, int b, int mu, int nu);

// Same entry with both basis functions twisted-translated by (ta, tb).
cplx matrix_entry_translated(const TwistedSymbol& g, double rate, const SpaceParams& params, double ta, double tb,
                             int a, int b, int mu, int nu);

// tau(a,b)F(z,w) = e^{-(i/2)(a w - b z)} F(z - a, w - b), n = 1.
using TwistedFunction = std::function<cplx(cplx z, cplx w)>;
TwistedFunction twisted_translate(double a, double b, TwistedFunction f);

// Largest |<T_g tau phi, tau phi'> - <T_g phi, phi'>| over indices <= max_index,
// relative to the largest |<T_g phi, phi>|.
double invariance_check_48(const TwistedSymbol& g, double rate, const SpaceParams& params, double ta, double tb,
                           int max_index);

struct TwistedCoefficient {
  int alpha = 0;
  int beta = 0;
  cplx c;
};
struct TwistedGutzmer {
  double lhs = 0.0;
  double rhs = 0.0;
};
// n = 1, F = sum c Phi_{alpha,beta}; rhs = sum |c|^2 phi_beta(2iy, 2iv).
TwistedGutzmer gutzmer_twisted_n1(std::span<const TwistedCoefficient> coeffs, double y, double v);

}  // namespace sbt
