#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "sbt/core.hpp"
#include "sbt/scaled_value.hpp"

namespace sbt::detail {

// Radial profile of a built-in symbol with the Gaussian factor kept in the
// exponent, so that g(r) e^{c r^2} does not underflow before it is negligible.
// `shift` is added to the Gaussian coefficient.
inline std::function<ScaledValue(double)> scaled_profile(const SymbolSpec& g, double shift) {
  double coef = 0.0;
  int p = 0;
  switch (g.kind) {
    case SymbolKind::One: break;
    case SymbolKind::GaussH: coef = -g.c; break;
    case SymbolKind::GaussRadial: coef = -g.a / 2; break;
    case SymbolKind::PolyGaussRadial: coef = -g.a / 2, p = g.p; break;
    case SymbolKind::GroupGauss: coef = -g.b; break;
    case SymbolKind::Annulus:
      return [g, shift](double r) {
        return g.radial_value(r) == 0.0 ? ScaledValue() : ScaledValue::exp(shift * r * r);
      };
    default: throw ConstraintError(std::string(g.name()) + " is not a radial symbol");
  }
  coef += shift;
  return [coef, p](double r) {
    ScaledValue v = ScaledValue::exp(coef * r * r);
    if (p > 0) v *= ScaledValue::exp(p * std::log(r));
    return v;
  };
}

}  // namespace sbt::detail
