#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbt/errors.hpp"

namespace sbt {

using cplx = std::complex<double>;

struct SpaceParams {
  int n = 1;
  double t = 0.25;

  // Throws ConstraintError unless n >= 1 and t > 0.
  static SpaceParams make(int n, double t);
};

struct Support {
  double lo = 0.0;
  double hi = 0.0;
};

// |g(p)| <= constant * (1+|p|)^poly_degree * e^{gaussian_rate |p|^2},
// and g vanishes for |p| outside `support` when one is given.
struct DecayBudget {
  double gaussian_rate = 0.0;
  int poly_degree = 0;
  double constant = 1.0;
  std::optional<Support> support;

  double bound(double r) const;
  // log of bound(r); avoids overflow for large r.
  double log_bound(double r) const;
};

enum class SymbolKind { One, GaussRadial, PolyGaussRadial, Annulus, GaussYV, GaussY, GaussH, GroupGauss };

struct SymbolSpec {
  SymbolKind kind = SymbolKind::One;
  double a = 0.0;  // GaussRadial, PolyGaussRadial, GaussY
  int p = 0;       // PolyGaussRadial
  double r0 = 0.0, r1 = 0.0;
  cplx alpha{0.0, 0.0}, beta{0.0, 0.0};
  double c = 0.0;  // GaussH
  double b = 0.0;  // GroupGauss
  DecayBudget decay;

  static SymbolSpec one();
  static SymbolSpec gauss_radial(double a);
  static SymbolSpec poly_gauss_radial(int p, double a);
  static SymbolSpec annulus(double r0, double r1);
  static SymbolSpec gauss_yv(cplx alpha, cplx beta);
  static SymbolSpec gauss_y(double a);
  static SymbolSpec gauss_h(double c);
  static SymbolSpec group_gauss(double b);

  // Radial families depend on |point| only. GaussYV splits the point into
  // halves (y, v); GaussY and GroupGauss read the whole point as y resp. H.
  bool is_radial() const;
  bool is_real() const;
  cplx value(std::span<const double> point) const;
  // Profile of a radial family at radius r.
  double radial_value(double r) const;
  std::string render() const;
  std::string_view name() const;
};

SymbolSpec parse_symbol(std::string_view text);
std::string render_symbol(const SymbolSpec& s);
// Complex literal `re+imi`, `re-imi` or plain `re`.
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);
std::string format_double(double x);

// Caller-supplied radial symbol.
struct RadialProfile {
  std::function<cplx(double)> f;
  DecayBudget budget;
};
RadialProfile to_profile(const SymbolSpec& s);

enum class Verdict { Bounded, Unbounded, Inconclusive };
std::string_view to_string(Verdict v);

struct SequenceEntry {
  int k = 0;
  cplx value;
};

struct VerdictFit {
  Verdict verdict = Verdict::Inconclusive;
  double ratio = 0.0;
  double power = 0.0;
};

constexpr double kDefaultDelta = 0.02;

// Fits |v_k| ~ C k^p rho^k over the last third of the entries. This is a
// numerical heuristic, not a proof of boundedness.
VerdictFit classify_verdict(std::span<const SequenceEntry> entries, double delta = kDefaultDelta);

struct SequenceReport {
  std::vector<SequenceEntry> entries;
  double sup_abs = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double tail_ratio = 0.0;
  double tail_power = 0.0;
};

SequenceReport make_report(std::vector<SequenceEntry> entries, double delta = kDefaultDelta);

}  // namespace sbt
