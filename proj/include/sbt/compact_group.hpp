#pragma once

#include <span>
#include <vector>

#include "sbt/core.hpp"

namespace sbt {

// Rank one, complex-group multiplicity: J_1(H) = (2 sinh H)^2, W = {+1, -1},
// pi(lambda) = lambda.
struct RankOneModel {
  double rho = 1.0;
  double lattice_step = 1.0;
  double t = 0.25;

  // Throws ConstraintError unless every field is positive.
  static RankOneModel make(double rho, double lattice_step, double t);
  // {0, step, ..., (count-1) step}
  std::vector<double> lattice(int count) const;
};

// sin(lambda H) / (lambda sinh H), continued analytically in lambda; 1 at H = 0.
cplx spherical_psi(cplx lambda, double H);
// psi_{-i mu}(H) = sinh(mu H) / (mu sinh H), evaluated on the real branch.
double spherical_psi_imag(double mu, double H);

double jacobian_J1(double H);

// C_t e^{-t rho^2} (H / (2 sinh H)) e^{-H^2/4t}, C_t = 1 / (4t sqrt(4 pi t)).
double dual_heat_gamma(const RankOneModel& model, double H);

struct DefiningRelationResult {
  double calibration = 0.0;    // ratio at the first lambda
  double max_rel_spread = 0.0;  // max |ratio / calibration - 1|
  std::vector<double> ratios;  // int gamma_{2t} psi_lambda J_1 dH / e^{-2t(lambda^2 + rho^2)}
};
DefiningRelationResult verify_defining_relation(const RankOneModel& model, std::span<const double> lambdas);

// a(lambda) = int h(H) psi_{-i(lambda+rho)}(H) J_1(H) dH for an even h.
cplx multiplier_a(const SymbolSpec& h, const RankOneModel& model, double lambda);
cplx multiplier_a(const RadialProfile& h, const RankOneModel& model, double lambda);
// Closed form for h = e^{-b H^2}.
double multiplier_a_gauss(double b, const RankOneModel& model, double lambda);

// L(lambda) = |int g0(H) H e^{-(H - 4t(lambda+rho))^2 / 8t} dH| / |lambda + rho|,
// one entry per grid point (k = grid index).
SequenceReport criterion_55(const SymbolSpec& g0, const RankOneModel& model, std::span<const double> lambdas);
SequenceReport criterion_55(const RadialProfile& g0, const RankOneModel& model, std::span<const double> lambdas);

}  // namespace sbt
