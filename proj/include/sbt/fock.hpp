#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sbt/core.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/scaled_value.hpp"

namespace sbt {

using MultiIndex = std::vector<int>;

// All alpha in N^n with |alpha| <= max_degree, ordered by degree and then
// lexicographically with larger leading entries first.
struct MultiIndexSet {
  int n = 1;
  int max_degree = 0;
  std::vector<MultiIndex> indices;

  static MultiIndexSet make(int n, int max_degree);
  std::size_t size() const { return indices.size(); }
};

int degree(std::span<const int> alpha);

// z^alpha / (2^{|alpha|/2} sqrt(alpha!))
ScaledValue zeta(std::span<const int> alpha, std::span<const cplx> z);

// <T_g zeta_alpha, zeta_beta> = (2 pi)^{-n} int g zeta_alpha conj(zeta_beta) e^{-|z|^2/2} dz, n <= 2.
// Points of R^{2n} are laid out as (Re z, Im z); gauss-y reads Im z only.
cplx toeplitz_entry(const SymbolSpec& g, std::span<const int> alpha, std::span<const int> beta, int n,
                    double tol = kDefaultTol);

struct ToeplitzMatrix {
  MultiIndexSet index_set;
  Eigen::MatrixXcd entries;  // entries(i, j) = <T_g zeta_j, zeta_i>
};

constexpr int kMaxMatrixDegree = 6;
ToeplitzMatrix toeplitz_matrix(const SymbolSpec& g, int n, int max_degree);

// R_k for k = 0..kmax, normalized so that R_k(one) = 1.
SequenceReport radial_seq_direct(const SymbolSpec& g, int n, int kmax);
SequenceReport radial_seq_direct(const RadialProfile& g, int n, int kmax);
// R_k through the heat flow g * q_{1/4}, calibrated at k = 0 against the
// direct route. Runs in 128-bit floating point; n <= 2.
SequenceReport radial_seq_heatflow(const SymbolSpec& g, int n, int kmax);

struct Cor23Result {
  bool premise_holds = false;
  double constant = 0.0;    // max of |g * q_{1/4}(r)| r over the sample grid
  bool consistent = false;  // premise fails, or the verdict is Bounded
  SequenceReport report;
};
Cor23Result cor23_check(const SymbolSpec& g, int n, int kmax);

struct ExponentFit {
  double exponent = 0.0;
  std::vector<int> ks;
  std::vector<double> integrals;
};
// Slope of log I_k against log k, I_k = int_0^inf |L_k^{n-1}(r^2)| r^{-beta} r dr
// with the normalized Laguerre function.
ExponentFit laguerre_l1_exponent(double beta, int n, std::span<const int> ks);
double laguerre_l1_integral(int k, double beta, int n, int panel_refine = 1);

struct MultiplierRoutes {
  cplx tilted;       // e^{-2t|xi|^2} int e^{-2 y.xi} g0(y) q_{t/2}(y) dy
  cplx convolution;  // (g0 * q_{t/2})(-2 t xi)
  double discrepancy = 0.0;
};
MultiplierRoutes heat_bergman_multiplier(const SymbolSpec& g0, double t, std::span<const double> xi);
// g0 given as a radial profile on R^n, n = xi.size().
MultiplierRoutes heat_bergman_multiplier(const RadialProfile& g0, double t, std::span<const double> xi);

}  // namespace sbt
