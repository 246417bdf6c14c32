#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sbt/core.hpp"
#include "sbt/quadrature.hpp"
#include "sbt/scaled_value.hpp"

namespace sbt {

// L_k^a(x) by the three-term recurrence.
ScaledValue laguerre(int k, double a, double x);
// L_0^a(x) .. L_kmax^a(x) in one pass.
std::vector<ScaledValue> laguerre_all(int kmax, double a, double x);

// (k!(n-1)!/(k+n-1)!)^{1/2} L_k^{n-1}(r^2) r^{n-1} e^{-r^2/2}
double normalized_laguerre(int k, int n, double r);

// Normalized Hermite function, entire in x.
cplx hermite_fn(int k, cplx x);
ScaledValue hermite_fn_scaled(int k, cplx x);
// Phi_k(x) e^{x^2/2}: the polynomial part, carried with an extended exponent.
ScaledValue hermite_poly(int k, cplx x);

double heat_q(double s, std::span<const double> point);

// (g * q_s)(point) on R^d, d = point.size().
cplx heat_flow(const SymbolSpec& g, double s, std::span<const double> point);
// Same convolution by recentered tensor Gauss-Hermite quadrature (d <= 4).
cplx heat_flow_quadrature(const SymbolSpec& g, double s, std::span<const double> point,
                          double tol = kDefaultTol);
// Heat flow of a radial profile on R^d at radius rho.
cplx heat_flow_radial(const RadialProfile& g, int d, double s, double rho);

// (4 pi sinh t)^{-n} e^{-coth(t) rho2 / 4}
ScaledValue twisted_heat_p(double t, double rho2, int n);

enum class Doubling { Single, Double };
// phi_k at purely imaginary arguments: Double gives phi_k(2iy,2iv), Single phi_k(iy,iv).
ScaledValue phi_imaginary(int k, int n, double rho2, Doubling doubling);
// phi_k(x,u) = L_k^{n-1}(rho2/2) e^{-rho2/4} at real arguments, rho2 = |x|^2+|u|^2.
double laguerre_function(int k, int n, double rho2);

cplx mehler_kernel_K(const SpaceParams& params, std::span<const cplx> z, std::span<const cplx> w);

constexpr int kMaxSpecialHermite = 12;
// Phi_{alpha,beta}(z,w) at n = 1, holomorphically extended.
cplx special_hermite_fn(int alpha, int beta, cplx z, cplx w);
// All Phi_{a,b}(z,w) with a, b <= max_index, row-major in a.
std::vector<cplx> special_hermite_table(int max_index, cplx z, cplx w);

}  // namespace sbt
