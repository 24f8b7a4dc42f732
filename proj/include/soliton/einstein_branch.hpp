#pragma once

#include "soliton/types.hpp"

#include <cstdint>
#include <utility>

namespace soliton {

/// Initial data for the y == 0 family, constrained by
///   2*xd0*phid0 = ((2m-1)*xd0^2 + 1)*phi0 + 2*exp(-x0) - 2m.
struct EinsteinData {
  double x0 = 0.0;
  double xd0 = 0.0; // equals the family parameter a for the Page data
  double phi0 = 0.0;
  double phid0 = 0.0;
};

struct PageSolution {
  Params params;
  double a = 0.0; // root of P in (-k/m, 0)
  double T = 0.0; // 2*log((1-a)/(1+a))
  double p_residual = 0.0;
  Trajectory trajectory;
};

/// Theta(t) = cosh(t/2) + a*sinh(t/2) and its derivative; the pair satisfies
/// Theta^2 - 4*Thetad^2 = 1 - a^2 and 4*Thetadd = Theta.
std::pair<double, double> theta(double a, double t);

/// xi = 2*Thetad/Theta = tanh(t/2 + artanh a), and its closed inverse.
double xi_of_t(double a, double t);
double t_of_xi(double a, double xi);

/// S(a, xi) = sum_j (-1)^j xi^(2j)/(2j-1) * [C(m-1,j)(ma+k)a + C(m-1,j-1)(ka+m)].
double s_poly(const Params& p, double a, double xi);
double s_poly_dxi(const Params& p, double a, double xi);

/// Coefficient array of P(a) = S(a,a)/a (a polynomial of degree 2m; the
/// apparent pole at 0 is removable, with P(0) = -k).
std::vector<double> p_coefficients(int m, int k);
double p_poly(const Params& p, double a);

/// Exact rational evaluation of P at a = num/den (small arguments only;
/// the coefficients have denominators lcm(1,3,...,2m-1)).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
Rational p_poly_rational(int m, int k, std::int64_t num, std::int64_t den);

/// P(-k/m) via the closed form of the defining integral
/// (1-k/m)(1+m/k) * int_0^{k/m} (1-a^2)^(m-1) da.
double p_at_bracket_end(int m, int k);

/// Bisection root of P on (-k/m, 0); the bracket is guaranteed by
/// P(0) = -k < 0 < P(-k/m). Throws no_bracket_error if the signs fail.
double solve_page_parameter(const Params& p);

/// phi as a function of xi on the Page branch:
///   phi = 2*S(a,xi) / ((1-a^2)(1-xi^2)^m),
/// the solution of (G*phi)' = F vanishing at xi = +-a when P(a) = 0.
/// (The exponent on (1-xi^2) is m; see phi_dot_from_xi for the slope.)
double phi_from_xi(const Params& p, double a, double xi);
double phi_dot_from_xi(const Params& p, double a, double xi); // d phi/d t

/// Assembles the verified Einstein profile on n_samples grid nodes.
PageSolution build_page_profile(const Params& p, double a, std::size_t n_samples);

/// Solves the linear phi equation
///   2*xd*phid = ((2m-1)*xd^2 + 1)*phi + 2*exp(-x) - 2m
/// along x from the closed form, for arbitrary initial data satisfying the
/// EinsteinData constraint, on the given time grid. Uses the exact
/// antiderivative of (G*phi)' = F in the xi variable, which stays regular
/// across the Thetad = 0 point (including the xd0 = 0 degenerate case).
std::vector<double> solve_phi_linear(const Params& p, const EinsteinData& data,
                                     const std::vector<double>& t_grid);

} // namespace soliton
