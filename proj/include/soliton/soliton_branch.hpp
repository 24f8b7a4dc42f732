#pragma once

#include "soliton/types.hpp"

namespace soliton {

/// Initial data for the constant-sigma family. The three constraints
///   yd0 - xd0 = 1,
///   (1 - m*exp(x0-y0))*yd0 = y0,
///   phid0 = ((m-1)*yd0 - m)*phi0 + m - exp(y0-x0)
/// hold identically for the values produced by cao_initial_data.
struct CaoData {
  double a = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double yd0 = 0.0;
  double xd0 = 0.0;  // yd0 - 1
  double phi0 = 0.0; // 0
  double phid0 = 0.0; // k
};

enum class CaoObjective { quadrature_J, paper_S };

const char* to_string(CaoObjective o);

struct CaoSolution {
  Params params;
  double a = 0.0;
  double T = 0.0; // log((m+k)/(m-k))
  CaoObjective objective_used = CaoObjective::quadrature_J;
  double j_residual = 0.0;
  double s_residual = 0.0;
  Trajectory trajectory;
};

/// H_m = int_0^Q kappa^m exp(-a*kappa) dkappa, by the upward recursion
/// m*H_{m-1} = a*H_m + Q^m exp(-aQ) from H_0, falling back to adaptive
/// quadrature for a below a_switch where the recursion cancels.
double h_moment(int m_power, double a, double Q, double a_switch = 0.5);

/// S(a) = H_{m-1} + (k-m)*H_m with Q = (m+k)/(m-k), the direct-integral
/// objective behind the paper_S option; its root locus differs from the
/// boundary quadrature's (see quadrature_objective).
double s_of_a(const Params& p, double a);

/// J(a) = int_0^T F dt with F = (m - (m-k)e^t) exp(mt - a e^t) and
/// T = log((m+k)/(m-k)); phi(T) = 0 exactly when J(a) = 0.
double quadrature_objective(const Params& p, double a);

/// Bisection root of the chosen objective on (0, m(m-k)).
/// Throws no_bracket_error when no sign change shows on that interval.
double solve_cao_parameter(const Params& p, CaoObjective objective = CaoObjective::quadrature_J);

/// Data assembly: yd0 = a/(m-1), x0 = y0 - log(m-k), and y0 forced by the
/// second constraint (equivalently by the first integral at phi = 0) to
/// y0 = -k*yd0/(m-k).
CaoData cao_initial_data(const Params& p, double a);

/// Assembles the profile: x, y in closed form, phi from the integrating
/// factor quadrature, slopes from the first-order equation. Verifies the
/// boundary suite; throws invalid_root_error when it fails.
CaoSolution build_cao_profile(const Params& p, double a, std::size_t n_samples);

/// Same assembly without the boundary gate, for recording the outcome at
/// parameters that are not roots of the boundary condition (the paper_S
/// objective's root probe). phi may dip negative; nothing is thrown.
CaoSolution build_cao_profile_unchecked(const Params& p, double a, std::size_t n_samples);

} // namespace soliton
