#pragma once

#include "soliton/types.hpp"

#include <array>

namespace soliton {

/// Pointwise geometric quantities along a profile, for kappa = e^t:
///   alpha = (m-1)(xd+1) e^{-t}
///   beta  = (m-1)(2*xdd - yd^2 + xd^2 - 1)/2
///   sigma = e^{(x-y+t)/2},  f = (m-1) y
///   e^t s/2 = m(m-1) - m(m-1) phi - (2m-1) phid - phidd
///   lap_kappa = 2(phid + m phi),  grad_kappa_sq = 2 e^t phi.
/// phidd in the scalar-curvature line comes from the third profile equation,
/// not from differencing; xdd in beta is estimated from the stored xd samples,
/// so beta measures the first equation instead of restating it.
struct GeometricSample {
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double f = 0.0;
  double scal = 0.0;
  double lap_kappa = 0.0;
  double grad_kappa_sq = 0.0;
};

std::vector<GeometricSample> geometric_samples(const Params& p, const Trajectory& traj);

/// Gradient-soliton residuals at profile level. r_nfz is the trace-free
/// coefficient beta; r_med combines the trace identity with the cleared
/// second-equation bracket; r_eyd is assembled line by line (the five lines
/// vanish via the first integral, the scalar-curvature identity, the
/// Laplacian identity, and the third and first equations, respectively).
struct SolitonResidualSample {
  double t = 0.0;
  double r_nfz = 0.0;
  double r_med = 0.0;
  double r_eyd = 0.0;
  std::array<double, 5> eyd_lines{};
};

std::vector<SolitonResidualSample> soliton_residuals(const Params& p, const Trajectory& traj);

enum class CaseKind { case_i, case_ii, case_iii, nontrivial, indeterminate };

const char* to_string(CaseKind c);

/// Outcome of fitting sigma(t) against q0 + q1 e^t:
///   case_i   : y vanishes along the trajectory (Einstein family)
///   case_ii  : q1 ~ 0, sigma a positive constant (Koiso-Cao family)
///   case_iii : q0 ~ 0, sigma proportional to e^t (inverted Koiso-Cao)
///   nontrivial : the fit itself fails (the open-problem hook)
struct CaseTag {
  CaseKind kind = CaseKind::indeterminate;
  double q0 = 0.0;
  double q1 = 0.0;
  double sup_dev = 0.0;  // max |sigma - q0 - q1 e^t|
  double eta1_sup = 0.0; // sup of the first-order sigma diagnostic
  double eta2_sup = 0.0; // sup of ydd - (yd - xd) yd, finite-differenced
};

CaseTag classify_case(const Params& p, const Trajectory& traj, double tol = 1e-8);

/// The t -> T - t substitution: samples mirrored, first derivatives negated.
/// On grids built by the profile assemblers the reflected times are exact,
/// so applying this twice is a bit-exact identity.
Trajectory invert_profile(const Trajectory& traj);

/// Monotone reparameterization t(r) of the profile variable by the fibre
/// norm, from dt/dr = 2 phi(t)/(k r). The anchor t(1) is a free
/// normalization (solutions differ by a rescaling of r); it defaults to the
/// midpoint (t_start+t_end)/2. r_grid must be positive and strictly
/// increasing.
struct RadialSample {
  double r = 0.0;
  double t = 0.0;
};

std::vector<RadialSample> radial_profile(const Params& p, const Trajectory& traj,
                                         const std::vector<double>& r_grid,
                                         double anchor_t = -1.0);

} // namespace soliton
