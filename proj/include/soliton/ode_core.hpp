#pragma once

#include "soliton/types.hpp"

namespace soliton {

/// Right-hand side of the second-order profile system:
///   2*xdd   = yd^2 - xd^2 + 1
///   phi*ydd = (m-1)*phi*xd*yd - phid*yd - y*exp(y-x)
///   phidd   = (m-1)*xd*phid + m*phi - m
/// Throws singular_phi_error when |phi| < phi_floor (use taylor_start there).
Derivatives rhs(const Params& p, const ProfileState& s);

/// e^x times the conserved combination
///   2*xd*phid - (2m-1)*phi*xd^2 + phi*yd^2 + 2*(y-1)*exp(y-x) - phi + 2m.
/// Constant along exact solutions; identically zero on admissible ones.
double first_integral(const Params& p, const ProfileState& s);

/// Derivatives at a regular phi=0 endpoint, phi' = +k, for free data (x0, y0).
/// Index j holds the j-th t-derivative at the endpoint. The first-order
/// values are forced by the system itself:
///   yd0 = -y0*exp(y0-x0)/k   (second equation at phi=0)
///   xd0 = -((y0-1)*exp(y0-x0) + m)/k   (first integral at phi=0)
/// and the higher coefficients follow from the differentiated equations.
struct TaylorSeries {
  double x[5];
  double y[5];
  double phi[5];

  ProfileState state_at(double eps, double anchor = 0.0, bool left = true) const;
  Derivatives derivatives_at(double eps, bool left = true) const;
};

TaylorSeries taylor_series(const Params& p, double x0, double y0);

enum class Side { left, right };

/// Series launch state at t = anchor + eps (left) or t = anchor - eps (right),
/// eps = params.start_offset. The right side carries phi' = -k.
ProfileState taylor_start(const Params& p, Side side, double x0, double y0,
                          double anchor = 0.0);

enum class Termination { reached_target, phi_floor, overflow, step_failure };

const char* to_string(Termination t);

struct IntegrateOptions {
  std::size_t n_samples = 1001; // dense-output grid size (start..target)
  std::size_t max_steps = 2000000;
};

/// Diagnostics of a phi-floor termination. The second profile equation makes
/// yd a simple pole at the phi zero, yd ~ residue/(phid0 (t - t0)) + smooth,
/// where the residue W0 = lim phi*yd vanishes exactly on right-regular
/// solutions. `defect` is W0 normalized by phi at the detection level, i.e.
/// the value of yd - y e^{y-x}/k carried to the endpoint; it is the stable
/// form of the endpoint regularity mismatch.
struct CrossingInfo {
  double t_floor = 0.0;    // time where phi reaches the floor
  double phid_floor = 0.0; // slope there
  double defect = 0.0;     // pole residue over the detection phi
};

struct IntegrationResult {
  Trajectory trajectory;
  Termination termination = Termination::reached_target;
  double t_final = 0.0; // crossing time when termination == phi_floor
  std::optional<CrossingInfo> crossing;
};

/// Adaptive Dormand-Prince 5(4) with PI step control and cubic-Hermite dense
/// output on a uniform grid. phi approaching zero is detected at a level
/// where the equations are still well-conditioned; the trajectory is then
/// continued to the phi floor by the local series at the crossing (the
/// stored final sample carries the pole-free part of yd, and the pole
/// residue goes into CrossingInfo). The detection yields to t_target: if the
/// projected floor crossing lies beyond it, integration simply continues.
IntegrationResult integrate(const Params& p, const ProfileState& start, double t_target,
                            const IntegrateOptions& opt = {});

/// Per-sample residuals of the profile system along a trajectory. Second
/// derivatives are estimated from the stored first-derivative fields by
/// high-order finite differences on the sample grid; the second equation is
/// kept in cleared-denominator form
///   phi*ydd - (m-1)*phi*xd*yd + phid*yd + y*exp(y-x)
/// so it stays finite at the endpoints.
struct ResidualReport {
  std::vector<double> t;
  std::vector<double> eq_xdd1;
  std::vector<double> eq_xdd2;
  std::vector<double> eq_xdd3;
  std::vector<double> eq_int;
  std::vector<double> drift; // first_integral(t) - first_integral(t0)

  double sup_xdd1 = 0.0;
  double sup_xdd2 = 0.0;
  double sup_xdd3 = 0.0;
  double sup_int = 0.0;
  double sup_drift = 0.0;
};

ResidualReport residual_report(const Params& p, const Trajectory& traj);

} // namespace soliton
