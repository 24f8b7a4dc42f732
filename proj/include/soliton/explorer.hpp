#pragma once

#include "soliton/ode_core.hpp"
#include "soliton/types.hpp"

namespace soliton {

/// The two-parameter chart of regular singular starts: phi(0)=0, phi'(0)=k,
/// with (x0, y0) free and the slopes forced (see taylor_start).
ProfileState admissible_start(const Params& p, double x0, double y0);

/// Outcome of one forward shoot from the admissible chart.
///   mismatch1 = phid(T_hit) + k
///   mismatch2 = yd(T_hit) - y(T_hit) exp((y-x)(T_hit)) / k
/// (the right-endpoint regularity defect; both vanish on the known branches).
struct ShotResult {
  double x0 = 0.0;
  double y0 = 0.0;
  bool hit = false;
  std::optional<double> T_hit;
  double mismatch1 = 0.0;
  double mismatch2 = 0.0;
  double drift = 0.0;          // sup first-integral drift along the shot
  double nontriviality = 0.0;  // sup deviation of sigma from q0 + q1 e^t
  Termination terminated_by = Termination::reached_target;
};

double default_t_max(const Params& p); // 10 log((m+k)/(m-k))

ShotResult shoot(const Params& p, double x0, double y0, double t_max);

struct ScanSpec {
  double x0_min = 0.0, x0_max = 0.0;
  double y0_min = 0.0, y0_max = 0.0;
  std::size_t x0_steps = 2, y0_steps = 2;
  double t_max = 0.0; // <= 0 means default_t_max
};

/// Row-major over x0 (rows) then y0 (columns); output order is fixed by the
/// grid regardless of evaluation order, and every node is an independent
/// pure computation.
struct ScanGrid {
  ScanSpec spec;
  std::vector<ShotResult> results;
};

ScanGrid scan(const Params& p, const ScanSpec& spec);

struct RefineResult {
  bool converged = false;
  double x0 = 0.0;
  double y0 = 0.0;
  double mismatch_norm = 0.0;
  int iterations = 0;
  ShotResult final_shot;
  // A converged start whose sigma profile does not fit q0 + q1 e^t would be
  // an answer to the open existence question; never observed, always checked.
  bool candidate = false;
};

/// Damped Newton on (x0, y0) -> (mismatch1, mismatch2), Jacobian by forward
/// differences (step 1e-6); converged when the mismatch norm drops under
/// 1e-10. Non-convergence is reported in the result, never thrown.
RefineResult refine(const Params& p, double x0, double y0, int max_iter = 25);

} // namespace soliton
