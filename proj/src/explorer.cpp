#include "soliton/explorer.hpp"

#include "soliton/geometry_residuals.hpp"

#include <cmath>

namespace soliton {

ProfileState admissible_start(const Params& p, double x0, double y0) {
  return taylor_start(p, Side::left, x0, y0);
}

double default_t_max(const Params& p) {
  return 10.0 * std::log(static_cast<double>(p.m + p.k) / (p.m - p.k));
}

ShotResult shoot(const Params& p, double x0, double y0, double t_max) {
  validate(p);
  if (!(t_max > 0.0)) throw std::invalid_argument("shoot: t_max must be positive");
  ShotResult r;
  r.x0 = x0;
  r.y0 = y0;

  const ProfileState start = admissible_start(p, x0, y0);
  IntegrateOptions opt;
  opt.n_samples = 1001;
  const IntegrationResult run = integrate(p, start, t_max, opt);
  const Trajectory& traj = run.trajectory;
  r.terminated_by = run.termination;
  r.hit = (run.termination == Termination::phi_floor);

  const double e0 = first_integral(p, traj.front());
  for (const ProfileState& s : traj.samples)
    r.drift = std::max(r.drift, std::abs(first_integral(p, s) - e0));

  if (traj.size() >= 3) r.nontriviality = classify_case(p, traj).sup_dev;

  if (r.hit && run.crossing) {
    r.T_hit = run.crossing->t_floor;
    r.mismatch1 = run.crossing->phid_floor + p.k;
    r.mismatch2 = run.crossing->defect;
  }
  return r;
}

ScanGrid scan(const Params& p, const ScanSpec& spec) {
  validate(p);
  if (spec.x0_steps < 2 || spec.y0_steps < 2)
    throw std::invalid_argument("scan: need at least 2 steps per axis");
  if (!std::isfinite(spec.x0_min) || !std::isfinite(spec.x0_max) ||
      !std::isfinite(spec.y0_min) || !std::isfinite(spec.y0_max))
    throw std::invalid_argument("scan: ranges must be finite");
  const double t_max = spec.t_max > 0.0 ? spec.t_max : default_t_max(p);

  ScanGrid grid;
  grid.spec = spec;
  grid.results.resize(spec.x0_steps * spec.y0_steps);
  for (std::size_t i = 0; i < spec.x0_steps; ++i) {
    const double x0 =
        spec.x0_min + (spec.x0_max - spec.x0_min) * static_cast<double>(i) /
                          static_cast<double>(spec.x0_steps - 1);
    for (std::size_t j = 0; j < spec.y0_steps; ++j) {
      const double y0 =
          spec.y0_min + (spec.y0_max - spec.y0_min) * static_cast<double>(j) /
                            static_cast<double>(spec.y0_steps - 1);
      grid.results[i * spec.y0_steps + j] = shoot(p, x0, y0, t_max);
    }
  }
  return grid;
}

namespace {

struct Mismatch {
  bool valid = false;
  double m1 = 0.0;
  double m2 = 0.0;
  ShotResult shot;
  double norm() const { return std::hypot(m1, m2); }
};

Mismatch eval_mismatch(const Params& p, double x0, double y0, double t_max) {
  Mismatch m;
  m.shot = shoot(p, x0, y0, t_max);
  if (!m.shot.hit) return m;
  m.valid = true;
  m.m1 = m.shot.mismatch1;
  m.m2 = m.shot.mismatch2;
  return m;
}

} // namespace

RefineResult refine(const Params& p, double x0, double y0, int max_iter) {
  validate(p);
  // the Newton polish needs mismatch values clean to ~1e-11, so the inner
  // shots run at tightened tolerances regardless of the caller's settings
  Params q = p;
  q.rel_tol = std::min(p.rel_tol, 1e-13);
  q.abs_tol = std::min(p.abs_tol, 1e-15);
  const double t_max = default_t_max(q);
  const double fd_step = 1e-6;

  RefineResult res;
  res.x0 = x0;
  res.y0 = y0;

  Mismatch cur = eval_mismatch(q, x0, y0, t_max);
  if (!cur.valid) return res; // seed does not even hit: report non-convergence

  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    res.mismatch_norm = cur.norm();
    if (res.mismatch_norm < 1e-10) {
      res.converged = true;
      res.final_shot = cur.shot;
      res.candidate = cur.shot.nontriviality > 1e-3;
      return res;
    }

    const Mismatch mx = eval_mismatch(q, x0 + fd_step, y0, t_max);
    const Mismatch my = eval_mismatch(q, x0, y0 + fd_step, t_max);
    if (!mx.valid || !my.valid) return res;
    const double j11 = (mx.m1 - cur.m1) / fd_step, j12 = (my.m1 - cur.m1) / fd_step;
    const double j21 = (mx.m2 - cur.m2) / fd_step, j22 = (my.m2 - cur.m2) / fd_step;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return res;
    const double dx = -(j22 * cur.m1 - j12 * cur.m2) / det;
    const double dy = -(-j21 * cur.m1 + j11 * cur.m2) / det;

    // damping: halve the step until the mismatch norm stops growing
    double lambda = 1.0;
    Mismatch next;
    for (int h = 0; h < 8; ++h, lambda *= 0.5) {
      next = eval_mismatch(q, x0 + lambda * dx, y0 + lambda * dy, t_max);
      if (next.valid && next.norm() <= cur.norm()) break;
      next.valid = false;
    }
    if (!next.valid) return res;
    x0 += lambda * dx;
    y0 += lambda * dy;
    cur = next;
    res.x0 = x0;
    res.y0 = y0;
  }
  res.mismatch_norm = cur.norm();
  if (res.mismatch_norm < 1e-10) {
    res.converged = true;
    res.final_shot = cur.shot;
    res.candidate = cur.shot.nontriviality > 1e-3;
  }
  return res;
}

} // namespace soliton
