#include "soliton/soliton_branch.hpp"

#include "soliton/numerics.hpp"
#include "soliton/ode_core.hpp"

#include <cmath>

namespace soliton {

const char* to_string(CaoObjective o) {
  return o == CaoObjective::quadrature_J ? "quadrature_J" : "paper_S";
}

double h_moment(int m_power, double a, double Q, double a_switch) {
  if (m_power < 0 || !(Q > 0.0)) throw std::invalid_argument("h_moment: need m >= 0, Q > 0");
  if (a == 0.0) return std::pow(Q, m_power + 1) / (m_power + 1);
  if (std::abs(a) < a_switch) {
    return numerics::integrate_gk(
        [&](double kp) { return std::pow(kp, m_power) * std::exp(-a * kp); }, 0.0, Q, 1e-15,
        1e-14);
  }
  const double tail = std::exp(-a * Q);
  double h = (1.0 - tail) / a; // H_0
  double qpow = 1.0;
  for (int j = 1; j <= m_power; ++j) {
    qpow *= Q;
    h = (j * h - qpow * tail) / a;
  }
  return h;
}

double s_of_a(const Params& p, double a) {
  const double Q = static_cast<double>(p.m + p.k) / (p.m - p.k);
  return h_moment(p.m - 1, a, Q) + (p.k - p.m) * h_moment(p.m, a, Q);
}

double quadrature_objective(const Params& p, double a) {
  const double T = std::log(static_cast<double>(p.m + p.k) / (p.m - p.k));
  return numerics::integrate_gk(
      [&](double t) {
        const double et = std::exp(t);
        return (p.m - (p.m - p.k) * et) * std::exp(p.m * t - a * et);
      },
      0.0, T, 1e-15, 1e-14);
}

double solve_cao_parameter(const Params& p, CaoObjective objective) {
  validate(p);
  auto f = [&](double a) {
    return objective == CaoObjective::quadrature_J ? quadrature_objective(p, a) : s_of_a(p, a);
  };
  const double lo = 1e-9;
  const double hi = static_cast<double>(p.m) * (p.m - p.k);
  if (!(f(lo) < 0.0) || !(f(hi) > 0.0))
    throw no_bracket_error("solve_cao_parameter: no sign change on (0, m(m-k))");
  return numerics::bisect(f, lo, hi, 200);
}

CaoData cao_initial_data(const Params& p, double a) {
  validate(p);
  if (!(a > 0.0)) throw std::invalid_argument("cao_initial_data: need a > 0");
  CaoData d;
  d.a = a;
  d.yd0 = a / (p.m - 1);
  d.y0 = -p.k * d.yd0 / (p.m - p.k);
  d.x0 = d.y0 - std::log(static_cast<double>(p.m - p.k));
  d.xd0 = d.yd0 - 1.0;
  d.phi0 = 0.0;
  d.phid0 = p.k;
  return d;
}

namespace {

CaoSolution build_cao_impl(const Params& p, double a, std::size_t n_samples,
                           bool check_boundary) {
  validate(p);
  if (n_samples < 5) throw std::invalid_argument("build_cao_profile: need >= 5 samples");
  const CaoData d = cao_initial_data(p, a);

  CaoSolution sol;
  sol.params = p;
  sol.a = a;
  sol.T = std::log(static_cast<double>(p.m + p.k) / (p.m - p.k));
  sol.j_residual = quadrature_objective(p, a);
  sol.s_residual = s_of_a(p, a);

  const double mk = p.m - p.k; // e^{y0 - x0}
  auto bigF = [&](double t) {
    const double et = std::exp(t);
    return (p.m - mk * et) * std::exp(p.m * t - a * et);
  };
  auto bigG = [&](double t) { return std::exp(p.m * t - a * std::exp(t)); };

  Trajectory traj;
  traj.params = p;
  traj.branch = Branch::koiso_cao;
  traj.a = a;

  const std::vector<double> grid = numerics::reflection_safe_grid(sol.T, n_samples);
  traj.samples.reserve(grid.size());
  double accum = 0.0; // int_0^t F, accumulated segment by segment
  double prev_t = 0.0;
  for (double t : grid) {
    if (t > prev_t) {
      accum += numerics::integrate_gk(bigF, prev_t, t, 1e-16, 1e-15);
      prev_t = t;
    }
    const double et = std::exp(t);
    const double ert = d.yd0 * (et - 1.0);
    ProfileState s;
    s.t = t;
    s.x = d.x0 - t + ert;
    s.xd = d.yd0 * et - 1.0;
    s.y = d.y0 + ert;
    s.yd = d.yd0 * et;
    s.phi = (t == 0.0) ? 0.0 : accum / bigG(t);
    s.phid = (a * et - p.m) * s.phi + p.m - mk * et;
    traj.samples.push_back(s);
  }
  finalize_times(traj);
  sol.trajectory = std::move(traj);

  if (check_boundary) {
    // boundary suite: phi(T) from the quadrature, slopes from the linear equation
    const double tol = 1e-6;
    const double phiT = (accum + numerics::integrate_gk(bigF, prev_t, sol.T, 1e-16, 1e-15)) /
                        bigG(sol.T);
    const double slope0 = p.m - mk; // (a*1 - m)*0 + m - (m-k)
    const double slopeT = (a * std::exp(sol.T) - p.m) * phiT + p.m - mk * std::exp(sol.T);
    if (std::abs(phiT) > tol || std::abs(slope0 - p.k) > tol || std::abs(slopeT + p.k) > tol)
      throw invalid_root_error("build_cao_profile: boundary conditions fail; a is not a J-root");
    for (std::size_t i = 1; i + 1 < sol.trajectory.size(); ++i)
      if (!(sol.trajectory.samples[i].phi > 0.0))
        throw invalid_root_error("build_cao_profile: phi not positive on the interior");
  }
  return sol;
}

} // namespace

CaoSolution build_cao_profile(const Params& p, double a, std::size_t n_samples) {
  return build_cao_impl(p, a, n_samples, true);
}

CaoSolution build_cao_profile_unchecked(const Params& p, double a, std::size_t n_samples) {
  return build_cao_impl(p, a, n_samples, false);
}

} // namespace soliton
