#include "soliton/geometry_residuals.hpp"

#include "soliton/numerics.hpp"
#include "soliton/ode_core.hpp"

#include <algorithm>
#include <cmath>

namespace soliton {

namespace {

struct GridDerivatives {
  std::vector<double> t, xdd, ydd, phidd;
};

GridDerivatives second_derivatives(const Trajectory& traj) {
  const std::size_t n = traj.size();
  GridDerivatives g;
  g.t.resize(n);
  std::vector<double> xd(n), yd(n), phid(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.t[i] = traj.samples[i].t;
    xd[i] = traj.samples[i].xd;
    yd[i] = traj.samples[i].yd;
    phid[i] = traj.samples[i].phid;
  }
  g.xdd = numerics::derivative_on_grid(g.t, xd);
  g.ydd = numerics::derivative_on_grid(g.t, yd);
  g.phidd = numerics::derivative_on_grid(g.t, phid);
  return g;
}

} // namespace

std::vector<GeometricSample> geometric_samples(const Params& p, const Trajectory& traj) {
  if (traj.size() < 2) throw std::invalid_argument("geometric_samples: need >= 2 samples");
  const GridDerivatives fd = second_derivatives(traj);
  const double m = p.m;

  std::vector<GeometricSample> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ProfileState& s = traj.samples[i];
    GeometricSample& g = out[i];
    const double et = std::exp(s.t);
    const double phidd = (m - 1.0) * s.xd * s.phid + m * s.phi - m;
    g.t = s.t;
    g.alpha = (m - 1.0) * (s.xd + 1.0) / et;
    g.beta = 0.5 * (m - 1.0) * (2.0 * fd.xdd[i] - s.yd * s.yd + s.xd * s.xd - 1.0);
    g.sigma = std::exp(0.5 * (s.x - s.y + s.t));
    g.f = (m - 1.0) * s.y;
    g.scal = 2.0 * (m * (m - 1.0) - m * (m - 1.0) * s.phi - (2.0 * m - 1.0) * s.phid - phidd) /
             et;
    g.lap_kappa = 2.0 * (s.phid + m * s.phi);
    g.grad_kappa_sq = 2.0 * et * s.phi;
  }
  return out;
}

std::vector<SolitonResidualSample> soliton_residuals(const Params& p, const Trajectory& traj) {
  if (traj.size() < 2) throw std::invalid_argument("soliton_residuals: need >= 2 samples");
  const std::vector<GeometricSample> geo = geometric_samples(p, traj);
  const GridDerivatives fd = second_derivatives(traj);
  const double m = p.m;

  std::vector<SolitonResidualSample> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ProfileState& s = traj.samples[i];
    const GeometricSample& g = geo[i];
    SolitonResidualSample& r = out[i];
    const double eyx = std::exp(s.y - s.x);
    const double et = std::exp(s.t);
    r.t = s.t;
    r.r_nfz = g.beta;

    const double cleared =
        s.phi * fd.ydd[i] - (m - 1.0) * s.phi * s.xd * s.yd + s.phid * s.yd + s.y * eyx;
    r.r_med = s.yd * (g.lap_kappa - 2.0 * (s.phid + m * s.phi)) + 2.0 * cleared;

    r.eyd_lines[0] = m * (2.0 * s.xd * s.phid - (2.0 * m - 1.0) * s.phi * s.xd * s.xd +
                          s.phi * s.yd * s.yd + 2.0 * (s.y - 1.0) * eyx - s.phi + 2.0 * m);
    r.eyd_lines[1] = -2.0 * (m * (m - 1.0) - m * (m - 1.0) * s.phi -
                             (2.0 * m - 1.0) * s.phid - fd.phidd[i] - et * g.scal / 2.0);
    r.eyd_lines[2] = (2.0 * m - 1.0) * (s.xd + 1.0) *
                     (g.lap_kappa - 2.0 * (s.phid + m * s.phi));
    r.eyd_lines[3] =
        -2.0 * (fd.phidd[i] - (m - 1.0) * s.xd * s.phid - m * s.phi + m);
    r.eyd_lines[4] =
        (2.0 * m - 1.0) * (2.0 * fd.xdd[i] - s.yd * s.yd + s.xd * s.xd - 1.0) * s.phi;
    r.r_eyd = r.eyd_lines[0] + r.eyd_lines[1] + r.eyd_lines[2] + r.eyd_lines[3] +
              r.eyd_lines[4];
  }
  return out;
}

const char* to_string(CaseKind c) {
  switch (c) {
    case CaseKind::case_i: return "case_i";
    case CaseKind::case_ii: return "case_ii";
    case CaseKind::case_iii: return "case_iii";
    case CaseKind::nontrivial: return "nontrivial";
    case CaseKind::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

CaseTag classify_case(const Params& p, const Trajectory& traj, double tol) {
  if (traj.size() < 3) throw std::invalid_argument("classify_case: need >= 3 samples");
  const std::size_t n = traj.size();

  double y_sup = 0.0;
  std::vector<double> g(n), sigma(n), t(n), yd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileState& s = traj.samples[i];
    y_sup = std::max(y_sup, std::abs(s.y));
    t[i] = s.t;
    yd[i] = s.yd;
    g[i] = std::exp(s.t);
    sigma[i] = std::exp(0.5 * (s.x - s.y + s.t));
  }

  const numerics::LinearFit fit = numerics::fit_affine(g, sigma);
  CaseTag tag;
  tag.q0 = fit.c0;
  tag.q1 = fit.c1;
  double sig_scale = 0.0, g_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tag.sup_dev = std::max(tag.sup_dev, std::abs(sigma[i] - fit.c0 - fit.c1 * g[i]));
    sig_scale = std::max(sig_scale, std::abs(sigma[i]));
    g_scale = std::max(g_scale, std::abs(g[i]));
  }

  // diagnostics from the first-order consequences of sigma'' = sigma'
  const std::vector<double> ydd = numerics::derivative_on_grid(t, yd);
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileState& s = traj.samples[i];
    const double eyx = std::exp(s.y - s.x);
    tag.eta1_sup = std::max(
        tag.eta1_sup, std::abs(s.yd * s.phid -
                               ((p.m * s.xd - s.yd) * s.yd * s.phi - s.y * eyx)));
    tag.eta2_sup = std::max(tag.eta2_sup, std::abs(ydd[i] - (s.yd - s.xd) * s.yd));
  }

  const double fit_good = tol * sig_scale;
  if (y_sup <= tol) {
    tag.kind = CaseKind::case_i;
  } else if (tag.sup_dev > fit_good) {
    tag.kind = CaseKind::nontrivial;
  } else if (std::abs(tag.q1) * g_scale <= fit_good) {
    tag.kind = CaseKind::case_ii;
  } else if (std::abs(tag.q0) <= fit_good) {
    tag.kind = CaseKind::case_iii;
  } else {
    tag.kind = CaseKind::indeterminate;
  }
  return tag;
}

Trajectory invert_profile(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("invert_profile: empty trajectory");
  Trajectory out;
  out.params = traj.params;
  out.branch = Branch::inverted;
  out.a = traj.a;
  const double span_sum = traj.t_start + traj.t_end;
  out.samples.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ProfileState& s = traj.samples[traj.size() - 1 - i];
    ProfileState& d = out.samples[i];
    d.t = span_sum - s.t;
    d.x = s.x;
    d.y = s.y;
    d.phi = s.phi;
    d.xd = -s.xd;
    d.yd = -s.yd;
    d.phid = -s.phid;
  }
  finalize_times(out);
  return out;
}

namespace {

// phi(t) along the trajectory by monotone segment lookup + cubic Hermite
class PhiInterpolant {
 public:
  explicit PhiInterpolant(const Trajectory& traj) : s_(traj.samples) {}

  double operator()(double t) const {
    const auto& v = s_;
    std::size_t lo = 0, hi = v.size() - 1;
    if (t <= v.front().t) {
      lo = 0;
      hi = 1;
    } else if (t >= v.back().t) {
      lo = v.size() - 2;
      hi = v.size() - 1;
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (v[mid].t <= t ? lo : hi) = mid;
      }
    }
    return numerics::hermite(t, v[lo].t, v[hi].t, v[lo].phi, v[hi].phi, v[lo].phid,
                             v[hi].phid);
  }

 private:
  const std::vector<ProfileState>& s_;
};

} // namespace

std::vector<RadialSample> radial_profile(const Params& p, const Trajectory& traj,
                                         const std::vector<double>& r_grid,
                                         double anchor_t) {
  if (traj.size() < 2) throw std::invalid_argument("radial_profile: need >= 2 samples");
  if (r_grid.size() < 2) throw std::invalid_argument("radial_profile: need >= 2 grid nodes");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
      throw std::invalid_argument("radial_profile: r_grid must be positive and increasing");
  }
  const PhiInterpolant phi(traj);
  const double t_lo = traj.t_start;
  const double t_hi = traj.t_end;
  const ProfileState& s_lo = traj.front();
  const ProfileState& s_hi = traj.back();
  auto slope = [&](double t) {
    // dt/du with u = log r; outside the sampled strip continue phi linearly
    // from the boundary slopes so the flow keeps its asymptotic equilibria
    double ph;
    if (t < t_lo)
      ph = s_lo.phi + s_lo.phid * (t - t_lo);
    else if (t > t_hi)
      ph = s_hi.phi + s_hi.phid * (t - t_hi);
    else
      ph = phi(t);
    return 2.0 * std::max(ph, 0.0) / p.k;
  };
  auto advance = [&](double t, double u_from, double u_to) {
    // classic RK4 in u on a fixed fine subgrid
    const double span = u_to - u_from;
    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 1e-3)));
    const double h = span / nsub;
    for (int i = 0; i < nsub; ++i) {
      const double k1 = slope(t);
      const double k2 = slope(t + 0.5 * h * k1);
      const double k3 = slope(t + 0.5 * h * k2);
      const double k4 = slope(t + h * k3);
      t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return t;
  };

  const double t_anchor =
      (anchor_t > t_lo && anchor_t < t_hi) ? anchor_t : 0.5 * (t_lo + t_hi);
  std::vector<RadialSample> out(r_grid.size());
  // nodes at r >= 1, marching right from the anchor
  {
    double t = t_anchor, u = 0.0;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const double ui = std::log(r_grid[i]);
      if (ui < 0.0) continue;
      t = advance(t, u, ui);
      u = ui;
      out[i] = {r_grid[i], t};
    }
  }
  // nodes at r < 1, marching left
  {
    double t = t_anchor, u = 0.0;
    for (std::size_t i = r_grid.size(); i-- > 0;) {
      const double ui = std::log(r_grid[i]);
      if (ui >= 0.0) continue;
      t = advance(t, u, ui);
      u = ui;
      out[i] = {r_grid[i], t};
    }
  }
  return out;
}

} // namespace soliton
