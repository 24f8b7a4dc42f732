#include "soliton/einstein_branch.hpp"

#include "soliton/numerics.hpp"
#include "soliton/ode_core.hpp"

#include <cmath>
#include <numeric>

namespace soliton {

namespace {

double binom(int n, int j) {
  if (j < 0 || j > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (n - j + i) / i;
  return r;
}

std::int64_t binom_i(int n, int j) {
  if (j < 0 || j > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= j; ++i) r = r * (n - j + i) / i;
  return r;
}

} // namespace

std::pair<double, double> theta(double a, double t) {
  const double ep = std::exp(0.5 * t);
  const double em = 1.0 / ep;
  const double th = 0.5 * ((1.0 + a) * ep + (1.0 - a) * em);
  const double thd = 0.25 * ((1.0 + a) * ep - (1.0 - a) * em);
  return {th, thd};
}

double xi_of_t(double a, double t) {
  const auto [th, thd] = theta(a, t);
  return 2.0 * thd / th;
}

double t_of_xi(double a, double xi) { return 2.0 * (std::atanh(xi) - std::atanh(a)); }

double s_poly(const Params& p, double a, double xi) {
  const double xi2 = xi * xi;
  const double ca = (p.m * a + p.k) * a;
  const double cb = p.k * a + p.m;
  double acc = 0.0;
  double pw = 1.0; // (-xi^2)^j
  for (int j = 0; j <= p.m; ++j) {
    acc += pw / (2.0 * j - 1.0) * (binom(p.m - 1, j) * ca + binom(p.m - 1, j - 1) * cb);
    pw *= -xi2;
  }
  return acc;
}

double s_poly_dxi(const Params& p, double a, double xi) {
  // d/dxi sum_j (-1)^j xi^(2j)/(2j-1) B_j = sum_{j>=1} (-1)^j 2j/(2j-1) B_j xi^(2j-1)
  const double xi2 = xi * xi;
  const double ca = (p.m * a + p.k) * a;
  const double cb = p.k * a + p.m;
  double acc = 0.0;
  double pw = -xi; // (-1)^j xi^(2j-1) for j = 1
  for (int j = 1; j <= p.m; ++j) {
    const double bj = binom(p.m - 1, j) * ca + binom(p.m - 1, j - 1) * cb;
    acc += pw * (2.0 * j) / (2.0 * j - 1.0) * bj;
    pw *= -xi2;
  }
  return acc;
}

std::vector<double> p_coefficients(int m, int k) {
  // P(a) = sum_j (-1)^j/(2j-1) [C(m-1,j)(m a^(2j+1) + k a^(2j))
  //                             + C(m-1,j-1)(k a^(2j) + m a^(2j-1))]
  std::vector<double> c(2 * m + 1, 0.0);
  for (int j = 0; j <= m; ++j) {
    const double w = ((j % 2) ? -1.0 : 1.0) / (2.0 * j - 1.0);
    const double bj = binom(m - 1, j);
    const double bj1 = binom(m - 1, j - 1);
    if (bj != 0.0) {
      c[2 * j + 1] += w * bj * m;
      c[2 * j] += w * bj * k;
    }
    if (bj1 != 0.0) {
      c[2 * j] += w * bj1 * k;
      c[2 * j - 1] += w * bj1 * m;
    }
  }
  return c;
}

double p_poly(const Params& p, double a) {
  const std::vector<double> c = p_coefficients(p.m, p.k);
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * a + c[i];
  return acc;
}

Rational p_poly_rational(int m, int k, std::int64_t num, std::int64_t den) {
  // common denominator of the coefficient fractions: lcm(1, 3, ..., 2m-1)
  std::int64_t lcm = 1;
  for (int j = 1; j <= m; ++j) {
    const std::int64_t d = 2 * j - 1;
    lcm = lcm / std::gcd(lcm, d) * d;
  }
  std::vector<std::int64_t> c(2 * m + 1, 0); // lcm * coefficients, exact integers
  for (int j = 0; j <= m; ++j) {
    const std::int64_t w = ((j % 2) ? -lcm : lcm) / (2 * j - 1);
    const std::int64_t bj = binom_i(m - 1, j);
    const std::int64_t bj1 = binom_i(m - 1, j - 1);
    if (bj) {
      c[2 * j + 1] += w * bj * m;
      c[2 * j] += w * bj * k;
    }
    if (bj1) {
      c[2 * j] += w * bj1 * k;
      c[2 * j - 1] += w * bj1 * m;
    }
  }
  // P(num/den) = sum c_i num^i den^(2m-i) / (lcm * den^(2m))
  std::int64_t acc = 0;
  for (int i = 0; i <= 2 * m; ++i) {
    std::int64_t term = c[i];
    for (int q = 0; q < i; ++q) term *= num;
    for (int q = 0; q < 2 * m - i; ++q) term *= den;
    acc += term;
  }
  std::int64_t d = lcm;
  for (int q = 0; q < 2 * m; ++q) d *= den;
  if (d < 0) {
    d = -d;
    acc = -acc;
  }
  const std::int64_t g = std::gcd(acc < 0 ? -acc : acc, d);
  return {g ? acc / g : acc, g ? d / g : d};
}

double p_at_bracket_end(int m, int k) {
  // At a = -k/m the (ma+k) block of S dies, leaving
  //   P(-k/m) = (m^2 - k^2)/m * int_0^{k/m} (1-s^2)^(m-1) ds,
  // the integral expanded binomially. (The prefactor equals
  // k(1-k/m)(1+m/k); the k is easy to lose since it is 1 in the
  // classical m=2 case.)
  const double u = static_cast<double>(k) / m;
  double integral = 0.0;
  for (int i = 0; i < m; ++i)
    integral += binom(m - 1, i) * ((i % 2) ? -1.0 : 1.0) * std::pow(u, 2 * i + 1) /
                (2.0 * i + 1.0);
  return static_cast<double>(m * m - k * k) / m * integral;
}

double solve_page_parameter(const Params& p) {
  validate(p);
  const double lo = -static_cast<double>(p.k) / p.m + 1e-12;
  const double hi = -1e-12;
  const double plo = p_poly(p, lo);
  const double phi_ = p_poly(p, hi);
  if (!(plo > 0.0) || !(phi_ < 0.0))
    throw no_bracket_error("solve_page_parameter: sign check failed on (-k/m, 0)");
  return numerics::bisect([&](double a) { return p_poly(p, a); }, lo, hi, 200);
}

double phi_from_xi(const Params& p, double a, double xi) {
  return 2.0 * s_poly(p, a, xi) /
         ((1.0 - a * a) * std::pow(1.0 - xi * xi, static_cast<double>(p.m)));
}

double phi_dot_from_xi(const Params& p, double a, double xi) {
  // phid = dphi/dxi * dxi/dt with 2*dxi/dt = 1 - xi^2
  const double s = s_poly(p, a, xi);
  const double sp = s_poly_dxi(p, a, xi);
  const double om = 1.0 - xi * xi;
  return (sp * om + 2.0 * p.m * xi * s) /
         ((1.0 - a * a) * std::pow(om, static_cast<double>(p.m)));
}

PageSolution build_page_profile(const Params& p, double a, std::size_t n_samples) {
  validate(p);
  if (n_samples < 5) throw std::invalid_argument("build_page_profile: need >= 5 samples");
  if (!(a > -1.0 && a < 0.0))
    throw invalid_root_error("build_page_profile: a must lie in (-1, 0)");

  PageSolution sol;
  sol.params = p;
  sol.a = a;
  sol.T = 2.0 * std::log((1.0 - a) / (1.0 + a));
  sol.p_residual = p_poly(p, a);

  const double x0 = -std::log(p.k * a + p.m);
  Trajectory traj;
  traj.params = p;
  traj.branch = Branch::einstein;
  traj.a = a;

  const std::vector<double> grid = numerics::reflection_safe_grid(sol.T, n_samples);
  traj.samples.reserve(grid.size());
  for (double t : grid) {
    const auto [th, thd] = theta(a, t);
    const double xi = 2.0 * thd / th;
    ProfileState s;
    s.t = t;
    s.x = x0 + 2.0 * std::log(th);
    s.xd = xi;
    s.y = 0.0;
    s.yd = 0.0;
    s.phi = phi_from_xi(p, a, xi);
    s.phid = phi_dot_from_xi(p, a, xi);
    traj.samples.push_back(s);
  }
  finalize_times(traj);
  sol.trajectory = std::move(traj);

  // boundary suite at the exact endpoints
  const double tol = 1e-6;
  const double phi0 = phi_from_xi(p, a, a);
  const double phiT = phi_from_xi(p, a, -a);
  const double slope0 = phi_dot_from_xi(p, a, a);
  const double slopeT = phi_dot_from_xi(p, a, -a);
  if (std::abs(phi0) > tol || std::abs(phiT) > tol || std::abs(slope0 - p.k) > tol ||
      std::abs(slopeT + p.k) > tol)
    throw invalid_root_error("build_page_profile: boundary conditions fail; a is not a root");
  for (std::size_t i = 1; i + 1 < sol.trajectory.size(); ++i)
    if (!(sol.trajectory.samples[i].phi > 0.0))
      throw invalid_root_error("build_page_profile: phi not positive on the interior");
  return sol;
}

std::vector<double> solve_phi_linear(const Params& p, const EinsteinData& data,
                                     const std::vector<double>& t_grid) {
  validate(p);
  const double a = data.xd0;
  if (!(std::abs(a) < 1.0))
    throw std::invalid_argument("solve_phi_linear: need |xd0| < 1");
  const double A = std::exp(-data.x0);
  const double one_a2 = 1.0 - a * a;

  // S_A(xi) = sum_i (-1)^i xi^(2i)/(2i-1) [A*C(m,i) - m(1-a^2)*C(m-1,i)];
  // the general solution is phi = (2*S_A/(1-a^2) + K*xi) / (1-xi^2)^m.
  std::vector<double> b(p.m + 1);
  for (int i = 0; i <= p.m; ++i)
    b[i] = (A * binom(p.m, i) - p.m * one_a2 * binom(p.m - 1, i)) / (2.0 * i - 1.0);
  auto s_general = [&](double xi) {
    const double xi2 = xi * xi;
    double acc = 0.0, pw = 1.0;
    for (int i = 0; i <= p.m; ++i) {
      acc += pw * b[i];
      pw *= -xi2;
    }
    return acc;
  };

  double K;
  const double xi0 = a; // xi at t = 0
  if (std::abs(a) > 1e-8) {
    K = (data.phi0 * std::pow(1.0 - a * a, static_cast<double>(p.m)) -
         2.0 * s_general(a) / one_a2) /
        a;
  } else {
    // degenerate start: the constraint pins phi0 and the slope picks the
    // homogeneous component (phid(0) = K/2 when a = 0)
    K = 2.0 * data.phid0;
  }
  (void)xi0;

  std::vector<double> phi(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double xi = xi_of_t(a, t_grid[i]);
    phi[i] = (2.0 * s_general(xi) / one_a2 + K * xi) /
             std::pow(1.0 - xi * xi, static_cast<double>(p.m));
  }
  return phi;
}

} // namespace soliton
