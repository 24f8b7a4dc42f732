#include "soliton/einstein_branch.hpp"

#include "soliton/numerics.hpp"
#include "soliton/ode_core.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace soliton;

TEST_CASE("theta: basic values and conserved combination") {
  CHECK(theta(0.0, 0.0).first == doctest::Approx(1.0).epsilon(1e-16));
  CHECK(theta(0.0, 0.0).second == doctest::Approx(0.0).epsilon(1e-16));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ua(-0.9, 0.9), ut(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double a = ua(rng), t = ut(rng);
    const auto [th, thd] = theta(a, t);
    CHECK(th * th - 4.0 * thd * thd == doctest::Approx(1.0 - a * a).epsilon(1e-13));
  }

  // independent evaluation through cosh/sinh at a = -1/2, t = 2 log 3
  const double a = -0.5, t = 2.0 * std::log(3.0);
  const auto [th, thd] = theta(a, t);
  CHECK(th == doctest::Approx(std::cosh(t / 2) + a * std::sinh(t / 2)).epsilon(1e-15));
  CHECK(th == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(thd == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("theta: second derivative identity by finite differences") {
  const double h = 1e-3;
  for (double a : {-0.6, -0.28, 0.15}) {
    for (double t = -1.0; t <= 2.0; t += 0.25) {
      const double thdd =
          (theta(a, t + h).first - 2.0 * theta(a, t).first + theta(a, t - h).first) / (h * h);
      CHECK(4.0 * thdd == doctest::Approx(theta(a, t).first).epsilon(1e-6));
    }
  }
}

TEST_CASE("xi: closed inverse and endpoint values") {
  const double a = -0.35;
  for (double t : {0.0, 0.3, 1.0, 2.2}) {
    CHECK(t_of_xi(a, xi_of_t(a, t)) == doctest::Approx(t).epsilon(1e-12));
  }
  const double T = 2.0 * std::log((1.0 - a) / (1.0 + a));
  CHECK(xi_of_t(a, 0.0) == doctest::Approx(a).epsilon(1e-14));
  CHECK(xi_of_t(a, T) == doctest::Approx(-a).epsilon(1e-13));
}

TEST_CASE("s_poly: hand-expanded quartic for m=2, k=1") {
  const Params p = make_params(2, 1);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ua(-0.5, 0.0), ux(-0.99, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double a = ua(rng), xi = ux(rng);
    const double expect = -(2 * a * a + a) - (2 * a * a + 2 * a + 2) * xi * xi +
                          (a + 2) * xi * xi * xi * xi / 3.0;
    CHECK(s_poly(p, a, xi) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(s_poly(p, a, xi) == doctest::Approx(s_poly(p, a, -xi)).epsilon(1e-15));
  }
}

TEST_CASE("s_poly: S(a,a) = a P(a)") {
  for (const auto [m, k] : {std::pair{2, 1}, {3, 1}, {5, 2}}) {
    const Params p = make_params(m, k);
    const double a = -0.25;
    CHECK(s_poly(p, a, a) == doctest::Approx(a * p_poly(p, a)).epsilon(1e-13));
  }
}

TEST_CASE("p_poly: exact endpoint values") {
  for (int m = 2; m <= 5; ++m)
    for (int k = 1; k < m; ++k) {
      const Params p = make_params(m, k);
      CHECK(p_poly(p, 0.0) == -static_cast<double>(k)); // exact constant coefficient

      // the defining integral at the bracket end, closed form vs polynomial
      const double lhs = p_poly(p, -static_cast<double>(k) / m);
      const double rhs = p_at_bracket_end(m, k);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      CHECK(rhs > 0.0);
    }

  // rational check: P(-1/2) = 11/16 for (m,k) = (2,1)
  const Rational r = p_poly_rational(2, 1, -1, 2);
  CHECK(r.num == 11);
  CHECK(r.den == 16);
}

TEST_CASE("p_poly: hand expansion oracle at a = -0.3") {
  const Params p = make_params(2, 1);
  const double a = -0.3;
  const double expect = -1.0 - 4.0 * a - 2.0 * a * a - (4.0 / 3.0) * a * a * a +
                        a * a * a * a / 3.0;
  CHECK(p_poly(p, a) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(p_poly(p, a) == doctest::Approx(0.0587).epsilon(1e-3));
}

TEST_CASE("p_poly agrees with s_poly(a,a)/a on random points") {
  std::mt19937 rng(23);
  for (const auto [m, k] : {std::pair{2, 1}, {3, 2}, {4, 1}, {5, 4}}) {
    const Params p = make_params(m, k);
    std::uniform_real_distribution<double> ua(-static_cast<double>(k) / m + 1e-6, -1e-6);
    for (int i = 0; i < 50; ++i) {
      const double a = ua(rng);
      const double via_s = s_poly(p, a, a) / a;
      const double direct = p_poly(p, a);
      CHECK(via_s == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve_page_parameter") {
  const Params p21 = make_params(2, 1);
  const double a21 = solve_page_parameter(p21);
  CHECK(a21 == doctest::Approx(-0.2817).epsilon(4e-3));
  CHECK(std::abs(p_poly(p21, a21)) < 1e-12);
  CHECK(a21 > -0.5);
  CHECK(a21 < 0.0);

  const Params p31 = make_params(3, 1);
  const double a31 = solve_page_parameter(p31);
  CHECK(a31 > -1.0 / 3.0);
  CHECK(a31 < 0.0);
  CHECK(std::abs(p_poly(p31, a31)) < 1e-12);
}

TEST_CASE("phi_from_xi: endpoint zeros, sign, evenness") {
  const Params p = make_params(2, 1);
  const double a = solve_page_parameter(p);
  CHECK(std::abs(phi_from_xi(p, a, a)) < 1e-12);
  CHECK(std::abs(phi_from_xi(p, a, -a)) < 1e-12);

  // value at the middle: 2 S(a,0) / (1-a^2) with S(a,0) = -(2a^2 + a)
  const double expect = -2.0 * (2 * a * a + a) / (1.0 - a * a);
  CHECK(phi_from_xi(p, a, 0.0) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(expect > 0.0);

  for (double xi : {0.05, 0.12, 0.2})
    CHECK(phi_from_xi(p, a, xi) == doctest::Approx(phi_from_xi(p, a, -xi)).epsilon(1e-14));
}

TEST_CASE("derivative identity linking S and the quadrature source term") {
  // 4 (1-xi^2) d[S/xi]/dxi = (1-a^2)^{m+1} F, with F evaluated independently
  for (const auto [m, k] : {std::pair{2, 1}, {4, 3}}) {
    const Params p = make_params(m, k);
    const double a = -0.31;
    for (int i = 1; i <= 100; ++i) {
      const double xi = a + (-2.0 * a) * i / 101.0; // interior of (a, -a)
      if (std::abs(xi) < 1e-3) continue;
      const double dSxi =
          (s_poly_dxi(p, a, xi) * xi - s_poly(p, a, xi)) / (xi * xi);
      const double lhs = 4.0 * (1.0 - xi * xi) * dSxi;
      const double F = 4.0 * std::pow(1.0 - a * a, -static_cast<double>(m) - 1.0) *
                       ((m * a + k) * a / (xi * xi) - (k * a + m)) *
                       std::pow(1.0 - xi * xi, static_cast<double>(m));
      const double rhs = std::pow(1.0 - a * a, static_cast<double>(m) + 1.0) * F;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("build_page_profile: residuals, slopes, positivity, monotone xi") {
  const Params p = make_params(2, 1);
  const double a = solve_page_parameter(p);
  const PageSolution sol = build_page_profile(p, a, 1001);

  CHECK(sol.T == doctest::Approx(2.0 * std::log((1 - a) / (1 + a))).epsilon(1e-15));

  const ResidualReport rep = residual_report(p, sol.trajectory);
  CHECK(rep.sup_xdd1 < 1e-8);
  CHECK(rep.sup_xdd2 == 0.0);
  CHECK(rep.sup_xdd3 < 1e-8);
  CHECK(rep.sup_int < 1e-8);
  CHECK(rep.sup_drift < 1e-8);

  // slope at the left endpoint equals k, from the F/G limit
  CHECK(phi_dot_from_xi(p, a, a) == doctest::Approx(p.k).epsilon(1e-8));
  CHECK(phi_dot_from_xi(p, a, -a) == doctest::Approx(-p.k).epsilon(1e-8));

  // xd equals xi along the branch: strictly increasing from a to -a
  const auto& ss = sol.trajectory.samples;
  CHECK(std::abs(ss.front().xd - a) < 1e-10);
  CHECK(std::abs(ss.back().xd + a) < 2e-10);
  double phimin = 1e300;
  for (std::size_t i = 1; i < ss.size(); ++i) {
    CHECK(ss[i].xd > ss[i - 1].xd);
    if (i + 1 < ss.size()) phimin = std::min(phimin, ss[i].phi);
  }
  CHECK(phimin > 0.0);
}

TEST_CASE("build_page_profile rejects non-roots") {
  const Params p = make_params(2, 1);
  CHECK_THROWS_AS(build_page_profile(p, -0.1, 101), invalid_root_error);
}

TEST_CASE("solve_phi_linear: two-route agreement on the Page branch") {
  const Params p = make_params(3, 2);
  const double a = solve_page_parameter(p);
  const PageSolution sol = build_page_profile(p, a, 501);

  EinsteinData data;
  data.x0 = -std::log(p.k * a + p.m);
  data.xd0 = a;
  data.phi0 = 0.0;
  data.phid0 = p.k;
  std::vector<double> grid;
  for (const ProfileState& s : sol.trajectory.samples) grid.push_back(s.t);
  const std::vector<double> phi = solve_phi_linear(p, data, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(phi[i] == doctest::Approx(sol.trajectory.samples[i].phi).epsilon(1e-9));
}

TEST_CASE("solve_phi_linear: defining equation holds by finite differences") {
  const Params p = make_params(2, 1);
  const double a = -0.31; // not a root; any admissible data works
  EinsteinData data;
  data.x0 = -std::log(p.k * a + p.m);
  data.xd0 = a;
  data.phi0 = 0.0;
  data.phid0 = p.k; // consistent with the constraint for this x0
  const double T = 2.0 * std::log((1 - a) / (1 + a));
  const std::size_t n = 2001;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = T * static_cast<double>(i) / (n - 1);
  const std::vector<double> phi = solve_phi_linear(p, data, grid);

  // 2 xd phid - ((2m-1) xd^2 + 1) phi - 2 e^{-x} + 2m = 0 with phid differenced
  const std::vector<double> phid = numerics::derivative_on_grid(grid, phi);
  const double x0 = data.x0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [th, thd] = theta(a, grid[i]);
    const double xd = 2.0 * thd / th;
    const double ex = std::exp(-x0) / (th * th);
    const double resid =
        2.0 * xd * phid[i] - ((2 * p.m - 1) * xd * xd + 1.0) * phi[i] - 2.0 * ex + 2.0 * p.m;
    CHECK(std::abs(resid) < 1e-9 * std::max(1.0, std::abs(phi[i])));
  }

  // and the integrating-factor form d(G phi)/dt = F away from the Thetad zero
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const auto [th, thd] = theta(a, grid[i]);
    if (std::abs(2.0 * thd / th) < 0.2) continue;
    const double h = grid[1] - grid[0];
    auto Gphi = [&](std::size_t j) {
      const auto [tj, dj] = theta(a, grid[j]);
      return 2.0 / (std::pow(tj, 2 * p.m - 1) * dj) * phi[j];
    };
    const double dGphi = (-Gphi(i + 2) + 8.0 * Gphi(i + 1) - 8.0 * Gphi(i - 1) +
                          Gphi(i - 2)) /
                         (12.0 * h);
    const double F =
        (std::exp(-x0) - p.m * th * th) / std::pow(std::pow(th, p.m) * thd, 2.0);
    CHECK(dGphi == doctest::Approx(F).epsilon(1e-6));
  }
}

TEST_CASE("solve_phi_linear: degenerate xd0 = 0 start") {
  const Params p = make_params(2, 1);
  EinsteinData data;
  data.x0 = -std::log(1.5);
  data.xd0 = 0.0;
  data.phi0 = 2.0 * p.m - 2.0 * std::exp(-data.x0); // forced by the constraint
  data.phid0 = 0.7;                                 // free
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(1.0 * i / 400);
  const std::vector<double> phi = solve_phi_linear(p, data, grid);
  CHECK(phi.front() == doctest::Approx(data.phi0).epsilon(1e-12));

  const std::vector<double> phid = numerics::derivative_on_grid(grid, phi);
  CHECK(phid.front() == doctest::Approx(data.phid0).epsilon(1e-8));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [th, thd] = theta(0.0, grid[i]);
    const double xd = 2.0 * thd / th;
    const double ex = std::exp(-data.x0) / (th * th);
    const double resid =
        2.0 * xd * phid[i] - ((2 * p.m - 1) * xd * xd + 1.0) * phi[i] - 2.0 * ex + 2.0 * p.m;
    CHECK(std::abs(resid) < 1e-8 * std::max(1.0, std::abs(phi[i])));
  }
}
