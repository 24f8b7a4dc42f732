#include "soliton/explorer.hpp"

#include "soliton/einstein_branch.hpp"
#include "soliton/soliton_branch.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace soliton;

namespace {

struct KnownPoints {
  Params p = make_params(2, 1);
  double a_page, x0_page;
  double a_cao, x0_cao, y0_cao, T_cao;

  KnownPoints() {
    a_page = solve_page_parameter(p);
    x0_page = -std::log(p.k * a_page + p.m);
    a_cao = solve_cao_parameter(p);
    const CaoData d = cao_initial_data(p, a_cao);
    x0_cao = d.x0;
    y0_cao = d.y0;
    T_cao = std::log(3.0);
  }
};

const KnownPoints& known() {
  static KnownPoints k;
  return k;
}

} // namespace

TEST_CASE("admissible starts reproduce the closed forms under integration") {
  const auto& K = known();
  const Params& p = K.p;

  SUBCASE("Einstein point") {
    const double a = K.a_page;
    const double T = 2.0 * std::log((1 - a) / (1 + a));
    const ProfileState s0 = admissible_start(p, K.x0_page, 0.0);
    const IntegrationResult run = integrate(p, s0, T - p.start_offset);
    REQUIRE(run.termination == Termination::reached_target);
    double worst = 0.0;
    for (const ProfileState& s : run.trajectory.samples) {
      const auto [th, thd] = theta(a, s.t);
      worst = std::max(worst, std::abs(s.x - (K.x0_page + 2.0 * std::log(th))));
      worst = std::max(worst, std::abs(s.xd - 2.0 * thd / th));
      worst = std::max(worst, std::abs(s.phi - phi_from_xi(p, a, 2.0 * thd / th)));
      CHECK(s.y == 0.0);  // the y0 = 0 axis is exactly invariant
      CHECK(s.yd == 0.0);
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("Koiso-Cao point") {
    const double a = K.a_cao;
    const CaoData d = cao_initial_data(p, a);
    const ProfileState s0 = admissible_start(p, K.x0_cao, K.y0_cao);
    const IntegrationResult run = integrate(p, s0, K.T_cao - p.start_offset);
    REQUIRE(run.termination == Termination::reached_target);
    double worst = 0.0;
    for (const ProfileState& s : run.trajectory.samples) {
      const double ert = d.yd0 * (std::exp(s.t) - 1.0);
      worst = std::max(worst, std::abs(s.x - (d.x0 - s.t + ert)));
      worst = std::max(worst, std::abs(s.y - (d.y0 + ert)));
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("first integral vanishes on the chart") {
    for (double x0 : {-0.9, -0.4})
      for (double y0 : {-0.3, 0.0, 0.2}) {
        const ProfileState s = admissible_start(p, x0, y0);
        CHECK(std::abs(first_integral(p, s)) <= 1e-10 * std::exp(x0));
      }
  }
}

TEST_CASE("shoot: both known points land with vanishing mismatch") {
  const auto& K = known();
  const Params& p = K.p;
  const double t_max = default_t_max(p);

  const ShotResult page = shoot(p, K.x0_page, 0.0, t_max);
  REQUIRE(page.hit);
  const double T_page = 2.0 * std::log((1 - K.a_page) / (1 + K.a_page));
  CHECK(*page.T_hit == doctest::Approx(T_page).epsilon(1e-6));
  CHECK(std::abs(page.mismatch1) < 1e-6);
  CHECK(std::abs(page.mismatch2) < 1e-6);
  CHECK(page.terminated_by == Termination::phi_floor);

  const ShotResult cao = shoot(p, K.x0_cao, K.y0_cao, t_max);
  REQUIRE(cao.hit);
  CHECK(*cao.T_hit == doctest::Approx(K.T_cao).epsilon(1e-6));
  CHECK(std::abs(cao.mismatch1) < 1e-6);
  CHECK(std::abs(cao.mismatch2) < 1e-6);
  CHECK(cao.nontriviality < 1e-6);
  CHECK(cao.drift < 1e-7);
}

TEST_CASE("shoot: a strongly perturbed start misses or lands badly") {
  const auto& K = known();
  const ShotResult r = shoot(K.p, K.x0_page + 1.0, 0.0, default_t_max(K.p));
  const bool misses = !r.hit;
  const bool lands_badly = std::hypot(r.mismatch1, r.mismatch2) > 1e-2;
  CHECK((misses || lands_badly));
}

TEST_CASE("shoot: the y0 = 0 axis is exactly invariant") {
  const auto& K = known();
  const ShotResult r = shoot(K.p, K.x0_page + 0.13, 0.0, default_t_max(K.p));
  CHECK(r.mismatch2 == 0.0); // y and yd stay identically zero
}

TEST_CASE("shoot: determinism") {
  const auto& K = known();
  const ShotResult r1 = shoot(K.p, K.x0_cao + 0.05, K.y0_cao - 0.02, 3.0);
  const ShotResult r2 = shoot(K.p, K.x0_cao + 0.05, K.y0_cao - 0.02, 3.0);
  CHECK(r1.hit == r2.hit);
  CHECK(r1.mismatch1 == r2.mismatch1);
  CHECK(r1.mismatch2 == r2.mismatch2);
  CHECK(r1.drift == r2.drift);
  CHECK(r1.nontriviality == r2.nontriviality);
  CHECK(r1.T_hit.has_value() == r2.T_hit.has_value());
  if (r1.T_hit) CHECK(*r1.T_hit == *r2.T_hit);
}

TEST_CASE("scan: degenerate 2x2 grid keeps its fixed ordering") {
  const auto& K = known();
  ScanSpec spec;
  spec.x0_min = K.x0_cao - 0.05;
  spec.x0_max = K.x0_cao + 0.05;
  spec.y0_min = K.y0_cao - 0.05;
  spec.y0_max = K.y0_cao + 0.05;
  spec.x0_steps = 2;
  spec.y0_steps = 2;
  const ScanGrid g = scan(K.p, spec);
  REQUIRE(g.results.size() == 4);
  CHECK(g.results[0].x0 == spec.x0_min);
  CHECK(g.results[0].y0 == spec.y0_min);
  CHECK(g.results[1].x0 == spec.x0_min);
  CHECK(g.results[1].y0 == spec.y0_max);
  CHECK(g.results[2].x0 == spec.x0_max);
  CHECK(g.results[2].y0 == spec.y0_min);
  CHECK(g.results[3].x0 == spec.x0_max);
  CHECK(g.results[3].y0 == spec.y0_max);
}

TEST_CASE("scan: the y0 = 0 row bottoms out at the Einstein start") {
  const auto& K = known();
  ScanSpec spec;
  spec.x0_min = K.x0_page - 0.2;
  spec.x0_max = K.x0_page + 0.2;
  spec.x0_steps = 9; // odd: the Einstein x0 sits exactly on the middle node
  spec.y0_min = 0.0;
  spec.y0_max = 0.1;
  spec.y0_steps = 2;
  const ScanGrid g = scan(K.p, spec);
  std::size_t best = 0;
  double best_val = 1e300;
  for (std::size_t i = 0; i < spec.x0_steps; ++i) {
    const ShotResult& r = g.results[i * spec.y0_steps]; // the y0 = 0 column
    const double val = r.hit ? std::hypot(r.mismatch1, r.mismatch2) : 1e300;
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  CHECK(best == spec.x0_steps / 2);
}

TEST_CASE("refine: recovers the Koiso-Cao point from a 1% perturbation") {
  const auto& K = known();
  const RefineResult r =
      refine(K.p, K.x0_cao * 1.01, K.y0_cao * 0.99, 25);
  REQUIRE(r.converged);
  CHECK(r.iterations <= 25);
  CHECK(std::abs(r.x0 - K.x0_cao) < 1e-8);
  CHECK(std::abs(r.y0 - K.y0_cao) < 1e-8);
  CHECK(r.mismatch_norm < 1e-10);
  // the open-problem hook reports the sigma-fit score; a known root is never
  // flagged as a candidate
  CHECK(r.final_shot.nontriviality < 1e-6);
  CHECK_FALSE(r.candidate);
  // every hit passes the conservation gate
  CHECK(r.final_shot.drift < 1e-7);
}

TEST_CASE("refine: the Einstein seed keeps y0 pinned at zero") {
  const auto& K = known();
  const RefineResult r = refine(K.p, K.x0_page + 0.01, 0.0, 25);
  REQUIRE(r.converged);
  CHECK(r.y0 == 0.0); // bit-exact: the axis is a Newton invariant
  CHECK(std::abs(r.x0 - K.x0_page) < 1e-8);
}

TEST_CASE("refine: seeds whose shots never land report failure without throwing") {
  const auto& K = known();
  const RefineResult r = refine(K.p, K.x0_cao - 2.5, K.y0_cao - 1.0, 8);
  CHECK_FALSE(r.converged);
}
