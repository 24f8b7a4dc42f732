#include "soliton/cli.hpp"

#include "soliton/einstein_branch.hpp"
#include "soliton/explorer.hpp"
#include "soliton/geometry_residuals.hpp"
#include "soliton/ode_core.hpp"
#include "soliton/soliton_branch.hpp"
#include "soliton/trajectory_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace soliton::cli {

namespace {

using nlohmann::json;

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("SOLITON_LOG");
  if (!env) return LogLevel::info;
  const std::string v = env;
  if (v == "quiet") return LogLevel::quiet;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[soliton] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[soliton:debug] " << msg << '\n';
}

constexpr int kExitOk = 0;
constexpr int kExitNoBracket = 2;
constexpr int kExitResidual = 3;
constexpr int kExitUsage = 64;
constexpr int kExitBadInput = 65;
constexpr int kExitInternal = 70;

json config_json(const Params& p) {
  return json{{"m", p.m},
              {"k", p.k},
              {"rel_tol", p.rel_tol},
              {"abs_tol", p.abs_tol},
              {"start_offset", p.start_offset},
              {"phi_floor", p.phi_floor},
              {"overflow_guard", p.overflow_guard}};
}

json residual_json(const ResidualReport& rep) {
  return json{{"sup_xdd1", rep.sup_xdd1},
              {"sup_xdd2", rep.sup_xdd2},
              {"sup_xdd3", rep.sup_xdd3},
              {"sup_int", rep.sup_int},
              {"sup_drift", rep.sup_drift}};
}

bool residual_gate(const ResidualReport& rep, double tol) {
  return rep.sup_xdd1 < tol && rep.sup_xdd2 < tol && rep.sup_xdd3 < tol && rep.sup_int < tol;
}

void write_outputs(const std::string& out, const std::string& format, const Trajectory& traj,
                   const ResidualReport& rep, const json& meta) {
  if (out.empty()) return;
  if (format == "json") {
    io::write_trajectory_json(out, traj, meta.dump());
    log_info("wrote " + out);
  } else {
    io::write_trajectory_csv(out, traj);
    std::ofstream ms(out + ".meta.json");
    ms << meta.dump(1) << '\n';
    log_info("wrote " + out + " and " + out + ".meta.json");
  }
  std::ofstream rs(out + ".residuals.csv");
  io::write_residual_csv(rs, rep);
}

struct CommonOpts {
  int m = 2;
  int k = 1;
  std::size_t samples = 1001;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
  cmd->add_option("--m", o.m, "complex dimension m (m > k > 0)");
  cmd->add_option("--k", o.k, "twist k");
  cmd->add_option("--samples", o.samples, "trajectory sample count");
  cmd->add_option("--out", o.out, "output file base path");
  if (with_format)
    cmd->add_option("--format", o.format, "trajectory format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_page(const CommonOpts& o) {
  Params p;
  try {
    p = make_params(o.m, o.k);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  double a;
  try {
    a = solve_page_parameter(p);
  } catch (const no_bracket_error& e) {
    std::cerr << "no bracket: " << e.what() << '\n';
    return kExitNoBracket;
  }
  log_debug("page parameter a = " + std::to_string(a));
  PageSolution sol;
  try {
    sol = build_page_profile(p, a, o.samples);
  } catch (const invalid_root_error& e) {
    std::cerr << "invalid root: " << e.what() << '\n';
    return kExitResidual;
  }
  const ResidualReport rep = residual_report(p, sol.trajectory);

  json meta;
  meta["a"] = sol.a;
  meta["T"] = sol.T;
  meta["P_residual"] = sol.p_residual;
  meta["residuals"] = residual_json(rep);
  meta["config"] = config_json(p);
  meta["samples"] = o.samples;
  std::cout << meta.dump(1) << '\n';
  write_outputs(o.out, o.format, sol.trajectory, rep, meta);
  return residual_gate(rep, 1e-7) && rep.sup_drift < 1e-7 ? kExitOk : kExitResidual;
}

int cmd_cao(const CommonOpts& o, const std::string& objective) {
  Params p;
  try {
    p = make_params(o.m, o.k);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  const CaoObjective obj =
      objective == "paper_S" ? CaoObjective::paper_S : CaoObjective::quadrature_J;
  double a;
  try {
    a = solve_cao_parameter(p, obj);
  } catch (const no_bracket_error& e) {
    std::cerr << "no bracket: " << e.what() << '\n';
    return kExitNoBracket;
  }
  log_debug("cao parameter a = " + std::to_string(a) + " via " + to_string(obj));

  bool boundary_ok = true;
  std::string boundary_msg;
  CaoSolution sol;
  try {
    sol = build_cao_profile(p, a, o.samples);
  } catch (const invalid_root_error& e) {
    // record the outcome instead of hiding it: rebuild without the gate
    boundary_ok = false;
    boundary_msg = e.what();
    sol = build_cao_profile_unchecked(p, a, o.samples);
  }
  const ResidualReport rep = residual_report(p, sol.trajectory);

  sol.objective_used = obj;
  json meta;
  meta["a"] = sol.a;
  meta["T"] = sol.T;
  meta["objective"] = to_string(sol.objective_used);
  meta["J_residual"] = sol.j_residual;
  meta["S_residual"] = sol.s_residual;
  meta["phi_T"] = sol.trajectory.back().phi;
  meta["boundary_ok"] = boundary_ok;
  if (!boundary_ok) meta["boundary_failure"] = boundary_msg;
  meta["residuals"] = residual_json(rep);
  meta["config"] = config_json(p);
  meta["samples"] = o.samples;
  std::cout << meta.dump(1) << '\n';
  write_outputs(o.out, o.format, sol.trajectory, rep, meta);
  const bool pass = boundary_ok && residual_gate(rep, 1e-7) && rep.sup_drift < 1e-7;
  return pass ? kExitOk : kExitResidual;
}

int cmd_verify(const std::string& file, const CommonOpts& o) {
  Params p = make_params(o.m, o.k);
  const Trajectory traj = io::read_trajectory_any(file, p);
  const ResidualReport rep = residual_report(traj.params, traj);
  json out;
  out["file"] = file;
  out["residuals"] = residual_json(rep);
  out["config"] = config_json(traj.params);
  std::cout << out.dump(1) << '\n';
  return residual_gate(rep, 1e-6) ? kExitOk : kExitResidual;
}

int cmd_classify(const std::string& file, const CommonOpts& o) {
  Params p = make_params(o.m, o.k);
  const Trajectory traj = io::read_trajectory_any(file, p);
  const CaseTag tag = classify_case(traj.params, traj);
  json out;
  out["file"] = file;
  out["case"] = to_string(tag.kind);
  out["q0"] = tag.q0;
  out["q1"] = tag.q1;
  out["sup_dev"] = tag.sup_dev;
  out["eta1_sup"] = tag.eta1_sup;
  out["eta2_sup"] = tag.eta2_sup;
  std::cout << out.dump(1) << '\n';
  return kExitOk;
}

int cmd_invert(const std::string& file, const CommonOpts& o) {
  Params p = make_params(o.m, o.k);
  const Trajectory traj = io::read_trajectory_any(file, p);
  const Trajectory inv = invert_profile(traj);
  if (o.out.empty()) {
    io::write_trajectory_csv(std::cout, inv);
  } else if (o.format == "json") {
    io::write_trajectory_json(o.out, inv);
    log_info("wrote " + o.out);
  } else {
    io::write_trajectory_csv(o.out, inv);
    log_info("wrote " + o.out);
  }
  return kExitOk;
}

int cmd_radial(const std::string& file, const CommonOpts& o, double r_min, double r_max,
               std::size_t points) {
  Params p = make_params(o.m, o.k);
  const Trajectory traj = io::read_trajectory_any(file, p);
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 2) {
    std::cerr << "usage error: need 0 < r-min < r-max and points >= 2\n";
    return kExitUsage;
  }
  std::vector<double> r(points);
  const double lo = std::log(r_min), hi = std::log(r_max);
  for (std::size_t i = 0; i < points; ++i)
    r[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  const auto rows = radial_profile(traj.params, traj, r);
  if (o.out.empty()) {
    io::write_radial_csv(std::cout, rows);
  } else {
    std::ofstream os(o.out);
    io::write_radial_csv(os, rows);
    log_info("wrote " + o.out);
  }
  return kExitOk;
}

int cmd_shoot(const CommonOpts& o, double x0, double y0, double t_max) {
  Params p;
  try {
    p = make_params(o.m, o.k);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!(t_max > 0.0)) t_max = default_t_max(p);
  const ShotResult r = shoot(p, x0, y0, t_max);
  json out;
  out["x0"] = r.x0;
  out["y0"] = r.y0;
  out["hit"] = r.hit;
  if (r.T_hit)
    out["T_hit"] = *r.T_hit;
  else
    out["T_hit"] = nullptr;
  out["mismatch1"] = r.mismatch1;
  out["mismatch2"] = r.mismatch2;
  out["drift"] = r.drift;
  out["nontriviality"] = r.nontriviality;
  out["terminated_by"] = to_string(r.terminated_by);
  out["t_max"] = t_max;
  out["config"] = config_json(p);
  std::cout << out.dump(1) << '\n';
  return kExitOk;
}

int cmd_scan(const CommonOpts& o, const ScanSpec& spec) {
  Params p;
  try {
    p = make_params(o.m, o.k);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  const ScanGrid grid = scan(p, spec);
  if (o.out.empty()) {
    io::write_scan_csv(std::cout, grid);
  } else {
    std::ofstream os(o.out);
    io::write_scan_csv(os, grid);
    log_info("wrote " + o.out);
  }
  std::size_t hits = 0;
  for (const auto& r : grid.results) hits += r.hit ? 1 : 0;
  log_info("scan: " + std::to_string(hits) + "/" + std::to_string(grid.results.size()) +
           " nodes hit the phi floor");
  return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Profile solutions of the Ricci-soliton boundary problem: "
               "construct, verify, invert, and search"};
  app.require_subcommand(1);

  CommonOpts page_o, cao_o, verify_o, classify_o, invert_o, radial_o, shoot_o, scan_o;
  std::string cao_objective = "quadrature_J";
  std::string verify_file, classify_file, invert_file, radial_file;
  double r_min = 1e-6, r_max = 1e6;
  std::size_t r_points = 2001;
  double sx0 = 0.0, sy0 = 0.0, st_max = 0.0;
  ScanSpec spec;

  CLI::App* page = app.add_subcommand("page", "Einstein family profile (y == 0)");
  add_common(page, page_o);

  CLI::App* cao = app.add_subcommand("cao", "Koiso-Cao family profile (constant sigma)");
  add_common(cao, cao_o);
  cao->add_option("--objective", cao_objective, "root objective: quadrature_J or paper_S")
      ->check(CLI::IsMember({"quadrature_J", "paper_S"}));

  CLI::App* verify = app.add_subcommand("verify", "residual-check a trajectory file");
  verify->add_option("file", verify_file, "trajectory CSV/JSON")->required();
  add_common(verify, verify_o, false);

  CLI::App* classify = app.add_subcommand("classify", "case-classify a trajectory file");
  classify->add_option("file", classify_file, "trajectory CSV/JSON")->required();
  add_common(classify, classify_o, false);

  CLI::App* invert = app.add_subcommand("invert", "apply the t -> T - t substitution");
  invert->add_option("file", invert_file, "trajectory CSV/JSON")->required();
  add_common(invert, invert_o);

  CLI::App* radial = app.add_subcommand("radial", "radial reparameterization t(r)");
  radial->add_option("file", radial_file, "trajectory CSV/JSON")->required();
  add_common(radial, radial_o, false);
  radial->add_option("--r-min", r_min, "smallest fibre norm");
  radial->add_option("--r-max", r_max, "largest fibre norm");
  radial->add_option("--points", r_points, "log-spaced node count");

  CLI::App* shootc = app.add_subcommand("shoot", "one forward shoot from (x0, y0)");
  add_common(shootc, shoot_o, false);
  shootc->add_option("--x0", sx0, "start x0")->required();
  shootc->add_option("--y0", sy0, "start y0")->required();
  shootc->add_option("--t-max", st_max, "integration horizon (default 10 log((m+k)/(m-k)))");

  CLI::App* scanc = app.add_subcommand("scan", "grid scan of the admissible chart");
  add_common(scanc, scan_o, false);
  scanc->add_option("--x0-min", spec.x0_min)->required();
  scanc->add_option("--x0-max", spec.x0_max)->required();
  scanc->add_option("--x0-steps", spec.x0_steps)->required();
  scanc->add_option("--y0-min", spec.y0_min)->required();
  scanc->add_option("--y0-max", spec.y0_max)->required();
  scanc->add_option("--y0-steps", spec.y0_steps)->required();
  scanc->add_option("--t-max", spec.t_max, "integration horizon per shot");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { // --help
      app.exit(e);
      return kExitOk;
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (page->parsed()) return cmd_page(page_o);
    if (cao->parsed()) return cmd_cao(cao_o, cao_objective);
    if (verify->parsed()) return cmd_verify(verify_file, verify_o);
    if (classify->parsed()) return cmd_classify(classify_file, classify_o);
    if (invert->parsed()) return cmd_invert(invert_file, invert_o);
    if (radial->parsed()) return cmd_radial(radial_file, radial_o, r_min, r_max, r_points);
    if (shootc->parsed()) return cmd_shoot(shoot_o, sx0, sy0, st_max);
    if (scanc->parsed()) return cmd_scan(scan_o, spec);
  } catch (const malformed_input_error& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const no_bracket_error& e) {
    std::cerr << "no bracket: " << e.what() << '\n';
    return kExitNoBracket;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

} // namespace soliton::cli
