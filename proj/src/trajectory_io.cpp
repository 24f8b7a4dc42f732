#include "soliton/trajectory_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace soliton::io {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw malformed_input_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw malformed_input_error("cannot open for reading: " + path);
  return is;
}

json metadata_json(const Trajectory& traj) {
  json meta;
  meta["m"] = traj.params.m;
  meta["k"] = traj.params.k;
  meta["branch"] = to_string(traj.branch);
  if (traj.a)
    meta["a"] = *traj.a;
  else
    meta["a"] = nullptr;
  meta["t_start"] = traj.t_start;
  meta["t_end"] = traj.t_end;
  return meta;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,xd,y,yd,phi,phid\n";
  for (const ProfileState& s : traj.samples) {
    os << fmt17(s.t) << ',' << fmt17(s.x) << ',' << fmt17(s.xd) << ',' << fmt17(s.y) << ','
       << fmt17(s.yd) << ',' << fmt17(s.phi) << ',' << fmt17(s.phid) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto os = open_out(path);
  write_trajectory_csv(os, traj);
}

Trajectory read_trajectory_csv(std::istream& is, const Params& params) {
  std::string line;
  if (!std::getline(is, line)) throw malformed_input_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,xd,y,yd,phi,phid")
    throw malformed_input_error("csv: unexpected header '" + line + "'");

  Trajectory traj;
  traj.params = params;
  traj.branch = Branch::external;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[7];
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t next = line.find(',', pos);
      const std::string tok =
          line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      try {
        std::size_t used = 0;
        v[i] = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw malformed_input_error("csv: bad number '" + tok + "'");
      }
      if (next == std::string::npos) {
        if (i != 6) throw malformed_input_error("csv: expected 7 fields, got fewer");
        pos = std::string::npos;
      } else {
        if (i == 6) throw malformed_input_error("csv: expected 7 fields, got more");
        pos = next + 1;
      }
    }
    traj.samples.push_back(ProfileState{v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  if (traj.samples.empty()) throw malformed_input_error("csv: no samples");
  try {
    finalize_times(traj);
  } catch (const std::invalid_argument& e) {
    throw malformed_input_error(std::string("csv: ") + e.what());
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path, const Params& params) {
  auto is = open_in(path);
  return read_trajectory_csv(is, params);
}

void write_trajectory_json(std::ostream& os, const Trajectory& traj,
                           const std::string& extra_json) {
  json doc;
  doc["metadata"] = metadata_json(traj);
  if (!extra_json.empty() && extra_json != "{}") {
    const json extra = json::parse(extra_json);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc["metadata"][it.key()] = it.value();
  }
  json rows = json::array();
  for (const ProfileState& s : traj.samples)
    rows.push_back(json::array({s.t, s.x, s.xd, s.y, s.yd, s.phi, s.phid}));
  doc["samples"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

void write_trajectory_json(const std::string& path, const Trajectory& traj,
                           const std::string& extra_json) {
  auto os = open_out(path);
  write_trajectory_json(os, traj, extra_json);
}

Trajectory read_trajectory_json(std::istream& is) {
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw malformed_input_error(std::string("json: ") + e.what());
  }
  try {
    Trajectory traj;
    const json& meta = doc.at("metadata");
    traj.params.m = meta.at("m").get<int>();
    traj.params.k = meta.at("k").get<int>();
    validate(traj.params);
    if (auto b = branch_from_string(meta.value("branch", "external"))) traj.branch = *b;
    if (meta.contains("a") && !meta["a"].is_null()) traj.a = meta["a"].get<double>();
    for (const json& row : doc.at("samples")) {
      if (!row.is_array() || row.size() != 7)
        throw malformed_input_error("json: sample rows must have 7 numbers");
      ProfileState s;
      s.t = row[0].get<double>();
      s.x = row[1].get<double>();
      s.xd = row[2].get<double>();
      s.y = row[3].get<double>();
      s.yd = row[4].get<double>();
      s.phi = row[5].get<double>();
      s.phid = row[6].get<double>();
      traj.samples.push_back(s);
    }
    if (traj.samples.empty()) throw malformed_input_error("json: no samples");
    finalize_times(traj);
    return traj;
  } catch (const malformed_input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw malformed_input_error(std::string("json: ") + e.what());
  }
}

Trajectory read_trajectory_json(const std::string& path) {
  auto is = open_in(path);
  return read_trajectory_json(is);
}

Trajectory read_trajectory_any(const std::string& path, const Params& fallback_params) {
  auto is = open_in(path);
  char c = 0;
  while (is.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  is.clear();
  is.seekg(0);
  if (c == '{') return read_trajectory_json(is);
  return read_trajectory_csv(is, fallback_params);
}

void write_residual_csv(std::ostream& os, const ResidualReport& rep) {
  os << "t,eq_xdd1,eq_xdd2,eq_xdd3,eq_int,drift\n";
  for (std::size_t i = 0; i < rep.t.size(); ++i)
    os << fmt17(rep.t[i]) << ',' << fmt17(rep.eq_xdd1[i]) << ',' << fmt17(rep.eq_xdd2[i])
       << ',' << fmt17(rep.eq_xdd3[i]) << ',' << fmt17(rep.eq_int[i]) << ','
       << fmt17(rep.drift[i]) << '\n';
}

void write_geometric_csv(std::ostream& os, const std::vector<GeometricSample>& rows) {
  os << "t,alpha,beta,sigma,f,scal,lap_kappa,grad_kappa_sq\n";
  for (const GeometricSample& g : rows)
    os << fmt17(g.t) << ',' << fmt17(g.alpha) << ',' << fmt17(g.beta) << ',' << fmt17(g.sigma)
       << ',' << fmt17(g.f) << ',' << fmt17(g.scal) << ',' << fmt17(g.lap_kappa) << ','
       << fmt17(g.grad_kappa_sq) << '\n';
}

void write_soliton_residual_csv(std::ostream& os,
                                const std::vector<SolitonResidualSample>& rows) {
  os << "t,r_nfz,r_med,r_eyd\n";
  for (const SolitonResidualSample& r : rows)
    os << fmt17(r.t) << ',' << fmt17(r.r_nfz) << ',' << fmt17(r.r_med) << ','
       << fmt17(r.r_eyd) << '\n';
}

void write_radial_csv(std::ostream& os, const std::vector<RadialSample>& rows) {
  os << "r,t\n";
  for (const RadialSample& s : rows) os << fmt17(s.r) << ',' << fmt17(s.t) << '\n';
}

void write_scan_csv(std::ostream& os, const ScanGrid& grid) {
  os << "x0,y0,hit,T_hit,mismatch1,mismatch2,drift,nontriviality,terminated_by\n";
  for (const ShotResult& r : grid.results) {
    os << fmt17(r.x0) << ',' << fmt17(r.y0) << ',' << (r.hit ? 1 : 0) << ','
       << (r.T_hit ? fmt17(*r.T_hit) : "nan") << ',' << fmt17(r.mismatch1) << ','
       << fmt17(r.mismatch2) << ',' << fmt17(r.drift) << ',' << fmt17(r.nontriviality) << ','
       << to_string(r.terminated_by) << '\n';
  }
}

} // namespace soliton::io
