#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soliton {

/// Problem parameters: the integer pair (m,k) with m > k > 0 plus the
/// numeric knobs every routine shares.
struct Params {
  int m = 2;              // complex dimension, >= 2
  int k = 1;              // twist, 1 <= k < m
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double start_offset = 1e-4;   // epsilon for the singular series launch
  double phi_floor = 1e-12;     // |phi| below this counts as the singular set
  double overflow_guard = 1e12; // terminate integration past this magnitude
};

/// Throws std::invalid_argument unless m > k > 0 and the tolerances are sane.
void validate(const Params& p);

inline Params make_params(int m, int k) {
  Params p;
  p.m = m;
  p.k = k;
  validate(p);
  return p;
}

/// One point of the unknown curve: values and first derivatives of (x, y, phi).
struct ProfileState {
  double t = 0.0;
  double x = 0.0;
  double xd = 0.0;
  double y = 0.0;
  double yd = 0.0;
  double phi = 0.0;
  double phid = 0.0;
};

/// Derivative record returned by the right-hand side evaluation.
struct Derivatives {
  double xd = 0.0;
  double xdd = 0.0;
  double yd = 0.0;
  double ydd = 0.0;
  double phid = 0.0;
  double phidd = 0.0;
};

enum class Branch { einstein, koiso_cao, inverted, shot, external };

const char* to_string(Branch b);
std::optional<Branch> branch_from_string(const std::string& s);

/// An ordered sampling of ProfileStates on [t_start, t_end].
/// Immutable by convention once built; all readers may share it freely.
struct Trajectory {
  Params params;
  std::vector<ProfileState> samples; // strictly increasing t
  double t_start = 0.0;
  double t_end = 0.0;
  Branch branch = Branch::external;
  std::optional<double> a; // family parameter, when one applies

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const ProfileState& front() const { return samples.front(); }
  const ProfileState& back() const { return samples.back(); }
};

/// Sets t_start/t_end from the samples and checks strict monotonicity.
void finalize_times(Trajectory& traj);

// Error taxonomy. Contract violations surface as these; recoverable
// outcomes (early integration termination, refine failure) are encoded
// in result structs instead.
struct singular_phi_error : std::runtime_error {
  explicit singular_phi_error(const std::string& what) : std::runtime_error(what) {}
};
struct step_failure_error : std::runtime_error {
  explicit step_failure_error(const std::string& what) : std::runtime_error(what) {}
};
struct no_bracket_error : std::runtime_error {
  explicit no_bracket_error(const std::string& what) : std::runtime_error(what) {}
};
struct invalid_root_error : std::runtime_error {
  explicit invalid_root_error(const std::string& what) : std::runtime_error(what) {}
};
struct malformed_input_error : std::runtime_error {
  explicit malformed_input_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace soliton
