#pragma once

// Run configuration: a flat "key = value" text file. Blank lines and lines
// starting with '#' are ignored; unknown keys, repeated keys and values
// that fail to parse are rejected with ConfigError. Lists are
// comma-separated.

#include <stdexcept>
#include <string>
#include <vector>

namespace wcl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // Geometry.
  int n = 2;
  double T = 1.0;
  double epsilon = 0.1;
  double delta = 0.3;
  double rho_tube = 0.2;
  double rho_cut = 0.35;
  double g_cap = 10.0;

  // Formula and Legendrian grids: grid x grid in (u, x2), t_samples in t.
  int identity_grid = 101;
  int identity_t_samples = 11;

  // Isotopy transport.
  double transport_t = 0.5;
  std::vector<double> transport_steps{0.02, 0.01, 0.005};
  int transport_grid = 21;

  // Push to infinity.
  int cutoff_samples = 1000;

  // Traced cobordism.
  double trace_T = 0.2;
  double T_band = 0.55;
  int mesh_resolution = 17;
  int v_resolution = 129;
  double v_min = -0.8;
  double v_max = 0.8;
  double a_min = -0.04;
  double a_max = 0.04;
  double b_min = 0.7;
  double b_max = 1.1;
  double trace_step = 5e-3;

  // Tolerances.
  double tol_identity = 1e-10;
  double tol_inversion = 1e-8;
  double tol_legendrian = 1e-10;
  double tol_singular = 1e-6;
  double tol_isotropy = 1e-14;
  double tol_lambda = 1e-5;
  double tol_fd = 1e-5;
  double tol_end_variance = 1e-6;
  double tol_ends = 1e-4;
  double min_order = 1.8;
  double max_order = 2.2;
  double control_margin = 1e3;

  // Figures.
  std::vector<double> render_t{-1.0, 0.0, 0.5, 1.0};
  std::vector<std::string> render_projections{"x1z", "x2z", "ux2"};
  int render_resolution = 400;

  // Sweeps.
  std::string sweep_parameter = "g_cap";
  std::vector<double> sweep_values{5.0, 10.0, 20.0};

  // Run.
  std::string out_dir = "wcl_out";
  unsigned seed = 1;
  // 0 means the number of available cores.
  int jobs = 0;
  bool negative_control = false;

  // Assigns one key; ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // Tolerance override "name=value"; name may omit the "tol_" prefix.
  void override_tolerance(const std::string& assignment);
  // ConfigError when a downstream range constraint fails.
  void validate() const;
  int effective_jobs() const;

  static std::vector<std::string> keys();
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  // Every key in keys() order; parse(serialize()) reproduces the config.
  std::string serialize() const;
};

}  // namespace wcl
