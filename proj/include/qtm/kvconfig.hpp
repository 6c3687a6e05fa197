#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace qtm {

/// Configuration of the `spa-run` subcommand, read from a flat key=value file.
/// Required keys: l, theta, eta, u, t_list, n_therm, n_meas, cluster_l, seed,
/// out_dir. Optional: mu (default: tune to half filling), move_width, m_cap,
/// measure_every, anneal, gamma_dos, quenched_lnz, t_max.
struct SpaRunConfig {
  int l = 8;
  double theta = 0.0;
  double eta = 8.0;
  double u = 0.0;
  std::vector<double> t_list;
  int n_therm = 100;
  int n_meas = 100;
  int cluster_l = 4;
  std::uint64_t seed = 1;
  std::string out_dir;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double move_width = 1.0;
  double m_cap = 4.0;
  int measure_every = 1;
  bool anneal = false;
  double gamma_dos = 0.05;
  bool quenched_lnz = false;
  double t_max = 2.0;
};

/// Parses `key=value` lines; '#' starts a comment, blank lines are ignored.
/// Unknown or duplicate keys and malformed values raise config_error.
SpaRunConfig parse_spa_run_config(const std::string& path);
SpaRunConfig parse_spa_run_text(const std::string& text);

}  // namespace qtm
