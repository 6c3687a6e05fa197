#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtm/interacting.hpp"
#include "qtm/stirling.hpp"

namespace qtm {

struct AxisSpec {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  double value(int i) const { return lo + (hi - lo) * i / (steps - 1); }
};

struct SweepCell {
  double coord1 = 0.0;
  double coord2 = 0.0;
  CycleResult r;
  bool has_err = false;
  double err_q_hot = 0.0;
  double err_q_cold = 0.0;
  double err_work = 0.0;
  double err_performance = 0.0;
};

/// Rectangular sweep result; cells stored axis1-major. header_lines carry the
/// deterministic '# key=value' provenance written to CSV.
struct SweepGrid {
  AxisSpec axis1;
  AxisSpec axis2;
  std::vector<SweepCell> cells;
  std::vector<std::string> header_lines;

  const SweepCell& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * axis2.steps + j]; }
};

/// Fig.-3-style map over (theta1, theta2) at fixed bath temperatures.
SweepGrid mode_diagram(double t_hot, double t_cold, int steps, double eta_strain,
                       int grid_m, StatisticsMode stat, int threads);

/// Map over (T_hot, T_cold) at fixed strain pair; cells with T_c > T_h are
/// emitted with mode=invalid.
SweepGrid temp_map(double theta1, double theta2, double t_min, double t_max, int steps,
                   double eta_strain, int grid_m, StatisticsMode stat, int threads);

struct USweepPoint {
  double u = 0.0;
  InteractingCycleResult res;
};

/// Interacting cycle efficiency versus Hubbard u at fixed strain pair and
/// baths. Chains for all (u, theta) pairs run as independent parallel units.
std::vector<USweepPoint> u_sweep(const CycleSpec& spec, const std::vector<double>& u_values,
                                 const McSettings& mc, int threads);

/// Interacting analogue of temp_map at one Hubbard u: one descending chain
/// per theta covers every axis temperature.
SweepGrid interacting_mode_diagram(double theta1, double theta2, double u,
                                   double t_min, double t_max, int steps,
                                   double eta_strain, const McSettings& mc, int threads);

void write_grid_csv(std::ostream& os, const SweepGrid& g);
void write_u_sweep_csv(std::ostream& os, const std::vector<USweepPoint>& rows,
                       const std::vector<std::string>& header_lines);

/// %.{sig}g formatting; NaN prints as "nan". Used for all CSV emission so
/// reruns are byte-identical.
std::string fmt_g(double v, int sig = 10);

}  // namespace qtm
