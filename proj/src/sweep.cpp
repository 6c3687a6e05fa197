#include "qtm/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qtm/errors.hpp"
#include "qtm/parallel.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

std::string fmt_g(double v, int sig) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct PairHC {
  ThermalPair hot;
  ThermalPair cold;
};

}  // namespace

SweepGrid mode_diagram(double t_hot, double t_cold, int steps, double eta_strain,
                       int grid_m, StatisticsMode stat, int threads) {
  if (!(t_hot > t_cold) || !(t_cold > 0.0)) {
    throw config_error("mode diagram requires t_hot > t_cold > 0");
  }
  if (steps < 2) throw config_error("sweep needs steps >= 2");

  SweepGrid g;
  g.axis1 = {"theta1", kThetaLieb, kThetaKagome, steps};
  g.axis2 = {"theta2", kThetaLieb, kThetaKagome, steps};
  g.header_lines = {"# qtm-grid v1",
                    "# sweep=mode-diagram th=" + fmt_g(t_hot) + " tc=" + fmt_g(t_cold) +
                        " eta=" + fmt_g(eta_strain) + " grid=" + std::to_string(grid_m) +
                        " statistics=" + statistics_name(stat)};

  std::vector<PairHC> pts(steps);
  parallel_for(steps, threads, [&](int i) {
    const BandSpectrum s = compute_spectrum({g.axis1.value(i), eta_strain}, grid_m);
    const ThermalPoint h = thermal_point(s, t_hot, stat);
    const ThermalPoint c = thermal_point(s, t_cold, stat);
    pts[i] = {{h.ln_z, h.internal_energy}, {c.ln_z, c.internal_energy}};
  });

  g.cells.resize(static_cast<std::size_t>(steps) * steps);
  parallel_for(steps, threads, [&](int i) {
    for (int j = 0; j < steps; ++j) {
      SweepCell& cell = g.cells[static_cast<std::size_t>(i) * steps + j];
      cell.coord1 = g.axis1.value(i);
      cell.coord2 = g.axis2.value(j);
      cell.r = assemble_cycle(pts[i].hot, pts[j].hot, pts[i].cold, pts[j].cold,
                              t_hot, t_cold);
    }
  });
  return g;
}

SweepGrid temp_map(double theta1, double theta2, double t_min, double t_max, int steps,
                   double eta_strain, int grid_m, StatisticsMode stat, int threads) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw config_error("temp map needs t_max > t_min > 0");
  if (steps < 2) throw config_error("sweep needs steps >= 2");

  SweepGrid g;
  g.axis1 = {"th", t_min, t_max, steps};
  g.axis2 = {"tc", t_min, t_max, steps};
  g.header_lines = {"# qtm-grid v1",
                    "# sweep=temp-map theta1=" + fmt_g(theta1) + " theta2=" + fmt_g(theta2) +
                        " eta=" + fmt_g(eta_strain) + " grid=" + std::to_string(grid_m) +
                        " statistics=" + statistics_name(stat)};

  const BandSpectrum s1 = compute_spectrum({theta1, eta_strain}, grid_m);
  const BandSpectrum s2 = compute_spectrum({theta2, eta_strain}, grid_m);
  std::vector<ThermalPair> p1(steps), p2(steps);
  parallel_for(steps, threads, [&](int i) {
    const double t = g.axis1.value(i);
    const ThermalPoint a = thermal_point(s1, t, stat);
    const ThermalPoint b = thermal_point(s2, t, stat);
    p1[i] = {a.ln_z, a.internal_energy};
    p2[i] = {b.ln_z, b.internal_energy};
  });

  g.cells.resize(static_cast<std::size_t>(steps) * steps);
  parallel_for(steps, threads, [&](int i) {
    for (int j = 0; j < steps; ++j) {
      SweepCell& cell = g.cells[static_cast<std::size_t>(i) * steps + j];
      const double th = g.axis1.value(i);
      const double tc = g.axis2.value(j);
      cell.coord1 = th;
      cell.coord2 = tc;
      if (tc > th) {
        cell.r.mode = OperatingMode::invalid;
        cell.r.q_hot = cell.r.q_cold = cell.r.work = kNan;
        cell.r.performance = kNan;
        continue;
      }
      cell.r = assemble_cycle(p1[i], p2[i], p1[j], p2[j], th, tc);
    }
  });
  return g;
}

std::vector<USweepPoint> u_sweep(const CycleSpec& spec, const std::vector<double>& u_values,
                                 const McSettings& mc, int threads) {
  validate(spec);
  if (u_values.empty()) throw config_error("u sweep needs at least one u value");
  const int nu = static_cast<int>(u_values.size());

  const std::vector<double> t_grid = build_t_grid(mc.t_max, mc.t_points,
                                                  {spec.t_hot, spec.t_cold});
  auto index_of = [&](double t) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (std::abs(t_grid[i] - t) < 1e-12) return static_cast<int>(i);
    }
    throw invariant_violation("bath temperature missing from grid");
  };
  const int idx_hot = index_of(spec.t_hot);
  const int idx_cold = index_of(spec.t_cold);

  const LatticeGeometry g1 = build_geometry(mc.l, {spec.theta1, spec.eta_strain});
  const LatticeGeometry g2 = build_geometry(mc.l, {spec.theta2, spec.eta_strain});
  const double t_tune = 0.5 * (spec.t_hot + spec.t_cold);

  // One parallel unit per (u, theta) chain; seeds and outputs are indexed, so
  // the result is independent of scheduling.
  std::vector<std::vector<InteractingPoint>> chains(static_cast<std::size_t>(nu) * 2);
  std::vector<double> mus(static_cast<std::size_t>(nu) * 2, 0.0);
  parallel_for(nu * 2, threads, [&](int unit) {
    const int ui = unit / 2;
    const int side = unit % 2;
    const LatticeGeometry& geom = side == 0 ? g1 : g2;
    const StrainParams strain{side == 0 ? spec.theta1 : spec.theta2, spec.eta_strain};
    const double u = u_values[ui];
    const std::uint64_t unit_seed = derive_seed(mc.seed, 7919 * ui + side);
    mus[unit] = resolve_mu(strain, u, t_tune, mc, unit_seed);
    chains[unit] = interacting_thermo(geom, mc, u, mus[unit], t_grid,
                                      derive_seed(unit_seed, 1));
  });

  std::vector<USweepPoint> rows(nu);
  for (int ui = 0; ui < nu; ++ui) {
    rows[ui].u = u_values[ui];
    rows[ui].res = combine_interacting_cycle(chains[2 * ui], chains[2 * ui + 1], t_grid,
                                             idx_hot, idx_cold, mc.quenched_lnz);
    rows[ui].res.mu_theta1 = mus[2 * ui];
    rows[ui].res.mu_theta2 = mus[2 * ui + 1];
    rows[ui].res.chain_theta1 = std::move(chains[2 * ui]);
    rows[ui].res.chain_theta2 = std::move(chains[2 * ui + 1]);
  }
  return rows;
}

SweepGrid interacting_mode_diagram(double theta1, double theta2, double u,
                                   double t_min, double t_max, int steps,
                                   double eta_strain, const McSettings& mc, int threads) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw config_error("temp grid needs t_max > t_min > 0");
  if (steps < 2) throw config_error("sweep needs steps >= 2");
  if (u < 0.0) throw config_error("u must be non-negative");

  SweepGrid g;
  g.axis1 = {"th", t_min, t_max, steps};
  g.axis2 = {"tc", t_min, t_max, steps};
  g.header_lines = {"# qtm-grid v1",
                    "# sweep=interacting-mode-diagram theta1=" + fmt_g(theta1) +
                        " theta2=" + fmt_g(theta2) + " u=" + fmt_g(u) +
                        " eta=" + fmt_g(eta_strain) + " l=" + std::to_string(mc.l) +
                        " seed=" + std::to_string(mc.seed)};

  std::vector<double> targets(steps);
  for (int i = 0; i < steps; ++i) targets[i] = g.axis1.value(i);
  const std::vector<double> t_grid = build_t_grid(mc.t_max, mc.t_points, targets);
  auto index_of = [&](double t) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (std::abs(t_grid[i] - t) < 1e-12) return static_cast<int>(i);
    }
    throw invariant_violation("axis temperature missing from grid");
  };

  const LatticeGeometry g1 = build_geometry(mc.l, {theta1, eta_strain});
  const LatticeGeometry g2 = build_geometry(mc.l, {theta2, eta_strain});
  const double t_tune = 0.5 * (t_min + t_max);
  std::vector<std::vector<InteractingPoint>> chains(2);
  std::vector<double> mus(2, 0.0);
  parallel_for(2, threads, [&](int side) {
    const LatticeGeometry& geom = side == 0 ? g1 : g2;
    const StrainParams strain{side == 0 ? theta1 : theta2, eta_strain};
    const std::uint64_t unit_seed = derive_seed(mc.seed, 31 + side);
    mus[side] = resolve_mu(strain, u, t_tune, mc, unit_seed);
    chains[side] = interacting_thermo(geom, mc, u, mus[side], t_grid,
                                      derive_seed(unit_seed, 1));
  });

  g.cells.resize(static_cast<std::size_t>(steps) * steps);
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      SweepCell& cell = g.cells[static_cast<std::size_t>(i) * steps + j];
      const double th = g.axis1.value(i);
      const double tc = g.axis2.value(j);
      cell.coord1 = th;
      cell.coord2 = tc;
      if (tc > th) {
        cell.r.mode = OperatingMode::invalid;
        cell.r.q_hot = cell.r.q_cold = cell.r.work = kNan;
        cell.r.performance = kNan;
        continue;
      }
      const InteractingCycleResult res = combine_interacting_cycle(
          chains[0], chains[1], t_grid, index_of(th), index_of(tc), mc.quenched_lnz);
      cell.r = res.cycle;
      cell.has_err = true;
      cell.err_q_hot = res.sigma_q_hot;
      cell.err_q_cold = res.sigma_q_cold;
      cell.err_work = res.sigma_work;
      cell.err_performance = res.sigma_performance;
    }
  }
  return g;
}

void write_grid_csv(std::ostream& os, const SweepGrid& g) {
  for (const auto& line : g.header_lines) os << line << "\n";
  const bool with_err = !g.cells.empty() && g.cells.front().has_err;
  os << g.axis1.name << "," << g.axis2.name << ",q_hot,q_cold,work,mode,performance";
  if (with_err) os << ",stderr_q_hot,stderr_q_cold,stderr_work,stderr_performance";
  os << "\n";
  for (const SweepCell& c : g.cells) {
    os << fmt_g(c.coord1) << "," << fmt_g(c.coord2) << "," << fmt_g(c.r.q_hot) << ","
       << fmt_g(c.r.q_cold) << "," << fmt_g(c.r.work) << "," << mode_name(c.r.mode) << ","
       << fmt_g(c.r.performance);
    if (with_err) {
      os << "," << fmt_g(c.err_q_hot) << "," << fmt_g(c.err_q_cold) << ","
         << fmt_g(c.err_work) << "," << fmt_g(c.err_performance);
    }
    os << "\n";
  }
}

void write_u_sweep_csv(std::ostream& os, const std::vector<USweepPoint>& rows,
                       const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) os << line << "\n";
  os << "u,q_hot,q_cold,work,mode,efficiency,stderr_efficiency,performance,stderr_performance\n";
  for (const USweepPoint& p : rows) {
    const CycleResult& r = p.res.cycle;
    double eff = kNan;
    double eff_err = kNan;
    if (r.mode == OperatingMode::engine) {
      eff = engine_efficiency(r.q_hot, r.work);
      // sigma_performance is sigma_eta / eta_max.
      const double eta_max = r.performance > 0.0 ? eff / r.performance : kNan;
      eff_err = p.res.sigma_performance * eta_max;
    }
    os << fmt_g(p.u) << "," << fmt_g(r.q_hot) << "," << fmt_g(r.q_cold) << ","
       << fmt_g(r.work) << "," << mode_name(r.mode) << "," << fmt_g(eff) << ","
       << fmt_g(eff_err) << "," << fmt_g(r.performance) << ","
       << fmt_g(p.res.sigma_performance) << "\n";
  }
}

}  // namespace qtm
