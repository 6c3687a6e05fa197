// Command-line front end: band structure, thermodynamics, Stirling cycles,
// and Monte Carlo parameter sweeps as CSV/JSON emitters.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "qtm/errors.hpp"
#include "qtm/interacting.hpp"
#include "qtm/kvconfig.hpp"
#include "qtm/sweep.hpp"

namespace {

using nlohmann::json;

double parse_theta(const std::string& s) {
  if (s == "lieb") return qtm::kThetaLieb;
  if (s == "kagome") return qtm::kThetaKagome;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw qtm::config_error("cannot parse angle '" + s + "' (number in radians, 'lieb', or 'kagome')");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw qtm::config_error("cannot open output file '" + path + "'");
  return f;
}

struct GlobalOpts {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
};

void cmd_bands(const std::string& theta_s, double eta, int grid, const std::string& out) {
  const qtm::StrainParams p{parse_theta(theta_s), eta};
  const qtm::BZGrid bz = qtm::build_bz_grid(p, grid);
  const qtm::HoppingSet h = qtm::strain_hoppings(p);
  auto f = open_out(out);
  f << "kx,ky,e1,e2,e3\n";
  for (const auto& [k, w] : bz.points) {
    const qtm::BandTriple t =
        qtm::band_energies_analytic(qtm::bloch_entries(k, p.theta, h));
    f << qtm::fmt_g(k.kx, 8) << "," << qtm::fmt_g(k.ky, 8) << "," << qtm::fmt_g(t.e[0], 8)
      << "," << qtm::fmt_g(t.e[1], 8) << "," << qtm::fmt_g(t.e[2], 8) << "\n";
  }
}

void cmd_thermo(const std::string& theta_s, double eta, double tmin, double tmax, int steps,
                const std::string& mode_s, int grid, const std::string& out) {
  if (!(tmin > 0.0) || !(tmax >= tmin) || steps < 1) {
    throw qtm::config_error("thermo needs 0 < tmin <= tmax and steps >= 1");
  }
  const qtm::StatisticsMode mode = qtm::parse_statistics(mode_s);
  const qtm::BandSpectrum s = qtm::compute_spectrum({parse_theta(theta_s), eta}, grid);
  auto f = open_out(out);
  f << "T,lnZ,U,S,F\n";
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? tmin : tmin + (tmax - tmin) * i / (steps - 1);
    const qtm::ThermalPoint p = qtm::thermal_point(s, t, mode);
    f << qtm::fmt_g(t) << "," << qtm::fmt_g(p.ln_z) << "," << qtm::fmt_g(p.internal_energy)
      << "," << qtm::fmt_g(p.entropy) << "," << qtm::fmt_g(p.free_energy) << "\n";
  }
}

json cycle_to_json(const qtm::CycleSpec& spec, const qtm::CycleResult& r, int grid) {
  json j;
  j["theta1"] = spec.theta1;
  j["theta2"] = spec.theta2;
  j["t_hot"] = spec.t_hot;
  j["t_cold"] = spec.t_cold;
  j["eta_strain"] = spec.eta_strain;
  j["statistics"] = qtm::statistics_name(spec.statistics);
  j["grid_m"] = grid;
  j["q_ab"] = r.q_ab;
  j["q_bc"] = r.q_bc;
  j["q_cd"] = r.q_cd;
  j["q_da"] = r.q_da;
  j["work"] = r.work;
  j["q_hot"] = r.q_hot;
  j["q_cold"] = r.q_cold;
  j["mode"] = qtm::mode_name(r.mode);
  j["performance"] = r.performance;  // NaN serializes as null
  if (spec.t_hot > spec.t_cold) {
    const qtm::CarnotBounds cb = qtm::carnot_bounds(spec.t_hot, spec.t_cold);
    j["carnot"] = {{"eta_max", cb.eta_max}, {"cop_max", cb.cop_max}};
  }
  return j;
}

void cmd_spa_run(const std::string& config_path, const GlobalOpts& gopt) {
  const qtm::SpaRunConfig c = qtm::parse_spa_run_config(config_path);
  const qtm::StrainParams sp{c.theta, c.eta};
  const qtm::LatticeGeometry g = qtm::build_geometry(c.l, sp);

  std::vector<double> ts = c.t_list;
  std::sort(ts.begin(), ts.end(), std::greater<double>());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  qtm::McSettings s;
  s.l = c.l;
  s.n_therm = c.n_therm;
  s.n_meas = c.n_meas;
  s.cluster_l = c.cluster_l;
  s.measure_every = c.measure_every;
  s.seed = c.seed;
  s.anneal = c.anneal;
  s.quenched_lnz = c.quenched_lnz;
  s.t_max = c.t_max;
  s.move_width = c.move_width;
  s.m_cap = c.m_cap;
  s.dos.gamma = c.gamma_dos;

  s.mu_override = c.mu;
  const double t_tune = 0.5 * (ts.front() + ts.back());
  const double mu = qtm::resolve_mu(sp, c.u, t_tune, s, c.seed);

  const auto points = qtm::run_sampling_chain(g, s, c.u, mu, ts, qtm::derive_seed(c.seed, 1));

  std::filesystem::create_directories(c.out_dir);
  const auto dir = std::filesystem::path(c.out_dir);
  {
    auto f = open_out((dir / "observables.csv").string());
    f << "# qtm-spa v1 l=" << c.l << " theta=" << qtm::fmt_g(c.theta)
      << " eta=" << qtm::fmt_g(c.eta) << " u=" << qtm::fmt_g(c.u)
      << " mu=" << qtm::fmt_g(mu) << " seed=" << c.seed << "\n";
    f << "T,energy,stderr,density,acceptance\n";
    for (const auto& p : points) {
      f << qtm::fmt_g(p.temperature) << "," << qtm::fmt_g(p.energy) << ","
        << qtm::fmt_g(p.energy_err) << "," << qtm::fmt_g(p.density) << ","
        << qtm::fmt_g(p.acceptance) << "\n";
    }
  }
  // S(q) and DOS snapshots at the lowest temperature of the list.
  const qtm::InteractingPoint& cold = points.back();
  {
    auto f = open_out((dir / "sq.csv").string());
    f << "# qtm-spa v1 T=" << qtm::fmt_g(cold.temperature) << "\n";
    f << "qx,qy,S\n";
    const int l = cold.obs.l;
    for (int qx = 0; qx < l; ++qx) {
      for (int qy = 0; qy < l; ++qy) {
        const double q1 = 2.0 * std::numbers::pi * qx / l;
        const double q2 = 2.0 * std::numbers::pi * qy / l;
        f << qtm::fmt_g(q1) << "," << qtm::fmt_g(q2) << ","
          << qtm::fmt_g(cold.obs.sq[static_cast<std::size_t>(qx) * l + qy]) << "\n";
      }
    }
  }
  {
    auto f = open_out((dir / "dos.csv").string());
    f << "# qtm-spa v1 T=" << qtm::fmt_g(cold.temperature)
      << " gamma=" << qtm::fmt_g(c.gamma_dos) << "\n";
    f << "omega,rho\n";
    for (std::size_t i = 0; i < cold.obs.dos_omega.size(); ++i) {
      f << qtm::fmt_g(cold.obs.dos_omega[i]) << "," << qtm::fmt_g(cold.obs.dos_rho[i]) << "\n";
    }
  }
  (void)gopt;
}

}  // namespace

int main(int argc, char** argv) {
  // Our parallelism is one chain per thread; keep BLAS single-threaded.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"Strained Lieb-kagome quantum thermal machine toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts gopt;
  app.add_option("--threads", gopt.threads, "worker threads for sweeps");
  app.add_option("--seed", gopt.seed, "base RNG seed for Monte Carlo runs");

  // bands
  std::string b_theta = "lieb", b_out;
  double b_eta = 8.0;
  int b_grid = 200;
  auto* bands = app.add_subcommand("bands", "band energies over the BZ grid as CSV");
  bands->add_option("--theta", b_theta, "strain angle (radians, 'lieb', 'kagome')")->required();
  bands->add_option("--eta", b_eta, "strain decay rate");
  bands->add_option("--grid", b_grid, "BZ points per axis");
  bands->add_option("--out", b_out, "output CSV path")->required();

  // thermo
  std::string t_theta = "lieb", t_mode = "boltzmann", t_out;
  double t_eta = 8.0, t_tmin = 0.01, t_tmax = 1.0;
  int t_steps = 100, t_grid = 200;
  auto* thermo = app.add_subcommand("thermo", "ln Z, U, S, F over a temperature range as CSV");
  thermo->add_option("--theta", t_theta)->required();
  thermo->add_option("--eta", t_eta);
  thermo->add_option("--tmin", t_tmin)->required();
  thermo->add_option("--tmax", t_tmax)->required();
  thermo->add_option("--steps", t_steps);
  thermo->add_option("--mode", t_mode, "boltzmann or fermi");
  thermo->add_option("--grid", t_grid);
  thermo->add_option("--out", t_out, "output CSV path")->required();

  // cycle
  std::string c_theta1 = "kagome", c_theta2 = "lieb", c_stat = "fermi", c_out;
  double c_th = 0.02, c_tc = 0.01, c_eta = 8.0;
  int c_grid = 200;
  auto* cycle = app.add_subcommand("cycle", "one Stirling cycle as JSON");
  cycle->add_option("--theta1", c_theta1)->required();
  cycle->add_option("--theta2", c_theta2)->required();
  cycle->add_option("--th", c_th, "hot bath temperature")->required();
  cycle->add_option("--tc", c_tc, "cold bath temperature")->required();
  cycle->add_option("--eta", c_eta);
  cycle->add_option("--grid", c_grid);
  cycle->add_option("--statistics", c_stat, "boltzmann or fermi");
  cycle->add_option("--out", c_out, "optional JSON output path (default stdout)");

  // mode-diagram
  std::string md_stat = "fermi", md_out;
  double md_th = 0.02, md_tc = 0.01, md_eta = 8.0;
  int md_steps = 61, md_grid = 200;
  auto* md = app.add_subcommand("mode-diagram", "(theta1, theta2) mode map as CSV");
  md->add_option("--th", md_th)->required();
  md->add_option("--tc", md_tc)->required();
  md->add_option("--steps", md_steps);
  md->add_option("--eta", md_eta);
  md->add_option("--grid", md_grid);
  md->add_option("--statistics", md_stat);
  md->add_option("--out", md_out)->required();

  // temp-map
  std::string tm_theta1 = "kagome", tm_theta2 = "lieb", tm_stat = "fermi", tm_out;
  double tm_tmin = 0.01, tm_tmax = 0.2, tm_eta = 8.0;
  int tm_steps = 61, tm_grid = 200;
  auto* tm = app.add_subcommand("temp-map", "(T_h, T_c) mode map as CSV");
  tm->add_option("--theta1", tm_theta1)->required();
  tm->add_option("--theta2", tm_theta2)->required();
  tm->add_option("--tmin", tm_tmin);
  tm->add_option("--tmax", tm_tmax);
  tm->add_option("--steps", tm_steps);
  tm->add_option("--eta", tm_eta);
  tm->add_option("--grid", tm_grid);
  tm->add_option("--statistics", tm_stat);
  tm->add_option("--out", tm_out)->required();

  // u-sweep
  std::string us_theta1 = "kagome", us_theta2 = "lieb", us_out;
  double us_th = 0.5, us_tc = 0.3, us_eta = 8.0, us_umin = 0.5, us_umax = 9.0, us_ustep = 0.5;
  std::vector<double> us_ulist;
  int us_l = 8, us_ntherm = 100, us_nmeas = 100, us_cluster = 3, us_meas_every = 2,
      us_tpoints = 8;
  bool us_anneal = false, us_quenched = false;
  auto* us = app.add_subcommand("u-sweep", "interacting efficiency vs Hubbard U as CSV");
  us->add_option("--theta1", us_theta1);
  us->add_option("--theta2", us_theta2);
  us->add_option("--th", us_th);
  us->add_option("--tc", us_tc);
  us->add_option("--eta", us_eta);
  us->add_option("--umin", us_umin);
  us->add_option("--umax", us_umax);
  us->add_option("--ustep", us_ustep);
  us->add_option("--u", us_ulist, "explicit U values (overrides umin/umax/ustep)");
  us->add_option("--l", us_l, "lattice cells per axis");
  us->add_option("--n-therm", us_ntherm);
  us->add_option("--n-meas", us_nmeas);
  us->add_option("--cluster", us_cluster, "traveling-cluster cells per axis");
  us->add_option("--measure-every", us_meas_every);
  us->add_option("--t-points", us_tpoints, "integration ladder points");
  us->add_flag("--anneal", us_anneal);
  us->add_flag("--quenched-lnz", us_quenched);
  us->add_option("--out", us_out)->required();

  // interacting-mode-diagram
  std::string imd_theta1 = "kagome", imd_theta2 = "lieb", imd_out;
  double imd_u = 1.0, imd_tmin = 0.05, imd_tmax = 0.65, imd_eta = 8.0;
  int imd_steps = 13, imd_l = 8, imd_ntherm = 100, imd_nmeas = 100, imd_cluster = 3,
      imd_meas_every = 2, imd_tpoints = 8;
  bool imd_anneal = false;
  auto* imd = app.add_subcommand("interacting-mode-diagram",
                                 "(T_h, T_c) mode map of the interacting cycle as CSV");
  imd->add_option("--theta1", imd_theta1);
  imd->add_option("--theta2", imd_theta2);
  imd->add_option("--u", imd_u)->required();
  imd->add_option("--tmin", imd_tmin);
  imd->add_option("--tmax", imd_tmax);
  imd->add_option("--steps", imd_steps);
  imd->add_option("--eta", imd_eta);
  imd->add_option("--l", imd_l);
  imd->add_option("--n-therm", imd_ntherm);
  imd->add_option("--n-meas", imd_nmeas);
  imd->add_option("--cluster", imd_cluster);
  imd->add_option("--measure-every", imd_meas_every);
  imd->add_option("--t-points", imd_tpoints);
  imd->add_flag("--anneal", imd_anneal);
  imd->add_option("--out", imd_out)->required();

  // spa-run
  std::string spa_config;
  auto* spa = app.add_subcommand("spa-run", "Monte Carlo observables from a key=value config");
  spa->add_option("--config", spa_config, "flat key=value config file")->required();

  try {
    app.parse(argc, argv);

    if (*bands) {
      cmd_bands(b_theta, b_eta, b_grid, b_out);
    } else if (*thermo) {
      cmd_thermo(t_theta, t_eta, t_tmin, t_tmax, t_steps, t_mode, t_grid, t_out);
    } else if (*cycle) {
      qtm::CycleSpec spec{parse_theta(c_theta1), parse_theta(c_theta2), c_th, c_tc, c_eta,
                          qtm::parse_statistics(c_stat)};
      const qtm::CycleResult r = qtm::run_cycle(spec, c_grid);
      const json j = cycle_to_json(spec, r, c_grid);
      if (c_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        open_out(c_out) << j.dump(2) << "\n";
      }
    } else if (*md) {
      const qtm::SweepGrid g = qtm::mode_diagram(md_th, md_tc, md_steps, md_eta, md_grid,
                                                 qtm::parse_statistics(md_stat), gopt.threads);
      auto f = open_out(md_out);
      qtm::write_grid_csv(f, g);
    } else if (*tm) {
      const qtm::SweepGrid g =
          qtm::temp_map(parse_theta(tm_theta1), parse_theta(tm_theta2), tm_tmin, tm_tmax,
                        tm_steps, tm_eta, tm_grid, qtm::parse_statistics(tm_stat), gopt.threads);
      auto f = open_out(tm_out);
      qtm::write_grid_csv(f, g);
    } else if (*us) {
      std::vector<double> uvals = us_ulist;
      if (uvals.empty()) {
        for (double u = us_umin; u <= us_umax + 1e-12; u += us_ustep) uvals.push_back(u);
      }
      qtm::CycleSpec spec{parse_theta(us_theta1), parse_theta(us_theta2), us_th, us_tc,
                          us_eta, qtm::StatisticsMode::fermi};
      qtm::McSettings s;
      s.l = us_l;
      s.n_therm = us_ntherm;
      s.n_meas = us_nmeas;
      s.cluster_l = us_cluster;
      s.measure_every = us_meas_every;
      s.seed = gopt.seed;
      s.anneal = us_anneal;
      s.quenched_lnz = us_quenched;
      s.t_points = us_tpoints;
      const auto rows = qtm::u_sweep(spec, uvals, s, gopt.threads);
      auto f = open_out(us_out);
      qtm::write_u_sweep_csv(
          f, rows,
          {"# qtm-usweep v1",
           "# theta1=" + qtm::fmt_g(spec.theta1) + " theta2=" + qtm::fmt_g(spec.theta2) +
               " th=" + qtm::fmt_g(us_th) + " tc=" + qtm::fmt_g(us_tc) +
               " l=" + std::to_string(us_l) + " seed=" + std::to_string(gopt.seed)});
    } else if (*imd) {
      qtm::McSettings s;
      s.l = imd_l;
      s.n_therm = imd_ntherm;
      s.n_meas = imd_nmeas;
      s.cluster_l = imd_cluster;
      s.measure_every = imd_meas_every;
      s.seed = gopt.seed;
      s.anneal = imd_anneal;
      s.t_points = imd_tpoints;
      const qtm::SweepGrid g = qtm::interacting_mode_diagram(
          parse_theta(imd_theta1), parse_theta(imd_theta2), imd_u, imd_tmin, imd_tmax,
          imd_steps, imd_eta, s, gopt.threads);
      auto f = open_out(imd_out);
      qtm::write_grid_csv(f, g);
    } else if (*spa) {
      cmd_spa_run(spa_config, gopt);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const qtm::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qtm::invariant_violation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
