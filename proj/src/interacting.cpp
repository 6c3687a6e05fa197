#include "qtm/interacting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qtm/errors.hpp"
#include "qtm/parallel.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

namespace {

void validate_descending(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw config_error("temperature grid must not be empty");
  if (!(t_grid.front() > 0.0)) throw config_error("temperatures must be positive");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i + 1]) || !(t_grid[i + 1] > 0.0)) {
      throw config_error("temperature grid must be strictly descending and positive");
    }
  }
}

MCParams chain_params(const McSettings& s, double u, double mu, double temperature,
                      std::uint64_t seed) {
  MCParams p;
  p.beta = 1.0 / temperature;
  p.u = u;
  p.mu = mu;
  p.n_therm = s.n_therm;
  p.n_meas = s.n_meas;
  p.cluster_l = s.cluster_l;
  p.move_width = s.move_width;
  p.seed = seed;
  p.m_cap = s.m_cap;
  p.measure_every = s.measure_every;
  p.half_fill_tol = s.half_fill_tol;
  return p;
}

}  // namespace

double resolve_mu(const StrainParams& strain, double u, double t_tune,
                  const McSettings& s, std::uint64_t seed) {
  if (!std::isnan(s.mu_override)) return s.mu_override;
  const int tune_l = s.mu_tune_l > 0 ? s.mu_tune_l : s.l;
  const LatticeGeometry g = build_geometry(tune_l, strain);
  MCParams tune;
  tune.beta = 1.0 / t_tune;
  tune.u = u;
  tune.n_therm = s.mu_n_therm;
  tune.n_meas = s.mu_n_meas;
  tune.cluster_l = std::min(s.cluster_l, tune_l);
  tune.move_width = s.move_width;
  tune.seed = derive_seed(seed, 0xA11CE);
  tune.m_cap = s.m_cap;
  tune.measure_every = 2;
  tune.half_fill_tol = s.half_fill_tol;
  return tune_mu_half_filling(g, tune);
}

std::vector<double> build_t_grid(double t_max, int t_points,
                                 const std::vector<double>& targets) {
  if (targets.empty()) throw config_error("temperature targets must not be empty");
  std::vector<double> grid(targets);
  const double t_lo = *std::min_element(targets.begin(), targets.end());
  if (!(t_lo > 0.0)) throw config_error("temperatures must be positive");
  t_max = std::max(t_max, 2.0);
  // Geometric ladder from t_max down toward the lowest target.
  const int steps = std::max(2, t_points);
  const double ratio = std::pow(t_lo / t_max, 1.0 / (steps - 1));
  for (int i = 0; i < steps; ++i) grid.push_back(t_max * std::pow(ratio, i));
  std::sort(grid.begin(), grid.end(), std::greater<double>());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  return grid;
}

double lnz_trapezoid_coeff(const std::vector<double>& betas, int k, int j) {
  if (j > k || k <= 0 || j < 0) return 0.0;
  double c = 0.0;
  if (j > 0) c += 0.5 * (betas[j] - betas[j - 1]);  // panel (j-1, j)
  if (j < k) c += 0.5 * (betas[j + 1] - betas[j]);  // panel (j, j+1)
  return c;
}

std::vector<InteractingPoint> run_sampling_chain(const LatticeGeometry& g,
                                                 const McSettings& s, double u, double mu,
                                                 const std::vector<double>& t_grid,
                                                 std::uint64_t chain_seed) {
  validate_descending(t_grid);
  const int nt = static_cast<int>(t_grid.size());
  std::vector<InteractingPoint> points(nt);

  std::unique_ptr<MonteCarlo> mc;  // persists across T when annealing
  for (int ti = 0; ti < nt; ++ti) {
    const double temperature = t_grid[ti];
    const MCParams p = chain_params(s, u, mu, temperature, derive_seed(chain_seed, ti));
    if (s.anneal && mc) {
      mc->set_beta(1.0 / temperature);
    } else {
      mc = std::make_unique<MonteCarlo>(g, p);
    }
    double acc = 0.0;
    for (int sw = 0; sw < s.n_therm; ++sw) {
      acc = mc->sweep();
      mc->adapt_move_width(acc);
    }
    std::vector<AuxFieldConfig> samples;
    samples.reserve(s.n_meas / s.measure_every + 1);
    double acc_sum = 0.0;
    for (int sw = 0; sw < s.n_meas; ++sw) {
      acc_sum += mc->sweep();
      if (sw % s.measure_every == 0) samples.push_back(mc->config());
    }
    const double rate = s.n_meas > 0 ? acc_sum / s.n_meas : 0.0;
    InteractingPoint& pt = points[ti];
    pt.temperature = temperature;
    pt.beta = 1.0 / temperature;
    pt.obs = measure_observables(g, samples, p, rate, s.dos);
    pt.energy = pt.obs.energy_mean;
    pt.energy_err = pt.obs.energy_stderr;
    pt.density = pt.obs.density_mean;
    pt.acceptance = rate;
    if (s.quenched_lnz) {
      // Quenched estimate: ln Z ~ <-beta F{m}> over the samples.
      std::vector<double> vals(samples.size());
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const EffectiveHamiltonian h = build_h_eff(g, samples[k], u, mu);
        vals[k] = -pt.beta * config_free_energy(h, pt.beta);
      }
      const MeanErr me = binned_jackknife(vals);
      pt.ln_z = me.mean;
      pt.ln_z_err = me.stderr_;
    }
  }
  return points;
}

std::vector<InteractingPoint> interacting_thermo(const LatticeGeometry& g,
                                                 const McSettings& s, double u, double mu,
                                                 const std::vector<double>& t_grid,
                                                 std::uint64_t chain_seed) {
  validate_descending(t_grid);
  if (t_grid.size() < 2) throw config_error("temperature grid needs at least 2 points");
  if (!(t_grid.front() >= 2.0 - 1e-9)) {
    throw config_error("temperature grid must start at T_max >= 2, got " +
                       std::to_string(t_grid.front()));
  }
  std::vector<InteractingPoint> points = run_sampling_chain(g, s, u, mu, t_grid, chain_seed);
  if (s.quenched_lnz) return points;

  // Anchor: free fermions of the U/2-shifted bands at beta_0.
  const int nt = static_cast<int>(points.size());
  const EffectiveHamiltonian h0 = build_h_eff(g, AuxFieldConfig{}, u, mu);
  const double beta0 = points[0].beta;
  double lnz0 = 0.0;
  for (double e : h0.spectrum) lnz0 += softplus(-beta0 * e);
  std::vector<double> betas(nt);
  for (int i = 0; i < nt; ++i) betas[i] = points[i].beta;
  for (int k = 0; k < nt; ++k) {
    double lnz = lnz0;
    double var = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double c = lnz_trapezoid_coeff(betas, k, j);
      lnz -= c * points[j].energy;
      var += c * c * points[j].energy_err * points[j].energy_err;
    }
    points[k].ln_z = lnz;
    points[k].ln_z_err = std::sqrt(var);
  }
  return points;
}

namespace {

// Gradient of one cycle quantity with respect to the per-temperature energy
// means of both chains (integration estimator) or with respect to the four
// independent (lnZ, U) inputs (quenched estimator).
struct GradientedValue {
  double value = 0.0;
  std::vector<double> g1;  // d/dU_j of chain 1
  std::vector<double> g2;
  double quench2 = 0.0;  // accumulated variance from independent lnZ errors

  double variance(const std::vector<InteractingPoint>& c1,
                  const std::vector<InteractingPoint>& c2) const {
    double v = quench2;
    for (std::size_t j = 0; j < g1.size(); ++j) {
      v += g1[j] * g1[j] * c1[j].energy_err * c1[j].energy_err;
      v += g2[j] * g2[j] * c2[j].energy_err * c2[j].energy_err;
    }
    return v;
  }
};

}  // namespace

InteractingCycleResult combine_interacting_cycle(const std::vector<InteractingPoint>& chain1,
                                                 const std::vector<InteractingPoint>& chain2,
                                                 const std::vector<double>& t_grid,
                                                 int idx_hot, int idx_cold,
                                                 bool quenched_lnz) {
  const int nt = static_cast<int>(t_grid.size());
  if (static_cast<int>(chain1.size()) != nt || static_cast<int>(chain2.size()) != nt) {
    throw config_error("chains and t_grid size mismatch");
  }
  if (idx_hot < 0 || idx_cold < 0 || idx_hot >= nt || idx_cold >= nt || idx_hot > idx_cold) {
    throw config_error("invalid hot/cold grid indices");
  }
  const double t_hot = t_grid[idx_hot];
  const double t_cold = t_grid[idx_cold];

  std::vector<double> betas(nt);
  for (int i = 0; i < nt; ++i) betas[i] = chain1[i].beta;

  // ln Z at index k as a linear form in the chain energies (integration) or
  // an independent value with its own error (quenched).
  auto add_lnz = [&](GradientedValue& gv, int chain, int k, double factor) {
    const auto& c = chain == 1 ? chain1 : chain2;
    gv.value += factor * c[k].ln_z;
    if (quenched_lnz) {
      gv.quench2 += factor * factor * c[k].ln_z_err * c[k].ln_z_err;
      return;
    }
    auto& g = chain == 1 ? gv.g1 : gv.g2;
    for (int j = 0; j <= k; ++j) g[j] -= factor * lnz_trapezoid_coeff(betas, k, j);
  };
  auto add_u = [&](GradientedValue& gv, int chain, int k, double factor) {
    const auto& c = chain == 1 ? chain1 : chain2;
    gv.value += factor * c[k].energy;
    (chain == 1 ? gv.g1 : gv.g2)[k] += factor;
  };
  auto make = [&]() {
    GradientedValue gv;
    gv.g1.assign(nt, 0.0);
    gv.g2.assign(nt, 0.0);
    return gv;
  };

  // W = -T_h (lnZ2_h - lnZ1_h) + T_c (lnZ2_c - lnZ1_c)
  GradientedValue w = make();
  add_lnz(w, 2, idx_hot, -t_hot);
  add_lnz(w, 1, idx_hot, t_hot);
  add_lnz(w, 2, idx_cold, t_cold);
  add_lnz(w, 1, idx_cold, -t_cold);
  // Q_h = T_h (lnZ2_h - lnZ1_h) + U2_h - U1_c
  GradientedValue qh = make();
  add_lnz(qh, 2, idx_hot, t_hot);
  add_lnz(qh, 1, idx_hot, -t_hot);
  add_u(qh, 2, idx_hot, 1.0);
  add_u(qh, 1, idx_cold, -1.0);
  // Q_c = -T_c (lnZ2_c - lnZ1_c) - U2_h + U1_c
  GradientedValue qc = make();
  add_lnz(qc, 2, idx_cold, -t_cold);
  add_lnz(qc, 1, idx_cold, t_cold);
  add_u(qc, 2, idx_hot, -1.0);
  add_u(qc, 1, idx_cold, 1.0);

  InteractingCycleResult out;
  out.t_grid = t_grid;
  out.sigma_work = std::sqrt(w.variance(chain1, chain2));
  out.sigma_q_hot = std::sqrt(qh.variance(chain1, chain2));
  out.sigma_q_cold = std::sqrt(qc.variance(chain1, chain2));

  const ThermalPair p1h{chain1[idx_hot].ln_z, chain1[idx_hot].energy};
  const ThermalPair p2h{chain2[idx_hot].ln_z, chain2[idx_hot].energy};
  const ThermalPair p1c{chain1[idx_cold].ln_z, chain1[idx_cold].energy};
  const ThermalPair p2c{chain2[idx_cold].ln_z, chain2[idx_cold].energy};
  // Classification bands widened by twice the propagated error of each
  // quantity; a sign pattern still impossible at 2 sigma gets one retry at
  // 5 sigma (boundary-noise rescue) before the error propagates.
  const ExtraTols tols{2.0 * out.sigma_q_hot, 2.0 * out.sigma_q_cold, 2.0 * out.sigma_work};
  CycleResult cycle;
  try {
    cycle = assemble_cycle(p1h, p2h, p1c, p2c, t_hot, t_cold, tols);
  } catch (const invariant_violation&) {
    const ExtraTols wide{5.0 * out.sigma_q_hot, 5.0 * out.sigma_q_cold,
                         5.0 * out.sigma_work};
    cycle = assemble_cycle(p1h, p2h, p1c, p2c, t_hot, t_cold, wide);
  }
  out.sigma_performance = std::numeric_limits<double>::quiet_NaN();
  if (t_hot > t_cold) {
    const CarnotBounds cb = carnot_bounds(t_hot, t_cold);
    if (cycle.mode == OperatingMode::engine) {
      // eta = -W/Q_h: first-order error over both chains' energies.
      GradientedValue eta = make();
      for (int j = 0; j < nt; ++j) {
        eta.g1[j] = (-w.g1[j] * qh.value + w.value * qh.g1[j]) / (qh.value * qh.value);
        eta.g2[j] = (-w.g2[j] * qh.value + w.value * qh.g2[j]) / (qh.value * qh.value);
      }
      eta.quench2 = (w.quench2 + qh.quench2 * (w.value / qh.value) * (w.value / qh.value)) /
                    (qh.value * qh.value);
      out.sigma_performance = std::sqrt(eta.variance(chain1, chain2)) / cb.eta_max;
    } else if (cycle.mode == OperatingMode::refrigerator) {
      GradientedValue cop = make();
      for (int j = 0; j < nt; ++j) {
        cop.g1[j] = (qc.g1[j] * w.value - qc.value * w.g1[j]) / (w.value * w.value);
        cop.g2[j] = (qc.g2[j] * w.value - qc.value * w.g2[j]) / (w.value * w.value);
      }
      cop.quench2 = (qc.quench2 + w.quench2 * (qc.value / w.value) * (qc.value / w.value)) /
                    (w.value * w.value);
      out.sigma_performance = std::sqrt(cop.variance(chain1, chain2)) / cb.cop_max;
    }
  }
  out.cycle = cycle;
  return out;
}

InteractingCycleResult interacting_cycle(const CycleSpec& spec, double u,
                                         const McSettings& s) {
  validate(spec);
  if (u < 0.0) throw config_error("u must be non-negative");

  const StrainParams sp1{spec.theta1, spec.eta_strain};
  const StrainParams sp2{spec.theta2, spec.eta_strain};
  const LatticeGeometry g1 = build_geometry(s.l, sp1);
  const LatticeGeometry g2 = build_geometry(s.l, sp2);

  const std::vector<double> t_grid = build_t_grid(s.t_max, s.t_points,
                                                  {spec.t_hot, spec.t_cold});
  auto index_of = [&](double t) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (std::abs(t_grid[i] - t) < 1e-12) return static_cast<int>(i);
    }
    throw invariant_violation("bath temperature missing from grid");
  };
  const int idx_hot = index_of(spec.t_hot);
  const int idx_cold = index_of(spec.t_cold);

  // mu fixed per theta across the whole descending chain: the beta
  // integration of the grand-canonical energy requires constant mu, and the
  // mu N pieces cancel between lnZ and U in the isothermal heats.
  const double t_tune = 0.5 * (spec.t_hot + spec.t_cold);
  double mus[2] = {0.0, 0.0};
  std::vector<InteractingPoint> chains[2];
  const LatticeGeometry* geoms[2] = {&g1, &g2};
  const StrainParams strains[2] = {sp1, sp2};
  parallel_for(2, 2, [&](int i) {
    mus[i] = resolve_mu(strains[i], u, t_tune, s, derive_seed(s.seed, 100 + i));
    chains[i] = interacting_thermo(*geoms[i], s, u, mus[i], t_grid,
                                   derive_seed(s.seed, 1 + i));
  });

  InteractingCycleResult out = combine_interacting_cycle(chains[0], chains[1], t_grid,
                                                         idx_hot, idx_cold, s.quenched_lnz);
  out.mu_theta1 = mus[0];
  out.mu_theta2 = mus[1];
  out.chain_theta1 = std::move(chains[0]);
  out.chain_theta2 = std::move(chains[1]);
  return out;
}

}  // namespace qtm
