#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qtm/observables.hpp"
#include "qtm/stirling.hpp"

namespace qtm {

/// Chain-level knobs for the interacting (SPA Monte Carlo) thermodynamics.
struct McSettings {
  int l = 8;
  int n_therm = 100;
  int n_meas = 100;
  int cluster_l = 4;
  int measure_every = 1;
  std::uint64_t seed = 1;
  bool anneal = false;        // reuse the field when stepping down in T
  bool quenched_lnz = false;  // ln Z from <-beta F{m}> instead of integration
  double t_max = 2.0;         // integration anchor temperature
  int t_points = 8;           // ladder points between t_max and the target
  double move_width = 1.0;
  double m_cap = 4.0;
  // mu is tuned per (theta, u) at the cycle mid-temperature unless overridden.
  double mu_override = std::numeric_limits<double>::quiet_NaN();
  int mu_n_therm = 40;
  int mu_n_meas = 16;
  int mu_tune_l = 0;  // 0: tune on the full lattice; else a smaller proxy size
  double half_fill_tol = 0.01;
  DosParams dos{};
};

/// Thermodynamics of one temperature of one chain. Energies are
/// grand-canonical and extensive (the mu N terms cancel in cycle
/// differences at fixed mu; see interacting_cycle).
struct InteractingPoint {
  double temperature = 0.0;
  double beta = 0.0;
  double energy = 0.0;  // U(T) estimator: <sum_n E_n f(E_n) + stiffness>
  double energy_err = 0.0;
  double ln_z = 0.0;
  double ln_z_err = 0.0;
  double density = 0.0;
  double acceptance = 0.0;
  Observables obs;
};

/// Descending temperature ladder from t_max through the listed targets.
std::vector<double> build_t_grid(double t_max, int t_points,
                                 const std::vector<double>& targets);

/// Chemical potential for (strain, u) at t_tune: the override when set,
/// otherwise half-filling bisection on an mu_tune_l-sized lattice (0 = size l).
double resolve_mu(const StrainParams& strain, double u, double t_tune,
                  const McSettings& s, std::uint64_t seed);

/// One Monte Carlo chain over a strictly descending temperature list:
/// thermalize, sample, and measure at each T. ln_z fields are left at zero.
std::vector<InteractingPoint> run_sampling_chain(const LatticeGeometry& g,
                                                 const McSettings& s, double u, double mu,
                                                 const std::vector<double>& t_grid,
                                                 std::uint64_t chain_seed);

/// Monte Carlo U(T) on a descending grid plus ln Z(beta) by trapezoidal
/// thermodynamic integration from the near-free anchor at beta_0 = 1/T_max
/// (fermionic ln Z of the U/2-shifted bands); requires t_grid.front() >= 2.
/// With quenched_lnz, ln Z is the quenched estimate <-beta F{m}> instead.
std::vector<InteractingPoint> interacting_thermo(const LatticeGeometry& g,
                                                 const McSettings& s, double u, double mu,
                                                 const std::vector<double>& t_grid,
                                                 std::uint64_t chain_seed);

/// Trapezoid coefficient of U(t_grid[j]) in ln Z at grid index k (betas
/// ascending with k); exposed for covariance propagation and tests.
double lnz_trapezoid_coeff(const std::vector<double>& betas, int k, int j);

struct InteractingCycleResult {
  CycleResult cycle;
  double sigma_q_hot = 0.0;
  double sigma_q_cold = 0.0;
  double sigma_work = 0.0;
  double sigma_performance = 0.0;
  double mu_theta1 = 0.0;
  double mu_theta2 = 0.0;
  std::vector<double> t_grid;
  std::vector<InteractingPoint> chain_theta1;
  std::vector<InteractingPoint> chain_theta2;
};

/// Cycle bookkeeping from two chains sharing one t_grid; idx_hot/idx_cold
/// select the bath temperatures. Statistical errors are propagated through
/// the integration weights, and mode classification widens its tolerance by
/// twice the propagated sigma of each quantity.
InteractingCycleResult combine_interacting_cycle(const std::vector<InteractingPoint>& chain1,
                                                 const std::vector<InteractingPoint>& chain2,
                                                 const std::vector<double>& t_grid,
                                                 int idx_hot, int idx_cold,
                                                 bool quenched_lnz);

/// Full interacting Stirling cycle at Hubbard repulsion u: tunes mu per
/// theta, runs both chains, and combines. spec.statistics is ignored; the
/// Monte Carlo weight is fermionic by construction.
InteractingCycleResult interacting_cycle(const CycleSpec& spec, double u,
                                         const McSettings& s);

}  // namespace qtm
