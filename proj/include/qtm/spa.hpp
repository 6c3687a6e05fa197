#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qtm/eig.hpp"
#include "qtm/lattice.hpp"
#include "qtm/rng.hpp"

namespace qtm {

/// Classical auxiliary vector field {m_i}; the Monte Carlo state. The charge
/// field is pinned at its saddle point <n> U / 2 and enters H_eff as the
/// uniform U/2 shift, so only the scalar is kept.
struct AuxFieldConfig {
  std::vector<std::array<double, 3>> m;
  double phi_saddle = 0.0;
};

/// Spin-fermion Hamiltonian of one field configuration:
/// kinetic bonds + (U/2 - mu) n + Zeeman -(U/2) m_i . sigma_i per site, with
/// the classical stiffness (U/4) sum m_i^2 kept as a scalar beside the matrix.
struct EffectiveHamiltonian {
  int dim = 0;  // 2 * n_sites (site x spin)
  HermitianMatrix matrix;
  std::vector<double> spectrum;  // ascending
  double stiffness = 0.0;
};

struct MCParams {
  double beta = 1.0;
  double u = 0.0;
  double mu = 0.0;
  int n_therm = 100;
  int n_meas = 100;
  int cluster_l = 4;
  double move_width = 1.0;
  std::uint64_t seed = 1;
  double m_cap = 4.0;       // proposals are clipped to |m| <= m_cap
  bool adapt_move = true;   // tune move_width to 30-50% acceptance while thermalizing
  int measure_every = 1;
  double half_fill_tol = 0.01;
};

void validate(const MCParams& p, int lattice_l);

/// Builds H_eff with its spectrum; m may be empty meaning m = 0 everywhere.
EffectiveHamiltonian build_h_eff(const LatticeGeometry& g, const AuxFieldConfig& f,
                                 double u, double mu);

/// F{m} = -(1/beta) sum_n ln(1 + e^{-beta E_n}) + stiffness.
double fermionic_free_energy(std::span<const double> spectrum, double beta,
                             double stiffness);
double config_free_energy(const EffectiveHamiltonian& h, double beta);

/// Electrons per site from Fermi occupations of one spectrum.
double density_from_spectrum(std::span<const double> spectrum, double beta, int n_sites);

/// The acceptance rule; also used by the detailed-balance checks.
inline bool metropolis_accept(double delta_f, double beta, double u01) {
  return delta_f <= 0.0 || u01 < std::exp(-beta * delta_f);
}

/// Metropolis sampler of P{m} with traveling-cluster updates: each proposal is
/// accepted from the free-energy change of the cluster_l x cluster_l x 3-site
/// cluster around the update site (sites outside frozen, bonds cut open);
/// cluster_l = l reproduces the full periodic lattice. One chain is
/// sequential; independent chains may run concurrently.
class MonteCarlo {
 public:
  MonteCarlo(const LatticeGeometry& g, const MCParams& params);

  /// One pass over all sites; sweep k uses an engine seeded from (seed, k),
  /// so a chain is fully determined by MCParams. Returns the acceptance rate.
  /// Optionally records the per-site accept/reject decisions.
  double sweep(std::vector<std::uint8_t>* decisions = nullptr);

  /// Same proposals and rule, but delta F from diagonalizing the full periodic
  /// lattice before and after. Validation reference for the cluster path.
  double sweep_full_reference(std::vector<std::uint8_t>* decisions = nullptr);

  /// Acceptance-rate driven width adaptation (call between sweeps while
  /// thermalizing; freeze during measurement).
  void adapt_move_width(double acceptance_rate);

  void set_beta(double beta);
  double beta() const { return params_.beta; }
  double move_width() const { return move_width_; }
  void set_move_width(double w) { move_width_ = w; }
  int sweep_index() const { return sweep_counter_; }
  const AuxFieldConfig& config() const { return field_; }
  AuxFieldConfig& config() { return field_; }
  const MCParams& params() const { return params_; }

  /// Spectrum of the full lattice for the current field.
  std::vector<double> full_spectrum() const;

 private:
  struct Proposal {
    std::array<double, 3> m_new;
    double u01;
  };
  Proposal draw_proposal(RandomEngine& rng, int site) const;
  double cluster_delta_f(int site, const std::array<double, 3>& m_new);
  void fill_cluster_matrix(int center_site);
  void apply_zeeman(HermitianMatrix& h, int local, const std::array<double, 3>& m) const;

  const LatticeGeometry* geom_;
  MCParams params_;
  AuxFieldConfig field_;
  double move_width_;
  int sweep_counter_ = 0;
  int nc_;  // cluster cells per axis
  // scratch buffers reused across updates
  HermitianMatrix cluster_h_;
  std::vector<int> cluster_site_of_local_;  // local site -> global site
  std::vector<Complex> eig_work_;
  std::vector<double> eig_vals_;
  int center_local_ = 0;  // local index of the update site
};

/// Bisection on mu until the MC-averaged density is within half_fill_tol of 1.
/// Short chains per candidate mu, deterministic seeding from params.seed.
double tune_mu_half_filling(const LatticeGeometry& g, const MCParams& params);

}  // namespace qtm
