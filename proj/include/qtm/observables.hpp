#pragma once

#include <span>
#include <vector>

#include "qtm/spa.hpp"

namespace qtm {

struct DosParams {
  double gamma = 0.05;  // Lorentzian broadening
  int n_omega = 401;
  double pad = 1.0;  // mesh margin beyond the sampled spectrum
};

/// Ensemble averages over measured field configurations.
struct Observables {
  double energy_mean = 0.0;    // <sum_n E_n f(E_n) + stiffness>, extensive
  double energy_stderr = 0.0;  // binned jackknife
  double density_mean = 0.0;
  int l = 0;
  std::vector<double> sq;      // S(q) on the l x l grid, index qx*l + qy
  std::vector<double> sq_err;
  std::vector<double> dos_omega;
  std::vector<double> dos_rho;
  double acceptance_rate = 0.0;
};

/// Mean and stderr of a scalar series: bins consecutive samples (to damp
/// autocorrelation) and applies delete-one jackknife over the bins.
struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanErr binned_jackknife(std::span<const double> series, int max_bins = 20);

/// S(q) = (1/N^2) sum_ij <m_i . m_j> e^{iq.(R_i - R_j)} for one configuration,
/// with R the unit-cell coordinates and q on the l x l grid q = 2 pi (n1, n2)/l.
std::vector<double> structure_factor(const LatticeGeometry& g,
                                     const AuxFieldConfig& f);

/// Averages energy, density, S(q), and the broadened density of states over
/// the sampled configurations. Throws config_error when samples is empty.
Observables measure_observables(const LatticeGeometry& g,
                                std::span<const AuxFieldConfig> samples,
                                const MCParams& params, double acceptance_rate,
                                const DosParams& dos = {}, int threads = 1);

}  // namespace qtm
