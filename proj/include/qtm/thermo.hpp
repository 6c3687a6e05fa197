#pragma once

#include <cmath>
#include <string>

#include "qtm/bands.hpp"

namespace qtm {

/// boltzmann: Z = sum_k w_k sum_j exp(-e/T), the paper-level single-particle
/// partition sum. fermi: grand-canonical free fermions at mu = 0,
/// ln Z = sum w ln(1 + exp(-e/T)). Modes are never mixed within one cycle.
enum class StatisticsMode { boltzmann, fermi };

/// Thermodynamic state of one spectrum at one temperature (k_B = 1).
struct ThermalPoint {
  double theta = 0.0;
  double temperature = 0.0;
  double ln_z = 0.0;
  double internal_energy = 0.0;
  double entropy = 0.0;
  double free_energy = 0.0;
};

double log_partition(const BandSpectrum& s, double temperature, StatisticsMode mode);
double internal_energy(const BandSpectrum& s, double temperature, StatisticsMode mode);
double entropy(const BandSpectrum& s, double temperature, StatisticsMode mode);
double free_energy(const BandSpectrum& s, double temperature, StatisticsMode mode);

/// All four quantities in one pass over the spectrum.
ThermalPoint thermal_point(const BandSpectrum& s, double temperature, StatisticsMode mode);

/// ln(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// Fermi factor 1/(1 + e^x), stable in both tails.
inline double fermi_of(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

StatisticsMode parse_statistics(const std::string& name);
const char* statistics_name(StatisticsMode mode);

}  // namespace qtm
