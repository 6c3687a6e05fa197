#include "qtm/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

void check_inputs(const BandSpectrum& s, double temperature) {
  if (s.energies.empty()) throw config_error("empty spectrum");
  if (s.energies.size() != s.weights.size()) {
    throw config_error("spectrum energies/weights size mismatch");
  }
  if (!(temperature > 0.0)) {
    throw config_error("temperature must be positive, got " + std::to_string(temperature));
  }
}

struct LnzU {
  double ln_z;
  double u;
};

// Boltzmann: ln Z = ln sum w exp(-e/T) with max subtraction; at T = 0.01 the
// raw exponentials reach e^{400}.
LnzU boltzmann_lnz_u(const BandSpectrum& s, double temperature) {
  const double beta = 1.0 / temperature;
  const double emin = *std::min_element(s.energies.begin(), s.energies.end());
  double zsum = 0.0;
  double esum = 0.0;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    const double b = s.weights[i] * std::exp(-beta * (s.energies[i] - emin));
    zsum += b;
    esum += s.energies[i] * b;
  }
  return {-beta * emin + std::log(zsum), esum / zsum};
}

LnzU fermi_lnz_u(const BandSpectrum& s, double temperature) {
  const double beta = 1.0 / temperature;
  double lnz = 0.0;
  double u = 0.0;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    const double x = beta * s.energies[i];
    lnz += s.weights[i] * softplus(-x);
    u += s.weights[i] * s.energies[i] * fermi_of(x);
  }
  return {lnz, u};
}

LnzU lnz_u(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  check_inputs(s, temperature);
  return mode == StatisticsMode::boltzmann ? boltzmann_lnz_u(s, temperature)
                                           : fermi_lnz_u(s, temperature);
}

}  // namespace

double log_partition(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  return lnz_u(s, temperature, mode).ln_z;
}

double internal_energy(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  return lnz_u(s, temperature, mode).u;
}

double entropy(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  const LnzU v = lnz_u(s, temperature, mode);
  return v.ln_z + v.u / temperature;
}

double free_energy(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  return -temperature * log_partition(s, temperature, mode);
}

ThermalPoint thermal_point(const BandSpectrum& s, double temperature, StatisticsMode mode) {
  const LnzU v = lnz_u(s, temperature, mode);
  ThermalPoint p;
  p.theta = s.strain.theta;
  p.temperature = temperature;
  p.ln_z = v.ln_z;
  p.internal_energy = v.u;
  p.entropy = v.ln_z + v.u / temperature;
  p.free_energy = -temperature * v.ln_z;
  return p;
}

StatisticsMode parse_statistics(const std::string& name) {
  if (name == "boltzmann") return StatisticsMode::boltzmann;
  if (name == "fermi") return StatisticsMode::fermi;
  throw config_error("unknown statistics mode '" + name + "' (expected boltzmann or fermi)");
}

const char* statistics_name(StatisticsMode mode) {
  return mode == StatisticsMode::boltzmann ? "boltzmann" : "fermi";
}

}  // namespace qtm
