#include "qtm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qtm/errors.hpp"
#include "qtm/parallel.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

MeanErr binned_jackknife(std::span<const double> series, int max_bins) {
  const int n = static_cast<int>(series.size());
  if (n == 0) return {};
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  const int nb = std::min(max_bins, n);
  if (nb < 2) return {mean, 0.0};
  std::vector<double> bins(nb, 0.0);
  std::vector<int> counts(nb, 0);
  for (int i = 0; i < n; ++i) {
    const int b = std::min(nb - 1, i * nb / n);
    bins[b] += series[i];
    ++counts[b];
  }
  for (int b = 0; b < nb; ++b) bins[b] /= counts[b];
  double bin_mean = 0.0;
  for (double v : bins) bin_mean += v;
  bin_mean /= nb;
  // Delete-one jackknife over bin means.
  double var = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double loo = (bin_mean * nb - bins[b]) / (nb - 1);
    var += (loo - bin_mean) * (loo - bin_mean);
  }
  var *= static_cast<double>(nb - 1) / nb;
  return {mean, std::sqrt(var)};
}

std::vector<double> structure_factor(const LatticeGeometry& g, const AuxFieldConfig& f) {
  const int l = g.l;
  const int n = g.n_sites();
  std::vector<double> sq(static_cast<std::size_t>(l) * l, 0.0);
  // Per-cell field sums: the phase depends only on the unit-cell coordinate.
  std::vector<std::array<double, 3>> cell(static_cast<std::size_t>(l) * l, {0.0, 0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    auto& c = cell[i / 3];
    c[0] += f.m[i][0];
    c[1] += f.m[i][1];
    c[2] += f.m[i][2];
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (int qx = 0; qx < l; ++qx) {
    for (int qy = 0; qy < l; ++qy) {
      std::complex<double> amp[3] = {};
      for (int cx = 0; cx < l; ++cx) {
        for (int cy = 0; cy < l; ++cy) {
          const double phase = two_pi * (static_cast<double>(qx) * cx +
                                         static_cast<double>(qy) * cy) / l;
          const std::complex<double> ph(std::cos(phase), std::sin(phase));
          const auto& c = cell[cx * l + cy];
          amp[0] += c[0] * ph;
          amp[1] += c[1] * ph;
          amp[2] += c[2] * ph;
        }
      }
      sq[static_cast<std::size_t>(qx) * l + qy] =
          (std::norm(amp[0]) + std::norm(amp[1]) + std::norm(amp[2])) /
          (static_cast<double>(n) * n);
    }
  }
  return sq;
}

Observables measure_observables(const LatticeGeometry& g,
                                std::span<const AuxFieldConfig> samples,
                                const MCParams& params, double acceptance_rate,
                                const DosParams& dos, int threads) {
  if (samples.empty()) throw config_error("measure_observables needs at least one sample");
  const int ns = static_cast<int>(samples.size());
  const int n_sites = g.n_sites();
  const double beta = params.beta;

  std::vector<std::vector<double>> spectra(ns);
  std::vector<double> energies(ns), densities(ns);
  std::vector<std::vector<double>> sqs(ns);
  parallel_for(ns, threads, [&](int s) {
    const EffectiveHamiltonian h = build_h_eff(g, samples[s], params.u, params.mu);
    double e = h.stiffness;
    double d = 0.0;
    for (double en : h.spectrum) {
      const double f = fermi_of(beta * en);
      e += en * f;
      d += f;
    }
    energies[s] = e;
    densities[s] = d / n_sites;
    sqs[s] = structure_factor(g, samples[s]);
    spectra[s] = h.spectrum;
  });

  Observables out;
  out.l = g.l;
  out.acceptance_rate = acceptance_rate;
  const MeanErr em = binned_jackknife(energies);
  out.energy_mean = em.mean;
  out.energy_stderr = em.stderr_;
  double dm = 0.0;
  for (double d : densities) dm += d;
  out.density_mean = dm / ns;

  const std::size_t nq = sqs[0].size();
  out.sq.resize(nq);
  out.sq_err.resize(nq);
  std::vector<double> series(ns);
  for (std::size_t q = 0; q < nq; ++q) {
    for (int s = 0; s < ns; ++s) series[s] = sqs[s][q];
    const MeanErr me = binned_jackknife(series);
    out.sq[q] = me.mean;
    out.sq_err[q] = me.stderr_;
  }

  double emin = spectra[0][0];
  double emax = spectra[0].back();
  for (const auto& sp : spectra) {
    emin = std::min(emin, sp.front());
    emax = std::max(emax, sp.back());
  }
  const double lo = emin - dos.pad;
  const double hi = emax + dos.pad;
  out.dos_omega.resize(dos.n_omega);
  out.dos_rho.assign(dos.n_omega, 0.0);
  const double g_over_pi = dos.gamma / std::numbers::pi;
  for (int k = 0; k < dos.n_omega; ++k) {
    out.dos_omega[k] = lo + (hi - lo) * k / (dos.n_omega - 1);
  }
  for (const auto& sp : spectra) {
    for (double en : sp) {
      for (int k = 0; k < dos.n_omega; ++k) {
        const double d = out.dos_omega[k] - en;
        out.dos_rho[k] += g_over_pi / (d * d + dos.gamma * dos.gamma);
      }
    }
  }
  const double norm = 1.0 / (static_cast<double>(ns) * n_sites);
  for (double& r : out.dos_rho) r *= norm;
  return out;
}

}  // namespace qtm
