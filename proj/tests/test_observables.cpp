#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtm/errors.hpp"
#include "qtm/observables.hpp"

using namespace qtm;

TEST_CASE("binned jackknife basics") {
  std::vector<double> constant(40, 1.5);
  const MeanErr c = binned_jackknife(constant);
  CHECK(c.mean == doctest::Approx(1.5));
  CHECK(c.stderr_ == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> series;
  for (int i = 0; i < 1000; ++i) series.push_back(i % 2 ? 1.0 : -1.0);
  const MeanErr a = binned_jackknife(series);
  CHECK(a.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.stderr_ < 0.1);

  CHECK(binned_jackknife(std::vector<double>{}).mean == 0.0);
  CHECK(binned_jackknife(std::vector<double>{3.0}).mean == 3.0);
}

TEST_CASE("structure factor of a uniform field") {
  const LatticeGeometry g = build_geometry(4, {kThetaKagome, 8.0});
  AuxFieldConfig f;
  const std::array<double, 3> mhat{0.3, -0.4, 0.5};
  f.m.assign(g.n_sites(), mhat);
  const auto sq = structure_factor(g, f);
  const double m2 = 0.3 * 0.3 + 0.4 * 0.4 + 0.5 * 0.5;
  CHECK(sq[0] == doctest::Approx(m2).epsilon(1e-12));
  for (std::size_t q = 1; q < sq.size(); ++q) CHECK(std::abs(sq[q]) < 1e-12);
}

TEST_CASE("structure factor of a staggered field peaks at (pi, pi)") {
  const int l = 4;
  const LatticeGeometry g = build_geometry(l, {kThetaLieb, 8.0});
  AuxFieldConfig f;
  f.m.assign(g.n_sites(), {0, 0, 0});
  for (const Site& s : g.sites) {
    const double sign = ((s.cell_x + s.cell_y) % 2 == 0) ? 1.0 : -1.0;
    f.m[g.site_index(s.cell_x, s.cell_y, s.sub)] = {0.0, 0.0, sign};
  }
  const auto sq = structure_factor(g, f);
  const std::size_t q_pipi = static_cast<std::size_t>(l / 2) * l + l / 2;
  CHECK(sq[q_pipi] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(sq[0]) < 1e-12);
}

TEST_CASE("measure_observables rejects empty input") {
  const LatticeGeometry g = build_geometry(2, {kThetaLieb, 8.0});
  CHECK_THROWS_AS(measure_observables(g, {}, MCParams{}, 0.0), config_error);
}

TEST_CASE("observables on sampled configurations") {
  const LatticeGeometry g = build_geometry(2, {kThetaLieb, 8.0});
  MCParams p;
  p.beta = 10.0;
  p.u = 2.0;
  p.mu = 1.0;
  p.cluster_l = 2;
  p.seed = 21;
  MonteCarlo mc(g, p);
  std::vector<AuxFieldConfig> samples;
  double rate = 0.0;
  for (int s = 0; s < 30; ++s) {
    rate = mc.sweep();
    if (s >= 10) samples.push_back(mc.config());
  }
  const Observables o = measure_observables(g, samples, p, rate);
  CHECK(o.density_mean > 0.0);
  CHECK(o.density_mean < 2.0);
  CHECK(o.sq.size() == 4);
  for (double s : o.sq) CHECK(s >= 0.0);
  CHECK(std::isfinite(o.energy_mean));
  CHECK(o.energy_stderr >= 0.0);
  CHECK(o.acceptance_rate == rate);

  // DOS integrates to ~2 states per site (Lorentzian tails lose a little).
  double integral = 0.0;
  for (std::size_t i = 1; i < o.dos_omega.size(); ++i) {
    integral += 0.5 * (o.dos_rho[i] + o.dos_rho[i - 1]) *
                (o.dos_omega[i] - o.dos_omega[i - 1]);
  }
  CHECK(integral == doctest::Approx(2.0).epsilon(0.05));

  // Parallel measurement gives bit-identical results.
  const Observables o2 = measure_observables(g, samples, p, rate, DosParams{}, 2);
  CHECK(o2.energy_mean == o.energy_mean);
  CHECK(o2.sq == o.sq);
}

TEST_CASE("weak coupling at low T drives the field (and S) to zero") {
  // The stiffness weight exp(-beta (u/4) m^2) concentrates m near zero once
  // beta u/4 >> 1; S(q) then collapses. Kagome angle: the flat band sits at
  // the top of the spectrum there, away from the Fermi level, so no
  // flat-band susceptibility fights the stiffness. Annealed down from high T
  // so the unit-ball hot start relaxes within the budget.
  const LatticeGeometry g = build_geometry(4, {kThetaKagome, 8.0});
  MCParams p;
  p.beta = 25.0;
  p.u = 1.0;
  p.mu = 0.5;
  p.cluster_l = 2;
  p.seed = 33;
  p.move_width = 0.5;
  MonteCarlo mc(g, p);
  for (double beta : {2.0, 6.0, 12.0, 25.0}) {
    mc.set_beta(beta);
    for (int s = 0; s < 60; ++s) mc.adapt_move_width(mc.sweep());
  }
  std::vector<AuxFieldConfig> samples;
  for (int s = 0; s < 200; ++s) {
    mc.sweep();
    if (s % 2 == 0) samples.push_back(mc.config());
  }
  const Observables o = measure_observables(g, samples, p, 0.0);
  for (double s : o.sq) CHECK(s < 0.01);
}
