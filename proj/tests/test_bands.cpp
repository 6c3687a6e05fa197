#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtm/bands.hpp"
#include "qtm/errors.hpp"

using namespace qtm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("strain hoppings at the corner angles") {
  const HoppingSet kag = strain_hoppings({kThetaKagome, 8.0});
  CHECK(kag.t == 1.0);
  CHECK(kag.t1_ac == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kag.t2_ac == doctest::Approx(std::exp(8.0 * (1.0 - std::sqrt(3.0)))).epsilon(1e-13));
  CHECK(kag.t2_ac == doctest::Approx(2.8615081712083375e-3).epsilon(1e-12));

  const HoppingSet lieb = strain_hoppings({kThetaLieb, 8.0});
  CHECK(lieb.t1_ac == doctest::Approx(lieb.t2_ac).epsilon(1e-14));
  CHECK(lieb.t1_ac == doctest::Approx(std::exp(8.0 * (1.0 - std::sqrt(2.0)))).epsilon(1e-13));
  CHECK(lieb.t1_ac == doctest::Approx(3.638100435315468e-2).epsilon(1e-12));
}

TEST_CASE("strain hoppings ordering over the whole range") {
  for (int i = 0; i <= 50; ++i) {
    const double theta = kThetaLieb + (kThetaKagome - kThetaLieb) * i / 50.0;
    for (double eta : {4.0, 8.0, 12.0}) {
      const HoppingSet h = strain_hoppings({theta, eta});
      CHECK(h.t2_ac > 0.0);
      CHECK(h.t2_ac <= h.t1_ac + 1e-15);
      CHECK(h.t1_ac <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("strain parameter validation") {
  CHECK_THROWS_AS(strain_hoppings({kPi / 3.0, 8.0}), config_error);
  CHECK_THROWS_AS(strain_hoppings({0.8 * kPi, 8.0}), config_error);
  CHECK_THROWS_AS(strain_hoppings({kThetaLieb, 0.0}), config_error);
  CHECK_THROWS_AS(strain_hoppings({kThetaLieb, -1.0}), config_error);
  CHECK_NOTHROW(strain_hoppings({kThetaLieb, 8.0}));
  CHECK_NOTHROW(strain_hoppings({kThetaKagome, 8.0}));
}

TEST_CASE("bloch entries at reference momenta") {
  const StrainParams lieb{kThetaLieb, 8.0};
  const HoppingSet h = strain_hoppings(lieb);

  // k = 0: all cosines are 1.
  const BlochEntries e0 = bloch_entries(Momentum{0.0, 0.0}, lieb);
  CHECK(e0.a == doctest::Approx(-2.0));
  CHECK(e0.b == doctest::Approx(-2.0));
  CHECK(e0.c == doctest::Approx(-2.0 * (h.t1_ac + h.t2_ac)));

  const BlochEntries e1 = bloch_entries(Momentum{2.0 * kPi, 0.0}, lieb);
  CHECK(e1.a == doctest::Approx(2.0));

  const BlochEntries e2 = bloch_entries(Momentum{kPi, kPi}, lieb);
  CHECK(e2.b == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("entry bounds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uk(-20.0, 20.0);
  std::uniform_real_distribution<double> ut(kThetaLieb, kThetaKagome);
  for (int i = 0; i < 1000; ++i) {
    const StrainParams p{ut(rng), 8.0};
    const HoppingSet h = strain_hoppings(p);
    const BlochEntries e = bloch_entries(Momentum{uk(rng), uk(rng)}, p);
    CHECK(std::abs(e.a) <= 2.0 + 1e-12);
    CHECK(std::abs(e.b) <= 2.0 + 1e-12);
    CHECK(std::abs(e.c) <= 2.0 * (h.t1_ac + h.t2_ac) + 1e-12);
  }
}

TEST_CASE("analytic bands: hand-checkable cases") {
  const BandTriple t1 = band_energies_analytic({1.0, 0.0, 0.0});
  CHECK(t1.e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t1.e[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t1.e[2] == doctest::Approx(1.0).epsilon(1e-12));

  const BandTriple t0 = band_energies_analytic({0.0, 0.0, 0.0});
  CHECK(t0.e[0] == 0.0);
  CHECK(t0.e[1] == 0.0);
  CHECK(t0.e[2] == 0.0);

  // Triangle graph: eigenvalues (-1, -1, 2).
  const BandTriple t2 = band_energies_analytic({1.0, 1.0, 1.0});
  CHECK(t2.e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t2.e[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t2.e[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("numeric bands: hand-checkable cases") {
  const BandTriple t1 = band_energies_numeric({1.0, 0.0, 0.0});
  CHECK(t1.e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t1.e[2] == doctest::Approx(1.0).epsilon(1e-12));
  const BandTriple t2 = band_energies_numeric({1.0, 1.0, 1.0});
  CHECK(t2.e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t2.e[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("analytic vs numeric cross-oracle and root identities") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const BlochEntries e{ua(rng), ua(rng), ua(rng)};
    const BandTriple a = band_energies_analytic(e);
    const BandTriple n = band_energies_numeric(e);
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a.e[j] - n.e[j]));

    const double p = e.a * e.a + e.b * e.b + e.c * e.c;
    const double sum = a.e[0] + a.e[1] + a.e[2];
    const double sum2 = a.e[0] * a.e[0] + a.e[1] * a.e[1] + a.e[2] * a.e[2];
    const double prod = a.e[0] * a.e[1] * a.e[2];
    CHECK(std::abs(sum) < 1e-12);
    CHECK(sum2 == doctest::Approx(2.0 * p).epsilon(1e-10));
    CHECK(prod == doctest::Approx(2.0 * e.a * e.b * e.c).epsilon(1e-10));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Lieb-limit k=0 triple against the numeric oracle") {
  const StrainParams lieb{kThetaLieb, 8.0};
  const BlochEntries e = bloch_entries(Momentum{0.0, 0.0}, lieb);
  const BandTriple a = band_energies_analytic(e);
  const BandTriple n = band_energies_numeric(e);
  for (int j = 0; j < 3; ++j) CHECK(a.e[j] == doctest::Approx(n.e[j]).epsilon(1e-10));
}

TEST_CASE("BZ grid basics") {
  CHECK_THROWS_AS(build_bz_grid({kThetaLieb, 8.0}, 1), config_error);

  const BZGrid g2 = build_bz_grid({kThetaLieb, 8.0}, 2);
  CHECK(g2.points.size() == 4);
  double wsum = 0.0;
  for (const auto& [k, w] : g2.points) {
    CHECK(w == doctest::Approx(0.25));
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

  // Square reciprocal cell in the Lieb limit: doubled cell spans [0, 4pi)^2.
  const auto b = reciprocal_vectors(kThetaLieb);
  CHECK(b[0].x == doctest::Approx(2.0 * kPi));
  CHECK(b[0].y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b[1].x == doctest::Approx(0.0));
  CHECK(b[1].y == doctest::Approx(2.0 * kPi));
  double max_kx = 0.0;
  for (const auto& [k, w] : g2.points) max_kx = std::max(max_kx, k.kx);
  CHECK(max_kx == doctest::Approx(2.0 * kPi));  // m=2: points at 0 and 2pi = 4pi/2
}

TEST_CASE("spectrum multiset is periodic under the doubled reciprocal cell") {
  const StrainParams p{0.57 * kPi, 8.0};
  const auto b = reciprocal_vectors(p.theta);
  const HoppingSet h = strain_hoppings(p);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Momentum k{uk(rng), uk(rng)};
    const Momentum ks{k.kx + 2.0 * b[0].x, k.ky + 2.0 * b[0].y};
    const BandTriple t = band_energies_analytic(bloch_entries(k, p.theta, h));
    const BandTriple ts = band_energies_analytic(bloch_entries(ks, p.theta, h));
    for (int j = 0; j < 3; ++j) CHECK(t.e[j] == doctest::Approx(ts.e[j]).epsilon(1e-10));
  }
}

TEST_CASE("flat band at the kagome angle") {
  const BandSpectrum s = compute_spectrum({kThetaKagome, 8.0}, 101);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 2; i < s.energies.size(); i += 3) {
    lo = std::min(lo, s.energies[i]);
    hi = std::max(hi, s.energies[i]);
  }
  CHECK(hi - lo < 0.05);
  CHECK(hi - lo == doctest::Approx(0.011443).epsilon(1e-2));
}

TEST_CASE("Lieb-limit symmetry: spectrum multiset invariant under kx <-> ky") {
  const StrainParams p{kThetaLieb, 8.0};
  const HoppingSet h = strain_hoppings(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uk(-8.0, 8.0);
  for (int i = 0; i < 300; ++i) {
    const double kx = uk(rng), ky = uk(rng);
    const BandTriple t = band_energies_analytic(bloch_entries({kx, ky}, p.theta, h));
    const BandTriple ts = band_energies_analytic(bloch_entries({ky, kx}, p.theta, h));
    for (int j = 0; j < 3; ++j) CHECK(t.e[j] == doctest::Approx(ts.e[j]).epsilon(1e-10));
  }
}

TEST_CASE("quadrature convergence of the lowest-band average") {
  const StrainParams p{0.55 * kPi, 8.0};
  auto avg_bottom = [&](int m) {
    const BandSpectrum s = compute_spectrum(p, m);
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < s.energies.size(); i += 3) {
      acc += s.energies[i];
      ++n;
    }
    return acc / n;  // weights are uniform
  };
  const double a200 = avg_bottom(200);
  const double a400 = avg_bottom(400);
  CHECK(std::abs(a400 - a200) < 1e-6);
}
