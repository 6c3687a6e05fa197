#include "qtm/bands.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qtm/errors.hpp"

namespace qtm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::array<Vec2, 2> reciprocal_vectors(double theta) {
  // a1 = (1,0), a2 = (-cos theta, sin theta); b_i . a_j = 2 pi delta_ij.
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {Vec2{kTwoPi, kTwoPi * c / s}, Vec2{0.0, kTwoPi / s}};
}

BlochEntries bloch_entries(const Momentum& k, double theta, const HoppingSet& h) {
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double hx = 0.5 * k.kx;
  const double hy = 0.5 * k.ky;
  BlochEntries e;
  e.a = -2.0 * std::cos(hx);
  e.b = -2.0 * std::cos(-hx * ct + hy * st);
  // Each strained pair couples through two bonds per cell, hence the 2s,
  // matching the A_k and B_k prefactors.
  e.c = -2.0 * h.t1_ac * std::cos(hx * (1.0 + ct) - hy * st) -
        2.0 * h.t2_ac * std::cos(hx * (1.0 - ct) + hy * st);
  return e;
}

BlochEntries bloch_entries(const Momentum& k, const StrainParams& p) {
  if (!std::isfinite(k.kx) || !std::isfinite(k.ky)) {
    throw config_error("momentum components must be finite");
  }
  return bloch_entries(k, p.theta, strain_hoppings(p));
}

BandTriple band_energies_analytic(const BlochEntries& e) {
  const double p = e.a * e.a + e.b * e.b + e.c * e.c;
  if (p < 1e-30) return BandTriple{{0.0, 0.0, 0.0}};
  const double q = 2.0 * e.a * e.b * e.c;
  double arg = 3.0 * std::sqrt(3.0) * q / (2.0 * p * std::sqrt(p));
  arg = std::clamp(arg, -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  const double r = 2.0 * std::sqrt(p / 3.0);
  BandTriple t;
  t.e = {r * std::cos(phi), r * std::cos(phi - kTwoPi / 3.0),
         r * std::cos(phi - 2.0 * kTwoPi / 3.0)};
  std::sort(t.e.begin(), t.e.end());
  return t;
}

BandTriple band_energies_numeric(const BlochEntries& e) {
  Eigen::Matrix3d h;
  h << 0.0, e.a, e.b,
       e.a, 0.0, e.c,
       e.b, e.c, 0.0;
  // Iterative (tridiagonal QL) path, independent of the closed form above.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h, Eigen::EigenvaluesOnly);
  BandTriple t;
  t.e = {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
  return t;
}

BZGrid build_bz_grid(const StrainParams& p, int m) {
  validate(p);
  if (m < 2) throw config_error("BZ grid needs at least 2 points per axis, got " + std::to_string(m));
  const auto b = reciprocal_vectors(p.theta);
  BZGrid g;
  g.points_per_axis = m;
  g.points.reserve(static_cast<std::size_t>(m) * m);
  const double w = 1.0 / (static_cast<double>(m) * m);
  for (int i = 0; i < m; ++i) {
    const double u = static_cast<double>(i) / m;
    for (int j = 0; j < m; ++j) {
      const double v = static_cast<double>(j) / m;
      Momentum k{u * 2.0 * b[0].x + v * 2.0 * b[1].x,
                 u * 2.0 * b[0].y + v * 2.0 * b[1].y};
      g.points.emplace_back(k, w);
    }
  }
  // |det [2 b1; 2 b2]| = 16 pi^2 / sin theta.
  g.cell_area = std::abs(4.0 * (b[0].x * b[1].y - b[0].y * b[1].x));
  return g;
}

BandSpectrum compute_spectrum(const StrainParams& p, int m) {
  const HoppingSet h = strain_hoppings(p);
  const BZGrid grid = build_bz_grid(p, m);
  BandSpectrum s;
  s.grid_m = m;
  s.strain = p;
  s.energies.reserve(grid.points.size() * 3);
  s.weights.reserve(grid.points.size() * 3);
  for (const auto& [k, w] : grid.points) {
    const BandTriple t = band_energies_analytic(bloch_entries(k, p.theta, h));
    for (double e : t.e) {
      s.energies.push_back(e);
      s.weights.push_back(w);
    }
  }
  return s;
}

}  // namespace qtm
