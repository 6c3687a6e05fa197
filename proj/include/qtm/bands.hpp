#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qtm/strain.hpp"

namespace qtm {

struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Entries of the 3x3 Bloch matrix [[0,a,b],[a,0,c],[b,c,0]].
struct BlochEntries {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Band energies at one k, sorted ascending. The matrix is traceless, so
/// e[0]+e[1]+e[2] = 0.
struct BandTriple {
  std::array<double, 3> e{};
};

/// Uniform grid over the doubled reciprocal cell (2 b1, 2 b2). The Bloch
/// matrix has half-angle cosine arguments and is periodic under 2 b_i, not
/// b_i, so this cell tiles the spectrum exactly. Weights sum to 1.
struct BZGrid {
  int points_per_axis = 0;
  std::vector<std::pair<Momentum, double>> points;
  double cell_area = 0.0;
};

/// Flattened band energies over a BZ grid: three consecutive entries per
/// k-point (ascending within the triple) and one weight per entry, so that
/// sums over levels need no triple bookkeeping. Per-level weights sum to 3.
struct BandSpectrum {
  std::vector<double> energies;
  std::vector<double> weights;
  int grid_m = 0;
  StrainParams strain{};
};

/// Reciprocal vectors of the direct cell a1 = (1,0), a2 = (-cos theta, sin theta).
std::array<Vec2, 2> reciprocal_vectors(double theta);

/// A_k, B_k, C_k of the Bloch matrix at momentum k.
BlochEntries bloch_entries(const Momentum& k, const StrainParams& p);
BlochEntries bloch_entries(const Momentum& k, double theta, const HoppingSet& h);

/// Roots of lambda^3 - P lambda - Q with P = a^2+b^2+c^2, Q = 2abc, by the
/// trigonometric (Viete) formula lambda_j = 2 sqrt(P/3) cos(phi/3 - 2pi(j-1)/3).
/// The arccos argument is clamped to [-1,1]; P below 1e-30 returns zeros.
BandTriple band_energies_analytic(const BlochEntries& e);

/// Same spectrum through an iterative symmetric eigensolver; the independent
/// cross-check for the closed form.
BandTriple band_energies_numeric(const BlochEntries& e);

/// m x m uniformly weighted grid over the doubled reciprocal cell.
BZGrid build_bz_grid(const StrainParams& p, int m);

/// Band energies over the grid via the analytic route.
BandSpectrum compute_spectrum(const StrainParams& p, int m);

}  // namespace qtm
