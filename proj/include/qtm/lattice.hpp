#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qtm/strain.hpp"

namespace qtm {

enum class Sublattice : std::uint8_t { A = 0, B = 1, C = 2 };

struct Site {
  int cell_x = 0;
  int cell_y = 0;
  Sublattice sub = Sublattice::A;
};

/// Undirected hopping bond; `amplitude` is the Hamiltonian matrix element
/// (negative of the hopping magnitude, matching A_k = -2 cos(kx/2)).
struct Bond {
  int i = 0;
  int j = 0;
  double amplitude = 0.0;
};

/// One bond of the per-cell stencil: endpoints given as (cell offset,
/// sublattice). Every lattice bond is owned by exactly one cell.
struct StencilBond {
  std::array<int, 2> da{};  // cell offset of endpoint 1
  Sublattice sa = Sublattice::A;
  std::array<int, 2> db{};  // cell offset of endpoint 2
  Sublattice sb = Sublattice::A;
  double amplitude = 0.0;
  bool strained = false;
};

/// The eight bonds owned by each unit cell: four nearest-neighbor A-B / A-C
/// bonds at t = 1 and the two strained pairs (t1_ac family along (a1-a2)/2,
/// t2_ac family along (a1+a2)/2).
std::array<StencilBond, 8> bond_stencil(const HoppingSet& h);

/// Periodic l x l lattice with the 3-site (A, B, C) basis; 3*l^2 sites.
struct LatticeGeometry {
  int l = 0;
  std::vector<Site> sites;
  std::vector<Bond> nn_bonds;
  std::vector<Bond> ac_bonds;
  bool periodic = true;
  HoppingSet hoppings;
  StrainParams strain;

  int n_sites() const { return 3 * l * l; }
  int site_index(int cx, int cy, Sublattice s) const {
    const int mx = ((cx % l) + l) % l;
    const int my = ((cy % l) + l) % l;
    return (mx * l + my) * 3 + static_cast<int>(s);
  }

  template <class F>
  void for_each_bond(F&& f) const {
    for (const Bond& b : nn_bonds) f(b);
    for (const Bond& b : ac_bonds) f(b);
  }
};

/// Builds the periodic geometry; l must be even and >= 2.
LatticeGeometry build_geometry(int l, const StrainParams& p);

}  // namespace qtm
