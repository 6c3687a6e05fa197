#include "qtm/lattice.hpp"

#include <string>

#include "qtm/errors.hpp"

namespace qtm {

std::array<StencilBond, 8> bond_stencil(const HoppingSet& h) {
  using S = Sublattice;
  const double t = -h.t;
  const double t1 = -h.t1_ac;
  const double t2 = -h.t2_ac;
  return {{
      {{0, 0}, S::A, {0, 0}, S::B, t, false},   // A(R)-B(R), bond +a1/2
      {{1, 0}, S::A, {0, 0}, S::B, t, false},   // A(R+a1)-B(R), bond -a1/2
      {{0, 0}, S::A, {0, 0}, S::C, t, false},   // A(R)-C(R), bond +a2/2
      {{0, 1}, S::A, {0, 0}, S::C, t, false},   // A(R+a2)-C(R), bond -a2/2
      {{0, 0}, S::B, {0, 0}, S::C, t1, true},   // B(R)-C(R), (a2-a1)/2
      {{0, 0}, S::B, {1, -1}, S::C, t1, true},  // B(R)-C(R+a1-a2)
      {{0, 0}, S::B, {1, 0}, S::C, t2, true},   // B(R)-C(R+a1)
      {{0, 0}, S::B, {0, -1}, S::C, t2, true},  // B(R)-C(R-a2)
  }};
}

LatticeGeometry build_geometry(int l, const StrainParams& p) {
  validate(p);
  if (l < 2 || l % 2 != 0) {
    throw config_error("lattice size l must be even and >= 2, got " + std::to_string(l));
  }
  LatticeGeometry g;
  g.l = l;
  g.strain = p;
  g.hoppings = strain_hoppings(p);
  g.sites.resize(static_cast<std::size_t>(3) * l * l);
  for (int cx = 0; cx < l; ++cx) {
    for (int cy = 0; cy < l; ++cy) {
      for (int s = 0; s < 3; ++s) {
        g.sites[g.site_index(cx, cy, static_cast<Sublattice>(s))] =
            Site{cx, cy, static_cast<Sublattice>(s)};
      }
    }
  }
  const auto stencil = bond_stencil(g.hoppings);
  for (int cx = 0; cx < l; ++cx) {
    for (int cy = 0; cy < l; ++cy) {
      for (const StencilBond& sb : stencil) {
        Bond b;
        b.i = g.site_index(cx + sb.da[0], cy + sb.da[1], sb.sa);
        b.j = g.site_index(cx + sb.db[0], cy + sb.db[1], sb.sb);
        b.amplitude = sb.amplitude;
        (sb.strained ? g.ac_bonds : g.nn_bonds).push_back(b);
      }
    }
  }
  return g;
}

}  // namespace qtm
