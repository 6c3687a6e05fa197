#pragma once

#include <numbers>

namespace qtm {

inline constexpr double kThetaLieb = std::numbers::pi / 2.0;
inline constexpr double kThetaKagome = 2.0 * std::numbers::pi / 3.0;

/// Lattice deformation between the Lieb (theta = pi/2) and kagome
/// (theta = 2*pi/3) limits, with strain-decay rate eta_strain.
struct StrainParams {
  double theta = kThetaLieb;
  double eta_strain = 8.0;
};

/// Hopping amplitudes in units of the nearest-neighbor scale t = 1.
struct HoppingSet {
  double t = 1.0;
  double t1_ac = 1.0;  // shorter strained bond
  double t2_ac = 1.0;  // longer strained bond
};

/// Throws config_error unless theta is within [pi/2, 2*pi/3] and eta_strain > 0.
/// A 1e-12 slack absorbs round-off from grid construction and CLI parsing.
void validate(const StrainParams& p);

/// t1 = exp[eta (1 - 2 cos(theta/2))], t2 = exp[eta (1 - 2 sin(theta/2))].
/// The exponents are 1 - d/d_nn with d the strained bond length, so t -> 1
/// as a bond shrinks to the nearest-neighbor length.
HoppingSet strain_hoppings(const StrainParams& p);

}  // namespace qtm
