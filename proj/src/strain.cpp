#include "qtm/strain.hpp"

#include <cmath>
#include <string>

#include "qtm/errors.hpp"

namespace qtm {

namespace {
constexpr double kThetaSlack = 1e-12;
}

void validate(const StrainParams& p) {
  if (!(p.theta >= kThetaLieb - kThetaSlack && p.theta <= kThetaKagome + kThetaSlack)) {
    throw config_error("theta = " + std::to_string(p.theta) +
                       " outside [pi/2, 2*pi/3]");
  }
  if (!(p.eta_strain > 0.0)) {
    throw config_error("eta_strain must be positive, got " + std::to_string(p.eta_strain));
  }
}

HoppingSet strain_hoppings(const StrainParams& p) {
  validate(p);
  const double half = 0.5 * p.theta;
  HoppingSet h;
  h.t = 1.0;
  h.t1_ac = std::exp(p.eta_strain * (1.0 - 2.0 * std::cos(half)));
  h.t2_ac = std::exp(p.eta_strain * (1.0 - 2.0 * std::sin(half)));
  return h;
}

}  // namespace qtm
