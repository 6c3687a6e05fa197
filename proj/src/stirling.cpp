#include "qtm/stirling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qtm/errors.hpp"

namespace qtm {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

const char* mode_name(OperatingMode m) {
  switch (m) {
    case OperatingMode::engine: return "engine";
    case OperatingMode::refrigerator: return "refrigerator";
    case OperatingMode::accelerator: return "accelerator";
    case OperatingMode::heater: return "heater";
    case OperatingMode::boundary: return "boundary";
    case OperatingMode::invalid: return "invalid";
  }
  return "unknown";
}

void validate(const CycleSpec& spec) {
  validate(StrainParams{spec.theta1, spec.eta_strain});
  validate(StrainParams{spec.theta2, spec.eta_strain});
  if (!(spec.t_cold > 0.0) || !(spec.t_hot >= spec.t_cold)) {
    throw config_error("cycle temperatures need t_hot >= t_cold > 0");
  }
}

OperatingMode classify_mode(double q_hot, double q_cold, double work, double tol_hot,
                            double tol_cold, double tol_work) {
  if (tol_hot < 0.0 || tol_cold < 0.0 || tol_work < 0.0) {
    throw config_error("classification tolerances must be non-negative");
  }
  if (std::abs(q_hot) <= tol_hot || std::abs(q_cold) <= tol_cold || std::abs(work) <= tol_work) {
    return OperatingMode::boundary;
  }
  if (q_hot > 0.0 && q_cold < 0.0 && work < 0.0) return OperatingMode::engine;
  if (q_hot < 0.0 && q_cold > 0.0 && work > 0.0) return OperatingMode::refrigerator;
  if (q_hot > 0.0 && q_cold < 0.0 && work > 0.0) return OperatingMode::accelerator;
  if (q_hot < 0.0 && q_cold < 0.0 && work > 0.0) return OperatingMode::heater;
  throw invariant_violation("sign pattern outside the four operating modes: Q_h=" +
                            std::to_string(q_hot) + " Q_c=" + std::to_string(q_cold) +
                            " W=" + std::to_string(work));
}

OperatingMode classify_mode(double q_hot, double q_cold, double work, double tol) {
  return classify_mode(q_hot, q_cold, work, tol, tol, tol);
}

double engine_efficiency(double q_hot, double work) {
  if (!(q_hot > 0.0) || !(work < 0.0)) {
    throw config_error("engine efficiency requires Q_h > 0 and W < 0");
  }
  return std::abs(work) / q_hot;
}

double refrigerator_cop(double q_cold, double work) {
  if (!(q_cold > 0.0) || !(work > 0.0)) {
    throw config_error("COP requires Q_c > 0 and W > 0");
  }
  return q_cold / work;
}

CarnotBounds carnot_bounds(double t_hot, double t_cold) {
  if (!(t_cold > 0.0) || !(t_hot > t_cold)) {
    throw config_error("Carnot bounds require t_hot > t_cold > 0");
  }
  return {1.0 - t_cold / t_hot, t_cold / (t_hot - t_cold)};
}

CycleResult assemble_cycle(const ThermalPair& p1_hot, const ThermalPair& p2_hot,
                           const ThermalPair& p1_cold, const ThermalPair& p2_cold,
                           double t_hot, double t_cold, const ExtraTols& extra) {
  CycleResult r;
  r.q_ab = -(p2_hot.internal_energy - p1_hot.internal_energy +
             t_hot * (p2_hot.ln_z - p1_hot.ln_z));
  r.q_cd = -(p1_cold.internal_energy - p2_cold.internal_energy +
             t_cold * (p1_cold.ln_z - p2_cold.ln_z));
  r.q_bc = -(p2_cold.internal_energy - p2_hot.internal_energy);
  r.q_da = -(p1_hot.internal_energy - p1_cold.internal_energy);

  const double work_strokes = r.q_ab + r.q_bc + r.q_cd + r.q_da;
  const double work_closed =
      -t_hot * (p2_hot.ln_z - p1_hot.ln_z) + t_cold * (p2_cold.ln_z - p1_cold.ln_z);
  const double scale =
      std::abs(r.q_ab) + std::abs(r.q_bc) + std::abs(r.q_cd) + std::abs(r.q_da) + 1.0;
  if (std::abs(work_strokes - work_closed) > 1e-10 * scale) {
    throw invariant_violation("stroke-sum and closed-form work disagree: " +
                              std::to_string(work_strokes) + " vs " +
                              std::to_string(work_closed));
  }
  r.work = work_closed;
  r.q_hot = t_hot * (p2_hot.ln_z - p1_hot.ln_z) + p2_hot.internal_energy -
            p1_cold.internal_energy;
  r.q_cold = -t_cold * (p2_cold.ln_z - p1_cold.ln_z) - p2_hot.internal_energy +
             p1_cold.internal_energy;

  const double balance = r.q_hot + r.q_cold + r.work;
  if (std::abs(balance) > 1e-10 * std::max(1.0, std::abs(r.q_hot))) {
    throw invariant_violation("first law violated: Q_h + Q_c + W = " + std::to_string(balance));
  }

  const double base_tol =
      1e-12 * (std::abs(r.q_hot) + std::abs(r.q_cold) + std::abs(r.work) + 1.0);
  r.tol = base_tol + std::max({extra.q_hot, extra.q_cold, extra.work});
  r.mode = classify_mode(r.q_hot, r.q_cold, r.work, base_tol + extra.q_hot,
                         base_tol + extra.q_cold, base_tol + extra.work);
  r.performance = kNan;
  if (r.mode == OperatingMode::engine) {
    r.performance = engine_efficiency(r.q_hot, r.work) / carnot_bounds(t_hot, t_cold).eta_max;
  } else if (r.mode == OperatingMode::refrigerator) {
    r.performance = refrigerator_cop(r.q_cold, r.work) / carnot_bounds(t_hot, t_cold).cop_max;
  }
  return r;
}

CycleResult run_cycle(const CycleSpec& spec, int grid_m) {
  validate(spec);
  const BandSpectrum s1 = compute_spectrum({spec.theta1, spec.eta_strain}, grid_m);
  const ThermalPoint p1h = thermal_point(s1, spec.t_hot, spec.statistics);
  const ThermalPoint p1c = thermal_point(s1, spec.t_cold, spec.statistics);
  ThermalPoint p2h = p1h;
  ThermalPoint p2c = p1c;
  if (spec.theta2 != spec.theta1) {
    const BandSpectrum s2 = compute_spectrum({spec.theta2, spec.eta_strain}, grid_m);
    p2h = thermal_point(s2, spec.t_hot, spec.statistics);
    p2c = thermal_point(s2, spec.t_cold, spec.statistics);
  }
  return assemble_cycle({p1h.ln_z, p1h.internal_energy}, {p2h.ln_z, p2h.internal_energy},
                        {p1c.ln_z, p1c.internal_energy}, {p2c.ln_z, p2c.internal_energy},
                        spec.t_hot, spec.t_cold);
}

}  // namespace qtm
