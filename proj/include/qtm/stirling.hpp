#pragma once

#include <string>

#include "qtm/thermo.hpp"

namespace qtm {

/// Table-1 sign classification of one completed cycle. `boundary` marks cells
/// where some quantity sits within the classification tolerance; `invalid`
/// marks never-evaluated sweep cells (T_c > T_h).
enum class OperatingMode { engine, refrigerator, accelerator, heater, boundary, invalid };

const char* mode_name(OperatingMode m);

/// One Stirling cycle: isothermal strokes theta1 -> theta2 at t_hot and
/// theta2 -> theta1 at t_cold, joined by isochoric thermalization.
struct CycleSpec {
  double theta1 = kThetaKagome;
  double theta2 = kThetaLieb;
  double t_hot = 0.02;
  double t_cold = 0.01;
  double eta_strain = 8.0;
  StatisticsMode statistics = StatisticsMode::fermi;
};

/// Heats per stroke, net work, bath totals, mode, and Carnot-relative
/// performance (eta/eta_max for an engine, COP/COP_max for a refrigerator,
/// NaN otherwise). Signs: positive heat flows into the system, positive work
/// is done on the system.
struct CycleResult {
  double q_ab = 0.0;
  double q_bc = 0.0;
  double q_cd = 0.0;
  double q_da = 0.0;
  double work = 0.0;
  double q_hot = 0.0;
  double q_cold = 0.0;
  OperatingMode mode = OperatingMode::boundary;
  double performance = 0.0;
  double tol = 0.0;  // classification tolerance actually used
};

/// (ln Z, U) of one working-medium configuration at one temperature; the
/// inputs of the cycle bookkeeping, shared by the band and Monte Carlo paths.
struct ThermalPair {
  double ln_z = 0.0;
  double internal_energy = 0.0;
};

/// Per-quantity widenings of the classification bands, used when the inputs
/// carry statistical errors.
struct ExtraTols {
  double q_hot = 0.0;
  double q_cold = 0.0;
  double work = 0.0;
};

/// Assembles heats and work from the four corner states. Throws
/// invariant_violation if the stroke-sum and closed-form work disagree or the
/// first law fails beyond 1e-10 (scaled).
CycleResult assemble_cycle(const ThermalPair& p1_hot, const ThermalPair& p2_hot,
                           const ThermalPair& p1_cold, const ThermalPair& p2_cold,
                           double t_hot, double t_cold, const ExtraTols& extra = {});

/// Non-interacting cycle from band spectra at BZ grid resolution grid_m.
CycleResult run_cycle(const CycleSpec& spec, int grid_m);

/// Per-quantity tolerances; any |quantity| <= its tol is a boundary cell.
OperatingMode classify_mode(double q_hot, double q_cold, double work, double tol);
OperatingMode classify_mode(double q_hot, double q_cold, double work, double tol_hot,
                            double tol_cold, double tol_work);

double engine_efficiency(double q_hot, double work);
double refrigerator_cop(double q_cold, double work);

struct CarnotBounds {
  double eta_max = 0.0;
  double cop_max = 0.0;
};

/// eta_max = 1 - T_c/T_h, COP_max = T_c/(T_h - T_c); requires t_hot > t_cold > 0.
CarnotBounds carnot_bounds(double t_hot, double t_cold);

void validate(const CycleSpec& spec);

}  // namespace qtm
