#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deltaqed/config.hpp"
#include "deltaqed/flux_circuit.hpp"
#include "deltaqed/pulse.hpp"
#include "deltaqed/report.hpp"
#include "deltaqed/scattering.hpp"

namespace deltaqed {

enum class SweepKind { spectrum, pulse_width, flux, saturation };

SweepKind parse_sweep_kind(const std::string& name);
Direction parse_direction(const std::string& name);

struct GridSpec {
  double start;
  double stop;
  int points;

  GridSpec(double start, double stop, int points);
  std::vector<double> values() const;  // linear
};

// Emitter parameters resolved from a config: straight from [emitter], or
// realized from [circuit] + [loss] when a circuit section is present (the
// circuit wins if both are given).
struct PhysicsSetup {
  EmitterRates rates;
  Transitions transitions;
  DriveField drive;
  std::string source;  // "emitter" or "circuit"
  std::optional<CircuitParams> circuit;
  std::optional<QubitSpectrum> spectrum;
  std::optional<RealizedRates> realized;
  ChargeTruncation truncation;
  CouplingModel coupling;
};

// need_drive = false lets commands that take no control field (e.g. circuit
// inspection) run without a [drive] section.
PhysicsSetup resolve_physics(const Config& cfg, bool need_drive = true);

// Drive resolution alone (optimal = down|up, or explicit rabi with omega or
// detuning), given already-known rates and transitions.
DriveField resolve_drive(const Config& cfg, const EmitterRates& rates,
                         const Transitions& transitions);

// Deterministic sweep dispatch. The [sweep] section selects the kind and
// grid; per-point failures are recorded in the result rather than thrown.
RunRecord run_sweep(const Config& cfg);

RunRecord spectrum_record(const Config& cfg, Direction direction,
                          std::optional<GridSpec> grid_override = {});
RunRecord pulse_width_record(const Config& cfg, Direction direction);
RunRecord flux_record(const Config& cfg);
RunRecord saturation_record(const Config& cfg);

// Stationary-probe transmission spectrum versus detuning, with the
// weak-field closed forms alongside for comparison.
RunRecord steady_record(const Config& cfg, double omega_p_over_g31,
                        std::optional<GridSpec> grid_override = {});

// Scattering of one pulse (from [pulse], Gaussian unless a file is given).
struct PulseRunResult {
  RunRecord record;       // input/elastic/inelastic densities per grid point
  double efficiency = 0;
  double width = 0;       // GHz
  double renorm_correction = 0;
};

PulseRunResult pulse_record(const Config& cfg, Direction direction,
                            std::optional<double> width_override_ghz = {});

// Flux bias maximizing the resonant conversion efficiency inside the window:
// coarse scan at grid_step, then golden-section refinement to |df| <= 1e-4.
struct OptimalBias {
  double flux;
  double efficiency;
};

OptimalBias find_optimal_bias(const CircuitParams& base, double f_lo, double f_hi,
                              const CouplingModel& coupling, Direction direction,
                              const ChargeTruncation& trunc,
                              double grid_step = 5e-4);

}  // namespace deltaqed
