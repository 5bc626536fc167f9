#include "deltaqed/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "deltaqed/lindblad.hpp"
#include "deltaqed/parallel.hpp"
#include "deltaqed/units.hpp"

namespace deltaqed {

SweepKind parse_sweep_kind(const std::string& name) {
  if (name == "spectrum") return SweepKind::spectrum;
  if (name == "pulse-width") return SweepKind::pulse_width;
  if (name == "flux") return SweepKind::flux;
  if (name == "saturation") return SweepKind::saturation;
  throw ConfigError("unknown sweep kind: '" + name +
                    "' (expected spectrum|pulse-width|flux|saturation)");
}

Direction parse_direction(const std::string& name) {
  if (name == "down") return Direction::down;
  if (name == "up") return Direction::up;
  throw ConfigError("unknown direction: '" + name + "' (expected down|up)");
}

GridSpec::GridSpec(double start_, double stop_, int points_)
    : start(start_), stop(stop_), points(points_) {
  if (!(start < stop)) throw ConfigError("grid: need start < stop");
  if (points < 2) throw ConfigError("grid: need at least 2 points");
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(points);
  const double h = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = start + h * i;
  v.back() = stop;
  return v;
}

namespace {

GridSpec grid_from_config(const Config& cfg) {
  return {cfg.get_double("sweep", "start"), cfg.get_double("sweep", "stop"),
          cfg.get_int("sweep", "points", 0)};
}

ChargeTruncation truncation_from_config(const Config& cfg) {
  return {cfg.get_int("circuit", "n_p_max", 12),
          cfg.get_int("circuit", "n_m_max", 16)};
}

CouplingModel coupling_from_config(const Config& cfg) {
  CouplingModel c;
  c.loss3_ratio = cfg.get_double("loss", "tilde_gamma3_over_gamma31", 0.001);
  c.loss2_ratio = cfg.get_double("loss", "gamma2_over_gamma21", 0.001);
  return c;
}

CircuitParams circuit_from_config(const Config& cfg) {
  return {cfg.get_double("circuit", "alpha"),
          cfg.get_double("circuit", "beta"),
          cfg.get_double("circuit", "ej_over_h"),
          cfg.get_double("circuit", "ej_over_ec"),
          cfg.get_double("circuit", "impedance"),
          cfg.get_double("circuit", "flux")};
}

Provenance base_provenance(const Config& cfg, const PhysicsSetup& setup,
                           const std::string& command) {
  Provenance p;
  p.command = command;
  p.add_config(cfg);
  p.add("source", setup.source);
  p.add("gamma_31_ghz", units::to_ghz(setup.rates.gamma_31));
  p.add("gamma_21_ghz", units::to_ghz(setup.rates.gamma_21));
  p.add("loss_2_ghz", units::to_ghz(setup.rates.loss_2));
  p.add("loss_3_ghz", units::to_ghz(setup.rates.loss_3));
  p.add("omega_31_ghz", units::to_ghz(setup.transitions.omega_31));
  p.add("omega_21_ghz", units::to_ghz(setup.transitions.omega_21));
  p.add("drive_omega_ghz", units::to_ghz(setup.drive.omega));
  p.add("drive_rabi_ghz", units::to_ghz(setup.drive.rabi));
  if (setup.circuit) {
    p.add("truncation_n_p_max", std::to_string(setup.truncation.n_p_max));
    p.add("truncation_n_m_max", std::to_string(setup.truncation.n_m_max));
    p.add("gamma_32_ghz", units::to_ghz(setup.realized->gamma_32));
  }
  return p;
}

}  // namespace

DriveField resolve_drive(const Config& cfg, const EmitterRates& rates,
                         const Transitions& transitions) {
  if (cfg.has("drive", "optimal")) {
    if (cfg.has("drive", "rabi") || cfg.has("drive", "omega") ||
        cfg.has("drive", "detuning")) {
      throw ConfigError(
          "drive.optimal conflicts with explicit drive.rabi/omega/detuning");
    }
    const Direction dir = parse_direction(cfg.get_string("drive", "optimal"));
    const OptimalDrive od = dir == Direction::down ? optimal_drive_down(rates)
                                                   : optimal_drive_up(rates);
    return {transitions.omega_32() + od.delta, od.rabi};
  }
  if (!cfg.has("drive", "rabi"))
    throw ConfigError("missing config key: drive.rabi (or drive.optimal)");
  const double rabi = units::from_ghz(cfg.get_double("drive", "rabi"));
  if (cfg.has("drive", "omega") && cfg.has("drive", "detuning"))
    throw ConfigError("give either drive.omega or drive.detuning, not both");
  double omega;
  if (cfg.has("drive", "omega")) {
    omega = units::from_ghz(cfg.get_double("drive", "omega"));
  } else {
    omega = transitions.omega_32() +
            units::from_ghz(cfg.get_double("drive", "detuning", 0.0));
  }
  return {omega, rabi};
}

PhysicsSetup resolve_physics(const Config& cfg, bool need_drive) {
  if (cfg.has_section("circuit")) {
    const CircuitParams params = circuit_from_config(cfg);
    const ChargeTruncation trunc = truncation_from_config(cfg);
    const CouplingModel coupling = coupling_from_config(cfg);
    const QubitSpectrum spectrum = diagonalize(params, trunc);
    const RealizedRates realized = decay_rates(params, spectrum);
    const EmitterRates rates = waveguide_rates(realized, coupling);
    const Transitions transitions = spectrum.transitions();
    DriveField drive = need_drive || cfg.has_section("drive")
                           ? resolve_drive(cfg, rates, transitions)
                           : DriveField(transitions.omega_32(), 0.0);
    return {rates,    transitions, drive,    "circuit", params,
            spectrum, realized,    trunc,    coupling};
  }
  if (!cfg.has_section("emitter"))
    throw ConfigError("config needs an [emitter] or [circuit] section");
  const EmitterRates rates(
      units::from_ghz(cfg.get_double("emitter", "gamma_31")),
      units::from_ghz(cfg.get_double("emitter", "gamma_21")),
      units::from_ghz(cfg.get_double("emitter", "loss_2", 0.0)),
      units::from_ghz(cfg.get_double("emitter", "loss_3", 0.0)));
  const Transitions transitions(
      units::from_ghz(cfg.get_double("emitter", "omega_31")),
      units::from_ghz(cfg.get_double("emitter", "omega_21")));
  DriveField drive = need_drive || cfg.has_section("drive")
                         ? resolve_drive(cfg, rates, transitions)
                         : DriveField(transitions.omega_32(), 0.0);
  return {rates, transitions, drive,         "emitter", std::nullopt,
          std::nullopt, std::nullopt, ChargeTruncation{}, CouplingModel{}};
}

RunRecord spectrum_record(const Config& cfg, Direction direction,
                          std::optional<GridSpec> grid_override) {
  const PhysicsSetup setup = resolve_physics(cfg);
  const GridSpec grid = grid_override ? *grid_override : grid_from_config(cfg);

  RunRecord rec;
  rec.provenance = base_provenance(cfg, setup, "spectrum");
  rec.provenance.add("direction",
                     direction == Direction::down ? "down" : "up");
  rec.columns = {"nu_ghz", "re_ta", "im_ta", "abs2_ta", "abs2_tb", "sum"};
  for (double nu_ghz : grid.values()) {
    const double nu = units::from_ghz(nu_ghz);
    const ScatteringResult r =
        direction == Direction::down
            ? scatter_down(nu, setup.rates, setup.transitions, setup.drive)
            : scatter_up(nu, setup.rates, setup.transitions, setup.drive);
    rec.add_row({nu_ghz, r.t_a.real(), r.t_a.imag(), std::norm(r.t_a),
                 std::norm(r.t_b), std::norm(r.t_a) + std::norm(r.t_b)});
  }
  return rec;
}

RunRecord pulse_width_record(const Config& cfg, Direction direction) {
  const PhysicsSetup setup = resolve_physics(cfg);
  const GridSpec grid = grid_from_config(cfg);
  std::vector<double> widths;
  for (double w : grid.values()) widths.push_back(units::from_ghz(w));
  const double span = cfg.get_double("pulse", "span_widths", 12.0);
  const int points = cfg.get_int("pulse", "points", 4096);

  const auto rows =
      efficiency_vs_width(setup.rates, setup.transitions, setup.drive, widths,
                          direction, span, points);
  RunRecord rec;
  rec.provenance = base_provenance(cfg, setup, "pulse-width");
  rec.provenance.add("direction", direction == Direction::down ? "down" : "up");
  rec.provenance.add("quadrature",
                     "trapezoid span_widths=" + format_double(span) +
                         " points=" + std::to_string(points));
  rec.columns = {"width_ghz", "efficiency"};
  for (const auto& r : rows)
    rec.add_row({units::to_ghz(r.width), r.efficiency});
  return rec;
}

RunRecord flux_record(const Config& cfg) {
  if (!cfg.has_section("circuit"))
    throw ConfigError("flux sweep needs a [circuit] section");
  const CircuitParams base = circuit_from_config(cfg);
  const ChargeTruncation trunc = truncation_from_config(cfg);
  const CouplingModel coupling = coupling_from_config(cfg);
  const GridSpec grid = grid_from_config(cfg);

  const auto points = sweep_flux(base, grid.values(), coupling, trunc);

  RunRecord rec;
  rec.provenance.command = "flux";
  rec.provenance.add_config(cfg);
  rec.provenance.add("truncation_n_p_max", std::to_string(trunc.n_p_max));
  rec.provenance.add("truncation_n_m_max", std::to_string(trunc.n_m_max));
  rec.provenance.add("loss3_ratio", coupling.loss3_ratio);
  rec.provenance.add("loss2_ratio", coupling.loss2_ratio);
  rec.columns = {"f",        "w21_ghz",  "w31_ghz",  "w32_ghz",
                 "abs_n21",  "abs_n31",  "abs_n32",  "g21_ghz",
                 "g31_ghz",  "g32_ghz",  "eff_down", "eff_up"};
  for (size_t i = 0; i < points.size(); ++i) {
    const FluxPoint& pt = points[i];
    if (!pt.ok) {
      rec.failures.push_back({static_cast<int>(i), pt.flux, pt.error});
      continue;
    }
    rec.add_row({pt.flux,
                 units::to_ghz(pt.spectrum.omega_21()),
                 units::to_ghz(pt.spectrum.omega_31()),
                 units::to_ghz(pt.spectrum.omega_32()),
                 pt.spectrum.abs_n(2, 1),
                 pt.spectrum.abs_n(3, 1),
                 pt.spectrum.abs_n(3, 2),
                 units::to_ghz(pt.rates.gamma_21),
                 units::to_ghz(pt.rates.gamma_31),
                 units::to_ghz(pt.rates.gamma_32),
                 pt.eff_down,
                 pt.eff_up});
  }
  return rec;
}

RunRecord saturation_record(const Config& cfg) {
  const PhysicsSetup setup = resolve_physics(cfg);
  const GridSpec grid = grid_from_config(cfg);
  const double g31 = setup.rates.gamma_31;
  const double gamma_32 = setup.realized ? setup.realized->gamma_32 : 0.0;
  const LindbladRates rates =
      LindbladRates::from_scattering(setup.rates, gamma_32);

  std::vector<double> omega_p;
  for (double ratio : grid.values()) omega_p.push_back(ratio * g31);
  const auto rows = saturation_sweep(rates, setup.drive.rabi, omega_p);

  RunRecord rec;
  rec.provenance = base_provenance(cfg, setup, "saturation");
  if (gamma_32 > 0.0) {
    rec.provenance.add("control_field_photon_number",
                       photon_number(setup.drive.rabi, gamma_32));
  }
  rec.columns = {"omega_p_over_g31", "abs2_ta", "abs2_tb", "sum"};
  for (size_t i = 0; i < rows.size(); ++i) {
    const SaturationRow& r = rows[i];
    if (!r.ok) {
      rec.failures.push_back({static_cast<int>(i), r.omega_p / g31, r.error});
      continue;
    }
    rec.add_row({r.omega_p / g31, r.abs2_ta, r.abs2_tb, r.abs2_ta + r.abs2_tb});
  }
  return rec;
}

RunRecord steady_record(const Config& cfg, double omega_p_over_g31,
                        std::optional<GridSpec> grid_override) {
  if (!(omega_p_over_g31 > 0.0))
    throw ConfigError("steady: omega_p_over_gamma31 must be > 0");
  const PhysicsSetup setup = resolve_physics(cfg);
  const double g31 = setup.rates.gamma_31;
  const double gamma_32 = setup.realized ? setup.realized->gamma_32 : 0.0;
  const LindbladRates lrates =
      LindbladRates::from_scattering(setup.rates, gamma_32);
  const double delta = detuning(setup.drive, setup.transitions);

  GridSpec grid = grid_override ? *grid_override
                  : cfg.has_section("sweep") ? grid_from_config(cfg)
                                             : GridSpec(-3.0, 3.0, 121);

  const auto values = grid.values();
  RunRecord rec;
  rec.provenance = base_provenance(cfg, setup, "steady");
  rec.provenance.add("omega_p_over_g31", omega_p_over_g31);
  rec.provenance.add("probe_photon_number", photon_number(omega_p_over_g31 * g31, g31));
  if (gamma_32 > 0.0) {
    rec.provenance.add("control_field_photon_number",
                       photon_number(setup.drive.rabi, gamma_32));
  }
  rec.columns = {"delta_p_over_g31", "abs2_ta",          "abs2_tb",
                 "sum",              "abs2_ta_analytic", "abs2_tb_analytic"};
  std::vector<std::vector<double>> rows(values.size());
  std::vector<std::string> errors(values.size());
  parallel_for(static_cast<int>(values.size()), [&](int i) {
    const double delta_p = values[i] * g31;
    try {
      const ProbeDrive drive(omega_p_over_g31 * g31, delta_p, delta,
                             setup.drive.rabi);
      const DensityMatrix3 state = steady_state(drive, lrates);
      const TransmissionPair t = transmission(drive, lrates, state);
      const ScatteringResult closed =
          scatter_down(setup.transitions.omega_31 + delta_p, setup.rates,
                       setup.transitions, setup.drive);
      rows[i] = {values[i],
                 std::norm(t.t_a),
                 std::norm(t.t_b),
                 std::norm(t.t_a) + std::norm(t.t_b),
                 std::norm(closed.t_a),
                 std::norm(closed.t_b)};
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < values.size(); ++i) {
    if (!errors[i].empty()) {
      rec.failures.push_back({static_cast<int>(i), values[i], errors[i]});
    } else {
      rec.rows.push_back(std::move(rows[i]));
    }
  }
  return rec;
}

PulseRunResult pulse_record(const Config& cfg, Direction direction,
                            std::optional<double> width_override_ghz) {
  const PhysicsSetup setup = resolve_physics(cfg);

  SpectralPulse pulse;
  double renorm = 0.0;
  if (cfg.has("pulse", "file") && !width_override_ghz) {
    LoadedPulse loaded = load_pulse_csv(cfg.get_string("pulse", "file"));
    pulse = std::move(loaded.pulse);
    renorm = loaded.renorm_correction;
  } else {
    const double width_ghz = width_override_ghz
                                 ? *width_override_ghz
                                 : cfg.get_double("pulse", "width");
    const double default_center_ghz =
        units::to_ghz(direction == Direction::down ? setup.transitions.omega_31
                                                   : setup.transitions.omega_21);
    const double center_ghz =
        cfg.get_double("pulse", "center", default_center_ghz);
    pulse = gaussian_pulse(units::from_ghz(center_ghz),
                           units::from_ghz(width_ghz),
                           cfg.get_double("pulse", "span_widths", 12.0),
                           cfg.get_int("pulse", "points", 4096));
  }

  const ScatteredPulse scattered =
      direction == Direction::down
          ? convert_down(pulse, setup.rates, setup.transitions, setup.drive)
          : convert_up(pulse, setup.rates, setup.transitions, setup.drive);

  PulseRunResult out;
  out.efficiency = scattered.efficiency;
  out.width = units::to_ghz(pulse.width);
  out.renorm_correction = renorm;
  out.record.provenance = base_provenance(cfg, setup, "pulse");
  out.record.provenance.add("direction",
                            direction == Direction::down ? "down" : "up");
  out.record.provenance.add("pulse_width_ghz", units::to_ghz(pulse.width));
  out.record.provenance.add("pulse_center_ghz", units::to_ghz(pulse.center));
  out.record.provenance.add("pulse_points", std::to_string(pulse.grid.size()));
  // width convention: the quoted width is an ordinary-frequency width,
  // converted to angular internally exactly like the rates
  out.record.provenance.add("pulse_width_convention", "ordinary-GHz");
  out.record.provenance.add("efficiency", scattered.efficiency);
  out.record.provenance.add("elastic_total", scattered.elastic_total);
  if (renorm > 0) out.record.provenance.add("renorm_correction", renorm);

  // densities are per ordinary GHz so the CSV integrates to the totals
  out.record.columns = {"nu_ghz", "input_density", "elastic_density",
                        "shifted_nu_ghz", "inelastic_density"};
  for (Eigen::Index i = 0; i < scattered.grid.size(); ++i) {
    out.record.add_row({units::to_ghz(scattered.grid(i)),
                        scattered.input(i) * units::two_pi,
                        scattered.elastic(i) * units::two_pi,
                        units::to_ghz(scattered.shifted_grid(i)),
                        scattered.inelastic(i) * units::two_pi});
  }
  return out;
}

RunRecord run_sweep(const Config& cfg) {
  const SweepKind kind = parse_sweep_kind(cfg.get_string("sweep", "kind"));
  const Direction direction =
      parse_direction(cfg.get_string("sweep", "direction", "down"));
  switch (kind) {
    case SweepKind::spectrum:
      return spectrum_record(cfg, direction);
    case SweepKind::pulse_width:
      return pulse_width_record(cfg, direction);
    case SweepKind::flux:
      return flux_record(cfg);
    case SweepKind::saturation:
      return saturation_record(cfg);
  }
  throw ConfigError("unreachable sweep kind");
}

namespace {

double efficiency_at(const CircuitParams& base, double f,
                     const CouplingModel& coupling, Direction direction,
                     const ChargeTruncation& trunc) {
  const CircuitParams p = base.with_flux(f);
  const QubitSpectrum sp = diagonalize(p, trunc);
  const EmitterRates rates = waveguide_rates(decay_rates(p, sp), coupling);
  return direction == Direction::down ? resonant_efficiency_down(rates)
                                      : resonant_efficiency_up(rates);
}

}  // namespace

OptimalBias find_optimal_bias(const CircuitParams& base, double f_lo, double f_hi,
                              const CouplingModel& coupling, Direction direction,
                              const ChargeTruncation& trunc, double grid_step) {
  if (!(f_lo >= 0.0 && f_hi <= 1.0 && f_lo < f_hi))
    throw std::invalid_argument("find_optimal_bias: window must lie in [0, 1]");
  if (!(grid_step > 0.0))
    throw std::invalid_argument("find_optimal_bias: grid_step must be > 0");

  const int n = std::max(3, static_cast<int>(std::round((f_hi - f_lo) / grid_step)) + 1);
  std::vector<double> fs(n), effs(n);
  const double h = (f_hi - f_lo) / (n - 1);
  for (int i = 0; i < n; ++i) fs[i] = f_lo + h * i;
  parallel_for(n, [&](int i) {
    effs[i] = efficiency_at(base, fs[i], coupling, direction, trunc);
  });

  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (std::isfinite(effs[i]) && !(effs[i] <= effs[best])) best = i;
  }

  // golden-section refinement around the coarse argmax
  double a = fs[std::max(0, best - 1)];
  double b = fs[std::min(n - 1, best + 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double e1 = efficiency_at(base, x1, coupling, direction, trunc);
  double e2 = efficiency_at(base, x2, coupling, direction, trunc);
  while (b - a > 1e-4) {
    if (e1 < e2) {
      a = x1;
      x1 = x2;
      e1 = e2;
      x2 = a + gr * (b - a);
      e2 = efficiency_at(base, x2, coupling, direction, trunc);
    } else {
      b = x2;
      x2 = x1;
      e2 = e1;
      x1 = b - gr * (b - a);
      e1 = efficiency_at(base, x1, coupling, direction, trunc);
    }
  }
  const double f_star = 0.5 * (a + b);
  return {f_star, efficiency_at(base, f_star, coupling, direction, trunc)};
}

}  // namespace deltaqed
