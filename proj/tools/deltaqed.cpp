// Command-line front end: parse a sectioned config, dispatch to the solver
// modules, write CSV/JSON records and optional SVG plots.
//
// Exit codes: 0 success, 1 computational failure, 2 configuration or usage
// error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "deltaqed/config.hpp"
#include "deltaqed/lindblad.hpp"
#include "deltaqed/plot.hpp"
#include "deltaqed/report.hpp"
#include "deltaqed/sweep.hpp"
#include "deltaqed/units.hpp"

namespace {

using namespace deltaqed;

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::string format;
  std::string plot;
  std::string grid;
  std::string direction;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_grid = true,
                bool with_direction = false) {
  cmd->add_option("--config", args.config_path, "config file (ini-style)")
      ->required();
  cmd->add_option("--out", args.out,
                  "output path (config: output.path; default stdout)");
  cmd->add_option("--format", args.format,
                  "output format csv|json (config: output.format)");
  cmd->add_option("--plot", args.plot,
                  "write an SVG line plot here (config: output.plot)");
  if (with_grid) {
    cmd->add_option("--grid", args.grid,
                    "grid as START:STOP:POINTS (config: sweep.start/stop/points)");
  }
  if (with_direction) {
    cmd->add_option("--direction", args.direction,
                    "conversion direction down|up (config: sweep.direction)");
  }
}

Config load_config(const CommonArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  if (!args.out.empty()) cfg.set("output", "path", args.out);
  if (!args.format.empty()) cfg.set("output", "format", args.format);
  if (!args.plot.empty()) cfg.set("output", "plot", args.plot);
  if (!args.direction.empty()) cfg.set("sweep", "direction", args.direction);
  if (!args.grid.empty()) {
    const auto c1 = args.grid.find(':');
    const auto c2 = args.grid.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ConfigError("--grid expects START:STOP:POINTS");
    cfg.set("sweep", "start", args.grid.substr(0, c1));
    cfg.set("sweep", "stop", args.grid.substr(c1 + 1, c2 - c1 - 1));
    cfg.set("sweep", "points", args.grid.substr(c2 + 1));
  }
  return cfg;
}

Direction direction_of(const Config& cfg) {
  return parse_direction(cfg.get_string("sweep", "direction", "down"));
}

void write_record(const Config& cfg, const RunRecord& record,
                  const PlotStyle& style) {
  const std::string format = cfg.get_string("output", "format", "csv");
  std::string body;
  if (format == "csv") {
    body = to_csv(record);
  } else if (format == "json") {
    body = to_json(record);
  } else {
    throw ConfigError("output.format must be csv or json, got '" + format + "'");
  }
  const std::string path = cfg.get_string("output", "path", "");
  if (path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << body;
  }
  const std::string plot_path = cfg.get_string("output", "plot", "");
  if (!plot_path.empty()) emit_plot(record, style, plot_path);
}

// nonzero exit only when more than 10% of sweep points failed
int sweep_exit_code(const RunRecord& record) {
  const size_t total = record.rows.size() + record.failures.size();
  if (total == 0) return 0;
  if (record.failures.size() * 10 > total) {
    std::cerr << "error: " << record.failures.size() << " of " << total
              << " sweep points failed\n";
    return 1;
  }
  for (const auto& f : record.failures) {
    std::cerr << "warning: point " << f.index << " at " << format_double(f.value)
              << " failed: " << f.message << "\n";
  }
  return 0;
}

int cmd_spectrum(const CommonArgs& args) {
  const Config cfg = load_config(args);
  const RunRecord rec = spectrum_record(cfg, direction_of(cfg));
  write_record(cfg, rec,
               {{{"nu_ghz", "abs2_ta"}, {"nu_ghz", "abs2_tb"}},
                "transmission spectrum",
                "nu [GHz]"});
  return 0;
}

int cmd_pulse(const CommonArgs& args, std::optional<double> width, bool sweep) {
  const Config cfg = load_config(args);
  if (sweep) {
    if (width) throw ConfigError("--width conflicts with --sweep");
    const RunRecord rec = pulse_width_record(cfg, direction_of(cfg));
    write_record(cfg, rec,
                 {{{"width_ghz", "efficiency"}},
                  "conversion efficiency vs pulse width",
                  "pulse width [GHz]"});
    return sweep_exit_code(rec);
  }
  const PulseRunResult res = pulse_record(cfg, direction_of(cfg), width);
  if (res.renorm_correction > 1e-3) {
    std::cerr << "warning: input pulse was renormalized (relative correction "
              << format_double(res.renorm_correction) << ")\n";
  }
  write_record(cfg, res.record,
               {{{"nu_ghz", "input_density"},
                 {"nu_ghz", "elastic_density"},
                 {"shifted_nu_ghz", "inelastic_density"}},
                "pulse scattering",
                "nu [GHz]"});
  std::cerr << "conversion efficiency = " << format_double(res.efficiency)
            << " (pulse width " << format_double(res.width) << " GHz)\n";
  return 0;
}

int cmd_circuit(const CommonArgs& args, std::optional<double> flux, bool sweep) {
  Config cfg = load_config(args);
  if (flux && sweep) throw ConfigError("give either --flux or --sweep, not both");
  if (flux) cfg.set("circuit", "flux", format_double(*flux));

  if (sweep) {
    const RunRecord rec = flux_record(cfg);
    write_record(cfg, rec,
                 {{{"f", "eff_down"}, {"f", "eff_up"}},
                  "resonant conversion efficiency vs flux bias",
                  "f"});
    return sweep_exit_code(rec);
  }

  // single-bias report with a convergence certificate
  if (!cfg.has_section("circuit"))
    throw ConfigError("circuit command needs a [circuit] section");
  const PhysicsSetup setup = resolve_physics(cfg, /*need_drive=*/false);
  const ConvergenceReport conv =
      check_convergence(*setup.circuit, setup.truncation);
  const auto points = sweep_flux(*setup.circuit, {setup.circuit->flux},
                                 setup.coupling, setup.truncation);
  const FluxPoint& pt = points.front();
  if (!pt.ok) throw ComputeError(pt.error);

  RunRecord rec;
  rec.provenance.command = "circuit";
  rec.provenance.add_config(cfg);
  rec.provenance.add("truncation_n_p_max",
                     std::to_string(setup.truncation.n_p_max));
  rec.provenance.add("truncation_n_m_max",
                     std::to_string(setup.truncation.n_m_max));
  rec.provenance.add("convergence_level_shift", conv.max_level_shift);
  rec.provenance.add("convergence_element_shift", conv.max_element_shift);
  rec.provenance.add("converged", conv.converged() ? "yes" : "no");
  rec.columns = {"f",       "w21_ghz", "w31_ghz", "w32_ghz", "abs_n21",
                 "abs_n31", "abs_n32", "g21_ghz", "g31_ghz", "g32_ghz",
                 "eff_down", "eff_up", "converged"};
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
               pt.eff_up,
               conv.converged() ? 1.0 : 0.0});
  write_record(cfg, rec, {{{"f", "eff_down"}, {"f", "eff_up"}}, "circuit bias", "f"});
  if (!conv.converged()) {
    std::cerr << "error: truncation failed the doubling check (level shift "
              << format_double(conv.max_level_shift) << ", element shift "
              << format_double(conv.max_element_shift) << ")\n";
    return 1;
  }
  return 0;
}

int cmd_steady(const CommonArgs& args, std::optional<double> omega_p_ratio) {
  Config cfg = load_config(args);
  if (omega_p_ratio) {
    cfg.set("drive", "omega_p_over_gamma31", format_double(*omega_p_ratio));
  }
  if (!cfg.has("drive", "omega_p_over_gamma31")) {
    throw ConfigError(
        "steady needs --omega-p-over-g31 or drive.omega_p_over_gamma31");
  }
  const double ratio = cfg.get_double("drive", "omega_p_over_gamma31");
  const RunRecord rec = steady_record(cfg, ratio);
  write_record(cfg, rec,
               {{{"delta_p_over_g31", "abs2_ta"},
                 {"delta_p_over_g31", "abs2_tb"},
                 {"delta_p_over_g31", "abs2_ta_analytic"},
                 {"delta_p_over_g31", "abs2_tb_analytic"}},
                "stationary probe transmission",
                "delta_p / gamma_31"});
  return sweep_exit_code(rec);
}

int cmd_saturation(const CommonArgs& args) {
  const Config cfg = load_config(args);
  const RunRecord rec = saturation_record(cfg);
  write_record(cfg, rec,
               {{{"omega_p_over_g31", "abs2_ta"}, {"omega_p_over_g31", "abs2_tb"}},
                "probe saturation",
                "omega_p / gamma_31"});
  return sweep_exit_code(rec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "deltaqed: single-photon frequency conversion in a driven three-level "
      "emitter at the end of a semi-infinite waveguide"};
  app.require_subcommand(1);

  CommonArgs spectrum_args;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "closed-form transmission spectrum");
  add_common(spectrum, spectrum_args, true, true);

  CommonArgs pulse_args;
  std::optional<double> pulse_width;
  bool pulse_sweep = false;
  CLI::App* pulse =
      app.add_subcommand("pulse", "finite-bandwidth pulse conversion");
  add_common(pulse, pulse_args, true, true);
  pulse->add_option("--width", pulse_width,
                    "Gaussian pulse width in GHz (config: pulse.width)");
  pulse->add_flag("--sweep", pulse_sweep,
                  "sweep the width grid from [sweep] instead of scattering "
                  "one pulse");

  CommonArgs circuit_args;
  std::optional<double> circuit_flux;
  bool circuit_sweep = false;
  CLI::App* circuit =
      app.add_subcommand("circuit", "flux-qubit levels, elements and rates");
  add_common(circuit, circuit_args);
  circuit->add_option("--flux", circuit_flux,
                      "single flux bias (config: circuit.flux)");
  circuit->add_flag("--sweep", circuit_sweep,
                    "sweep the flux grid from [sweep] instead");

  CommonArgs steady_args;
  std::optional<double> omega_p_ratio;
  CLI::App* steady = app.add_subcommand(
      "steady", "stationary-state probe transmission vs detuning");
  add_common(steady, steady_args);
  steady->add_option("--omega-p-over-g31", omega_p_ratio,
                     "probe Rabi rate over gamma_31 (config: "
                     "drive.omega_p_over_gamma31)");

  CommonArgs saturation_args;
  CLI::App* saturation = app.add_subcommand(
      "saturation", "resonant transmission vs probe power");
  add_common(saturation, saturation_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(spectrum_args);
    if (pulse->parsed()) return cmd_pulse(pulse_args, pulse_width, pulse_sweep);
    if (circuit->parsed())
      return cmd_circuit(circuit_args, circuit_flux, circuit_sweep);
    if (steady->parsed()) return cmd_steady(steady_args, omega_p_ratio);
    if (saturation->parsed()) return cmd_saturation(saturation_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
