#include "deltaqed/pulse.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "deltaqed/parallel.hpp"
#include "deltaqed/units.hpp"

namespace deltaqed {

Eigen::ArrayXd SpectralPulse::quadrature_weights() const {
  const Eigen::Index n = grid.size();
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(n);
  if (n < 2) return w;
  w.segment(1, n - 1) += 0.5 * (grid.tail(n - 1) - grid.head(n - 1));
  w.segment(0, n - 1) += 0.5 * (grid.tail(n - 1) - grid.head(n - 1));
  return w;
}

double SpectralPulse::norm_sq() const {
  return (quadrature_weights() * amplitude.abs2()).sum();
}

double SpectralPulse::renormalize() {
  const double n2 = norm_sq();
  if (!(n2 > 0.0)) throw ConfigError("SpectralPulse: zero-norm amplitude");
  amplitude /= std::sqrt(n2);
  return std::abs(1.0 - std::sqrt(n2));
}

void SpectralPulse::validate() const {
  if (grid.size() < 2) throw ConfigError("SpectralPulse: grid needs >= 2 points");
  if (grid.size() != amplitude.size())
    throw ConfigError("SpectralPulse: grid/amplitude size mismatch");
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    if (!(grid(i) > grid(i - 1)))
      throw ConfigError("SpectralPulse: grid must be strictly increasing");
  }
}

SpectralPulse gaussian_pulse(double center, double width, double span_widths,
                             int points) {
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian_pulse: width must be > 0");
  if (points < 64)
    throw std::invalid_argument("gaussian_pulse: need at least 64 points");
  if (!(span_widths >= 8.0))
    throw std::invalid_argument("gaussian_pulse: grid span must be >= 8 widths");

  SpectralPulse p;
  p.center = center;
  p.width = width;
  p.grid = Eigen::ArrayXd::LinSpaced(points, center - 0.5 * span_widths * width,
                                     center + 0.5 * span_widths * width);
  const double peak = std::pow(2.0 / (std::numbers::pi * width * width), 0.25);
  p.amplitude =
      (peak * (-((p.grid - center) / width).square()).exp()).cast<Complex>();
  p.renormalize();
  return p;
}

namespace {

ScatteredPulse scatter_pulse(const SpectralPulse& pulse, const EmitterRates& rates,
                             const Transitions& transitions,
                             const DriveField& drive, Direction direction) {
  pulse.validate();
  if (std::abs(pulse.norm_sq() - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "pulse must be normalized to unit discrete norm before scattering");
  }
  const TransmissionSpectrum ts =
      transmission_spectrum(pulse.grid, rates, transitions, drive, direction);
  const Eigen::ArrayXd w = pulse.quadrature_weights();
  const Eigen::ArrayXd in = pulse.amplitude.abs2();

  ScatteredPulse out;
  out.grid = pulse.grid;
  out.input = in;
  if (direction == Direction::down) {
    out.elastic = ts.abs2_a() * in;
    out.inelastic = ts.abs2_b() * in;
    out.shifted_grid = pulse.grid - drive.omega;
  } else {
    out.elastic = ts.abs2_b() * in;
    out.inelastic = ts.abs2_a() * in;
    out.shifted_grid = pulse.grid + drive.omega;
  }
  out.elastic_total = (w * out.elastic).sum();
  out.inelastic_total = (w * out.inelastic).sum();
  out.efficiency = out.inelastic_total;
  return out;
}

}  // namespace

ScatteredPulse convert_down(const SpectralPulse& pulse, const EmitterRates& rates,
                            const Transitions& transitions,
                            const DriveField& drive) {
  return scatter_pulse(pulse, rates, transitions, drive, Direction::down);
}

ScatteredPulse convert_up(const SpectralPulse& pulse, const EmitterRates& rates,
                          const Transitions& transitions,
                          const DriveField& drive) {
  return scatter_pulse(pulse, rates, transitions, drive, Direction::up);
}

std::vector<WidthEfficiency> efficiency_vs_width(
    const EmitterRates& rates, const Transitions& transitions,
    const DriveField& drive, const std::vector<double>& widths,
    Direction direction, double span_widths, int points) {
  for (double d : widths) {
    if (!(d > 0.0))
      throw std::invalid_argument("efficiency_vs_width: widths must be > 0");
  }
  const double center = direction == Direction::down ? transitions.omega_31
                                                     : transitions.omega_21;
  std::vector<WidthEfficiency> rows(widths.size());
  parallel_for(static_cast<int>(widths.size()), [&](int i) {
    const SpectralPulse p =
        gaussian_pulse(center, widths[i], span_widths, points);
    const ScatteredPulse s =
        scatter_pulse(p, rates, transitions, drive, direction);
    rows[i] = {widths[i], s.efficiency};
  });
  return rows;
}

LoadedPulse load_pulse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pulse file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("pulse file is empty: " + path);

  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  std::vector<std::string> header;
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) header.push_back(strip(cell));
  }
  if (header != std::vector<std::string>{"nu_ghz", "re_psi", "im_psi"}) {
    throw ConfigError("pulse file must start with header 'nu_ghz, re_psi, im_psi': " +
                      path);
  }

  std::vector<double> nu, re, im;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(strip(cell)));
    if (vals.size() != 3) {
      throw ConfigError("pulse file line " + std::to_string(lineno) +
                        ": expected 3 columns");
    }
    nu.push_back(units::from_ghz(vals[0]));
    re.push_back(vals[1]);
    im.push_back(vals[2]);
  }

  LoadedPulse out;
  out.pulse.grid = Eigen::Map<Eigen::ArrayXd>(nu.data(), nu.size());
  out.pulse.amplitude.resize(static_cast<Eigen::Index>(nu.size()));
  for (size_t i = 0; i < nu.size(); ++i)
    out.pulse.amplitude(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  out.pulse.validate();
  out.renorm_correction = out.pulse.renormalize();

  // nominal center and width from the first two moments of |psi|^2
  const Eigen::ArrayXd w = out.pulse.quadrature_weights();
  const Eigen::ArrayXd p2 = out.pulse.amplitude.abs2();
  out.pulse.center = (w * p2 * out.pulse.grid).sum();
  const double var =
      (w * p2 * (out.pulse.grid - out.pulse.center).square()).sum();
  out.pulse.width = 2.0 * std::sqrt(std::max(var, 0.0));
  return out;
}

void save_pulse_csv(const std::string& path, const SpectralPulse& pulse) {
  std::ofstream outf(path);
  if (!outf) throw ConfigError("cannot write pulse file: " + path);
  outf << "nu_ghz, re_psi, im_psi\n";
  char buf[128];
  for (Eigen::Index i = 0; i < pulse.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g, %.12g, %.12g\n",
                  units::to_ghz(pulse.grid(i)), pulse.amplitude(i).real(),
                  pulse.amplitude(i).imag());
    outf << buf;
  }
}

}  // namespace deltaqed
