#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deltaqed/errors.hpp"

namespace deltaqed {

// Sectioned key-value configuration. Frequencies are ordinary GHz, voltages
// volts, impedances ohms. Unknown sections or keys are rejected by name.
//
// Sections and keys:
//   [emitter]  gamma_31, gamma_21, loss_2, loss_3, omega_31, omega_21
//   [drive]    omega, detuning, rabi, optimal (down|up), omega_p_over_gamma31
//   [circuit]  alpha, beta, ej_over_h, ej_over_ec, impedance, flux,
//              n_p_max, n_m_max
//   [pulse]    center, width, span_widths, points, file
//   [sweep]    kind (spectrum|pulse-width|flux|saturation), start, stop,
//              points, direction (down|up)
//   [loss]     tilde_gamma3_over_gamma31, gamma2_over_gamma21
//   [output]   path, format (csv|json), plot
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;

  // Flag overrides: flags win over file values.
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  // Deterministic flattened view ("section.key", value), sorted.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  const std::string& raw(const std::string& section, const std::string& key) const;
  static void check_known(const std::string& section, const std::string& key);

  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace deltaqed
