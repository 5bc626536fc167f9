#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "deltaqed/scattering.hpp"

namespace deltaqed {

// Single-photon spectral amplitude psi(nu) sampled on a strictly increasing
// frequency grid (angular units). Normalized so that the trapezoid sum of
// |psi|^2 is 1.
struct SpectralPulse {
  Eigen::ArrayXd grid;
  Eigen::ArrayXcd amplitude;
  double center = 0.0;  // nominal peak position
  double width = 0.0;   // nominal width d of |psi| ~ exp(-(nu-nu0)^2/d^2)

  Eigen::ArrayXd quadrature_weights() const;
  double norm_sq() const;

  // Scales the amplitude to unit discrete norm; returns the relative size of
  // the correction that was applied.
  double renormalize();

  // Throws ConfigError on empty/non-increasing grids or size mismatch.
  void validate() const;
};

// Gaussian amplitude (2/(pi d^2))^(1/4) exp(-(nu-center)^2/d^2) on a uniform
// grid spanning span_widths*d around the center, renormalized to unit
// discrete norm. Requires d > 0, points >= 64, span_widths >= 8.
SpectralPulse gaussian_pulse(double center, double width,
                             double span_widths = 12.0, int points = 4096);

// Outcome of scattering a normalized pulse off the driven emitter. Densities
// are |t psi|^2 per unit angular frequency; the inelastic component lives on
// the shifted grid (nu - omega for down-conversion, nu + omega for up).
struct ScatteredPulse {
  Eigen::ArrayXd grid;            // input grid
  Eigen::ArrayXd input;           // |psi|^2
  Eigen::ArrayXd elastic;         // frequency-unshifted output density
  Eigen::ArrayXd shifted_grid;    // grid of the converted component
  Eigen::ArrayXd inelastic;       // frequency-shifted output density
  double efficiency = 0.0;        // integral of the inelastic density
  double elastic_total = 0.0;
  double inelastic_total = 0.0;
};

ScatteredPulse convert_down(const SpectralPulse& pulse, const EmitterRates& rates,
                            const Transitions& transitions,
                            const DriveField& drive);

ScatteredPulse convert_up(const SpectralPulse& pulse, const EmitterRates& rates,
                          const Transitions& transitions,
                          const DriveField& drive);

struct WidthEfficiency {
  double width;
  double efficiency;
};

// Conversion efficiency of resonance-centered Gaussian pulses, one row per
// width. Rows are computed independently (worker pool) and returned in the
// input order.
std::vector<WidthEfficiency> efficiency_vs_width(
    const EmitterRates& rates, const Transitions& transitions,
    const DriveField& drive, const std::vector<double>& widths,
    Direction direction, double span_widths = 12.0, int points = 4096);

struct LoadedPulse {
  SpectralPulse pulse;
  double renorm_correction = 0.0;  // relative norm correction applied on load
};

// Plain-text pulse table: header row `nu_ghz, re_psi, im_psi` required,
// frequencies in ordinary GHz. The pulse is renormalized on load.
LoadedPulse load_pulse_csv(const std::string& path);
void save_pulse_csv(const std::string& path, const SpectralPulse& pulse);

}  // namespace deltaqed
