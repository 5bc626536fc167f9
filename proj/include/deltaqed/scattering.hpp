#pragma once

#include <Eigen/Dense>
#include <complex>

#include "deltaqed/errors.hpp"

namespace deltaqed {

using Complex = std::complex<double>;

// Decay and loss rates of the driven three-level emitter, in angular units
// (rad/ns). gamma_31 and gamma_21 are the waveguide decay rates of the two
// conversion channels; loss_2 and loss_3 collect everything else (intrinsic
// loss, dephasing, and for a circuit realization the 3->2 waveguide decay).
struct EmitterRates {
  double gamma_31;
  double gamma_21;
  double loss_2;
  double loss_3;

  // Requires gamma_31 > 0 and gamma_21 > 0: with either conversion channel
  // decoupled from the waveguide there is no conversion problem to solve.
  EmitterRates(double gamma_31, double gamma_21, double loss_2, double loss_3);
};

// Transition frequencies of the emitter, angular (rad/ns), ground state at 0.
struct Transitions {
  double omega_31;
  double omega_21;

  Transitions(double omega_31, double omega_21);

  double omega_32() const { return omega_31 - omega_21; }
};

// Classical control field coupling levels 2 and 3: frequency omega and real
// Rabi rate rabi >= 0 (angular).
struct DriveField {
  double omega;
  double rabi;

  DriveField(double omega, double rabi);
};

// Stationary scattering amplitudes for a single incident photon. t_a and t_b
// are the transmission amplitudes in the two waveguide channels; lambda_2 and
// lambda_3 are the emitter excitation amplitudes in the v_g = 1 gauge (the
// coupling amplitudes are sqrt(gamma_ij), so only |lambda|^2 ratios carry
// physical meaning). For down-conversion t_a is the elastic channel; for
// up-conversion t_b is.
struct ScatteringResult {
  Complex t_a;
  Complex t_b;
  Complex lambda_2;
  Complex lambda_3;
};

struct OptimalDrive {
  double delta;  // always 0
  double rabi;
};

// Control-field detuning from the 3<->2 transition.
double detuning(const DriveField& drive, const Transitions& transitions);

// Closed-form amplitudes for an incident photon of angular frequency nu near
// omega_31. |t_a|^2 is the elastic transmission probability, |t_b|^2 the
// probability of a photon down-shifted to nu - omega.
ScatteringResult scatter_down(double nu, const EmitterRates& rates,
                              const Transitions& transitions,
                              const DriveField& drive);

// Same for an incident photon near omega_21; |t_b|^2 elastic, |t_a|^2
// up-shifted to nu + omega.
ScatteringResult scatter_up(double nu, const EmitterRates& rates,
                            const Transitions& transitions,
                            const DriveField& drive);

// Independent check of scatter_down: assembles the stationary 4x4 linear
// system in (t_a, t_b, lambda_2, lambda_3) and solves it numerically.
// Throws SingularSystemError instead of guessing when the system is rank
// deficient.
ScatteringResult solve_oracle_down(double nu, const EmitterRates& rates,
                                   const Transitions& transitions,
                                   const DriveField& drive);

ScatteringResult solve_oracle_up(double nu, const EmitterRates& rates,
                                 const Transitions& transitions,
                                 const DriveField& drive);

// Drive parameters that null the elastic channel at resonance. Throws
// InfeasibleDriveError when gamma_31 <= loss_3 (down) or gamma_21 <= loss_2
// (up), where the radicand is non-positive.
OptimalDrive optimal_drive_down(const EmitterRates& rates);
OptimalDrive optimal_drive_up(const EmitterRates& rates);

// Conversion probability of a resonant photon under the matching optimal
// drive: (1 - loss_3/gamma_31) / (1 + loss_2/gamma_21) for down-conversion
// and the mirrored expression for up-conversion. A non-positive value means
// the losses exceed the waveguide coupling and no feasible drive exists.
double resonant_efficiency_down(const EmitterRates& rates);
double resonant_efficiency_up(const EmitterRates& rates);

struct LosslessSpectrum {
  double p_a;  // elastic probability
  double p_b;  // converted probability
};

// Lossless transmission probabilities under the optimal drive, parameterized
// by the total rate total = gamma_21 + gamma_31 and the ratio
// eta = gamma_21/gamma_31. delta_nu is the offset of the photon from the
// resonant transition. Symmetric under eta -> 1/eta.
LosslessSpectrum lossless_spectra(double delta_nu, double total, double eta);

enum class Direction { down, up };

// Grid evaluation of the closed forms, one row per frequency.
struct TransmissionSpectrum {
  Eigen::ArrayXd nu;     // angular
  Eigen::ArrayXcd t_a;
  Eigen::ArrayXcd t_b;

  Eigen::ArrayXd abs2_a() const { return t_a.abs2(); }
  Eigen::ArrayXd abs2_b() const { return t_b.abs2(); }
};

TransmissionSpectrum transmission_spectrum(const Eigen::ArrayXd& nu,
                                           const EmitterRates& rates,
                                           const Transitions& transitions,
                                           const DriveField& drive,
                                           Direction direction);

}  // namespace deltaqed
