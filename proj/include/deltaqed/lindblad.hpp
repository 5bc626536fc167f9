#pragma once

#include <Eigen/Dense>
#include <vector>

#include "deltaqed/scattering.hpp"

namespace deltaqed {

// Continuous-field drive of the three-level emitter: weak probe on 1<->3 with
// Rabi rate omega_p and detuning delta_p = nu - omega_31, strong control on
// 2<->3 with Rabi rate omega and detuning delta. Angular units.
struct ProbeDrive {
  double omega_p;
  double delta_p;
  double delta;
  double omega;

  ProbeDrive(double omega_p, double delta_p, double delta, double omega);
};

// Relaxation and dephasing rates of the driven emitter. The off-diagonal
// damping rates are derived:
//   gamma12 = G21/2 + deph_12/2
//   gamma13 = (G32+G31)/2 + deph_13/2
//   gamma23 = (G32+G31+G21)/2 + deph_23/2
struct LindbladRates {
  double g31;      // relaxation 3 -> 1
  double g32;      // relaxation 3 -> 2
  double g21;      // relaxation 2 -> 1
  double deph_12;  // pure dephasing of the 1-2 coherence
  double deph_13;
  double deph_23;

  LindbladRates(double g31, double g32, double g21, double deph_12,
                double deph_13, double deph_23);

  double gamma12() const { return 0.5 * (g21 + deph_12); }
  double gamma13() const { return 0.5 * (g32 + g31 + deph_13); }
  double gamma23() const { return 0.5 * (g32 + g31 + g21 + deph_23); }

  // Maps the scattering-level losses onto dephasings: deph_12 = loss_2,
  // deph_13 = loss_3 - gamma_32 (the part of loss_3 not already accounted for
  // by the explicit 3->2 relaxation channel), deph_23 = deph_12 + deph_13.
  // With gamma_32 = 0 this is exactly deph_13 = loss_3, deph_23 = loss_2 +
  // loss_3. Requires loss_3 >= gamma_32.
  static LindbladRates from_scattering(const EmitterRates& rates,
                                       double gamma_32 = 0.0);
};

// Hermitian, unit-trace state of the emitter with physicality diagnostics.
struct DensityMatrix3 {
  Eigen::Matrix3cd rho;

  double hermiticity_defect() const;
  double trace_defect() const;
  double min_eigenvalue() const;
  bool physical(double herm_tol = 1e-12, double trace_tol = 1e-12,
                double positivity_tol = 1e-10) const;

  std::complex<double> coherence_31() const { return rho(2, 0); }
  std::complex<double> coherence_21() const { return rho(1, 0); }
  double population(int level) const { return rho(level - 1, level - 1).real(); }
};

// Rotating-frame Hamiltonian of the driven emitter (units of hbar):
//   -delta_p |3><3| - (delta_p - delta) |2><2|
//   - (omega_p |3><1| + omega |3><2| + h.c.)/2
Eigen::Matrix3cd interaction_hamiltonian(const ProbeDrive& drive);

// Generator action: commutator with the Hamiltonian plus population transfer
// (g31, g32 out of level 3; g21 out of level 2) and off-diagonal damping.
Eigen::Matrix3cd lindblad_action(const Eigen::Matrix3cd& rho,
                                 const ProbeDrive& drive,
                                 const LindbladRates& rates);

// Generator as a 9x9 matrix acting on the row-major vectorization of rho.
Eigen::Matrix<std::complex<double>, 9, 9> liouvillian(const ProbeDrive& drive,
                                                      const LindbladRates& rates);

// Stationary state: the 9x9 linear system with the drho11 row replaced by the
// trace constraint. Requires at least one relaxation rate > 0; throws
// SingularLiouvillianError when the stationary state is not unique and
// ComputeError if the solution violates physicality or leaves a residual
// above 1e-10.
DensityMatrix3 steady_state(const ProbeDrive& drive, const LindbladRates& rates);

// Debug path: fourth-order Runge-Kutta from the ground state until the
// relative change per unit 1/g31 falls below rel_tol. Slower than the linear
// solve; used to cross-check it.
DensityMatrix3 evolve_to_steady(const ProbeDrive& drive,
                                const LindbladRates& rates,
                                double rel_tol = 1e-12,
                                double max_time_over_t31 = 1e4);

struct TransmissionPair {
  std::complex<double> t_a;
  std::complex<double> t_b;
};

// Photon-number transmission coefficients of the probe from the stationary
// coherences: t_a = 1 + 2i g31 rho31/omega_p, t_b = 2i sqrt(g31 g21)
// rho21/omega_p. Throws ComputeError for omega_p = 0.
TransmissionPair transmission(const ProbeDrive& drive, const LindbladRates& rates,
                              const DensityMatrix3& state);

// First-order (in omega_p) stationary coherences in closed form.
struct WeakFieldCoherences {
  std::complex<double> rho21;
  std::complex<double> rho31;
};

WeakFieldCoherences weak_field_coherences(const ProbeDrive& drive,
                                          const LindbladRates& rates);

struct SaturationRow {
  double omega_p;
  double abs2_ta = 0.0;
  double abs2_tb = 0.0;
  bool ok = false;
  std::string error;
};

// Resonant (delta_p = 0) transmission versus probe power, one stationary
// solve per grid point. Per-point failures are recorded, not thrown.
std::vector<SaturationRow> saturation_sweep(const LindbladRates& rates,
                                            double omega,
                                            const std::vector<double>& omega_p_grid);

// Average photon number of a field with Rabi rate omega_p within the decay
// time scale of the rate gamma: pi omega_p^2 / (2 gamma^2).
double photon_number(double omega_p, double gamma);

}  // namespace deltaqed
