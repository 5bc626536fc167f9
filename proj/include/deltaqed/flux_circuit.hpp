#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "deltaqed/scattering.hpp"

namespace deltaqed {

// Three-junction flux qubit capacitively coupled to the end of a semi-infinite
// transmission line. Two identical junctions with Josephson energy E_J and a
// smaller one with alpha*E_J; beta = C_c/C_J is the coupling-capacitance
// ratio; flux is the external flux through the loop in units of the flux
// quantum.
struct CircuitParams {
  double alpha;
  double beta;
  double ej_over_h;    // E_J/h in GHz (ordinary frequency)
  double ej_over_ec;   // E_J/E_C
  double impedance;    // line impedance, ohm
  double flux;         // reduced flux f in [0, 1]

  CircuitParams(double alpha, double beta, double ej_over_h, double ej_over_ec,
                double impedance, double flux);

  CircuitParams with_flux(double f) const;

  // beta/(1 + 2 alpha + 2 beta), the charge lever arm of the coupling port.
  double charge_fraction() const { return beta / (1.0 + 2.0 * alpha + 2.0 * beta); }
};

// Charge-basis truncation |n_p, n_m> with n_p in [-n_p_max, n_p_max] and
// n_m in [-n_m_max, n_m_max], restricted to the physical sector
// (n_p + n_m) even (integer junction charges force n_p and n_m to have equal
// parity; the odd sector is a spurious antiperiodic copy of the spectrum).
struct ChargeTruncation {
  int n_p_max = 12;
  int n_m_max = 16;

  ChargeTruncation() = default;
  ChargeTruncation(int n_p_max, int n_m_max);

  ChargeTruncation doubled() const { return {2 * n_p_max, 2 * n_m_max}; }
  int dimension() const;
};

// Lowest three levels of the diagonalized circuit. levels are angular (rad/ns)
// with the ground state shifted to zero; n_elements(i, j) = <i+1|n_m|j+1>.
struct QubitSpectrum {
  Eigen::Vector3d levels;
  Eigen::Matrix3cd n_elements;

  double omega_21() const { return levels(1); }
  double omega_31() const { return levels(2); }
  double omega_32() const { return levels(2) - levels(1); }
  Transitions transitions() const { return {levels(2), levels(1)}; }
  double abs_n(int i, int j) const { return std::abs(n_elements(i - 1, j - 1)); }
};

// Waveguide decay rates of the three transitions, angular (rad/ns).
struct RealizedRates {
  double gamma_31;
  double gamma_21;
  double gamma_32;
};

// Intrinsic (non-waveguide) losses, given as ratios of the waveguide rates:
// loss_3 = loss3_ratio * gamma_31 + gamma_32 and loss_2 = loss2_ratio *
// gamma_21. Ratio 0.001 corresponds to 99.9% coupling efficiency.
struct CouplingModel {
  double loss3_ratio = 0.001;
  double loss2_ratio = 0.001;

  static CouplingModel perfect() { return {0.0, 0.0}; }
};

// Circuit Hamiltonian in the truncated charge basis, in units of E_J:
//   2(E_C/E_J) n_p^2 + (2 E_C/E_J/(1+2a+2b)) n_m^2 + (2+a)
//   - (1/2) per (n_p+-1, n_m+-1) hop
//   - (a/2) e^{+-i 2 pi f} per n_m -> n_m+-2 hop
// Hermitian by construction.
Eigen::MatrixXcd build_hamiltonian(const CircuitParams& params,
                                   const ChargeTruncation& trunc);

// Raw eigensolution of the truncated circuit: the k lowest eigenpairs plus
// the diagonal of the n_m operator in the basis ordering. Exposed so that
// gauge handling and convergence checks can be tested independently.
struct EigenSolution {
  Eigen::VectorXd values;     // in units of E_J, ascending
  Eigen::MatrixXcd vectors;   // one column per level
  Eigen::VectorXd charge_m;   // n_m diagonal in the basis ordering
};

EigenSolution solve_lowest(const CircuitParams& params,
                           const ChargeTruncation& trunc, int k = 3);

// Spectrum from an eigensolution: levels shifted so the ground state is zero
// and converted to angular rad/ns; eigenvector phases fixed by making the
// largest-magnitude component of each vector real positive.
QubitSpectrum spectrum_from(const EigenSolution& sol, const CircuitParams& params);

QubitSpectrum diagonalize(const CircuitParams& params,
                          const ChargeTruncation& trunc);

// Compares the spectrum at trunc against the doubled truncation.
struct ConvergenceReport {
  ChargeTruncation base;
  double max_level_shift = 0.0;    // max relative change of omega_21, omega_31
  double max_element_shift = 0.0;  // max relative change of |n_ij|

  bool converged(double level_tol = 1e-6, double element_tol = 1e-4) const {
    return max_level_shift < level_tol && max_element_shift < element_tol;
  }
};

ConvergenceReport check_convergence(const CircuitParams& params,
                                    const ChargeTruncation& trunc);

// Spontaneous emission rates into the line, angular (rad/ns):
//   gamma_ij = 4 pi (Z/R_Q) (beta/(1+2a+2b))^2 omega_ij |n_ij|^2.
RealizedRates decay_rates(const CircuitParams& params,
                          const QubitSpectrum& spectrum);

// Scattering-level rates with the loss composition applied.
EmitterRates waveguide_rates(const RealizedRates& rates,
                             const CouplingModel& coupling);

// Rabi rate of the classical field driving the 2<->3 transition, from the
// amplitude (volts) of the incident field applied at the input port. The open
// end doubles the incident wave, so the voltage amplitude felt by the qubit
// is 2*volts and rabi = (2 e beta'/hbar) |n_32| * (2*volts), beta' the charge
// fraction. Throws ComputeError when |n_32| < 1e-12 (drive channel closed).
double rabi_from_voltage(const CircuitParams& params,
                         const QubitSpectrum& spectrum, double volts);

// Inverse of rabi_from_voltage (incident amplitude in volts).
double voltage_for_rabi(const CircuitParams& params,
                        const QubitSpectrum& spectrum, double rabi);

// One record of a flux sweep. On diagonalization failure ok is false and
// error holds the reason; the row is kept so grids stay aligned. The resonant
// efficiencies are NaN where a conversion channel is closed.
struct FluxPoint {
  double flux = 0.0;
  bool ok = false;
  std::string error;
  QubitSpectrum spectrum;
  RealizedRates rates{0, 0, 0};
  double eff_down = 0.0;
  double eff_up = 0.0;
};

std::vector<FluxPoint> sweep_flux(const CircuitParams& base,
                                  const std::vector<double>& flux_grid,
                                  const CouplingModel& coupling,
                                  const ChargeTruncation& trunc);

}  // namespace deltaqed
