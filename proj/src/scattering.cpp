#include "deltaqed/scattering.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace deltaqed {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

EmitterRates::EmitterRates(double g31, double g21, double l2, double l3)
    : gamma_31(g31), gamma_21(g21), loss_2(l2), loss_3(l3) {
  require(finite(g31) && finite(g21) && finite(l2) && finite(l3),
          "EmitterRates: rates must be finite");
  require(g31 > 0.0, "EmitterRates: gamma_31 must be > 0");
  require(g21 > 0.0, "EmitterRates: gamma_21 must be > 0");
  require(l2 >= 0.0 && l3 >= 0.0, "EmitterRates: losses must be >= 0");
}

Transitions::Transitions(double w31, double w21) : omega_31(w31), omega_21(w21) {
  require(finite(w31) && finite(w21), "Transitions: frequencies must be finite");
  require(w31 > w21 && w21 > 0.0,
          "Transitions: need omega_31 > omega_21 > 0");
}

DriveField::DriveField(double w, double r) : omega(w), rabi(r) {
  require(finite(w) && finite(r), "DriveField: values must be finite");
  require(r >= 0.0, "DriveField: rabi must be >= 0");
}

double detuning(const DriveField& drive, const Transitions& transitions) {
  return drive.omega - transitions.omega_32();
}

namespace {

// Shared denominator of the down-conversion amplitudes. x = nu - omega_31.
Complex denom_down(double x, const EmitterRates& r, double delta, double rabi) {
  const Complex f3 = kI * x - 0.5 * (r.gamma_31 + r.loss_3);
  const Complex f2 = kI * (x - delta) - 0.5 * (r.gamma_21 + r.loss_2);
  return f3 * f2 + 0.25 * rabi * rabi;
}

// Shared denominator of the up-conversion amplitudes. y = nu - omega_21.
Complex denom_up(double y, const EmitterRates& r, double delta, double rabi) {
  const Complex f3 = kI * (y + delta) - 0.5 * (r.gamma_31 + r.loss_3);
  const Complex f2 = kI * y - 0.5 * (r.gamma_21 + r.loss_2);
  return f3 * f2 + 0.25 * rabi * rabi;
}

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

}  // namespace

ScatteringResult scatter_down(double nu, const EmitterRates& rates,
                              const Transitions& transitions,
                              const DriveField& drive) {
  const double x = nu - transitions.omega_31;
  const double delta = detuning(drive, transitions);
  const double rabi = drive.rabi;
  const Complex d = denom_down(x, rates, delta, rabi);
  const Complex f2 = kI * (x - delta) - 0.5 * (rates.gamma_21 + rates.loss_2);
  const Complex num_a =
      (kI * x + 0.5 * (rates.gamma_31 - rates.loss_3)) * f2 + 0.25 * rabi * rabi;
  const double v31 = std::sqrt(rates.gamma_31);
  ScatteringResult out;
  out.t_a = num_a / d;
  out.t_b = -0.5 * kI * std::sqrt(rates.gamma_21 * rates.gamma_31) * rabi / d;
  out.lambda_2 = kInvSqrt2Pi * (-0.5 * v31 * rabi) / d;
  out.lambda_3 = kInvSqrt2Pi * (-kI * v31 * f2) / d;
  return out;
}

ScatteringResult scatter_up(double nu, const EmitterRates& rates,
                            const Transitions& transitions,
                            const DriveField& drive) {
  const double y = nu - transitions.omega_21;
  const double delta = detuning(drive, transitions);
  const double rabi = drive.rabi;
  const Complex d = denom_up(y, rates, delta, rabi);
  const Complex f3 = kI * (y + delta) - 0.5 * (rates.gamma_31 + rates.loss_3);
  const Complex num_b =
      f3 * (kI * y + 0.5 * (rates.gamma_21 - rates.loss_2)) + 0.25 * rabi * rabi;
  const double v21 = std::sqrt(rates.gamma_21);
  ScatteringResult out;
  out.t_a = -0.5 * kI * std::sqrt(rates.gamma_21 * rates.gamma_31) * rabi / d;
  out.t_b = num_b / d;
  out.lambda_2 = kInvSqrt2Pi * (-kI * v21 * f3) / d;
  out.lambda_3 = kInvSqrt2Pi * (-0.5 * v21 * rabi) / d;
  return out;
}

namespace {

ScatteringResult solve_stationary(const Eigen::Matrix4cd& m,
                                  const Eigen::Vector4cd& rhs) {
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(m);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "stationary 4x4 system is numerically singular (rank " << lu.rank()
        << ")";
    throw SingularSystemError(msg.str());
  }
  const Eigen::Vector4cd sol = lu.solve(rhs);
  return {sol(0), sol(1), sol(2), sol(3)};
}

}  // namespace

ScatteringResult solve_oracle_down(double nu, const EmitterRates& rates,
                                   const Transitions& transitions,
                                   const DriveField& drive) {
  // Unknowns (t_a, t_b, lambda_2, lambda_3); v_g = 1, V_ij = sqrt(gamma_ij).
  const double v31 = std::sqrt(rates.gamma_31);
  const double v21 = std::sqrt(rates.gamma_21);
  const double nu_shifted = nu - drive.omega;
  const Complex e2 =
      transitions.omega_21 - nu_shifted - 0.5 * kI * rates.loss_2;
  const Complex e3 = transitions.omega_31 - nu - 0.5 * kI * rates.loss_3;
  const double s = kInvSqrt2Pi;

  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
  // photon jump conditions at the emitter
  m(0, 0) = -kI * s;
  m(0, 3) = -v31;
  rhs(0) = -kI * s;
  m(1, 1) = -kI * s;
  m(1, 2) = -v21;
  // emitter amplitude equations
  m(2, 1) = -0.5 * v21 * s;
  m(2, 2) = e2;
  m(2, 3) = -0.5 * drive.rabi;
  m(3, 0) = -0.5 * v31 * s;
  m(3, 2) = -0.5 * drive.rabi;
  m(3, 3) = e3;
  rhs(3) = 0.5 * v31 * s;
  return solve_stationary(m, rhs);
}

ScatteringResult solve_oracle_up(double nu, const EmitterRates& rates,
                                 const Transitions& transitions,
                                 const DriveField& drive) {
  const double v31 = std::sqrt(rates.gamma_31);
  const double v21 = std::sqrt(rates.gamma_21);
  const double nu_shifted = nu + drive.omega;
  const Complex e2 = transitions.omega_21 - nu - 0.5 * kI * rates.loss_2;
  const Complex e3 =
      transitions.omega_31 - nu_shifted - 0.5 * kI * rates.loss_3;
  const double s = kInvSqrt2Pi;

  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
  m(0, 1) = -kI * s;
  m(0, 2) = -v21;
  rhs(0) = -kI * s;
  m(1, 0) = -kI * s;
  m(1, 3) = -v31;
  m(2, 1) = -0.5 * v21 * s;
  m(2, 2) = e2;
  m(2, 3) = -0.5 * drive.rabi;
  rhs(2) = 0.5 * v21 * s;
  m(3, 0) = -0.5 * v31 * s;
  m(3, 2) = -0.5 * drive.rabi;
  m(3, 3) = e3;
  return solve_stationary(m, rhs);
}

OptimalDrive optimal_drive_down(const EmitterRates& rates) {
  if (rates.gamma_31 <= rates.loss_3) {
    throw InfeasibleDriveError(
        "optimal_drive_down: gamma_31 <= loss_3, no real drive nulls the "
        "elastic channel");
  }
  return {0.0, std::sqrt((rates.gamma_31 - rates.loss_3) *
                         (rates.gamma_21 + rates.loss_2))};
}

OptimalDrive optimal_drive_up(const EmitterRates& rates) {
  if (rates.gamma_21 <= rates.loss_2) {
    throw InfeasibleDriveError(
        "optimal_drive_up: gamma_21 <= loss_2, no real drive nulls the "
        "elastic channel");
  }
  return {0.0, std::sqrt((rates.gamma_31 + rates.loss_3) *
                         (rates.gamma_21 - rates.loss_2))};
}

double resonant_efficiency_down(const EmitterRates& rates) {
  return (1.0 - rates.loss_3 / rates.gamma_31) /
         (1.0 + rates.loss_2 / rates.gamma_21);
}

double resonant_efficiency_up(const EmitterRates& rates) {
  return (1.0 - rates.loss_2 / rates.gamma_21) /
         (1.0 + rates.loss_3 / rates.gamma_31);
}

LosslessSpectrum lossless_spectra(double delta_nu, double total, double eta) {
  if (!(total > 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument("lossless_spectra: need total > 0 and eta > 0");
  }
  const double x = delta_nu / total;
  const double x2 = x * x;
  const double eta2 = eta * eta;
  const double quad = (eta2 - 1.0) * (eta2 - 1.0) * x2 +
                      4.0 * std::pow(eta + 1.0, 4) * x2 * x2;
  const double den = eta2 + quad;
  return {quad / den, eta2 / den};
}

TransmissionSpectrum transmission_spectrum(const Eigen::ArrayXd& nu,
                                           const EmitterRates& rates,
                                           const Transitions& transitions,
                                           const DriveField& drive,
                                           Direction direction) {
  TransmissionSpectrum out;
  out.nu = nu;
  out.t_a.resize(nu.size());
  out.t_b.resize(nu.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const ScatteringResult r = direction == Direction::down
                                   ? scatter_down(nu(i), rates, transitions, drive)
                                   : scatter_up(nu(i), rates, transitions, drive);
    out.t_a(i) = r.t_a;
    out.t_b(i) = r.t_b;
  }
  return out;
}

}  // namespace deltaqed
