#include "deltaqed/lindblad.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "deltaqed/parallel.hpp"

namespace deltaqed {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ProbeDrive::ProbeDrive(double op, double dp, double d, double o)
    : omega_p(op), delta_p(dp), delta(d), omega(o) {
  require(std::isfinite(op) && std::isfinite(dp) && std::isfinite(d) &&
              std::isfinite(o),
          "ProbeDrive: values must be finite");
  require(op >= 0.0, "ProbeDrive: omega_p must be >= 0");
  require(o >= 0.0, "ProbeDrive: omega must be >= 0");
}

LindbladRates::LindbladRates(double g31_, double g32_, double g21_, double d12,
                             double d13, double d23)
    : g31(g31_), g32(g32_), g21(g21_), deph_12(d12), deph_13(d13), deph_23(d23) {
  require(g31 >= 0 && g32 >= 0 && g21 >= 0 && d12 >= 0 && d13 >= 0 && d23 >= 0,
          "LindbladRates: rates must be >= 0");
}

LindbladRates LindbladRates::from_scattering(const EmitterRates& rates,
                                             double gamma_32) {
  require(gamma_32 >= 0.0, "LindbladRates: gamma_32 must be >= 0");
  if (rates.loss_3 < gamma_32 - 1e-15 * std::max(1.0, gamma_32)) {
    throw std::invalid_argument(
        "LindbladRates: loss_3 must include the 3->2 relaxation (loss_3 >= "
        "gamma_32)");
  }
  const double d13 = std::max(rates.loss_3 - gamma_32, 0.0);
  const double d12 = rates.loss_2;
  return {rates.gamma_31, gamma_32, rates.gamma_21, d12, d13, d12 + d13};
}

double DensityMatrix3::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix3::trace_defect() const {
  return std::abs(rho.trace() - Complex(1.0, 0.0));
}

double DensityMatrix3::min_eigenvalue() const {
  const Eigen::Matrix3cd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix3::physical(double herm_tol, double trace_tol,
                              double positivity_tol) const {
  return hermiticity_defect() <= herm_tol && trace_defect() <= trace_tol &&
         min_eigenvalue() >= -positivity_tol;
}

Eigen::Matrix3cd interaction_hamiltonian(const ProbeDrive& drive) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(2, 2) = -drive.delta_p;
  h(1, 1) = -(drive.delta_p - drive.delta);
  h(2, 0) = -0.5 * drive.omega_p;
  h(0, 2) = -0.5 * drive.omega_p;
  h(2, 1) = -0.5 * drive.omega;
  h(1, 2) = -0.5 * drive.omega;
  return h;
}

Eigen::Matrix3cd lindblad_action(const Eigen::Matrix3cd& rho,
                                 const ProbeDrive& drive,
                                 const LindbladRates& rates) {
  const Eigen::Matrix3cd h = interaction_hamiltonian(drive);
  Eigen::Matrix3cd out = -kI * (h * rho - rho * h);
  out(0, 0) += rates.g31 * rho(2, 2) + rates.g21 * rho(1, 1);
  out(1, 1) += rates.g32 * rho(2, 2) - rates.g21 * rho(1, 1);
  out(2, 2) += -(rates.g31 + rates.g32) * rho(2, 2);
  out(0, 1) -= rates.gamma12() * rho(0, 1);
  out(1, 0) -= rates.gamma12() * rho(1, 0);
  out(0, 2) -= rates.gamma13() * rho(0, 2);
  out(2, 0) -= rates.gamma13() * rho(2, 0);
  out(1, 2) -= rates.gamma23() * rho(1, 2);
  out(2, 1) -= rates.gamma23() * rho(2, 1);
  return out;
}

Eigen::Matrix<Complex, 9, 9> liouvillian(const ProbeDrive& drive,
                                         const LindbladRates& rates) {
  Eigen::Matrix<Complex, 9, 9> m;
  for (int k = 0; k < 9; ++k) {
    Eigen::Matrix3cd basis = Eigen::Matrix3cd::Zero();
    basis(k / 3, k % 3) = 1.0;
    const Eigen::Matrix3cd img = lindblad_action(basis, drive, rates);
    for (int r = 0; r < 9; ++r) m(r, k) = img(r / 3, r % 3);
  }
  return m;
}

DensityMatrix3 steady_state(const ProbeDrive& drive, const LindbladRates& rates) {
  if (rates.g31 + rates.g32 + rates.g21 <= 0.0) {
    throw SingularLiouvillianError(
        "steady_state: all relaxation rates vanish, stationary state is not "
        "unique");
  }

  Eigen::Matrix<Complex, 9, 9> m = liouvillian(drive, rates);
  // replace the drho11 row with Tr rho = 1
  m.row(0).setZero();
  m(0, 0) = m(0, 4) = m(0, 8) = 1.0;
  Eigen::Matrix<Complex, 9, 1> b = Eigen::Matrix<Complex, 9, 1>::Zero();
  b(0) = 1.0;

  Eigen::FullPivLU<Eigen::Matrix<Complex, 9, 9>> lu(m);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "steady_state: Liouvillian with trace constraint is rank deficient "
           "(rank "
        << lu.rank() << "), stationary state is not unique";
    throw SingularLiouvillianError(msg.str());
  }
  const Eigen::Matrix<Complex, 9, 1> v = lu.solve(b);

  DensityMatrix3 state;
  for (int r = 0; r < 9; ++r) state.rho(r / 3, r % 3) = v(r);

  const double scale = std::max({rates.g31, rates.g21, rates.g32, drive.omega,
                                 drive.omega_p, std::abs(drive.delta_p), 1.0});
  const double residual =
      lindblad_action(state.rho, drive, rates).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "steady_state: stationary residual " << residual
        << " exceeds tolerance";
    throw ComputeError(msg.str());
  }
  if (!state.physical()) {
    std::ostringstream msg;
    msg << "steady_state: unphysical solution (herm defect "
        << state.hermiticity_defect() << ", trace defect "
        << state.trace_defect() << ", min eigenvalue " << state.min_eigenvalue()
        << ")";
    throw ComputeError(msg.str());
  }
  return state;
}

DensityMatrix3 evolve_to_steady(const ProbeDrive& drive,
                                const LindbladRates& rates, double rel_tol,
                                double max_time_over_t31) {
  if (rates.g31 <= 0.0)
    throw std::invalid_argument("evolve_to_steady: need g31 > 0");

  const double scale = std::max({rates.g31, rates.g32, rates.g21, drive.omega,
                                 drive.omega_p, std::abs(drive.delta_p),
                                 std::abs(drive.delta)});
  const double dt = 0.02 / scale;
  const double t_check = 1.0 / rates.g31;  // characteristic relaxation time
  const int steps_per_check = std::max(1, static_cast<int>(t_check / dt));

  Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
  rho(0, 0) = 1.0;
  auto rhs = [&](const Eigen::Matrix3cd& r) {
    return lindblad_action(r, drive, rates);
  };

  const double t_max = max_time_over_t31 / rates.g31;
  double t = 0.0;
  while (t < t_max) {
    Eigen::Matrix3cd start = rho;
    for (int s = 0; s < steps_per_check; ++s) {
      const Eigen::Matrix3cd k1 = rhs(rho);
      const Eigen::Matrix3cd k2 = rhs(rho + 0.5 * dt * k1);
      const Eigen::Matrix3cd k3 = rhs(rho + 0.5 * dt * k2);
      const Eigen::Matrix3cd k4 = rhs(rho + dt * k3);
      rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    const double change = (rho - start).cwiseAbs().maxCoeff();
    if (change < rel_tol) break;
  }
  return {rho};
}

TransmissionPair transmission(const ProbeDrive& drive, const LindbladRates& rates,
                              const DensityMatrix3& state) {
  if (!(drive.omega_p > 0.0)) {
    throw ComputeError(
        "transmission: omega_p must be > 0 to normalize the coefficients");
  }
  TransmissionPair out;
  out.t_a = 1.0 + 2.0 * kI * rates.g31 * state.rho(2, 0) / drive.omega_p;
  out.t_b = 2.0 * kI * std::sqrt(rates.g31 * rates.g21) * state.rho(1, 0) /
            drive.omega_p;
  return out;
}

WeakFieldCoherences weak_field_coherences(const ProbeDrive& drive,
                                          const LindbladRates& rates) {
  const Complex f12 = kI * (drive.delta_p - drive.delta) - rates.gamma12();
  const Complex f13 = kI * drive.delta_p - rates.gamma13();
  const Complex denom = f12 * f13 + 0.25 * drive.omega * drive.omega;
  WeakFieldCoherences out;
  out.rho21 = -0.25 * drive.omega_p * drive.omega / denom;
  out.rho31 = -0.5 * kI * drive.omega_p * f12 / denom;
  return out;
}

std::vector<SaturationRow> saturation_sweep(
    const LindbladRates& rates, double omega,
    const std::vector<double>& omega_p_grid) {
  for (double op : omega_p_grid) {
    if (!(op > 0.0))
      throw std::invalid_argument("saturation_sweep: omega_p grid must be > 0");
  }
  std::vector<SaturationRow> rows(omega_p_grid.size());
  parallel_for(static_cast<int>(omega_p_grid.size()), [&](int i) {
    SaturationRow& row = rows[i];
    row.omega_p = omega_p_grid[i];
    try {
      const ProbeDrive drive(omega_p_grid[i], 0.0, 0.0, omega);
      const DensityMatrix3 state = steady_state(drive, rates);
      const TransmissionPair t = transmission(drive, rates, state);
      row.abs2_ta = std::norm(t.t_a);
      row.abs2_tb = std::norm(t.t_b);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

double photon_number(double omega_p, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("photon_number: need gamma > 0");
  const double x = omega_p / gamma;
  return 0.5 * std::numbers::pi * x * x;
}

}  // namespace deltaqed
