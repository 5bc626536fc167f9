#include "deltaqed/flux_circuit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "deltaqed/parallel.hpp"
#include "deltaqed/units.hpp"

namespace deltaqed {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Charge lattice of the physical sector, ordered by n_p then n_m.
struct ChargeBasis {
  std::vector<std::pair<int, int>> states;
  Eigen::MatrixXi index;  // (n_p + n_p_max, n_m + n_m_max) -> basis index, -1 outside
  int n_p_max, n_m_max;

  explicit ChargeBasis(const ChargeTruncation& t)
      : n_p_max(t.n_p_max), n_m_max(t.n_m_max) {
    index = Eigen::MatrixXi::Constant(2 * n_p_max + 1, 2 * n_m_max + 1, -1);
    for (int np = -n_p_max; np <= n_p_max; ++np) {
      for (int nm = -n_m_max; nm <= n_m_max; ++nm) {
        if (((np + nm) % 2 + 2) % 2 != 0) continue;
        index(np + n_p_max, nm + n_m_max) = static_cast<int>(states.size());
        states.emplace_back(np, nm);
      }
    }
  }

  int at(int np, int nm) const {
    if (std::abs(np) > n_p_max || std::abs(nm) > n_m_max) return -1;
    return index(np + n_p_max, nm + n_m_max);
  }
};

}  // namespace

CircuitParams::CircuitParams(double a, double b, double ejh, double ejec,
                             double z, double f)
    : alpha(a), beta(b), ej_over_h(ejh), ej_over_ec(ejec), impedance(z), flux(f) {
  require(a > 0.0 && a < 1.0, "CircuitParams: need 0 < alpha < 1");
  require(b > 0.0, "CircuitParams: need beta > 0");
  require(ejh > 0.0, "CircuitParams: need ej_over_h > 0");
  require(ejec > 1.0, "CircuitParams: need ej_over_ec > 1");
  require(z > 0.0, "CircuitParams: need impedance > 0");
  require(f >= 0.0 && f <= 1.0, "CircuitParams: need 0 <= flux <= 1");
}

CircuitParams CircuitParams::with_flux(double f) const {
  CircuitParams p = *this;
  require(f >= 0.0 && f <= 1.0, "CircuitParams: need 0 <= flux <= 1");
  p.flux = f;
  return p;
}

ChargeTruncation::ChargeTruncation(int np, int nm) : n_p_max(np), n_m_max(nm) {
  require(np >= 5 && nm >= 5, "ChargeTruncation: need n_p_max, n_m_max >= 5");
}

int ChargeTruncation::dimension() const {
  const int total = (2 * n_p_max + 1) * (2 * n_m_max + 1);
  return (total + 1) / 2;
}

Eigen::MatrixXcd build_hamiltonian(const CircuitParams& params,
                                   const ChargeTruncation& trunc) {
  const ChargeBasis basis(trunc);
  const int dim = static_cast<int>(basis.states.size());
  const double ec = 1.0 / params.ej_over_ec;  // E_C in units of E_J
  const double kin_p = 2.0 * ec;
  const double kin_m = 2.0 * ec / (1.0 + 2.0 * params.alpha + 2.0 * params.beta);
  const Complex hop_m2 =
      -0.5 * params.alpha *
      std::exp(Complex(0.0, units::two_pi * params.flux));

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto [np, nm] = basis.states[i];
    h(i, i) = kin_p * np * np + kin_m * nm * nm + (2.0 + params.alpha);
    for (int dp : {-1, 1}) {
      for (int dm : {-1, 1}) {
        const int j = basis.at(np + dp, nm + dm);
        if (j >= 0) h(j, i) += -0.5;
      }
    }
    if (const int j = basis.at(np, nm + 2); j >= 0) h(j, i) += hop_m2;
    if (const int j = basis.at(np, nm - 2); j >= 0) h(j, i) += std::conj(hop_m2);
  }
  return h;
}

EigenSolution solve_lowest(const CircuitParams& params,
                           const ChargeTruncation& trunc, int k) {
  const Eigen::MatrixXcd h = build_hamiltonian(params, trunc);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver failed to converge at flux " << params.flux
        << " (dim " << h.rows() << ", residual "
        << (h * es.eigenvectors().col(0) -
            es.eigenvalues()(0) * es.eigenvectors().col(0))
               .norm()
        << ")";
    throw EigensolverError(msg.str());
  }

  const ChargeBasis basis(trunc);
  EigenSolution sol;
  sol.values = es.eigenvalues().head(k);
  sol.vectors = es.eigenvectors().leftCols(k);
  sol.charge_m.resize(basis.states.size());
  for (size_t i = 0; i < basis.states.size(); ++i)
    sol.charge_m(static_cast<Eigen::Index>(i)) = basis.states[i].second;
  return sol;
}

QubitSpectrum spectrum_from(const EigenSolution& sol,
                            const CircuitParams& params) {
  if (sol.values.size() < 3)
    throw std::invalid_argument("spectrum_from: need at least 3 levels");

  Eigen::MatrixXcd v = sol.vectors.leftCols(3);
  for (int c = 0; c < 3; ++c) {
    Eigen::Index imax = 0;
    v.col(c).cwiseAbs().maxCoeff(&imax);
    const Complex z = v(imax, c);
    if (std::abs(z) > 0) v.col(c) *= std::conj(z) / std::abs(z);
  }

  QubitSpectrum sp;
  const double ej_angular = units::from_ghz(params.ej_over_h);
  for (int i = 0; i < 3; ++i)
    sp.levels(i) = (sol.values(i) - sol.values(0)) * ej_angular;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      sp.n_elements(i, j) =
          (v.col(i).conjugate().array() * sol.charge_m.array() *
           v.col(j).array())
              .sum();
    }
  }
  return sp;
}

QubitSpectrum diagonalize(const CircuitParams& params,
                          const ChargeTruncation& trunc) {
  return spectrum_from(solve_lowest(params, trunc), params);
}

ConvergenceReport check_convergence(const CircuitParams& params,
                                    const ChargeTruncation& trunc) {
  const QubitSpectrum base = diagonalize(params, trunc);
  const QubitSpectrum fine = diagonalize(params, trunc.doubled());

  ConvergenceReport rep;
  rep.base = trunc;
  for (int lvl : {1, 2}) {
    const double ref = std::abs(fine.levels(lvl));
    if (ref > 0.0) {
      rep.max_level_shift = std::max(
          rep.max_level_shift, std::abs(base.levels(lvl) - fine.levels(lvl)) / ref);
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double ref = std::abs(fine.n_elements(i, j));
      if (ref > 1e-9) {
        rep.max_element_shift =
            std::max(rep.max_element_shift,
                     std::abs(std::abs(base.n_elements(i, j)) - ref) / ref);
      }
    }
  }
  return rep;
}

RealizedRates decay_rates(const CircuitParams& params,
                          const QubitSpectrum& spectrum) {
  const double frac = params.charge_fraction();
  const double prefactor = 4.0 * std::numbers::pi *
                           (params.impedance / constants::resistance_quantum) *
                           frac * frac;
  RealizedRates r;
  r.gamma_31 = prefactor * spectrum.omega_31() * std::norm(spectrum.n_elements(2, 0));
  r.gamma_21 = prefactor * spectrum.omega_21() * std::norm(spectrum.n_elements(1, 0));
  r.gamma_32 = prefactor * spectrum.omega_32() * std::norm(spectrum.n_elements(2, 1));
  return r;
}

EmitterRates waveguide_rates(const RealizedRates& rates,
                             const CouplingModel& coupling) {
  return {rates.gamma_31, rates.gamma_21, coupling.loss2_ratio * rates.gamma_21,
          coupling.loss3_ratio * rates.gamma_31 + rates.gamma_32};
}

namespace {

double drive_matrix_element(const CircuitParams& params,
                            const QubitSpectrum& spectrum) {
  const double n32 = std::abs(spectrum.n_elements(2, 1));
  if (n32 < 1e-12) {
    throw ComputeError(
        "drive channel closed: |n_32| < 1e-12, no classical field couples "
        "levels 2 and 3");
  }
  // rad/s per volt of felt amplitude
  return 2.0 * constants::elementary_charge * params.charge_fraction() * n32 /
         constants::hbar;
}

}  // namespace

double rabi_from_voltage(const CircuitParams& params,
                         const QubitSpectrum& spectrum, double volts) {
  const double felt = 2.0 * volts;
  const double rabi_si = drive_matrix_element(params, spectrum) * felt;
  return rabi_si * 1e-9;  // rad/s -> rad/ns
}

double voltage_for_rabi(const CircuitParams& params,
                        const QubitSpectrum& spectrum, double rabi) {
  const double felt = units::to_si_angular(rabi) / drive_matrix_element(params, spectrum);
  return 0.5 * felt;
}

std::vector<FluxPoint> sweep_flux(const CircuitParams& base,
                                  const std::vector<double>& flux_grid,
                                  const CouplingModel& coupling,
                                  const ChargeTruncation& trunc) {
  std::vector<FluxPoint> points(flux_grid.size());
  parallel_for(static_cast<int>(flux_grid.size()), [&](int i) {
    FluxPoint& pt = points[i];
    pt.flux = flux_grid[i];
    try {
      const CircuitParams p = base.with_flux(flux_grid[i]);
      pt.spectrum = diagonalize(p, trunc);
      pt.rates = decay_rates(p, pt.spectrum);
      pt.ok = true;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      try {
        const EmitterRates er = waveguide_rates(pt.rates, coupling);
        // an efficiency only exists where the matching optimal drive does
        pt.eff_down =
            er.gamma_31 > er.loss_3 ? resonant_efficiency_down(er) : nan;
        pt.eff_up = er.gamma_21 > er.loss_2 ? resonant_efficiency_up(er) : nan;
      } catch (const std::exception&) {
        // conversion channel closed at this bias; levels are still valid
        pt.eff_down = nan;
        pt.eff_up = nan;
      }
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });
  return points;
}

}  // namespace deltaqed
