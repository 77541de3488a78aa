#include "stlight/perturber.hpp"

#include <cmath>

#include "stlight/error.hpp"

namespace stlight {

void validate_perturber(const PerturberSpec& p) {
  if (!(p.m_atoms >= 0)) fail(ErrorCode::ValidationError, "perturber m_atoms must be >= 0");
  if (!(p.delta_l_a > 0)) fail(ErrorCode::ValidationError, "perturber delta_l_a must be > 0");
  if (!(p.sigma_a_over_s >= 0)) fail(ErrorCode::ValidationError, "perturber sigma_a_over_s must be >= 0");
  if (!(p.gamma_a > 0)) fail(ErrorCode::ValidationError, "perturber gamma_a must be > 0");
  if (!(p.t_off > p.t_on)) fail(ErrorCode::ValidationError, "perturber t_off must exceed t_on");
  if (!(std::abs(p.detuning) > p.gamma_a)) {
    fail(ErrorCode::NonDispersiveRegime, "|detuning| must exceed gamma_a");
  }
}

Density perturber_density(const PerturberSpec& p, int grid_points, double dz) {
  const double length = (grid_points - 1) * dz;
  if (!(p.z_a >= 0 && p.z_a <= length)) {
    fail(ErrorCode::PerturberOffGrid, "z_a = " + std::to_string(p.z_a) + " outside [0, " +
                                          std::to_string(length) + "]");
  }
  Density d;
  const double nominal = p.delta_l_a / std::sqrt(2.0 * std::acos(-1.0));
  d.rms = std::max(nominal, 4.0 * dz);
  d.clamped = nominal < 4.0 * dz;
  d.values.resize(grid_points);
  double sum = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i * dz - p.z_a) / d.rms;
    d.values[i] = std::exp(-0.5 * x * x);
    sum += d.values[i];
  }
  const double scale = sum > 0 ? p.m_atoms / (sum * dz) : 0.0;
  for (double& v : d.values) v *= scale;
  return d;
}

std::complex<double> perturber_coupling(const PerturberSpec& p) {
  return p.sigma_a_over_s * p.gamma_a / std::complex<double>(p.gamma_a, p.detuning);
}

void apply_perturber(std::vector<std::complex<double>>& field, const Density& density,
                     const PerturberSpec& p, double dtau) {
  const auto kappa = perturber_coupling(p);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (density.values[i] != 0) field[i] *= std::exp(-kappa * density.values[i] * dtau);
  }
}

double phase_shift_traveling(const MediumModel& m, const Coefficients& c, const PerturberSpec& p) {
  const double v = c.eta * c.eta * (m.xi_minus * c.alpha_plus - m.xi_plus * c.alpha_minus) /
                   m.xi_minus;
  if (std::abs(v) < 1e-12) {
    fail(ErrorCode::DegenerateCoefficients,
         "pulse velocity vanishes; use the stationary phase rate instead");
  }
  return p.m_atoms * p.sigma_a_over_s * p.gamma_a / (v * p.detuning);
}

StationaryPhaseRate phase_rate_stationary(const MediumModel& m, const PerturberSpec& p,
                                          double v_g) {
  if (v_g <= 0) v_g = m.u_g0;
  const double chi = p.m_atoms * p.sigma_a_over_s * p.gamma_a * v_g / (p.detuning * p.delta_l_a);
  if (chi == 0) fail(ErrorCode::DegenerateCoefficients, "phase rate is zero");
  return {chi, std::acos(-1.0) / std::abs(chi)};
}

}  // namespace stlight
