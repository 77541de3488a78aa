#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "stlight/medium.hpp"

namespace stlight {

/// A localized off-resonant ensemble of M two-level atoms.
struct PerturberSpec {
  double m_atoms = 1.0;
  double z_a = 100.0;
  double delta_l_a = 20.0;  // longitudinal size; the density's equivalent width
  double sigma_a_over_s = 1.0;
  double gamma_a = 0.01;
  double detuning = 1.0;  // omega_a - omega_+
  double t_on = -std::numeric_limits<double>::infinity();
  double t_off = std::numeric_limits<double>::infinity();

  bool active(double t) const { return t >= t_on && t < t_off; }

  friend bool operator==(const PerturberSpec&, const PerturberSpec&) = default;
};

/// Raises NonDispersiveRegime unless |detuning| > gamma_a, ValidationError on bad fields.
void validate_perturber(const PerturberSpec& p);

struct Density {
  std::vector<double> values;  // atoms per unit length on the grid
  double rms = 0.0;
  bool clamped = false;  // true when the width was raised to 4 dz
};

/// Gaussian density centred at z_a with sum(values) * dz = M.
Density perturber_density(const PerturberSpec& p, int grid_points, double dz);

/// Complex rate per atom density per unit tau: (sigma_a/S) gamma_a / (gamma_a + i detuning).
std::complex<double> perturber_coupling(const PerturberSpec& p);

/// Multiplies the polariton amplitude by exp(-coupling * density * dtau) cell by cell.
void apply_perturber(std::vector<std::complex<double>>& field, const Density& density,
                     const PerturberSpec& p, double dtau);

/// Phase imprinted on a pulse that crosses the perturber at the current velocity.
double phase_shift_traveling(const MediumModel& m, const Coefficients& c, const PerturberSpec& p);

struct StationaryPhaseRate {
  double chi_s;  // rad per unit time
  double t_pi;   // pi / chi_s
};

/// Phase rate at z_a for a stopped pulse; v_g defaults to u_g0.
StationaryPhaseRate phase_rate_stationary(const MediumModel& m, const PerturberSpec& p,
                                          double v_g = 0.0);

}  // namespace stlight
