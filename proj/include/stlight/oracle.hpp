#pragma once

#include <complex>

#include "stlight/medium.hpp"

namespace stlight {

enum class Channel { Plus, Minus };

/// Measured Gaussian parameters of the forward field at a reference time, from
/// which closed-form predictions are propagated. `width` is B, the Gaussian
/// parameter of the amplitude: |psi| ~ exp(-(z - centre)^2 / (2 B^2)).
struct OracleOrigin {
  double t0 = 0.0;
  double centre = 0.0;
  double width = 20.0;
  double peak = 1.0;  // |psi+| at the centre
};

/// Spatial shift of the backward channel, (xi+ + xi-)/(xi+ xi-).
double z_offset(const MediumModel& m);

/// Drift rate of the forward channel per unit tau, excluding the total-derivative term.
double drift_rate(const Coefficients& c, const MediumModel& m);

/// Spreading coefficient per unit tau (B^2 grows at twice this), excluding the
/// total-derivative term.
double spreading_rate_tau(const Coefficients& c, const MediumModel& m);

/// v_b = (2 / (N g_Sigma^2)) Omega+^2 Omega-^2 / Omega_Sigma^2.
double spreading_velocity(const MediumModel& m, double omega_plus, double omega_minus);

/// d(l^2)/dt = v_b / xi_Sigma in the gamma2 -> 0 limit.
double spreading_rate(const MediumModel& m, double omega_plus, double omega_minus);

enum class SpreadingCase { WeakMinus, Symmetric, StrongMinus };

/// Limiting forms of d(l^2)/dt on the stationary point: v_g/xi- (g- << g+),
/// 2 v_g/xi+ (g- = g+), v_g/xi+ (g- >> g+).
double spreading_case_rate(const MediumModel& m, SpreadingCase which, double v_g);

/// l_o / l(t_s) for a pulse held stationary for t_s.
double conversion_probability(const MediumModel& m, const PulseSpec& p, double t_s);
double conversion_probability(const MediumModel& m, double l_o, double v_g, double t_s);

struct DecayExponents {
  double via_t;    // integral of eta*gamma2 dt
  double via_tau;  // integral of eta*gamma2' dtau
};

/// Decay exponents over [t0, t1]. Where Omega_Sigma^2 < storage threshold the
/// bare spin decay gamma2 is used for both.
DecayExponents decay_exponents(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                               double storage_floor = 1e-2, double tol = 1e-10);

double decay_factor(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                    double storage_floor = 1e-2);

struct GaussianParams {
  double centre;
  double width;  // B
  double peak;   // |psi| at the centre
};

/// Closed-form Gaussian evolution of both channels under a PDE-mode schedule.
class GaussianOracle {
 public:
  GaussianOracle(MediumModel m, ControlSchedule s, OracleOrigin origin, double tol = 1e-10);

  const OracleOrigin& origin() const { return origin_; }

  /// Displacement of the forward channel since t0 (beta+); beta- = beta+ - z_o.
  double beta(Channel ch, double t) const;
  /// B(t); raises NegativeRadicand if the transient terms make B^2 negative.
  double width_b(double t) const;
  /// exp(-integral eta gamma2 dt) since t0.
  double decay(double t) const;

  GaussianParams params(Channel ch, double t) const;

  /// Normalised field psi_sigma (psi- uses the same envelope shifted by z_o).
  std::complex<double> psi_envelope(Channel ch, double t, double z) const;
  /// Physical field amplitude A_sigma; raises ChannelOff if the channel's control is zero.
  std::complex<double> field_envelope(Channel ch, double t, double z) const;

 private:
  MediumModel m_;
  ControlSchedule s_;
  OracleOrigin origin_;
  double tol_;
  Coefficients c0_;
};

}  // namespace stlight
