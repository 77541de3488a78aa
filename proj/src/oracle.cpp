#include "stlight/oracle.hpp"

#include <cmath>

#include "stlight/error.hpp"
#include "stlight/quadrature.hpp"

namespace stlight {

double z_offset(const MediumModel& m) { return (m.xi_plus + m.xi_minus) / (m.xi_plus * m.xi_minus); }

double drift_rate(const Coefficients& c, const MediumModel& m) {
  return c.eta * c.eta * (m.xi_minus * c.alpha_plus - m.xi_plus * c.alpha_minus) / m.xi_minus;
}

double spreading_rate_tau(const Coefficients& c, const MediumModel& m) {
  const double s = m.xi_plus + m.xi_minus;
  return c.eta * c.eta * c.eta * c.alpha_plus * c.alpha_minus * s * s /
         (m.xi_minus * m.xi_minus);
}

double spreading_velocity(const MediumModel& m, double omega_plus, double omega_minus) {
  const double wp2 = omega_plus * omega_plus;
  const double wm2 = omega_minus * omega_minus;
  const double sum2 = wp2 + wm2;
  if (sum2 == 0) return 0.0;
  // N g_Sigma^2 = gamma / (1 + 1/r^2) in the unit scheme.
  const double n_g_sigma_sq = m.gamma / (1.0 + 1.0 / (m.r_g * m.r_g));
  return 2.0 / n_g_sigma_sq * wp2 * wm2 / sum2;
}

double spreading_rate(const MediumModel& m, double omega_plus, double omega_minus) {
  return spreading_velocity(m, omega_plus, omega_minus) / m.xi_sigma();
}

double spreading_case_rate(const MediumModel& m, SpreadingCase which, double v_g) {
  switch (which) {
    case SpreadingCase::WeakMinus: return v_g / m.xi_minus;
    case SpreadingCase::Symmetric: return 2.0 * v_g / m.xi_plus;
    case SpreadingCase::StrongMinus: return v_g / m.xi_plus;
  }
  return 0.0;
}

double conversion_probability(const MediumModel& m, double l_o, double v_g, double t_s) {
  return 1.0 / std::sqrt(1.0 + v_g / m.xi_sigma() * t_s / (l_o * l_o));
}

double conversion_probability(const MediumModel& m, const PulseSpec& p, double t_s) {
  return conversion_probability(m, pulse_length(m, p), m.u_g0, t_s);
}

DecayExponents decay_exponents(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                               double storage_floor, double tol) {
  // Same entry level the integrator uses for constant controls.
  const double thr = storage_threshold(m, storage_floor) / 1.2;
  const auto bp = breakpoints(s);
  const double gg2 = m.gamma * m.gamma2;
  auto rate_t = [&](double t) {
    const auto cv = control_amplitudes(s, t);
    const double w2 = cv.omega_plus * cv.omega_plus + cv.omega_minus * cv.omega_minus;
    if (w2 < thr || w2 == 0) return m.gamma2;
    return m.gamma2 * (w2 + gg2) / w2;
  };
  auto rate_tau = [&](double t) {
    const auto cv = control_amplitudes(s, t);
    const double w2 = cv.omega_plus * cv.omega_plus + cv.omega_minus * cv.omega_minus;
    if (w2 < thr || w2 == 0) return m.gamma2;
    const auto c = coefficients(m, cv.omega_plus, cv.omega_minus);
    return c.eta * c.gamma2_prime * c.tau_rate;
  };
  if (m.gamma2 == 0) return {0.0, 0.0};
  return {integrate_panels(rate_t, t0, t1, bp, tol), integrate_panels(rate_tau, t0, t1, bp, tol)};
}

double decay_factor(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                    double storage_floor) {
  return std::exp(-decay_exponents(m, s, t0, t1, storage_floor).via_t);
}

GaussianOracle::GaussianOracle(MediumModel m, ControlSchedule s, OracleOrigin origin, double tol)
    : m_(m), s_(std::move(s)), origin_(origin), tol_(tol) {
  validate_schedule(s_);
  c0_ = coefficients_at(m_, s_, origin_.t0);
}

double GaussianOracle::beta(Channel ch, double t) const {
  const auto bp = breakpoints(s_);
  const double drift = integrate_panels(
      [&](double tt) {
        const auto c = coefficients_at(m_, s_, tt);
        return drift_rate(c, m_) * c.tau_rate;
      },
      origin_.t0, t, bp, tol_);
  const auto c = coefficients_at(m_, s_, t);
  const double bplus = drift - (c.eta * c.alpha_tilde - c0_.eta * c0_.alpha_tilde) / m_.xi_minus;
  return ch == Channel::Plus ? bplus : bplus - z_offset(m_);
}

double GaussianOracle::width_b(double t) const {
  const auto bp = breakpoints(s_);
  const double spread = integrate_panels(
      [&](double tt) {
        const auto c = coefficients_at(m_, s_, tt);
        return spreading_rate_tau(c, m_) * c.tau_rate;
      },
      origin_.t0, t, bp, tol_);
  const auto c = coefficients_at(m_, s_, t);
  const double ea = c.eta * c.alpha_tilde, ea0 = c0_.eta * c0_.alpha_tilde;
  const double b2 = origin_.width * origin_.width + 2.0 * spread +
                    (ea * ea - ea0 * ea0) / (m_.xi_minus * m_.xi_minus);
  if (!(b2 > 0)) fail(ErrorCode::NegativeRadicand, "B^2 = " + std::to_string(b2));
  return std::sqrt(b2);
}

double GaussianOracle::decay(double t) const {
  if (m_.gamma2 == 0) return 1.0;
  return std::exp(-decay_exponents(m_, s_, origin_.t0, t, 1e-2, tol_).via_t);
}

GaussianParams GaussianOracle::params(Channel ch, double t) const {
  const auto c = coefficients_at(m_, s_, t);
  const double b = width_b(t);
  const double peak = origin_.peak * (c.eta / c0_.eta) * (origin_.width / b) * decay(t);
  return {origin_.centre + beta(ch, t), b, peak};
}

std::complex<double> GaussianOracle::psi_envelope(Channel ch, double t, double z) const {
  const auto g = params(ch, t);
  const double x = z - g.centre;
  return {g.peak * std::exp(-x * x / (2 * g.width * g.width)), 0.0};
}

std::complex<double> GaussianOracle::field_envelope(Channel ch, double t, double z) const {
  const auto cv = control_amplitudes(s_, t);
  const double w = ch == Channel::Plus ? cv.omega_plus : cv.omega_minus;
  if (w == 0) fail(ErrorCode::ChannelOff, ch == Channel::Plus ? "Omega+ = 0" : "Omega- = 0");
  const double g_ratio = ch == Channel::Plus ? 1.0 : m_.r_g;
  const double phi = ch == Channel::Plus ? cv.phi_plus : cv.phi_minus;
  return psi_envelope(ch, t, z) * (w / (g_ratio * std::sqrt(m_.gamma))) *
         std::polar(1.0, phi);
}

}  // namespace stlight
