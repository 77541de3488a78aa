#pragma once

// Unit scheme: c = 1, forward absorption coefficient xi_plus = 1. Lengths are in
// forward absorption lengths L0, times in T0 = L0/c, so N g+^2 = gamma and the
// single-control group velocity is Omega+^2 / gamma.

#include <string>
#include <vector>

namespace stlight {

struct MediumParams {
  double r_g = 1.0;     // g- / g+
  double gamma = 1.0;   // optical decay
  double gamma2 = 0.0;  // spin decay
  double u_g0 = 1e-3;   // initial slow-light velocity (fraction of c)
  double domain_length = 200.0;
  int grid_points = 4096;

  friend bool operator==(const MediumParams&, const MediumParams&) = default;
};

struct MediumModel {
  double r_g = 1.0;
  double gamma = 1.0;
  double gamma2 = 0.0;
  double u_g0 = 1e-3;
  double domain_length = 200.0;
  int grid_points = 4096;

  double xi_plus = 1.0;
  double xi_minus = 1.0;
  double omega_plus0 = 0.0;

  double dz() const { return domain_length / (grid_points - 1); }
  /// 1/xi_Sigma = 1/xi+ + 1/xi-.
  double xi_sigma() const { return xi_plus * xi_minus / (xi_plus + xi_minus); }
};

MediumModel build_medium(const MediumParams& p);

struct PulseSpec {
  double amplitude = 1.0;
  double duration = 2e4;  // T
  double t_inj = 1e5;     // centre of the injected Gaussian at z = 0

  friend bool operator==(const PulseSpec&, const PulseSpec&) = default;
};

/// Initial spatial size l_o = v_g(0) T.
inline double pulse_length(const MediumModel& m, const PulseSpec& p) { return m.u_g0 * p.duration; }

void validate_pulse(const PulseSpec& p);

/// One schedule segment. Within [t_start, t_start + ramp] the amplitudes move
/// from the previous segment's targets to this segment's targets along a
/// smoothstep; the first segment starts at its targets.
struct ControlSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double ramp = 50.0;

  friend bool operator==(const ControlSegment&, const ControlSegment&) = default;
};

struct ControlSchedule {
  std::vector<ControlSegment> segments;
  double phi_plus = 0.0;
  double phi_minus = 0.0;

  double t_begin() const { return segments.front().t_start; }
  double t_finish() const { return segments.back().t_end; }

  friend bool operator==(const ControlSchedule&, const ControlSchedule&) = default;
};

void validate_schedule(const ControlSchedule& s);

/// Segment boundaries and ramp ends, sorted and deduplicated.
std::vector<double> breakpoints(const ControlSchedule& s);

struct ControlValues {
  double omega_plus;
  double omega_minus;
  double phi_plus;
  double phi_minus;
};

ControlValues control_amplitudes(const ControlSchedule& s, double t);

/// True if the controls are constant on [t0, t1].
bool controls_constant(const ControlSchedule& s, double t0, double t1);

double smoothstep(double x);

struct Coefficients {
  double alpha_plus;
  double alpha_minus;
  double eta;
  double alpha_tilde;
  double gamma2_prime;
  double omega_sigma_sq;
  double tau_rate;
};

Coefficients coefficients(const MediumModel& m, double omega_plus, double omega_minus);
Coefficients coefficients_at(const MediumModel& m, const ControlSchedule& s, double t);

double tau_rate(const MediumModel& m, double omega_plus, double omega_minus);

/// tau(t) measured from the schedule start.
double tau_of_t(const MediumModel& m, const ControlSchedule& s, double t, double tol = 1e-10);
double tau_between(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                   double tol = 1e-10);

/// Closed-form two-colour group velocity in units of c; positive means +z.
double group_velocity(const MediumModel& m, double omega_plus, double omega_minus);

/// (Omega+/g+ - Omega-/g-) / (Omega+/g+ + Omega-/g-).
double stationarity_residual(const MediumModel& m, double omega_plus, double omega_minus);

/// Omega_Sigma^2 below which the field is held as spin coherence.
double storage_threshold(const MediumModel& m, double storage_floor = 1e-2);

struct ValidityCheck {
  std::string name;
  bool passed;
  bool hard;  // a failed hard check aborts a run
  double margin;
  std::string detail;
};

std::vector<ValidityCheck> validity_report(const MediumModel& m, const PulseSpec& p,
                                           const ControlSchedule& s, double storage_floor = 1e-2);

bool validity_ok(const std::vector<ValidityCheck>& report);

}  // namespace stlight
