#include "stlight/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stlight/error.hpp"
#include "stlight/quadrature.hpp"

namespace stlight {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

// Relative slack for evaluating a schedule exactly at its end point.
double span_slack(const ControlSchedule& s) {
  return 1e-12 * std::max(1.0, std::abs(s.t_finish()) + std::abs(s.t_begin()));
}

}  // namespace

MediumModel build_medium(const MediumParams& p) {
  require(std::isfinite(p.r_g) && p.r_g > 0, ErrorCode::NonPhysicalParameter,
          "r_g must be > 0 (got " + num(p.r_g) + ")");
  require(std::isfinite(p.gamma) && p.gamma > 0, ErrorCode::NonPhysicalParameter,
          "gamma must be > 0 (got " + num(p.gamma) + ")");
  require(std::isfinite(p.gamma2) && p.gamma2 >= 0, ErrorCode::NonPhysicalParameter,
          "gamma2 must be >= 0 (got " + num(p.gamma2) + ")");
  require(std::isfinite(p.u_g0) && p.u_g0 > 0 && p.u_g0 < 1, ErrorCode::NonPhysicalParameter,
          "u_g0 must satisfy 0 < u_g0 < 1 (got " + num(p.u_g0) + ")");
  require(std::isfinite(p.domain_length) && p.domain_length > 0,
          ErrorCode::NonPhysicalParameter, "domain_length must be > 0");
  require(p.grid_points >= 16, ErrorCode::NonPhysicalParameter, "grid_points must be >= 16");

  MediumModel m;
  m.r_g = p.r_g;
  m.gamma = p.gamma;
  m.gamma2 = p.gamma2;
  m.u_g0 = p.u_g0;
  m.domain_length = p.domain_length;
  m.grid_points = p.grid_points;
  m.xi_plus = 1.0;
  m.xi_minus = p.r_g * p.r_g;
  m.omega_plus0 = std::sqrt(p.u_g0 * p.gamma);
  return m;
}

void validate_pulse(const PulseSpec& p) {
  require(std::isfinite(p.duration) && p.duration > 0, ErrorCode::NonPhysicalParameter,
          "pulse duration must be > 0");
  require(std::isfinite(p.amplitude), ErrorCode::NonPhysicalParameter,
          "pulse amplitude must be finite");
  require(std::isfinite(p.t_inj), ErrorCode::NonPhysicalParameter,
          "pulse injection time must be finite");
}

void validate_schedule(const ControlSchedule& s) {
  require(!s.segments.empty(), ErrorCode::ValidationError, "schedule has no segments");
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    const std::string tag = "segment " + std::to_string(i) + ": ";
    require(seg.omega_plus >= 0 && seg.omega_minus >= 0, ErrorCode::ValidationError,
            tag + "control targets must be >= 0");
    require(seg.t_end > seg.t_start, ErrorCode::ValidationError, tag + "t_end must exceed t_start");
    require(seg.ramp > 0, ErrorCode::ValidationError, tag + "ramp duration must be > 0");
    require(seg.ramp <= seg.t_end - seg.t_start, ErrorCode::ValidationError,
            tag + "ramp longer than segment");
    if (i > 0) {
      require(seg.t_start == s.segments[i - 1].t_end, ErrorCode::ValidationError,
              tag + "segments must be contiguous");
    }
  }
}

std::vector<double> breakpoints(const ControlSchedule& s) {
  std::vector<double> b;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    b.push_back(seg.t_start);
    if (i > 0) b.push_back(seg.t_start + seg.ramp);
    b.push_back(seg.t_end);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

ControlValues control_amplitudes(const ControlSchedule& s, double t) {
  const double slack = span_slack(s);
  if (!(t >= s.t_begin() - slack && t <= s.t_finish() + slack)) {
    fail(ErrorCode::OutOfScheduleRange,
         "t = " + num(t) + " outside [" + num(s.t_begin()) + ", " + num(s.t_finish()) + "]");
  }
  // Last segment whose start is <= t.
  std::size_t i = 0;
  while (i + 1 < s.segments.size() && s.segments[i + 1].t_start <= t) ++i;
  const auto& seg = s.segments[i];
  double wp = seg.omega_plus, wm = seg.omega_minus;
  if (i > 0 && t < seg.t_start + seg.ramp) {
    const auto& prev = s.segments[i - 1];
    const double x = smoothstep((t - seg.t_start) / seg.ramp);
    wp = prev.omega_plus + (seg.omega_plus - prev.omega_plus) * x;
    wm = prev.omega_minus + (seg.omega_minus - prev.omega_minus) * x;
  }
  return {wp, wm, s.phi_plus, s.phi_minus};
}

bool controls_constant(const ControlSchedule& s, double t0, double t1) {
  for (std::size_t i = 1; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    const auto& prev = s.segments[i - 1];
    const bool changes = seg.omega_plus != prev.omega_plus || seg.omega_minus != prev.omega_minus;
    if (changes && seg.t_start < t1 && seg.t_start + seg.ramp > t0) return false;
  }
  return true;
}

double tau_rate(const MediumModel& m, double omega_plus, double omega_minus) {
  return (m.gamma * m.gamma2 + omega_plus * omega_plus + omega_minus * omega_minus) / m.gamma;
}

Coefficients coefficients(const MediumModel& m, double omega_plus, double omega_minus) {
  const double wp2 = omega_plus * omega_plus;
  const double wm2 = omega_minus * omega_minus;
  const double sum2 = wp2 + wm2;
  const double gg2 = m.gamma * m.gamma2;
  const double denom = gg2 + sum2;
  if (!(denom > 0)) {
    fail(ErrorCode::DegenerateCoefficients, "Omega_Sigma^2 + gamma*gamma2 = 0");
  }
  Coefficients c{};
  c.alpha_plus = wp2 / denom;
  c.alpha_minus = wm2 / denom;
  c.eta = sum2 > 0 ? denom / sum2 : std::numeric_limits<double>::infinity();
  c.alpha_tilde = c.alpha_plus - m.r_g * m.r_g * c.alpha_minus;
  c.gamma2_prime = gg2 / denom;
  c.omega_sigma_sq = sum2;
  c.tau_rate = denom / m.gamma;
  return c;
}

Coefficients coefficients_at(const MediumModel& m, const ControlSchedule& s, double t) {
  const auto cv = control_amplitudes(s, t);
  return coefficients(m, cv.omega_plus, cv.omega_minus);
}

double tau_between(const MediumModel& m, const ControlSchedule& s, double t0, double t1,
                   double tol) {
  if (t1 == t0) return 0.0;
  if (controls_constant(s, std::min(t0, t1), std::max(t0, t1))) {
    const auto cv = control_amplitudes(s, t0);
    return tau_rate(m, cv.omega_plus, cv.omega_minus) * (t1 - t0);
  }
  const auto bp = breakpoints(s);
  return integrate_panels(
      [&](double t) {
        const auto cv = control_amplitudes(s, t);
        return tau_rate(m, cv.omega_plus, cv.omega_minus);
      },
      t0, t1, bp, tol);
}

double tau_of_t(const MediumModel& m, const ControlSchedule& s, double t, double tol) {
  control_amplitudes(s, t);  // range check
  return tau_between(m, s, s.t_begin(), t, tol);
}

double group_velocity(const MediumModel& m, double omega_plus, double omega_minus) {
  const double wp2 = omega_plus * omega_plus;
  const double wm2 = omega_minus * omega_minus;
  const double sum2 = wp2 + wm2;
  if (sum2 == 0) return 0.0;
  const double eta = (sum2 + m.gamma * m.gamma2) / sum2;
  return eta * eta * (wp2 - wm2 / (m.r_g * m.r_g)) / m.gamma;
}

double stationarity_residual(const MediumModel& m, double omega_plus, double omega_minus) {
  const double a = omega_plus;
  const double b = omega_minus / m.r_g;
  if (a + b == 0) fail(ErrorCode::DegenerateCoefficients, "both controls are zero");
  return (a - b) / (a + b);
}

double storage_threshold(const MediumModel& m, double storage_floor) {
  return std::max(10.0 * m.gamma * m.gamma2, storage_floor * m.omega_plus0 * m.omega_plus0);
}

std::vector<ValidityCheck> validity_report(const MediumModel& m, const PulseSpec& p,
                                           const ControlSchedule& s, double storage_floor) {
  std::vector<ValidityCheck> out;

  const double opacity = m.xi_plus * pulse_length(m, p);
  out.push_back({"opacity", opacity >= 10.0, true, opacity / 10.0,
                 "xi+ l_o = " + num(opacity) + " (need >= 10)"});

  // Worst ratio of gamma * Omega_Sigma^2 (larger ramp end) to the peak ramp rate of
  // Omega_Sigma^2; sampled along each smoothstep.
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.segments.size(); ++i) {
    const auto& a = s.segments[i - 1];
    const auto& b = s.segments[i];
    const double ref = std::max(a.omega_plus * a.omega_plus + a.omega_minus * a.omega_minus,
                                b.omega_plus * b.omega_plus + b.omega_minus * b.omega_minus);
    if (ref == 0) continue;
    double rate = 0.0;
    constexpr int kSamples = 256;
    for (int j = 0; j <= kSamples; ++j) {
      const double x = static_cast<double>(j) / kSamples;
      const double sx = smoothstep(x);
      const double ds = 6.0 * x * (1.0 - x) / b.ramp;
      const double wp = a.omega_plus + (b.omega_plus - a.omega_plus) * sx;
      const double wm = a.omega_minus + (b.omega_minus - a.omega_minus) * sx;
      const double d = 2.0 * wp * (b.omega_plus - a.omega_plus) * ds +
                       2.0 * wm * (b.omega_minus - a.omega_minus) * ds;
      rate = std::max(rate, std::abs(d));
    }
    if (rate > 0) worst = std::min(worst, m.gamma * ref / rate);
  }
  out.push_back({"adiabaticity", worst >= 10.0, true, worst,
                 std::isinf(worst) ? "no control ramps"
                                   : "min gamma*Omega_Sigma^2 / |d Omega_Sigma^2/dt| = " +
                                         num(worst) + " (need >= 10)"});

  const double thr = storage_threshold(m, storage_floor);
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    const double w2 = seg.omega_plus * seg.omega_plus + seg.omega_minus * seg.omega_minus;
    const bool pde = w2 >= thr / 1.2;
    const bool regime = w2 >= 10.0 * m.gamma * m.gamma2;
    std::string detail = pde ? (regime ? "PDE mode" : "PDE mode, Omega_Sigma^2 < 10 gamma gamma2")
                             : "storage mode";
    out.push_back({"pde_regime[" + std::to_string(i) + "]", pde ? regime : true, false,
                   thr > 0 ? w2 / thr : std::numeric_limits<double>::infinity(), detail});
  }

  out.push_back({"phase_matching", true, false, 0.0,
                 "omega21 fixed to 0; carrier phase terms are not modelled"});
  return out;
}

bool validity_ok(const std::vector<ValidityCheck>& report) {
  return std::all_of(report.begin(), report.end(),
                     [](const ValidityCheck& c) { return c.passed || !c.hard; });
}

}  // namespace stlight
