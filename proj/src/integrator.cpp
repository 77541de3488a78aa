#include "stlight/integrator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "stlight/error.hpp"

namespace stlight {

void validate_numerics(const Numerics& n) {
  if (!(n.dt_safety > 0)) fail(ErrorCode::ValidationError, "dt_safety must be > 0");
  if (n.dt_safety > 0.5) {
    fail(ErrorCode::CFLViolation, "dt_safety " + std::to_string(n.dt_safety) + " exceeds 0.5");
  }
  if (!(n.dt_max > 0)) fail(ErrorCode::ValidationError, "dt_max must be > 0");
  if (!(n.storage_floor > 0)) fail(ErrorCode::ValidationError, "storage_floor must be > 0");
  if (!(n.guard_fraction > 0 && n.guard_fraction < 0.5)) {
    fail(ErrorCode::ValidationError, "guard_fraction must lie in (0, 0.5)");
  }
  if (!(n.guard_tolerance > 0)) fail(ErrorCode::ValidationError, "guard_tolerance must be > 0");
}

FieldState init_state(const MediumModel& m, const PulseSpec& p, const ControlSchedule& s) {
  const double dz = m.dz();
  const double limit_xi = std::min(1.0 / m.xi_plus, 1.0 / m.xi_minus) / 8.0;
  const double limit_pulse = pulse_length(m, p) / 32.0;
  if (dz > limit_xi * (1 + 1e-9) || dz > limit_pulse * (1 + 1e-9)) {
    fail(ErrorCode::GridTooCoarse, "dz = " + std::to_string(dz) + " exceeds min(" +
                                       std::to_string(limit_xi) + ", " +
                                       std::to_string(limit_pulse) + ")");
  }
  FieldState st;
  st.dz = dz;
  st.psi_plus.assign(m.grid_points, 0.0);
  st.psi_minus.assign(m.grid_points, 0.0);
  st.polariton.assign(m.grid_points, 0.0);
  st.t = s.t_begin();
  st.tau = 0.0;
  st.mode = Mode::PDE;
  return st;
}

// Banded LU of the interleaved (psi+_i, psi-_i) system. Each psi+ row couples to
// the previous node (upwind in +z), each psi- row to the next node (upwind in -z).
struct DirectIntegrator::Solver {
  static constexpr int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
  int n;
  int dim;
  std::vector<double> ab;
  std::vector<lapack_int> ipiv;
  std::vector<double> rhs;
  std::array<double, 5> key;

  explicit Solver(int points)
      : n(points), dim(2 * points), ab(static_cast<std::size_t>(ldab) * 2 * points),
        ipiv(2 * points), rhs(4 * static_cast<std::size_t>(points)) {
    key.fill(std::numeric_limits<double>::quiet_NaN());
  }

  void set(int i, int j, double v) { ab[(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab] = v; }

  void factor(double a, double b, double g, double q, double dtau, double h) {
    const std::array<double, 5> k{a, b, g, dtau, h};
    if (k == key) return;
    std::fill(ab.begin(), ab.end(), 0.0);
    // Rows are scaled by h.
    set(0, 0, 1.0);
    for (int i = 1; i < n; ++i) {
      const int r = 2 * i;
      set(r, r, 1.0 + h * (b + g + a / dtau));
      set(r, r + 1, h * (b / dtau - b));
      set(r, r - 2, -1.0);
    }
    for (int i = 0; i + 1 < n; ++i) {
      const int r = 2 * i + 1;
      set(r, r + 2, 1.0);
      set(r, r, -1.0 - h * q * (a + g + b / dtau));
      set(r, r - 1, h * q * (a - a / dtau));
    }
    set(dim - 1, dim - 1, 1.0);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, dim, dim, kl, ku, ab.data(), ldab,
                                           ipiv.data());
    if (info != 0) {
      key.fill(std::numeric_limits<double>::quiet_NaN());
      fail(ErrorCode::LinearSolveFailure, "banded LU failed, info = " + std::to_string(info));
    }
    key = k;
  }

  void solve() {
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', dim, kl, ku, 2, ab.data(), ldab,
                                           ipiv.data(), rhs.data(), dim);
    if (info != 0) {
      fail(ErrorCode::LinearSolveFailure, "banded solve failed, info = " + std::to_string(info));
    }
  }
};

DirectIntegrator::DirectIntegrator(const MediumModel& m, const ControlSchedule& s,
                                   const PulseSpec& p, const Numerics& n,
                                   std::optional<PerturberSpec> perturber)
    : m_(m), s_(s), p_(p), n_(n), pert_(std::move(perturber)) {
  validate_schedule(s_);
  validate_pulse(p_);
  validate_numerics(n_);
  state_ = init_state(m_, p_, s_);
  breaks_ = breakpoints(s_);
  thr_ = storage_threshold(m_, n_.storage_floor);
  if (pert_) {
    validate_perturber(*pert_);
    density_ = perturber_density(*pert_, m_.grid_points, state_.dz);
  }
  // At most one crossing of each threshold level per ramp.
  for (std::size_t i = 1; i < s_.segments.size(); ++i) {
    const auto& seg = s_.segments[i];
    for (double level : {thr_ / 1.2, thr_}) {
      int crossings = 0;
      constexpr int kSamples = 1024;
      bool prev = omega_sigma_sq(seg.t_start) >= level;
      for (int j = 1; j <= kSamples; ++j) {
        const bool cur = omega_sigma_sq(seg.t_start + seg.ramp * j / kSamples) >= level;
        if (cur != prev) ++crossings;
        prev = cur;
      }
      if (crossings > 1) {
        fail(ErrorCode::ThresholdChatter,
             "ramp of segment " + std::to_string(i) + " crosses the storage threshold " +
                 std::to_string(crossings) + " times");
      }
    }
  }
  if (omega_sigma_sq(state_.t) < thr_ / 1.2) {
    state_.mode = Mode::Storage;
    state_.spin_coherence.assign(m_.grid_points, 0.0);
  }
  solver_ = std::make_unique<Solver>(m_.grid_points);
}

DirectIntegrator::~DirectIntegrator() = default;

double DirectIntegrator::omega_sigma_sq(double t) const {
  const auto cv = control_amplitudes(s_, t);
  return cv.omega_plus * cv.omega_plus + cv.omega_minus * cv.omega_minus;
}

double DirectIntegrator::source(double t) const {
  const auto cv = control_amplitudes(s_, t);
  if (cv.omega_plus <= 1e-12 * m_.omega_plus0) return 0.0;
  const double x = (t - p_.t_inj) / p_.duration;
  return std::sqrt(m_.gamma) * p_.amplitude * std::exp(-0.5 * x * x) / cv.omega_plus;
}

double DirectIntegrator::suggest_dt() const {
  const double t = state_.t;
  double dt = n_.dt_max;
  for (std::size_t i = 1; i < s_.segments.size(); ++i) {
    const auto& seg = s_.segments[i];
    if (t >= seg.t_start && t < seg.t_start + seg.ramp) dt = std::min(dt, seg.ramp / 32.0);
  }
  for (double b : breaks_) {
    if (b > t) {
      dt = std::min(dt, b - t);
      break;
    }
  }
  if (std::abs(t - p_.t_inj) < 8.0 * p_.duration) dt = std::min(dt, p_.duration / 50.0);
  if (state_.mode == Mode::PDE) {
    for (int it = 0; it < 2; ++it) {
      const double te = std::min(t + dt, s_.t_finish());
      const auto c0 = control_amplitudes(s_, t);
      const auto c1 = control_amplitudes(s_, te);
      const double v = std::max(std::abs(group_velocity(m_, c0.omega_plus, c0.omega_minus)),
                                std::abs(group_velocity(m_, c1.omega_plus, c1.omega_minus)));
      if (v > 0) dt = std::min(dt, n_.dt_safety * state_.dz / v);
    }
  }
  return dt;
}

bool DirectIntegrator::stationary_at(double t) const {
  const auto cv = control_amplitudes(s_, t);
  if (cv.omega_plus <= 0 || cv.omega_minus <= 0) return false;
  if (!controls_constant(s_, t, t)) return false;
  return std::abs(stationarity_residual(m_, cv.omega_plus, cv.omega_minus)) < 1e-6;
}

void DirectIntegrator::check_guard() {
  if (!stationary_at(state_.t)) return;
  const double f = guard_energy_fraction(state_.psi_plus, state_.psi_minus, n_.guard_fraction);
  if (f > n_.guard_tolerance) {
    fail(ErrorCode::GuardBandBreach, "energy fraction " + std::to_string(f) +
                                         " in the guard zone at t = " + std::to_string(state_.t));
  }
}

void DirectIntegrator::pde_step(double t1) {
  const double t0 = state_.t;
  const auto cv = control_amplitudes(s_, t1);
  const auto c = coefficients(m_, cv.omega_plus, cv.omega_minus);
  const double dtau = tau_between(m_, s_, t0, t1);
  if (!(dtau > 0)) fail(ErrorCode::DegenerateCoefficients, "tau does not advance over the step");

  if (pert_ && pert_->active(0.5 * (t0 + t1))) {
    apply_perturber(state_.polariton, density_, *pert_, dtau);
  }

  const double h = state_.dz;
  const double q = m_.xi_minus / m_.xi_plus;
  auto& sv = *solver_;
  sv.factor(c.alpha_plus, c.alpha_minus, c.gamma2_prime, q, dtau, h);

  const int n = m_.grid_points;
  double* re = sv.rhs.data();
  double* im = re + sv.dim;
  const double src = source(t1);
  re[0] = src;
  im[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    const cplx v = h * state_.polariton[i] / dtau;
    re[2 * i] = v.real();
    im[2 * i] = v.imag();
  }
  for (int i = 0; i + 1 < n; ++i) {
    const cplx v = -h * q * state_.polariton[i] / dtau;
    re[2 * i + 1] = v.real();
    im[2 * i + 1] = v.imag();
  }
  re[sv.dim - 1] = 0.0;
  im[sv.dim - 1] = 0.0;
  sv.solve();

  for (int i = 0; i < n; ++i) {
    state_.psi_plus[i] = {re[2 * i], im[2 * i]};
    state_.psi_minus[i] = {re[2 * i + 1], im[2 * i + 1]};
    state_.polariton[i] = c.alpha_plus * state_.psi_plus[i] + c.alpha_minus * state_.psi_minus[i];
  }
  state_.t = t1;
  state_.tau += dtau;
  ++steps_;
  check_guard();
}

void DirectIntegrator::enter_storage() {
  state_.spin_coherence = state_.polariton;
  std::fill(state_.psi_plus.begin(), state_.psi_plus.end(), 0.0);
  std::fill(state_.psi_minus.begin(), state_.psi_minus.end(), 0.0);
  state_.mode = Mode::Storage;
}

void DirectIntegrator::leave_storage() {
  state_.polariton = state_.spin_coherence;
  state_.spin_coherence.clear();
  state_.mode = Mode::PDE;
}

double DirectIntegrator::find_crossing(double t0, double t1, double level) const {
  // Returns the end of the bracket on which Omega_Sigma^2 >= level.
  const bool lo_above = omega_sigma_sq(t0) >= level;
  double lo = t0, hi = t1;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((omega_sigma_sq(mid) >= level) == lo_above) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo_above ? lo : hi;
}

void DirectIntegrator::step(double dt) {
  if (!(dt > 0)) fail(ErrorCode::ValidationError, "step size must be > 0");
  const double t0 = state_.t;
  const double t1 = t0 + dt;
  if (state_.mode == Mode::Storage) {
    const double decay = std::exp(-m_.gamma2 * dt);
    for (auto& v : state_.spin_coherence) v *= decay;
    state_.polariton = state_.spin_coherence;
    state_.tau += tau_between(m_, s_, t0, t1);
    state_.t = t1;
    ++steps_;
    return;
  }
  const auto c0 = control_amplitudes(s_, t0);
  const auto c1 = control_amplitudes(s_, t1);
  const double v = std::max(std::abs(group_velocity(m_, c0.omega_plus, c0.omega_minus)),
                            std::abs(group_velocity(m_, c1.omega_plus, c1.omega_minus)));
  if (v > 0 && dt > 0.5 * state_.dz / v * (1 + 1e-9)) {
    fail(ErrorCode::CFLViolation, "dt = " + std::to_string(dt) + " exceeds 0.5 dz/|v| = " +
                                      std::to_string(0.5 * state_.dz / v));
  }
  pde_step(t1);
}

void DirectIntegrator::advance_to(double target) {
  const double eps = 1e-12 * std::max(1.0, std::abs(target));
  while (state_.t < target - eps) {
    const double t = state_.t;
    double t1 = t + suggest_dt();
    if (t1 > target - eps) t1 = target;
    if (state_.mode == Mode::PDE) {
      if (omega_sigma_sq(t1) < thr_ / 1.2) {
        const double tc = find_crossing(t, t1, thr_ / 1.2);
        if (tc > t + eps) pde_step(tc);
        enter_storage();
        continue;
      }
      pde_step(t1);
    } else {
      if (omega_sigma_sq(t1) >= thr_) {
        const double tc = find_crossing(t, t1, thr_);
        if (tc > t) step(tc - t);
        leave_storage();
        continue;
      }
      step(t1 - t);
    }
  }
}

Snapshot DirectIntegrator::snapshot() const {
  Snapshot s;
  s.t = state_.t;
  s.tau = state_.tau;
  s.mode = state_.mode;
  s.psi_plus = state_.psi_plus;
  s.psi_minus = state_.psi_minus;
  s.polariton = state_.polariton;
  return s;
}

Trajectory run_scenario(const Scenario& sc) {
  DirectIntegrator integ(sc.medium, sc.schedule, sc.pulse, sc.numerics, sc.perturber);
  if (!(sc.snapshot_interval > 0)) fail(ErrorCode::ValidationError, "snapshot_interval must be > 0");
  if (!(sc.t_end > sc.schedule.t_begin() && sc.t_end <= sc.schedule.t_finish())) {
    fail(ErrorCode::OutOfScheduleRange, "t_end outside the schedule");
  }
  Trajectory tr;
  tr.dz = integ.state().dz;
  auto record = [&] {
    Snapshot s = integ.snapshot();
    const auto cv = control_amplitudes(sc.schedule, s.t);
    tr.records.push_back(make_record(s, tr.dz, sc.medium, cv.omega_plus, cv.omega_minus,
                                     sc.probe_z, sc.numerics.guard_fraction));
    if (!sc.keep_fields) {
      s.psi_plus.clear();
      s.psi_minus.clear();
      s.polariton.clear();
    }
    tr.snapshots.push_back(std::move(s));
  };
  const double t0 = sc.schedule.t_begin();
  record();
  for (long k = 1;; ++k) {
    const double next = std::min(t0 + k * sc.snapshot_interval, sc.t_end);
    integ.advance_to(next);
    record();
    if (next >= sc.t_end) break;
  }
  return tr;
}

}  // namespace stlight
