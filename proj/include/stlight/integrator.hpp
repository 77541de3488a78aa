#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stlight/diagnostics.hpp"
#include "stlight/medium.hpp"
#include "stlight/perturber.hpp"

namespace stlight {

struct Numerics {
  double dt_safety = 0.25;  // fraction of dz/|v| per step; at most 0.5
  double dt_max = 50.0;
  double storage_floor = 1e-2;  // storage threshold floor, in units of Omega+(0)^2
  double guard_fraction = 0.05;
  double guard_tolerance = 1e-4;

  friend bool operator==(const Numerics&, const Numerics&) = default;
};

void validate_numerics(const Numerics& n);

struct FieldState {
  double dz = 0.0;
  Field psi_plus;
  Field psi_minus;
  Field polariton;       // alpha+ psi+ + alpha- psi- (the evolved quantity)
  Field spin_coherence;  // populated only in storage mode
  double t = 0.0;
  double tau = 0.0;
  Mode mode = Mode::PDE;

  double z(int i) const { return i * dz; }
};

/// Empty medium at the schedule start. Raises GridTooCoarse if dz exceeds
/// min(1/xi+, 1/xi-)/8 or l_o/32.
FieldState init_state(const MediumModel& m, const PulseSpec& p, const ControlSchedule& s);

/// Implicit upwind integrator for the two-channel transport equations with
/// storage and release.
class DirectIntegrator {
 public:
  DirectIntegrator(const MediumModel& m, const ControlSchedule& s, const PulseSpec& p,
                   const Numerics& n = {}, std::optional<PerturberSpec> perturber = std::nullopt);
  ~DirectIntegrator();
  DirectIntegrator(const DirectIntegrator&) = delete;
  DirectIntegrator& operator=(const DirectIntegrator&) = delete;

  const FieldState& state() const { return state_; }
  const MediumModel& medium() const { return m_; }
  const ControlSchedule& schedule() const { return s_; }

  /// One step of length dt in the current mode. No mode transition is taken.
  void step(double dt);

  /// Steps to t, handling storage entry/exit, breakpoints and the step-size limits.
  void advance_to(double t);

  /// Step size chosen by advance_to from the current time.
  double suggest_dt() const;

  /// Injected forward field psi+(t, z = 0).
  double source(double t) const;

  Snapshot snapshot() const;

  long steps_taken() const { return steps_; }

 private:
  struct Solver;
  void pde_step(double t1);
  void enter_storage();
  void leave_storage();
  double omega_sigma_sq(double t) const;
  double find_crossing(double t0, double t1, double level) const;
  void check_guard();
  bool stationary_at(double t) const;

  MediumModel m_;
  ControlSchedule s_;
  PulseSpec p_;
  Numerics n_;
  std::optional<PerturberSpec> pert_;
  Density density_;
  FieldState state_;
  std::vector<double> breaks_;
  double thr_;
  long steps_ = 0;
  std::unique_ptr<Solver> solver_;
};

struct Scenario {
  MediumModel medium;
  ControlSchedule schedule;
  PulseSpec pulse;
  std::optional<PerturberSpec> perturber;
  Numerics numerics;
  double t_end = 0.0;
  double snapshot_interval = 1000.0;
  double probe_z = 100.0;
  bool keep_fields = true;
};

/// Runs the direct integrator from the schedule start to t_end, recording a
/// snapshot every snapshot_interval (and at t_end).
Trajectory run_scenario(const Scenario& sc);

}  // namespace stlight
