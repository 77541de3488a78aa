#pragma once

#include <complex>
#include <vector>

#include "stlight/oracle.hpp"

namespace stlight {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

enum class Mode { PDE, Storage };

struct Moments {
  double energy;    // weight * sum |f|^2 dz
  double centroid;  // first moment of |f|^2
  double width;     // rms width of |f|^2
  double peak;      // sqrt(weight) * max |f|, parabolic refinement
  double peak_z;
};

/// Moments of weight*|f|^2 on the grid z_i = i dz. Raises EmptyField if the energy is < 1e-30.
Moments moments(const Field& f, double dz, double weight = 1.0);

/// Gaussian-amplitude estimate sum|f| dz / (B sqrt(2 pi)) with B = sqrt(2) * rms width.
double gaussian_amplitude(const Field& f, double dz);

struct ChannelStats {
  double energy = 0.0;  // sum |A|^2 dz
  double centroid = 0.0;
  double width = 0.0;  // rms width of |psi|^2
  double peak = 0.0;   // max |psi|
  double peak_z = 0.0;
  double amplitude = 0.0;  // gaussian_amplitude of psi
  double norm = 0.0;       // L2 norm of psi
};

struct DiagnosticsRecord {
  double t = 0.0;
  double tau = 0.0;
  Mode mode = Mode::PDE;
  ChannelStats plus;
  ChannelStats minus;
  double probe_z = 0.0;
  cplx probe{};             // psi+ at probe_z (linear interpolation)
  cplx polariton_sum{};     // integral of alpha+ psi+ + alpha- psi- dz (or stored coherence)
  double copy_error = 0.0;  // ||psi- - psi+|| / ||psi+||
  double guard_fraction = 0.0;
};

struct Snapshot {
  double t = 0.0;
  double tau = 0.0;
  Mode mode = Mode::PDE;
  Field psi_plus;
  Field psi_minus;
  Field polariton;
};

struct Trajectory {
  double dz = 0.0;
  std::vector<Snapshot> snapshots;  // fields may be omitted for long runs
  std::vector<DiagnosticsRecord> records;
};

/// Linear interpolation of a grid field at z.
cplx sample(const Field& f, double dz, double z);

/// Fraction of |psi+|^2 + |psi-|^2 within the outer `fraction` of the grid on each side.
double guard_energy_fraction(const Field& plus, const Field& minus, double fraction);

/// Record for one snapshot; the control amplitudes convert psi to field energy.
DiagnosticsRecord make_record(const Snapshot& s, double dz, const MediumModel& m,
                              double omega_plus, double omega_minus,
                              double probe_z, double guard_fraction_width = 0.05);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rms_residual = 0.0;
  int count = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of the forward-channel centroid over records with t in [t0, t1].
/// Raises WindowTooShort with fewer than 5 records.
LinearFit measured_group_velocity(const Trajectory& tr, double t0, double t1);

struct PhasePoint {
  double t;
  double phase;
};

/// Unwrapped arg(psi+(probe)) of `run` relative to `reference` (paired records).
/// Raises PhaseUnwrapAmbiguity if consecutive samples jump by more than pi/2.
std::vector<PhasePoint> relative_phase(const Trajectory& run, const Trajectory& reference);

/// As above at an arbitrary z using stored snapshot fields.
std::vector<PhasePoint> relative_phase(const Trajectory& run, const Trajectory& reference,
                                       double z_probe);

struct OracleError {
  double t;
  double envelope;  // relative L2 of |psi+| against the closed form
  double width;     // relative error of sqrt(2) * rms against B
  double decay;     // relative error of the Gaussian amplitude
};

struct OracleReport {
  std::vector<OracleError> per_snapshot;
  double max_envelope = 0.0;
  double max_width = 0.0;
  double max_decay = 0.0;
};

/// Compares stored forward-channel fields with t >= t_from against the oracle.
OracleReport compare_to_oracle(const Trajectory& tr, const GaussianOracle& oracle, double t_from);

/// Relative L2 distance ||a - b|| / ||b||.
double relative_l2(const Field& a, const Field& b);

}  // namespace stlight
