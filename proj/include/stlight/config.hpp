#pragma once

#include <optional>
#include <string>

#include "stlight/integrator.hpp"
#include "stlight/medium.hpp"
#include "stlight/perturber.hpp"

namespace stlight {

enum class Engine { Auto, Direct, Spectral, Both };

std::string to_string(Engine e);

struct DiagnosticsConfig {
  double probe_z = 100.0;
  double window_start = -1.0;  // < 0: start of the last segment plus its ramp
  double window_end = -1.0;    // < 0: t_end
  double oracle_start = -1.0;  // < 0: window_start
  bool reference_run = true;   // paired unperturbed run when a perturber is present

  friend bool operator==(const DiagnosticsConfig&, const DiagnosticsConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  int snapshot_every = 1;
  bool write_snapshots = true;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

/// Effective configuration. Control amplitudes in `schedule` are in units of Omega+(0).
struct RunConfig {
  MediumParams medium;
  PulseSpec pulse;
  ControlSchedule schedule;
  std::optional<PerturberSpec> perturber;
  Numerics numerics;
  double t_end = 2e5;
  double snapshot_interval = 1000.0;
  Engine engine = Engine::Auto;
  DiagnosticsConfig diagnostics;
  OutputConfig output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses `section.key = value` lines ('#' starts a comment). Raises ParseError
/// (with line number) on malformed lines and ValidationError on unknown keys or
/// invalid values.
RunConfig parse_config(const std::string& text);

/// Every effective value in the same format; parse_config(echo(c)) == c.
std::string echo_config(const RunConfig& c);

/// Schedule with absolute control amplitudes.
ControlSchedule absolute_schedule(const RunConfig& c, const MediumModel& m);

}  // namespace stlight
