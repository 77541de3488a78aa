#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlight/config.hpp"
#include "stlight/diagnostics.hpp"

namespace stlight {

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

/// Config text of a shipped preset; ValidationError for unknown names.
std::string preset_config(const std::string& name);

struct RunResult {
  RunConfig config;
  MediumModel medium;
  ControlSchedule schedule;  // absolute amplitudes
  Engine engine = Engine::Direct;
  double spectral_start = 0.0;
  Trajectory primary;                  // what the outputs are written from
  std::optional<Trajectory> direct;    // full direct run when engine = both
  std::optional<Trajectory> spectral;  // spectral segment when engine = spectral | both
  std::optional<Trajectory> reference; // unperturbed paired run
  std::vector<ValidityCheck> validity;
  nlohmann::json summary;
};

/// Validity report only (the --check path). Raises ValidationError on hard failures.
std::vector<ValidityCheck> check_config(const RunConfig& cfg);

/// Runs the configured engines and assembles the summary.
RunResult execute(const RunConfig& cfg);

/// Writes snap_NNNNN.tsv (every `snapshot_every`-th snapshot), trajectory.tsv and summary.json.
void write_outputs(const RunResult& r, const std::string& dir, int snapshot_every);

/// 12 significant digits.
std::string format_number(double x);

}  // namespace stlight
