#include "stlight/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "stlight/error.hpp"
#include "stlight/integrator.hpp"
#include "stlight/oracle.hpp"
#include "stlight/perturber.hpp"
#include "stlight/spectral.hpp"

namespace stlight {

using nlohmann::json;

namespace {

struct Preset {
  const char* name;
  const char* description;
  const char* text;
};

// Control amplitudes are in units of Omega+(0); times in T0, lengths in L0.
const Preset kPresets[] = {
    {"slow_light", "single control: the pulse drifts at u_g0 without spreading",
     R"(medium.gamma2 = 0
numerics.t_end = 240000
schedule.segment = 0 240000 1 0
diagnostics.window_start = 205000
diagnostics.window_end = 240000
diagnostics.probe_z = 150
)"},
    {"stop_and_store", "controls off for 5e4 T0: the pulse is held as spin coherence and released",
     R"(medium.gamma2 = 1e-5
numerics.t_end = 270000
numerics.snapshot_interval = 1000
schedule.segment = 0 200000 1 0
schedule.segment = 200000 250000 0 0 50
schedule.segment = 250000 270000 1 0 50
diagnostics.window_start = 251000
diagnostics.window_end = 270000
)"},
    {"stationary", "balanced two-colour controls: stationary light that spreads diffusively",
     R"(medium.gamma2 = 0
numerics.t_end = 212000
schedule.segment = 0 200000 1 0
schedule.segment = 200000 212000 0.7071067811865476 0.7071067811865476 50
diagnostics.window_start = 201000
diagnostics.window_end = 211000
)"},
    {"push_pull", "stationary hold, then imbalanced controls push the pulse forward and back",
     R"(medium.gamma2 = 0
numerics.t_end = 250000
schedule.segment = 0 200000 1 0
schedule.segment = 200000 210000 0.7071067811865476 0.7071067811865476 50
schedule.segment = 210000 230000 0.8660254037844386 0.5 50
schedule.segment = 230000 250000 0.5 0.8660254037844386 50
diagnostics.window_start = 231000
diagnostics.window_end = 250000
)"},
    {"conversion", "stationary hold of 1e4 T0, then release into the backward channel",
     R"(medium.gamma2 = 0
numerics.t_end = 250000
schedule.segment = 0 200000 1 0
schedule.segment = 200000 210000 0.7071067811865476 0.7071067811865476 50
schedule.segment = 210000 250000 0 1 50
diagnostics.window_start = 200050
diagnostics.window_end = 210000
)"},
    {"phase_gate", "stationary pulse under an off-resonant perturber held for t_pi",
     R"(medium.gamma2 = 0
numerics.t_end = 201150
numerics.snapshot_interval = 50
schedule.segment = 0 200000 1 0
schedule.segment = 200000 201150 0.7071067811865476 0.7071067811865476 50
perturber.m_atoms = 2000
perturber.z_a = 101.04
perturber.delta_l_a = 40
perturber.sigma_a_over_s = 6.283185307179586
perturber.gamma_a = 0.01
perturber.detuning = 1
perturber.t_on = 200150
diagnostics.probe_z = 101.04
diagnostics.window_start = 200150
diagnostics.window_end = 201150
output.snapshot_every = 100
)"},
};

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

struct Window {
  double start;
  double end;
};

Window analysis_window(const RunConfig& c) {
  const auto& last = c.schedule.segments.back();
  double ws = c.diagnostics.window_start;
  if (ws < 0) ws = c.schedule.segments.size() > 1 ? last.t_start + last.ramp : c.schedule.t_begin();
  double we = c.diagnostics.window_end < 0 ? c.t_end : c.diagnostics.window_end;
  return {ws, std::min(we, c.t_end)};
}

Engine resolve_engine(const RunConfig& c) {
  if (c.engine != Engine::Auto) return c.engine;
  const auto& last = c.schedule.segments.back();
  const bool two_colour = last.omega_plus > 0 && last.omega_minus > 0;
  return two_colour && !c.perturber && c.schedule.segments.size() > 1 ? Engine::Both : Engine::Direct;
}

// Fields are kept for written snapshots, the analysis window and the final time.
bool keep_fields(long index, double t, int every, const Window& w, double t_end) {
  return index % every == 0 || t >= t_end || (t >= w.start - 1e-9 && t <= w.end + 1e-9);
}

// Drives the direct integrator over the snapshot grid, optionally stopping at a
// handoff time where the forward field is passed to the spectral engine.
struct Runner {
  const MediumModel& m;
  const ControlSchedule& s;
  const RunConfig& c;
  std::optional<PerturberSpec> perturber;
  int keep_every;
  Window window;

  Trajectory tr;
  std::string error;

  void record(const Snapshot& snap, long index) {
    const auto cv = control_amplitudes(s, snap.t);
    tr.records.push_back(make_record(snap, tr.dz, m, cv.omega_plus, cv.omega_minus,
                                     c.diagnostics.probe_z, c.numerics.guard_fraction));
    Snapshot kept = snap;
    if (!keep_fields(index, snap.t, keep_every, window, c.t_end)) {
      kept.psi_plus.clear();
      kept.psi_minus.clear();
      kept.polariton.clear();
    }
    tr.snapshots.push_back(std::move(kept));
  }

  // Runs to t_end (or to `capture` when `stop_at_capture`), returning the state at `capture`.
  std::optional<FieldState> run(double capture, bool stop_at_capture) {
    std::optional<FieldState> handoff;
    try {
      DirectIntegrator integ(m, s, c.pulse, c.numerics, perturber);
      tr.dz = integ.state().dz;
      const double t0 = s.t_begin();
      record(integ.snapshot(), 0);
      for (long k = 1;; ++k) {
        const double next = std::min(t0 + k * c.snapshot_interval, c.t_end);
        if (!handoff && capture <= next) {
          integ.advance_to(capture);
          handoff = integ.state();
          if (stop_at_capture) break;
        }
        integ.advance_to(next);
        record(integ.snapshot(), k);
        if (next >= c.t_end) break;
      }
    } catch (const Error& e) {
      error = e.what();
    }
    return handoff;
  }
};

Trajectory run_spectral(const MediumModel& m, const ControlSchedule& s, const RunConfig& c,
                        const FieldState& start, int keep_every, std::string& error) {
  Trajectory tr;
  tr.dz = start.dz;
  try {
    SpectralPropagator prop(m, start.psi_plus, start.dz);
    double t = start.t;
    const double t0 = s.t_begin();
    auto emit = [&](long index) {
      Snapshot snap;
      snap.t = t;
      snap.tau = start.tau + prop.tau();
      snap.mode = Mode::PDE;
      snap.psi_plus = prop.psi_plus();
      snap.psi_minus = prop.reconstruct_minus();
      const auto co = coefficients_at(m, s, t);
      snap.polariton.resize(snap.psi_plus.size());
      for (std::size_t i = 0; i < snap.polariton.size(); ++i) {
        snap.polariton[i] = co.alpha_plus * snap.psi_plus[i] + co.alpha_minus * snap.psi_minus[i];
      }
      const auto cv = control_amplitudes(s, t);
      tr.records.push_back(make_record(snap, tr.dz, m, cv.omega_plus, cv.omega_minus,
                                       c.diagnostics.probe_z, c.numerics.guard_fraction));
      if (!keep_fields(index, t, keep_every, analysis_window(c), c.t_end)) {
        snap.psi_plus.clear();
        snap.psi_minus.clear();
        snap.polariton.clear();
      }
      tr.snapshots.push_back(std::move(snap));
    };
    const long k0 = static_cast<long>(std::ceil((t - t0) / c.snapshot_interval - 1e-9));
    emit(k0);
    for (long k = k0;; ++k) {
      const double next = std::min(t0 + k * c.snapshot_interval, c.t_end);
      if (next <= t) continue;
      prop.propagate(s, t, next);
      t = next;
      emit(k);
      if (next >= c.t_end) break;
    }
  } catch (const Error& e) {
    error = e.what();
  }
  return tr;
}

const Snapshot* snapshot_near(const Trajectory& tr, double t, bool after) {
  const Snapshot* best = nullptr;
  for (const auto& s : tr.snapshots) {
    if (s.psi_plus.empty()) continue;
    if (after ? s.t >= t - 1e-9 : s.t <= t + 1e-9) {
      if (!best || (after ? s.t < best->t : s.t > best->t)) best = &s;
    }
  }
  return best;
}

json validity_json(const std::vector<ValidityCheck>& v) {
  json out = json::array();
  for (const auto& c : v) {
    out.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"hard", c.hard},
                   {"margin", num(c.margin)},
                   {"detail", c.detail}});
  }
  return out;
}

json velocity_summary(const RunResult& r, const Window& w) {
  json out;
  try {
    const auto fit = measured_group_velocity(r.primary, w.start, w.end);
    const auto cv = control_amplitudes(r.schedule, 0.5 * (w.start + w.end));
    out["measured"] = num(fit.slope);
    out["fit_r2"] = num(fit.r2);
    out["fit_rms_residual"] = num(fit.rms_residual);
    out["fit_count"] = fit.count;
    out["predicted"] = num(group_velocity(r.medium, cv.omega_plus, cv.omega_minus));
    const double z0 = fit.intercept + fit.slope * w.start;
    const double z1 = fit.intercept + fit.slope * w.end;
    out["centroid_drift"] = num(z1 - z0);
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

json width_summary(const RunResult& r, const Window& w) {
  json out;
  std::vector<double> t, b2;
  for (const auto& rec : r.primary.records) {
    if (rec.t >= w.start && rec.t <= w.end && rec.plus.norm > 0 && rec.mode == Mode::PDE) {
      t.push_back(rec.t);
      b2.push_back(2.0 * rec.plus.width * rec.plus.width);
    }
  }
  if (t.size() < 5) {
    out["error"] = "fewer than 5 snapshots in the window";
    return out;
  }
  const auto fit = linear_fit(t, b2);
  const auto cv = control_amplitudes(r.schedule, 0.5 * (w.start + w.end));
  const auto co = coefficients(r.medium, cv.omega_plus, cv.omega_minus);
  // B^2 = 2 rms^2 for a Gaussian amplitude exp(-x^2 / (2 B^2)).
  out["measured_b2_rate"] = num(fit.slope);
  out["fit_r2"] = num(fit.r2);
  out["predicted_b2_rate"] = num(2.0 * spreading_rate_tau(co, r.medium) * co.tau_rate);
  out["predicted_b2_rate_lossless"] = num(spreading_rate(r.medium, cv.omega_plus, cv.omega_minus));
  out["b_start"] = num(std::sqrt(b2.front()));
  out["b_end"] = num(std::sqrt(b2.back()));
  return out;
}

json conversion_summary(const RunResult& r, const Window& w) {
  json out;
  const DiagnosticsRecord* a = nullptr;
  const DiagnosticsRecord* b = nullptr;
  for (const auto& rec : r.primary.records) {
    if (rec.plus.norm <= 0) continue;
    if (rec.t >= w.start - 1e-9 && !a) a = &rec;
    if (rec.t <= w.end + 1e-9) b = &rec;
  }
  const auto mid = control_amplitudes(r.schedule, 0.5 * (w.start + w.end));
  if (a && b && b->t > a->t && mid.omega_plus > 0 &&
      std::abs(stationarity_residual(r.medium, mid.omega_plus, mid.omega_minus)) < 1e-6) {
    const double b0 = std::sqrt(2.0) * a->plus.width;
    const double b1 = std::sqrt(2.0) * b->plus.width;
    const auto cv = control_amplitudes(r.schedule, 0.5 * (a->t + b->t));
    const double v_g = 2.0 * cv.omega_plus * cv.omega_plus / r.medium.gamma;
    out["hold_time"] = num(b->t - a->t);
    out["measured"] = num(b0 / b1);
    out["predicted"] = num(conversion_probability(r.medium, b0, v_g, b->t - a->t));
  }
  const auto& last = r.primary.records.back();
  const double total = last.plus.energy + last.minus.energy;
  out["minus_energy_fraction"] = num(total > 0 ? last.minus.energy / total : 0.0);
  return out;
}

json storage_summary(const RunResult& r) {
  const auto& segs = r.schedule.segments;
  for (std::size_t i = 1; i + 1 < segs.size(); ++i) {
    if (segs[i].omega_plus != 0 || segs[i].omega_minus != 0) continue;
    const auto* before = snapshot_near(r.primary, segs[i].t_start, false);
    const auto* after = snapshot_near(r.primary, segs[i + 1].t_start + segs[i + 1].ramp, true);
    if (!before || !after || after->mode != Mode::PDE) return nullptr;
    const double dz = r.primary.dz;
    const auto ma = moments(before->psi_plus, dz);
    const auto mb = moments(after->psi_plus, dz);
    const double ga = gaussian_amplitude(before->psi_plus, dz);
    const double gb = gaussian_amplitude(after->psi_plus, dz);
    // Align centroids and amplitudes before comparing shapes.
    const double shift = mb.centroid - ma.centroid;
    Field shifted(before->psi_plus.size()), recovered(after->psi_plus.size());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
      shifted[j] = std::abs(sample(before->psi_plus, dz, j * dz - shift)) * (gb / ga);
      recovered[j] = std::abs(after->psi_plus[j]);
    }
    json out;
    out["t_before"] = num(before->t);
    out["t_after"] = num(after->t);
    out["store_time"] = num(segs[i + 1].t_start - segs[i].t_start);
    out["envelope_l2"] = num(relative_l2(recovered, shifted));
    out["amplitude_ratio"] = num(gb / ga);
    out["predicted_ratio"] = num(decay_factor(r.medium, r.schedule, before->t, after->t,
                                              r.config.numerics.storage_floor));
    out["predicted_ratio_bare"] =
        num(std::exp(-r.medium.gamma2 * (segs[i + 1].t_start - segs[i].t_start)));
    return out;
  }
  return nullptr;
}

json perturber_summary(const RunResult& r, const Window& w) {
  json out;
  const auto& p = *r.config.perturber;
  const auto rate = phase_rate_stationary(r.medium, p);
  out["chi_s"] = num(rate.chi_s);
  out["t_pi"] = num(rate.t_pi);
  try {
    const auto co = coefficients_at(r.medium, r.schedule, std::max(p.t_on, r.schedule.t_begin()));
    out["phi_t"] = num(phase_shift_traveling(r.medium, co, p));
  } catch (const Error&) {
    out["phi_t"] = nullptr;
  }
  if (!r.reference) return out;
  // Keep samples where the reference probe carries the pulse.
  double amax = 0.0;
  for (const auto& rec : r.reference->records) amax = std::max(amax, std::abs(rec.probe));
  Trajectory run, ref;
  const std::size_t n = std::min(r.primary.records.size(), r.reference->records.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rr = r.reference->records[i];
    if (std::abs(rr.probe) < 1e-3 * amax || rr.t < p.t_on) continue;
    run.records.push_back(r.primary.records[i]);
    ref.records.push_back(rr);
  }
  try {
    const auto trace = relative_phase(run, ref);
    if (trace.empty()) return out;
    out["phase_final"] = num(trace.back().phase);
    out["phase_final_t"] = num(trace.back().t);
    std::vector<double> t, ph;
    for (const auto& pt : trace) {
      if (pt.t >= w.start && pt.t <= w.end) {
        t.push_back(pt.t);
        ph.push_back(pt.phase);
      }
    }
    if (t.size() >= 5) {
      const auto fit = linear_fit(t, ph);
      out["phase_slope"] = num(fit.slope);
      out["phase_fit_r2"] = num(fit.r2);
    }
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

json oracle_summary(const RunResult& r, const Window& w) {
  double t_from = r.config.diagnostics.oracle_start < 0 ? w.start : r.config.diagnostics.oracle_start;
  const auto* s0 = snapshot_near(r.primary, t_from, true);
  if (!s0 || s0->mode != Mode::PDE) return nullptr;
  json out;
  try {
    const double dz = r.primary.dz;
    const auto mo = moments(s0->psi_plus, dz);
    OracleOrigin o{s0->t, mo.centroid, std::sqrt(2.0) * mo.width, gaussian_amplitude(s0->psi_plus, dz)};
    GaussianOracle oracle(r.medium, r.schedule, o);
    Trajectory windowed;
    windowed.dz = dz;
    for (const auto& s : r.primary.snapshots) {
      if (s.t >= s0->t && s.t <= w.end + 1e-9) windowed.snapshots.push_back(s);
    }
    const auto rep = compare_to_oracle(windowed, oracle, s0->t);
    out["t_from"] = num(s0->t);
    out["max_envelope"] = num(rep.max_envelope);
    out["max_width"] = num(rep.max_width);
    out["max_decay"] = num(rep.max_decay);
    out["snapshots"] = rep.per_snapshot.size();
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

std::string preset_config(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.text;
  }
  fail(ErrorCode::ValidationError, "unknown preset '" + name + "'");
}

std::vector<ValidityCheck> check_config(const RunConfig& cfg) {
  const auto m = build_medium(cfg.medium);
  const auto s = absolute_schedule(cfg, m);
  auto report = validity_report(m, cfg.pulse, s, cfg.numerics.storage_floor);
  if (!validity_ok(report)) {
    std::string failed;
    for (const auto& c : report) {
      if (c.hard && !c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    fail(ErrorCode::ValidationError, "hard validity check failed: " + failed);
  }
  init_state(m, cfg.pulse, s);
  return report;
}

RunResult execute(const RunConfig& cfg) {
  RunResult r;
  r.config = cfg;
  r.medium = build_medium(cfg.medium);
  r.schedule = absolute_schedule(cfg, r.medium);
  r.validity = check_config(cfg);
  r.engine = resolve_engine(cfg);
  if (r.engine != Engine::Direct) {
    if (cfg.perturber) fail(ErrorCode::ValidationError, "the spectral engine does not model a perturber");
    const auto& last = cfg.schedule.segments.back();
    if (!(last.omega_plus > 0 && last.omega_minus > 0)) {
      fail(ErrorCode::ValidationError, "the spectral engine needs both controls on in the last segment");
    }
    r.spectral_start = cfg.schedule.segments.size() > 1 ? last.t_start + last.ramp : cfg.schedule.t_begin();
    if (!(r.spectral_start < cfg.t_end)) {
      fail(ErrorCode::ValidationError, "the spectral engine has no time left after the last ramp");
    }
  }

  const int keep = cfg.output.snapshot_every;
  const Window w = analysis_window(cfg);
  std::vector<std::string> errors;
  auto note = [&](const std::string& who, const std::string& e) {
    if (!e.empty()) errors.push_back(who + ": " + e);
  };

  const bool spectral_only = r.engine == Engine::Spectral;
  const double capture = r.engine == Engine::Direct ? cfg.t_end + 1.0 : r.spectral_start;
  Runner direct{r.medium, r.schedule, cfg, cfg.perturber, keep, w, {}, {}};
  auto handoff = direct.run(capture, spectral_only);
  note("direct", direct.error);

  if (r.engine == Engine::Spectral || r.engine == Engine::Both) {
    if (handoff) {
      std::string err;
      r.spectral = run_spectral(r.medium, r.schedule, cfg, *handoff, keep, err);
      note("spectral", err);
    }
  }
  if (r.engine == Engine::Spectral) {
    r.primary = direct.tr;
    if (r.spectral) {
      for (std::size_t i = 0; i < r.spectral->snapshots.size(); ++i) {
        if (!r.primary.snapshots.empty() && r.spectral->snapshots[i].t <= r.primary.snapshots.back().t) {
          continue;
        }
        r.primary.snapshots.push_back(r.spectral->snapshots[i]);
        r.primary.records.push_back(r.spectral->records[i]);
      }
    }
  } else {
    r.primary = direct.tr;
    if (r.engine == Engine::Both) r.direct = direct.tr;
  }

  if (cfg.perturber && cfg.diagnostics.reference_run) {
    Runner ref{r.medium, r.schedule, cfg, std::nullopt, keep, w, {}, {}};
    ref.run(cfg.t_end + 1.0, false);
    note("reference", ref.error);
    r.reference = std::move(ref.tr);
  }

  json& s = r.summary;
  s["status"] = errors.empty() ? "ok" : "failed";
  s["errors"] = errors;
  s["engine"] = {{"requested", to_string(cfg.engine)}, {"selected", to_string(r.engine)}};
  if (r.engine != Engine::Direct) s["engine"]["spectral_start"] = num(r.spectral_start);
  s["window"] = {num(w.start), num(w.end)};
  s["units"] = {{"length", "L0 = 1/xi_plus"},
                {"time", "T0 = L0/c"},
                {"velocity", "c"},
                {"width", "B with |psi| ~ exp(-(z-z0)^2/(2 B^2)), B^2 = 2 rms^2"}};
  s["validity"] = validity_json(r.validity);
  s["config_echo"] = echo_config(cfg);
  if (!r.primary.records.empty()) {
    s["velocity"] = velocity_summary(r, w);
    s["width"] = width_summary(r, w);
    s["conversion"] = conversion_summary(r, w);
    s["storage"] = storage_summary(r);
    s["oracle"] = oracle_summary(r, w);
    s["copy_error_final"] = num(r.primary.records.back().copy_error);
    const auto& recs = r.primary.records;
    double p0 = std::abs(recs.front().polariton_sum);
    for (const auto& rec : recs) {
      if (rec.t >= w.start) {
        p0 = std::abs(rec.polariton_sum);
        break;
      }
    }
    s["polariton_sum"] = {{"window_start", num(p0)}, {"final", num(std::abs(recs.back().polariton_sum))}};
  }
  if (cfg.perturber) s["perturber"] = perturber_summary(r, w);
  if (r.spectral && r.direct && !r.spectral->snapshots.empty() && !r.direct->snapshots.empty()) {
    s["cross_engine_l2"] =
        num(relative_l2(r.spectral->snapshots.back().psi_plus, r.direct->snapshots.back().psi_plus));
  }
  return r;
}

void write_outputs(const RunResult& r, const std::string& dir, int snapshot_every) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  if (snapshot_every < 1) snapshot_every = 1;
  const auto& tr = r.primary;
  json files = json::array();
  const bool write_snaps = r.config.output.write_snapshots;
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto& s = tr.snapshots[k];
    const bool last = k + 1 == tr.snapshots.size();
    if (!write_snaps || s.psi_plus.empty() || (k % snapshot_every != 0 && !last)) continue;
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.tsv", k);
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    os << "# z[L0]\tre_psi_plus\tim_psi_plus\tre_psi_minus\tim_psi_minus\tabs_A_plus[A0]\tabs_A_minus[A0]\n";
    const auto cv = control_amplitudes(r.schedule, s.t);
    const double sg = std::sqrt(r.medium.gamma);
    for (std::size_t i = 0; i < s.psi_plus.size(); ++i) {
      const cplx pp = s.psi_plus[i];
      const cplx pm = s.psi_minus.empty() ? cplx{} : s.psi_minus[i];
      os << format_number(i * tr.dz) << '\t' << format_number(pp.real()) << '\t'
         << format_number(pp.imag()) << '\t' << format_number(pm.real()) << '\t'
         << format_number(pm.imag()) << '\t' << format_number(cv.omega_plus * std::abs(pp) / sg)
         << '\t' << format_number(cv.omega_minus * std::abs(pm) / (r.medium.r_g * sg)) << '\n';
    }
    files.push_back({{"file", name}, {"t", num(s.t)}, {"mode", s.mode == Mode::PDE ? "pde" : "storage"}});
  }

  std::ofstream ts(fs::path(dir) / "trajectory.tsv", std::ios::binary);
  ts << "# t[T0]\ttau\tmode\tenergy_plus\tcentroid_plus[L0]\twidth_plus[L0]\tpeak_plus\t"
        "peak_z_plus[L0]\tenergy_minus\tcentroid_minus[L0]\twidth_minus[L0]\tpeak_minus\t"
        "peak_z_minus[L0]\tre_probe\tim_probe\tre_polariton_sum\tim_polariton_sum\tcopy_error\t"
        "guard_fraction\n";
  for (const auto& rec : tr.records) {
    const double vals[] = {rec.plus.energy,  rec.plus.centroid,  rec.plus.width,  rec.plus.peak,
                           rec.plus.peak_z,  rec.minus.energy,   rec.minus.centroid,
                           rec.minus.width,  rec.minus.peak,     rec.minus.peak_z,
                           rec.probe.real(), rec.probe.imag(),   rec.polariton_sum.real(),
                           rec.polariton_sum.imag(), rec.copy_error, rec.guard_fraction};
    ts << format_number(rec.t) << '\t' << format_number(rec.tau) << '\t'
       << (rec.mode == Mode::PDE ? "pde" : "storage");
    for (double v : vals) ts << '\t' << format_number(v);
    ts << '\n';
  }

  json summary = r.summary;
  summary["snapshots"] = files;
  std::ofstream js(fs::path(dir) / "summary.json", std::ios::binary);
  js << summary.dump(2) << '\n';
}

}  // namespace stlight
