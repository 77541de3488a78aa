// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stlight/error.hpp"
#include "stlight/scenario.hpp"
#include "stlight/spectral.hpp"

using namespace stlight;

namespace {

const double kPi = std::acos(-1.0);

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", x);
  return b;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

RunResult run(const std::string& text) {
  auto r = execute(parse_config(text));
  if (r.summary["status"] != "ok") {
    fail(ErrorCode::ValidationError, "run failed: " + r.summary["errors"].dump());
  }
  return r;
}

double get(const nlohmann::json& j, const char* a, const char* b) { return j.at(a).at(b).get<double>(); }

const Snapshot& last_field(const Trajectory& tr) { return tr.snapshots.back(); }

const DiagnosticsRecord& record_at(const Trajectory& tr, double t) {
  for (const auto& r : tr.records) {
    if (std::abs(r.t - t) < 1e-6) return r;
  }
  fail(ErrorCode::WindowTooShort, "no record at t = " + std::to_string(t));
}

double l1(const Field& f, double dz) {
  double s = 0.0;
  for (const auto& v : f) s += std::abs(v);
  return s * dz;
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool same_outputs(const std::string& a, const std::string& b) {
  namespace fs = std::filesystem;
  std::vector<std::string> na, nb;
  for (const auto& e : fs::directory_iterator(a)) na.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) nb.push_back(e.path().filename().string());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb || na.empty()) return false;
  for (const auto& n : na) {
    if (read_all(fs::path(a) / n) != read_all(fs::path(b) / n)) return false;
  }
  return true;
}

const std::string kStationary =
    preset_config("stationary") + "numerics.snapshot_interval = 500\noutput.snapshot_every = 50\n";

// Canonical spin decay; the pulse is stopped late so that the decay-weighted
// envelope sits mid-domain.
const std::string kDecaying = R"(medium.gamma2 = 1e-4
numerics.t_end = 237000
schedule.segment = 0 226000 1 0
schedule.segment = 226000 237000 0.7071067811865476 0.7071067811865476 50
diagnostics.window_start = 227000
diagnostics.window_end = 237000
numerics.engine = direct
)";

// Shared by several criteria.
struct Shared {
  std::optional<RunResult> stationary;
  std::optional<RunResult> decaying;
  const RunResult& st() {
    if (!stationary) stationary = run(kStationary);
    return *stationary;
  }
  const RunResult& dec() {
    if (!decaying) decaying = run(kDecaying);
    return *decaying;
  }
} shared;

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run(preset_config("slow_light"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double v = get(r.summary, "velocity", "measured");
  o.check(rel(v, r.medium.u_g0) <= 0.01, "v/u_g0 = " + fmt(v / r.medium.u_g0));
  o.check(secs < 60.0, "runtime " + fmt(secs) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto& r = shared.dec();
  const double v = get(r.summary, "velocity", "measured");
  const double drift = get(r.summary, "velocity", "centroid_drift");
  const double l_o = pulse_length(r.medium, r.config.pulse);
  o.check(std::abs(v) <= 1e-5, "|v| = " + fmt(std::abs(v)));
  o.check(std::abs(drift) <= 0.01 * l_o, "drift over 1e4 = " + fmt(drift));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double ratios[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double s : ratios) {
    std::ostringstream cfg;
    cfg.precision(17);
    cfg << "medium.gamma2 = 0\nnumerics.t_end = 220000\nnumerics.engine = direct\n"
        << "schedule.segment = 0 200000 1 0\n"
        << "schedule.segment = 200000 220000 " << std::sqrt(s) << " " << std::sqrt(1 - s) << " 50\n"
        << "diagnostics.window_start = 202000\n";
    const auto r = run(cfg.str());
    const double vm = get(r.summary, "velocity", "measured");
    const double vp = get(r.summary, "velocity", "predicted");
    const bool ok = vp == 0.0 ? std::abs(vm) <= 1e-5 : rel(vm, vp) <= 0.03;
    o.check(ok, "s=" + fmt(s) + ": " + fmt(vm) + " vs " + fmt(vp));

    const auto c = coefficients(r.medium, std::sqrt(s) * r.medium.omega_plus0,
                                std::sqrt(1 - s) * r.medium.omega_plus0);
    const double vs = spectral_group_velocity(r.medium, c);
    const double err = vp == 0.0 ? std::abs(vs) / r.medium.u_g0 : rel(vs, vp);
    o.check(err <= 1e-6, "spectral dw/dk err " + fmt(err));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  for (double r_g : {0.5, 1.0, 2.0, 4.0}) {
    for (double g2 : {0.0, 1e-4}) {
      MediumParams p;
      p.r_g = r_g;
      p.gamma2 = g2;
      const auto m = build_medium(p);
      for (double s : {0.1, 0.5, 0.9}) {
        const auto c = coefficients(m, std::sqrt(s) * m.omega_plus0, std::sqrt(1 - s) * r_g * m.omega_plus0);
        for (int j = -20; j <= 20; ++j) {
          const double k = 0.2 * m.xi_minus * j / 20.0;
          if (k == 0) continue;
          const double d = std::abs(dispersion_omega(m, c, k) - omega_from_determinant(m, c, k));
          worst = std::max(worst, d / (std::abs(k * k * k) / (m.xi_minus * m.xi_minus)));
        }
      }
    }
  }
  o.check(worst <= 1.0, "max |dw| / (|k|^3/xi-^2) = " + fmt(worst));

  // Negative control: the as-printed index ordering mispredicts the measured velocity at r_g = 2.
  const auto r = run(R"(medium.r_g = 2
medium.gamma2 = 0
medium.grid_points = 6401
numerics.t_end = 220000
numerics.engine = direct
schedule.segment = 0 200000 1 0
schedule.segment = 200000 220000 0.894427190999916 0.894427190999916 50
diagnostics.window_start = 202000
)");
  const double vm = get(r.summary, "velocity", "measured");
  const auto cv = control_amplitudes(r.schedule, 210000.0);
  const auto c = coefficients(r.medium, cv.omega_plus, cv.omega_minus);
  const double v_rec = spectral_group_velocity(r.medium, c, Ordering::Reconciled);
  const double v_asp = spectral_group_velocity(r.medium, c, Ordering::AsPrinted);
  o.check(rel(vm, v_rec) <= 0.03, "r_g=2 reconciled " + fmt(v_rec) + " vs measured " + fmt(vm));
  o.check(rel(vm, v_asp) > 0.03, "as-printed " + fmt(v_asp) + " rejected");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto& st = shared.st();
  const double rate = get(st.summary, "width", "measured_b2_rate");
  const double v_g = st.medium.u_g0;  // 2 Omega+^2 / gamma at the balanced point
  o.check(rel(rate, 2.0 * v_g / st.medium.xi_plus) <= 0.05, "r_g=1 rate/(2 v_g) = " + fmt(rate / (2 * v_g)));

  // Strong backward coupling: limit v_g / xi+.
  const auto r4 = run(R"(medium.r_g = 4
medium.gamma2 = 0
medium.domain_length = 100
medium.grid_points = 12801
pulse.duration = 10000
pulse.t_inj = 50000
numerics.t_end = 111000
numerics.dt_safety = 0.5
numerics.engine = direct
schedule.segment = 0 100000 1 0
schedule.segment = 100000 111000 0.7071067811865476 2.8284271247461903 50
diagnostics.window_start = 101000
diagnostics.window_end = 111000
diagnostics.probe_z = 50
)");
  const double rate4 = get(r4.summary, "width", "measured_b2_rate");
  const double lim3 = spreading_case_rate(r4.medium, SpreadingCase::StrongMinus, v_g);
  o.check(rel(rate4, lim3) <= 0.10, "r_g=4 rate/limit = " + fmt(rate4 / lim3));

  // Weak backward coupling: limit v_g / xi-. The pulse is wide compared with 1/xi-.
  const auto r025 = run(R"(medium.r_g = 0.25
medium.gamma2 = 0
medium.domain_length = 800
medium.grid_points = 6401
pulse.duration = 80000
pulse.t_inj = 400000
numerics.t_end = 811000
numerics.engine = direct
schedule.segment = 0 800000 1 0
schedule.segment = 800000 811000 0.7071067811865476 0.1767766952966369 50
diagnostics.window_start = 801000
diagnostics.window_end = 811000
diagnostics.probe_z = 400
)");
  const double rate025 = get(r025.summary, "width", "measured_b2_rate");
  const double lim1 = spreading_case_rate(r025.medium, SpreadingCase::WeakMinus, v_g);
  o.check(rel(rate025, lim1) <= 0.10, "r_g=0.25 rate/limit = " + fmt(rate025 / lim1));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto& st = shared.st();
  const double t_a = 201000.0;
  const auto& a = record_at(st.primary, t_a);
  const double l_o = std::sqrt(2.0) * a.plus.width;
  const auto cv = control_amplitudes(st.schedule, t_a);
  const double v_g = 2.0 * cv.omega_plus * cv.omega_plus / st.medium.gamma;
  for (double ts : {0.0, 2.5e3, 5e3, 1e4}) {
    const auto& b = record_at(st.primary, t_a + ts);
    const double measured = a.plus.width / b.plus.width;
    const double predicted = 1.0 / std::sqrt(1.0 + v_g / st.medium.xi_sigma() * ts / (l_o * l_o));
    o.check(rel(measured, predicted) <= 0.05, "t_s=" + fmt(ts) + ": " + fmt(measured) + " vs " + fmt(predicted));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto& r = shared.dec();
  const auto c = coefficients_at(r.medium, r.schedule, 230000.0);
  const double rate = c.eta * r.medium.gamma2;
  const double t_a = 227000.0;
  double base = 0.0, worst = 0.0, span = 0.0;
  for (const auto& s : r.primary.snapshots) {
    if (s.t < t_a - 1e-9 || s.psi_plus.empty()) continue;
    // Spreading preserves the envelope integral of |psi|; only the decay changes it.
    const double a = l1(s.psi_plus, r.primary.dz);
    if (base == 0.0) base = a;
    worst = std::max(worst, rel(a / base, std::exp(-rate * (s.t - t_a))));
    span = s.t - t_a;
  }
  o.check(span * rate >= 1.0, "window = " + fmt(span * rate) + " e-folds");
  o.check(worst <= 0.02, "max rel. err vs exp(-eta gamma2 t) = " + fmt(worst));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto r = run(R"(medium.gamma2 = 0
medium.domain_length = 400
medium.grid_points = 8192
pulse.duration = 40000
pulse.t_inj = 200000
numerics.t_end = 405000
numerics.engine = direct
schedule.segment = 0 400000 1 0
schedule.segment = 400000 405000 0.7071067811865476 0.7071067811865476 50
diagnostics.probe_z = 200
)");
  const auto& rec = r.primary.records.back();
  const double xw = r.medium.xi_sigma() * std::sqrt(2.0) * rec.plus.width;
  o.check(xw >= 20.0, "xi_Sigma B = " + fmt(xw));
  o.check(rec.copy_error <= 0.1, "copy error " + fmt(rec.copy_error));

  const auto& st = shared.st();
  const auto& s = last_field(st.primary);
  const Field rebuilt = convolve_kernel(st.medium, Channel::Minus, s.psi_plus, st.primary.dz);
  const double e = relative_l2(rebuilt, s.psi_minus);
  o.check(e <= 0.02, "kernel psi- vs integrated " + fmt(e));
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto lossless = run(preset_config("stop_and_store") + "medium.gamma2 = 0\n");
  const double l2 = get(lossless.summary, "storage", "envelope_l2");
  o.check(l2 <= 0.03, "envelope L2 " + fmt(l2));
  const auto lossy = run(preset_config("stop_and_store"));
  const double ratio = get(lossy.summary, "storage", "amplitude_ratio");
  const double t_store = get(lossy.summary, "storage", "store_time");
  const double expected = std::exp(-lossy.medium.gamma2 * t_store);
  o.check(rel(ratio, expected) <= 0.02, "amplitude " + fmt(ratio) + " vs " + fmt(expected));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto tr = run(R"(medium.gamma2 = 0
numerics.t_end = 220000
schedule.segment = 0 220000 1 0
diagnostics.window_start = 205000
diagnostics.window_end = 220000
diagnostics.probe_z = 100
perturber.m_atoms = 100
perturber.z_a = 40
perturber.delta_l_a = 20
perturber.sigma_a_over_s = 1
perturber.gamma_a = 0.01
perturber.detuning = 1
)");
  const auto phase = relative_phase(tr.primary, *tr.reference, 100.0);
  const auto c = coefficients_at(tr.medium, tr.schedule, 220000.0);
  const double phi_t = phase_shift_traveling(tr.medium, c, *tr.config.perturber);
  o.check(rel(phase.back().phase, phi_t) <= 0.02, "step " + fmt(phase.back().phase) + " vs " + fmt(phi_t));

  const auto pg = run(preset_config("phase_gate"));
  const auto& p = pg.summary.at("perturber");
  const double slope = p.at("phase_slope").get<double>();
  const double chi = p.at("chi_s").get<double>();
  const double r2 = p.at("phase_fit_r2").get<double>();
  o.check(rel(slope, chi) <= 0.02, "slope/chi_s = " + fmt(slope / chi));
  o.check(r2 >= 0.999, "R^2 = " + fmt(r2));
  const double t_pi = p.at("t_pi").get<double>();
  const double held = p.at("phase_final_t").get<double>() - pg.config.perturber->t_on;
  const double final_phase = p.at("phase_final").get<double>();
  o.check(std::abs(held - t_pi) <= 1e-6 * t_pi && rel(final_phase, kPi) <= 0.02,
          "phase at t_pi = " + fmt(final_phase));
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto& st = shared.st();
  const double l2 = st.summary.at("cross_engine_l2").get<double>();
  o.check(l2 <= 0.02, "spectral vs direct " + fmt(l2));
  const double coarse = get(st.summary, "oracle", "max_envelope");
  const auto fine = run(kStationary + "medium.grid_points = 8191\nnumerics.dt_max = 25\n");
  const double fine_err = get(fine.summary, "oracle", "max_envelope");
  o.check(coarse / fine_err >= 1.8, "refinement gain " + fmt(coarse / fine_err));
  return o;
}

Outcome criterion12() {
  Outcome o;
  const auto& st = shared.st();
  double ref = 0.0, worst = 0.0;
  for (const auto& rec : st.primary.records) {
    if (rec.t < 201000.0) continue;
    if (ref == 0.0) ref = std::abs(rec.polariton_sum);
    worst = std::max(worst, std::abs(std::abs(rec.polariton_sum) / ref - 1.0));
  }
  o.check(ref > 0 && worst <= 0.005, "max drift " + fmt(worst));
  return o;
}

Outcome criterion13() {
  Outcome o;
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "stlight_acceptance";
  fs::remove_all(base);
  const auto& st = shared.st();
  write_outputs(st, (base / "a").string(), st.config.output.snapshot_every);
  const auto again = run(kStationary);
  write_outputs(again, (base / "b").string(), again.config.output.snapshot_every);
  o.check(same_outputs((base / "a").string(), (base / "b").string()), "byte-identical outputs");
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"slow-light velocity", criterion1},
      {"stationary condition", criterion2},
      {"group-velocity formula", criterion3},
      {"dispersion reconciliation", criterion4},
      {"spreading law", criterion5},
      {"conversion probability", criterion6},
      {"decay law", criterion7},
      {"slaving / copy", criterion8},
      {"storage round trip", criterion9},
      {"perturber phases", criterion10},
      {"cross-engine agreement", criterion11},
      {"conservation", criterion12},
      {"determinism", criterion13},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %-26s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
