#include "stlight/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "stlight/error.hpp"

namespace stlight {

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Direct: return "direct";
    case Engine::Spectral: return "spectral";
    case Engine::Both: return "both";
  }
  return "auto";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

struct Parser {
  int line = 0;

  [[noreturn]] void parse_error(const std::string& what) const {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
  }

  double number(const std::string& v) const {
    double x = 0.0;
    const char* b = v.data();
    const char* e = b + v.size();
    if (!v.empty() && *b == '+') ++b;
    auto res = std::from_chars(b, e, x);
    if (res.ec != std::errc() || res.ptr != e) parse_error("expected a number, got '" + v + "'");
    return x;
  }

  int integer(const std::string& v) const {
    int x = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      parse_error("expected an integer, got '" + v + "'");
    }
    return x;
  }

  bool boolean(const std::string& v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    parse_error("expected true/false, got '" + v + "'");
  }
};

PerturberSpec& perturber(RunConfig& c) {
  if (!c.perturber) c.perturber = PerturberSpec{};
  return *c.perturber;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  Parser ps;
  bool have_segments = false;

  using Setter = std::function<void(const std::string&)>;
  auto num = [&](double& field) -> Setter {
    return [&ps, f = &field](const std::string& v) { *f = ps.number(v); };
  };
  auto pnum = [&](double PerturberSpec::*field) -> Setter {
    return [&, field](const std::string& v) { perturber(c).*field = ps.number(v); };
  };

  std::map<std::string, Setter> keys{
      {"medium.r_g", num(c.medium.r_g)},
      {"medium.gamma", num(c.medium.gamma)},
      {"medium.gamma2", num(c.medium.gamma2)},
      {"medium.u_g0", num(c.medium.u_g0)},
      {"medium.domain_length", num(c.medium.domain_length)},
      {"medium.grid_points", [&](const std::string& v) { c.medium.grid_points = ps.integer(v); }},
      {"pulse.amplitude", num(c.pulse.amplitude)},
      {"pulse.duration", num(c.pulse.duration)},
      {"pulse.t_inj", num(c.pulse.t_inj)},
      {"schedule.phi_plus", num(c.schedule.phi_plus)},
      {"schedule.phi_minus", num(c.schedule.phi_minus)},
      {"schedule.segment",
       [&](const std::string& v) {
         std::istringstream is(v);
         std::vector<std::string> tok;
         for (std::string t; is >> t;) tok.push_back(t);
         if (tok.size() != 4 && tok.size() != 5) {
           ps.parse_error("segment needs 't_start t_end omega_plus omega_minus [ramp]'");
         }
         ControlSegment seg;
         seg.t_start = ps.number(tok[0]);
         seg.t_end = ps.number(tok[1]);
         seg.omega_plus = ps.number(tok[2]);
         seg.omega_minus = ps.number(tok[3]);
         if (tok.size() == 5) seg.ramp = ps.number(tok[4]);
         if (!have_segments) c.schedule.segments.clear();
         have_segments = true;
         c.schedule.segments.push_back(seg);
       }},
      {"perturber.m_atoms", pnum(&PerturberSpec::m_atoms)},
      {"perturber.z_a", pnum(&PerturberSpec::z_a)},
      {"perturber.delta_l_a", pnum(&PerturberSpec::delta_l_a)},
      {"perturber.sigma_a_over_s", pnum(&PerturberSpec::sigma_a_over_s)},
      {"perturber.gamma_a", pnum(&PerturberSpec::gamma_a)},
      {"perturber.detuning", pnum(&PerturberSpec::detuning)},
      {"perturber.t_on", pnum(&PerturberSpec::t_on)},
      {"perturber.t_off", pnum(&PerturberSpec::t_off)},
      {"numerics.dt_safety", num(c.numerics.dt_safety)},
      {"numerics.dt_max", num(c.numerics.dt_max)},
      {"numerics.storage_floor", num(c.numerics.storage_floor)},
      {"numerics.guard_fraction", num(c.numerics.guard_fraction)},
      {"numerics.guard_tolerance", num(c.numerics.guard_tolerance)},
      {"numerics.t_end", num(c.t_end)},
      {"numerics.snapshot_interval", num(c.snapshot_interval)},
      {"numerics.engine",
       [&](const std::string& v) {
         if (v == "auto") c.engine = Engine::Auto;
         else if (v == "direct") c.engine = Engine::Direct;
         else if (v == "spectral") c.engine = Engine::Spectral;
         else if (v == "both") c.engine = Engine::Both;
         else fail(ErrorCode::ValidationError, "line " + std::to_string(ps.line) +
                                                   ": engine must be auto|direct|spectral|both");
       }},
      {"diagnostics.probe_z", num(c.diagnostics.probe_z)},
      {"diagnostics.window_start", num(c.diagnostics.window_start)},
      {"diagnostics.window_end", num(c.diagnostics.window_end)},
      {"diagnostics.oracle_start", num(c.diagnostics.oracle_start)},
      {"diagnostics.reference_run",
       [&](const std::string& v) { c.diagnostics.reference_run = ps.boolean(v); }},
      {"output.dir", [&](const std::string& v) { c.output.dir = v; }},
      {"output.snapshot_every",
       [&](const std::string& v) { c.output.snapshot_every = ps.integer(v); }},
      {"output.write_snapshots",
       [&](const std::string& v) { c.output.write_snapshots = ps.boolean(v); }},
  };

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++ps.line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) ps.parse_error("expected 'section.key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.find('.') == std::string::npos) ps.parse_error("key '" + key + "' has no section");
    if (value.empty()) ps.parse_error("empty value for '" + key + "'");
    if (key.size() >= 7 && key.substr(key.size() - 7) == "omega21") {
      fail(ErrorCode::ValidationError,
           "line " + std::to_string(ps.line) + ": '" + key +
               "' is not supported; the carrier splitting is fixed to 0");
    }
    const auto it = keys.find(key);
    if (it == keys.end()) {
      fail(ErrorCode::ValidationError, "line " + std::to_string(ps.line) + ": unknown key '" + key + "'");
    }
    it->second(value);
  }

  if (!have_segments) c.schedule.segments = {ControlSegment{0.0, c.t_end, 1.0, 0.0, 50.0}};

  // Validation, reported uniformly as ValidationError.
  try {
    build_medium(c.medium);
    validate_pulse(c.pulse);
    validate_schedule(c.schedule);
    if (c.perturber) validate_perturber(*c.perturber);
    validate_numerics(c.numerics);
  } catch (const Error& e) {
    fail(ErrorCode::ValidationError, e.what());
  }
  if (!(c.t_end > c.schedule.t_begin() && c.t_end <= c.schedule.t_finish())) {
    fail(ErrorCode::ValidationError, "numerics.t_end must lie within the schedule");
  }
  if (!(c.snapshot_interval > 0)) fail(ErrorCode::ValidationError, "snapshot_interval must be > 0");
  if (c.output.snapshot_every < 1) fail(ErrorCode::ValidationError, "snapshot_every must be >= 1");
  return c;
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  kv("medium.r_g", fmt(c.medium.r_g));
  kv("medium.gamma", fmt(c.medium.gamma));
  kv("medium.gamma2", fmt(c.medium.gamma2));
  kv("medium.u_g0", fmt(c.medium.u_g0));
  kv("medium.domain_length", fmt(c.medium.domain_length));
  kv("medium.grid_points", std::to_string(c.medium.grid_points));
  kv("pulse.amplitude", fmt(c.pulse.amplitude));
  kv("pulse.duration", fmt(c.pulse.duration));
  kv("pulse.t_inj", fmt(c.pulse.t_inj));
  kv("schedule.phi_plus", fmt(c.schedule.phi_plus));
  kv("schedule.phi_minus", fmt(c.schedule.phi_minus));
  for (const auto& s : c.schedule.segments) {
    kv("schedule.segment", fmt(s.t_start) + " " + fmt(s.t_end) + " " + fmt(s.omega_plus) + " " +
                               fmt(s.omega_minus) + " " + fmt(s.ramp));
  }
  if (c.perturber) {
    const auto& p = *c.perturber;
    kv("perturber.m_atoms", fmt(p.m_atoms));
    kv("perturber.z_a", fmt(p.z_a));
    kv("perturber.delta_l_a", fmt(p.delta_l_a));
    kv("perturber.sigma_a_over_s", fmt(p.sigma_a_over_s));
    kv("perturber.gamma_a", fmt(p.gamma_a));
    kv("perturber.detuning", fmt(p.detuning));
    kv("perturber.t_on", fmt(p.t_on));
    kv("perturber.t_off", fmt(p.t_off));
  }
  kv("numerics.dt_safety", fmt(c.numerics.dt_safety));
  kv("numerics.dt_max", fmt(c.numerics.dt_max));
  kv("numerics.storage_floor", fmt(c.numerics.storage_floor));
  kv("numerics.guard_fraction", fmt(c.numerics.guard_fraction));
  kv("numerics.guard_tolerance", fmt(c.numerics.guard_tolerance));
  kv("numerics.t_end", fmt(c.t_end));
  kv("numerics.snapshot_interval", fmt(c.snapshot_interval));
  kv("numerics.engine", to_string(c.engine));
  kv("diagnostics.probe_z", fmt(c.diagnostics.probe_z));
  kv("diagnostics.window_start", fmt(c.diagnostics.window_start));
  kv("diagnostics.window_end", fmt(c.diagnostics.window_end));
  kv("diagnostics.oracle_start", fmt(c.diagnostics.oracle_start));
  kv("diagnostics.reference_run", c.diagnostics.reference_run ? "true" : "false");
  kv("output.dir", c.output.dir);
  kv("output.snapshot_every", std::to_string(c.output.snapshot_every));
  kv("output.write_snapshots", c.output.write_snapshots ? "true" : "false");
  return os.str();
}

ControlSchedule absolute_schedule(const RunConfig& c, const MediumModel& m) {
  ControlSchedule s = c.schedule;
  for (auto& seg : s.segments) {
    seg.omega_plus *= m.omega_plus0;
    seg.omega_minus *= m.omega_plus0;
  }
  return s;
}

}  // namespace stlight
