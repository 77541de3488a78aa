#include "stlight/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlight/error.hpp"

namespace stlight {

Moments moments(const Field& f, double dz, double weight) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t imax = 0;
  double amax = -1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double p = std::norm(f[i]);
    s0 += p;
    s1 += p * (i * dz);
    if (p > amax) {
      amax = p;
      imax = i;
    }
  }
  if (!(weight * s0 * dz >= 1e-30)) fail(ErrorCode::EmptyField, "field energy below 1e-30");
  const double mean = s1 / s0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = i * dz - mean;
    s2 += std::norm(f[i]) * d * d;
  }
  double peak = std::abs(f[imax]);
  double peak_z = imax * dz;
  if (imax > 0 && imax + 1 < f.size()) {
    const double ym = std::abs(f[imax - 1]), y0 = peak, yp = std::abs(f[imax + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0) {
      const double off = 0.5 * (ym - yp) / denom;
      peak = y0 - 0.25 * (ym - yp) * off;
      peak_z += off * dz;
    }
  }
  return {weight * s0 * dz, mean, std::sqrt(s2 / s0), std::sqrt(weight) * peak, peak_z};
}

double gaussian_amplitude(const Field& f, double dz) {
  const auto mo = moments(f, dz);
  double l1 = 0.0;
  for (const auto& v : f) l1 += std::abs(v);
  const double b = std::sqrt(2.0) * mo.width;
  return l1 * dz / (b * std::sqrt(2.0 * std::acos(-1.0)));
}

cplx sample(const Field& f, double dz, double z) {
  const double x = z / dz;
  if (x <= 0) return f.front();
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= f.size()) return f.back();
  const double w = x - i;
  return (1.0 - w) * f[i] + w * f[i + 1];
}

double guard_energy_fraction(const Field& plus, const Field& minus, double fraction) {
  const std::size_t n = plus.size();
  const auto band = static_cast<std::size_t>(std::ceil(fraction * n));
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::norm(plus[i]) + (minus.empty() ? 0.0 : std::norm(minus[i]));
    total += e;
    if (i < band || i >= n - band) edge += e;
  }
  return total > 0 ? edge / total : 0.0;
}

double relative_l2(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0 ? std::sqrt(num / den) : 0.0;
}

namespace {

ChannelStats channel_stats(const Field& f, double dz, double weight) {
  ChannelStats s;
  double n2 = 0.0;
  for (const auto& v : f) n2 += std::norm(v);
  s.norm = std::sqrt(n2 * dz);
  if (n2 * dz < 1e-30) return s;
  const auto mo = moments(f, dz);
  s.energy = weight * mo.energy;
  s.centroid = mo.centroid;
  s.width = mo.width;
  s.peak = mo.peak;
  s.peak_z = mo.peak_z;
  s.amplitude = gaussian_amplitude(f, dz);
  return s;
}

}  // namespace

DiagnosticsRecord make_record(const Snapshot& s, double dz, const MediumModel& m,
                              double omega_plus, double omega_minus,
                              double probe_z, double guard_fraction_width) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.tau = s.tau;
  r.mode = s.mode;
  r.plus = channel_stats(s.psi_plus, dz, omega_plus * omega_plus / m.gamma);
  r.minus = channel_stats(s.psi_minus, dz,
                          omega_minus * omega_minus / (m.r_g * m.r_g * m.gamma));
  r.probe_z = probe_z;
  if (!s.psi_plus.empty()) r.probe = sample(s.psi_plus, dz, probe_z);
  for (const auto& v : s.polariton) r.polariton_sum += v;
  r.polariton_sum *= dz;
  r.copy_error = r.plus.norm > 0 ? relative_l2(s.psi_minus, s.psi_plus) : 0.0;
  r.guard_fraction = guard_energy_fraction(s.psi_plus, s.psi_minus, guard_fraction_width);
  return r;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.count = static_cast<int>(x.size());
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.rms_residual = std::sqrt(sse / n);
  return f;
}

LinearFit measured_group_velocity(const Trajectory& tr, double t0, double t1) {
  std::vector<double> t, z;
  for (const auto& r : tr.records) {
    if (r.t >= t0 && r.t <= t1 && r.plus.norm > 0) {
      t.push_back(r.t);
      z.push_back(r.plus.centroid);
    }
  }
  if (t.size() < 5) {
    fail(ErrorCode::WindowTooShort, "need >= 5 snapshots in window, got " + std::to_string(t.size()));
  }
  return linear_fit(t, z);
}

namespace {

std::vector<PhasePoint> unwrap_ratio(const std::vector<double>& t, const std::vector<cplx>& run,
                                     const std::vector<cplx>& ref) {
  const double pi = std::acos(-1.0);
  std::vector<PhasePoint> out;
  double prev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double ph = 0.0;
    if (std::abs(run[i]) > 0 && std::abs(ref[i]) > 0) ph = std::arg(run[i] * std::conj(ref[i]));
    if (!out.empty()) {
      double d = ph - prev;
      d -= 2.0 * pi * std::round(d / (2.0 * pi));
      if (std::abs(d) > 0.5 * pi) {
        fail(ErrorCode::PhaseUnwrapAmbiguity,
             "phase jump " + std::to_string(d) + " rad at t = " + std::to_string(t[i]));
      }
      ph = out.back().phase + d;
      prev = ph;
    } else {
      prev = ph;
    }
    out.push_back({t[i], ph});
  }
  return out;
}

}  // namespace

std::vector<PhasePoint> relative_phase(const Trajectory& run, const Trajectory& reference) {
  const std::size_t n = std::min(run.records.size(), reference.records.size());
  std::vector<double> t(n);
  std::vector<cplx> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = run.records[i].t;
    a[i] = run.records[i].probe;
    b[i] = reference.records[i].probe;
  }
  return unwrap_ratio(t, a, b);
}

std::vector<PhasePoint> relative_phase(const Trajectory& run, const Trajectory& reference,
                                       double z_probe) {
  const std::size_t n = std::min(run.snapshots.size(), reference.snapshots.size());
  std::vector<double> t;
  std::vector<cplx> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sa = run.snapshots[i];
    const auto& sb = reference.snapshots[i];
    if (sa.psi_plus.empty() || sb.psi_plus.empty()) continue;
    t.push_back(sa.t);
    a.push_back(sample(sa.psi_plus, run.dz, z_probe));
    b.push_back(sample(sb.psi_plus, reference.dz, z_probe));
  }
  return unwrap_ratio(t, a, b);
}

OracleReport compare_to_oracle(const Trajectory& tr, const GaussianOracle& oracle, double t_from) {
  OracleReport rep;
  for (const auto& s : tr.snapshots) {
    if (s.t < t_from || s.psi_plus.empty() || s.mode != Mode::PDE) continue;
    const auto g = oracle.params(Channel::Plus, s.t);
    Field expected(s.psi_plus.size());
    Field measured(s.psi_plus.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const double x = i * tr.dz - g.centre;
      expected[i] = g.peak * std::exp(-x * x / (2 * g.width * g.width));
      measured[i] = std::abs(s.psi_plus[i]);
    }
    OracleError e{};
    e.t = s.t;
    e.envelope = relative_l2(measured, expected);
    const auto mo = moments(s.psi_plus, tr.dz);
    e.width = std::abs(std::sqrt(2.0) * mo.width / g.width - 1.0);
    e.decay = std::abs(gaussian_amplitude(s.psi_plus, tr.dz) / g.peak - 1.0);
    rep.max_envelope = std::max(rep.max_envelope, e.envelope);
    rep.max_width = std::max(rep.max_width, e.width);
    rep.max_decay = std::max(rep.max_decay, e.decay);
    rep.per_snapshot.push_back(e);
  }
  return rep;
}

}  // namespace stlight
