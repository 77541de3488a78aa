#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "stlight/perturber.hpp"

using namespace stlight;

TEST_SUITE("perturber") {

TEST_CASE("density normalisation and width") {
  PerturberSpec p;
  p.m_atoms = 37.0;
  p.z_a = 50.0;
  p.delta_l_a = 10.0;
  const double dz = 0.05;
  const auto d = perturber_density(p, 2001, dz);
  CHECK(std::accumulate(d.values.begin(), d.values.end(), 0.0) * dz == doctest::Approx(37.0).epsilon(1e-12));
  CHECK(d.rms == doctest::Approx(10.0 / std::sqrt(2 * kPi)));
  CHECK_FALSE(d.clamped);
  // Peak density times the equivalent width recovers M.
  CHECK(*std::max_element(d.values.begin(), d.values.end()) * 10.0 == doctest::Approx(37.0).epsilon(1e-6));
}

TEST_CASE("narrow perturbers are clamped to four cells") {
  PerturberSpec p;
  p.z_a = 5.0;
  p.delta_l_a = 0.01;
  const auto d = perturber_density(p, 201, 0.05);
  CHECK(d.clamped);
  CHECK(d.rms == doctest::Approx(0.2));
}

TEST_CASE("densities are additive") {
  PerturberSpec a, b;
  a.z_a = 20.0;
  b.z_a = 70.0;
  a.m_atoms = 3.0;
  b.m_atoms = 5.0;
  const auto da = perturber_density(a, 2001, 0.05), db = perturber_density(b, 2001, 0.05);
  double total = 0.0;
  for (std::size_t i = 0; i < da.values.size(); ++i) total += (da.values[i] + db.values[i]) * 0.05;
  CHECK(total == doctest::Approx(8.0));
}

TEST_CASE("errors") {
  PerturberSpec p;
  p.z_a = 500.0;
  CHECK_CODE(perturber_density(p, 101, 0.1), ErrorCode::PerturberOffGrid);
  p = {};
  p.detuning = 0.005;
  CHECK_CODE(validate_perturber(p), ErrorCode::NonDispersiveRegime);
}

TEST_CASE("coupling limits and symmetry") {
  PerturberSpec p;
  p.detuning = 1e12;
  CHECK(std::abs(perturber_coupling(p)) < 1e-13);
  p.detuning = 2.0;
  const auto a = perturber_coupling(p);
  p.detuning = -2.0;
  const auto b = perturber_coupling(p);
  CHECK(std::abs(a - std::conj(b)) < 1e-15);
  // exp(-kappa n dtau) advances the phase for positive detuning.
  CHECK(a.imag() < 0);
}

TEST_CASE("applied phase: split perturbers and amplitude scaling") {
  const double dz = 0.05;
  const int n = 2001;
  PerturberSpec whole;
  whole.m_atoms = 10.0;
  whole.z_a = 50.0;
  PerturberSpec half = whole;
  half.m_atoms = 5.0;
  const auto dw = perturber_density(whole, n, dz), dh = perturber_density(half, n, dz);
  std::vector<std::complex<double>> f1(n, 1.0), f2(n, 1.0), f3(n, 3.5);
  apply_perturber(f1, dw, whole, 2.0);
  apply_perturber(f2, dh, half, 2.0);
  apply_perturber(f2, dh, half, 2.0);
  apply_perturber(f3, dw, whole, 2.0);
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(std::arg(f1[i]) - std::arg(f2[i])) < 1e-6);
    CHECK(std::abs(std::arg(f1[i]) - std::arg(f3[i])) < 1e-12);
  }
  // Phase imprinted on one cell: -Im(kappa) n dtau.
  const int centre = 1000;
  const double expected = -perturber_coupling(whole).imag() * dw.values[centre] * 2.0;
  CHECK(std::arg(f1[centre]) == doctest::Approx(expected));
  // Absorption stays below (gamma_a/|detuning|) times the phase.
  const double loss = 1.0 - std::abs(f1[centre]);
  CHECK(loss <= whole.gamma_a / std::abs(whole.detuning) * std::arg(f1[centre]) + 1e-15);
}

TEST_CASE("traveling phase in the slow-light limit") {
  MediumParams mp;
  PerturberSpec p;
  p.m_atoms = 100.0;
  p.sigma_a_over_s = 0.5;
  p.gamma_a = 0.02;
  p.detuning = 3.0;
  for (double u : {1e-3, 1e-4}) {
    mp.u_g0 = u;
    const auto m = build_medium(mp);
    const auto c = coefficients(m, m.omega_plus0, 0.0);
    CHECK(phase_shift_traveling(m, c, p) == doctest::Approx(100.0 * 0.5 * 0.02 / 3.0));
  }
  const auto m = build_medium(mp);
  const auto c = coefficients(m, m.omega_plus0, 0.0);
  PerturberSpec twice = p;
  twice.m_atoms *= 2;
  CHECK(phase_shift_traveling(m, c, twice) == doctest::Approx(2.0 * phase_shift_traveling(m, c, p)));
  const double w = m.omega_plus0 / std::sqrt(2.0);
  CHECK_CODE(phase_shift_traveling(m, coefficients(m, w, w), p), ErrorCode::DegenerateCoefficients);
  // Approaching the stationary point the phase grows without bound.
  const double near = phase_shift_traveling(m, coefficients(m, 1.001 * w, w), p);
  CHECK(near > 100.0 * phase_shift_traveling(m, c, p));
}

TEST_CASE("stationary phase rate") {
  const auto m = build_medium({});
  PerturberSpec p;
  p.m_atoms = 2000.0;
  p.sigma_a_over_s = 2 * kPi;
  p.gamma_a = 0.01;
  p.detuning = 1.0;
  p.delta_l_a = 40.0;
  const auto r = phase_rate_stationary(m, p);
  CHECK(r.chi_s == doctest::Approx(kPi * 1e-3));
  CHECK(r.t_pi == doctest::Approx(1000.0));
  CHECK(phase_rate_stationary(m, p, 2e-3).chi_s == doctest::Approx(2 * r.chi_s));
  // One atom with S ~ sigma_a reaches pi once t_s > delta_l_a / v_g (with gamma_a ~ detuning).
  PerturberSpec one;
  one.m_atoms = 1.0;
  one.sigma_a_over_s = 1.0;
  one.gamma_a = 0.9;
  one.detuning = 1.0;
  one.delta_l_a = 20.0;
  const auto r1 = phase_rate_stationary(m, one);
  CHECK(r1.t_pi > one.delta_l_a / m.u_g0);
  CHECK(r1.t_pi < 4.0 * one.delta_l_a / m.u_g0);
}

}  // TEST_SUITE
