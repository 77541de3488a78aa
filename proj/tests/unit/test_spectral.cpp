#include <cmath>
#include <random>

#include "helpers.hpp"
#include "stlight/diagnostics.hpp"
#include "stlight/spectral.hpp"

using namespace stlight;

namespace {

MediumModel medium(double r_g = 1.0, double gamma2 = 0.0) {
  MediumParams p;
  p.r_g = r_g;
  p.gamma2 = gamma2;
  return build_medium(p);
}

Field gaussian(int n, double dz, double z0, double b, double k0 = 0.0) {
  Field f(n);
  for (int i = 0; i < n; ++i) {
    const double x = i * dz - z0;
    f[i] = std::exp(-x * x / (2 * b * b)) * std::polar(1.0, k0 * i * dz);
  }
  return f;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("wavenumber grid layout") {
  const auto k = k_grid(8, 0.5);
  const double dk = 2 * kPi / 4.0;
  CHECK(k[0] == 0.0);
  CHECK(k[3] == doctest::Approx(3 * dk));
  CHECK(k[4] == doctest::Approx(-4 * dk));
  CHECK(k[7] == doctest::Approx(-dk));
}

TEST_CASE("transform convention and round trip") {
  const int n = 64;
  const double dz = 0.25;
  const auto k = k_grid(n, dz);
  Transform t(n);
  Field wave(n);
  for (int i = 0; i < n; ++i) wave[i] = std::polar(1.0, k[5] * i * dz);
  const auto spec = t.forward(wave);
  CHECK(std::abs(spec[5] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(spec[6]) < 1e-12);
  const auto g = gaussian(n, dz, 8.0, 1.5);
  const auto back = t.inverse(t.forward(g));
  CHECK(relative_l2(back, g) < 1e-14);
}

TEST_CASE("closed form equals the determinant root") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto m = medium(0.3 + 3.0 * u(rng), i % 3 ? 1e-4 * u(rng) : 0.0);
    const auto c = coefficients(m, m.omega_plus0 * u(rng), m.omega_plus0 * (u(rng) + 0.01));
    const double k = (u(rng) - 0.5) * 0.4 * m.xi_minus;
    const cplx a = dispersion_omega(m, c, k), b = omega_from_determinant(m, c, k);
    CHECK(std::abs(a - b) <= 1e-10 * (std::abs(a) + 1e-12));
  }
}

TEST_CASE("modes never grow") {
  for (double r : {0.5, 1.0, 3.0}) {
    for (double g2 : {0.0, 1e-4}) {
      const auto m = medium(r, g2);
      const auto c = coefficients(m, 0.6 * m.omega_plus0, 0.9 * r * m.omega_plus0);
      for (double k : k_grid(512, 0.05)) CHECK(dispersion_omega(m, c, k).imag() >= -1e-15);
    }
  }
}

TEST_CASE("spectral group velocity matches the closed form") {
  for (double r : {0.5, 1.0, 2.0}) {
    const auto m = medium(r);
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
      const double wp = std::sqrt(s) * m.omega_plus0, wm = std::sqrt(1 - s) * m.omega_plus0;
      const auto c = coefficients(m, wp, wm);
      const double vc = group_velocity(m, wp, wm);
      CHECK(std::abs(spectral_group_velocity(m, c) - vc) <= 1e-6 * std::max(std::abs(vc), m.u_g0));
    }
  }
}

TEST_CASE("as-printed ordering differs only when r_g != 1") {
  const auto m1 = medium(1.0);
  const auto c1 = coefficients(m1, 0.8 * m1.omega_plus0, 0.3 * m1.omega_plus0);
  CHECK(spectral_group_velocity(m1, c1, Ordering::AsPrinted) ==
        doctest::Approx(spectral_group_velocity(m1, c1, Ordering::Reconciled)));
  const auto m2 = medium(2.0);
  const auto c2 = coefficients(m2, 0.8 * m2.omega_plus0, 0.8 * m2.omega_plus0);
  const double vr = spectral_group_velocity(m2, c2, Ordering::Reconciled);
  const double va = spectral_group_velocity(m2, c2, Ordering::AsPrinted);
  CHECK(std::abs(va / vr - 1.0) > 0.03);
}

TEST_CASE("slaving kernel and its real-space form") {
  const auto m = medium(2.0);
  CHECK(std::abs(slaving_kernel(m, 0.0) - cplx(1.0)) < 1e-15);
  // Continuous part integrates to f(0) minus the delta weight.
  for (auto ch : {Channel::Minus, Channel::Plus}) {
    double integral = 0.0;
    const double h = 1e-4;
    for (int i = -200000; i <= 200000; ++i) {
      const double w = (i == -200000 || i == 200000) ? 0.5 : 1.0;
      integral += w * realspace_kernel(m, ch, i * h).continuous * h;
    }
    const double delta = realspace_kernel(m, ch, 0.0).delta_weight;
    // The jump at x = 0 is counted once by the trapezoid sum; correct it by half.
    integral -= 0.5 * realspace_kernel(m, ch, 0.0).continuous * h;
    CHECK(integral + delta == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(realspace_kernel(m, Channel::Minus, 1.0).continuous == 0.0);
  CHECK(realspace_kernel(m, Channel::Plus, -1.0).continuous == 0.0);
}

TEST_CASE("real-space convolution agrees with the spectral product") {
  for (double r : {1.0, 2.0}) {
    const auto m = medium(r);
    const int n = 2048;
    const double dz = 0.05;
    const auto psi = gaussian(n, dz, 51.2, 6.0, 0.3);
    Transform t(n);
    const auto k = k_grid(n, dz);

    auto spec = t.forward(psi);
    for (int j = 0; j < n; ++j) spec[j] *= slaving_kernel(m, k[j]);
    const auto expected_minus = t.inverse(spec);
    CHECK(relative_l2(convolve_kernel(m, Channel::Minus, psi, dz), expected_minus) < 1e-7);

    spec = t.forward(psi);
    for (int j = 0; j < n; ++j) spec[j] /= slaving_kernel(m, k[j]);
    const auto expected_plus = t.inverse(spec);
    CHECK(relative_l2(convolve_kernel(m, Channel::Plus, psi, dz), expected_plus) < 1e-7);
  }
}

TEST_CASE("propagator: slow light translates the pulse") {
  const auto m = medium();
  const int n = 1024;
  const double dz = 0.1;
  SpectralPropagator p(m, gaussian(n, dz, 30.0, 8.0), dz);
  const auto c = coefficients(m, m.omega_plus0, 0.0);
  const double t = 2e4;
  p.propagate(c, c.tau_rate * t);
  CHECK(p.tau() == doctest::Approx(c.tau_rate * t));
  const auto expected = gaussian(n, dz, 30.0 + m.u_g0 * t, 8.0);
  // Residual higher-order dispersion at B = 8 absorption lengths.
  CHECK(relative_l2(p.psi_plus(), expected) < 1e-3);
}

TEST_CASE("propagator: balanced controls spread without drift") {
  const auto m = medium();
  const int n = 2048;
  const double dz = 0.1;
  const double w = m.omega_plus0 / std::sqrt(2.0);
  ControlSchedule s;
  s.segments = {{0, 1e4, w, w, 50}};
  SpectralPropagator p(m, gaussian(n, dz, 100.0, 20.0), dz);
  p.propagate(s, 0.0, 1e4);
  // B^2 grows by 2 u_g0 t; the integral of psi is conserved.
  const double b = std::sqrt(400.0 + 2.0 * m.u_g0 * 1e4);
  const auto out = p.psi_plus();
  Field expected = gaussian(n, dz, 100.0, b);
  for (auto& v : expected) v *= 20.0 / b;
  CHECK(relative_l2(out, expected) < 2e-3);
}

TEST_CASE("growing modes are reported") {
  const auto m = medium();
  SpectralPropagator p(m, gaussian(64, 0.5, 16.0, 3.0), 0.5);
  auto c = coefficients(m, m.omega_plus0, m.omega_plus0);
  c.gamma2_prime = -1.0;  // unphysical gain
  CHECK_CODE(p.propagate(c, 1.0), ErrorCode::ModeBlowup);
}

}  // TEST_SUITE
