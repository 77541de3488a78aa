#include "stlight/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "stlight/error.hpp"
#include "stlight/quadrature.hpp"

namespace stlight {

namespace {
constexpr cplx I{0.0, 1.0};

double drift_factor(const MediumModel& m, const Coefficients& c, Ordering o) {
  return o == Ordering::Reconciled ? m.xi_minus * c.alpha_plus - m.xi_plus * c.alpha_minus
                                   : m.xi_plus * c.alpha_plus - m.xi_minus * c.alpha_minus;
}
}  // namespace

cplx dispersion_omega(const MediumModel& m, const Coefficients& c, double k, Ordering ordering,
                      double d_eta_alpha_tilde) {
  const double eta = c.eta;
  const cplx denom = m.xi_minus / eta - I * k * c.alpha_tilde;
  const cplx num = k * (eta * drift_factor(m, c, ordering) - I * k - d_eta_alpha_tilde / eta);
  return I * eta * c.gamma2_prime - num / denom;
}

cplx omega_from_determinant(const MediumModel& m, const Coefficients& c, double k) {
  // Plane wave exp(ikz + i omega tau) in
  //   dz psi+ = -xi+ a- (psi+ - psi-) - dtau P - g psi+
  //   dz psi- = -xi- a+ (psi+ - psi-) + q dtau P + q g psi-,   q = xi-/xi+,
  // with P = a+ psi+ + a- psi-. The determinant is affine in omega.
  const double ap = c.alpha_plus, am = c.alpha_minus, g = c.gamma2_prime;
  const double q = m.xi_minus / m.xi_plus;
  auto det = [&](cplx w) {
    const cplx m11 = I * k + m.xi_plus * am + I * w * ap + g;
    const cplx m12 = -m.xi_plus * am + I * w * am;
    const cplx m21 = m.xi_minus * ap - q * I * w * ap;
    const cplx m22 = I * k - m.xi_minus * ap - q * I * w * am - q * g;
    return m11 * m22 - m12 * m21;
  };
  const cplx a = det(0.0);
  const cplx b = det(1.0) - a;
  const double scale = std::abs(a) + std::abs(det(1.0)) + std::numeric_limits<double>::min();
  if (std::abs(b) <= 1e-14 * scale) {
    fail(ErrorCode::BranchSelectionFailure, "plane-wave determinant independent of omega at k = " +
                                                std::to_string(k));
  }
  const cplx w = -a / b;
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    fail(ErrorCode::BranchSelectionFailure, "non-finite EIT root");
  }
  return w;
}

double spectral_group_velocity(const MediumModel& m, const Coefficients& c, Ordering ordering,
                               double dk) {
  const cplx wp = dispersion_omega(m, c, dk, ordering);
  const cplx wm = dispersion_omega(m, c, -dk, ordering);
  return -c.tau_rate * (wp - wm).real() / (2.0 * dk);
}

cplx slaving_kernel(const MediumModel& m, double k) {
  return (1.0 + I * k / m.xi_plus) / (1.0 - I * k / m.xi_minus);
}

KernelValue realspace_kernel(const MediumModel& m, Channel ch, double x) {
  // Partial fractions of f(k) and 1/f(k).
  const double xs = ch == Channel::Minus ? m.xi_minus : m.xi_plus;
  const double xo = ch == Channel::Minus ? m.xi_plus : m.xi_minus;
  const bool on_side = ch == Channel::Minus ? x <= 0 : x >= 0;
  const double cont = on_side ? xs * (1.0 + xs / xo) * std::exp(-xs * std::abs(x)) : 0.0;
  return {cont, -xs / xo};
}

Field convolve_kernel(const MediumModel& m, Channel target, const Field& source, double dz) {
  const int n = static_cast<int>(source.size());
  if (n < 4) fail(ErrorCode::GridTooCoarse, "convolution needs at least 4 points");
  const double xs = target == Channel::Minus ? m.xi_minus : m.xi_plus;
  const double xo = target == Channel::Minus ? m.xi_plus : m.xi_minus;

  // Psi+ -> Psi- integrates ahead (z' > z); the opposite direction is the mirror image.
  Field f = source;
  if (target == Channel::Plus) std::reverse(f.begin(), f.end());

  // Weights of the cubic through four stencil points, integrated against exp(-xs s)
  // over one cell, for stencils starting at offsets -1 (interior), 0 and -2 (edges).
  const auto gl = gauss_legendre(16);
  auto stencil_weights = [&](int first) {
    std::array<double, 4> w{};
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double u = 0.5 * (gl.nodes[q] + 1.0);
      const double base = 0.5 * gl.weights[q] * dz * std::exp(-xs * dz * u);
      for (int j = 0; j < 4; ++j) {
        double l = 1.0;
        for (int p = 0; p < 4; ++p) {
          if (p != j) l *= (u - (first + p)) / static_cast<double>(j - p);
        }
        w[j] += base * l;
      }
    }
    return w;
  };
  const auto w_mid = stencil_weights(-1);
  const auto w_left = stencil_weights(0);
  const auto w_right = stencil_weights(-2);
  const double decay = std::exp(-xs * dz);

  Field out(n);
  cplx acc = 0.0;
  out[n - 1] = -xs / xo * f[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    int first = -1;
    const std::array<double, 4>* w = &w_mid;
    if (i == 0) {
      first = 0;
      w = &w_left;
    } else if (i == n - 2) {
      first = -2;
      w = &w_right;
    }
    cplx cell = 0.0;
    for (int j = 0; j < 4; ++j) cell += (*w)[j] * f[i + first + j];
    acc = decay * acc + cell;
    out[i] = -xs / xo * f[i] + xs * (1.0 + xs / xo) * acc;
  }
  if (target == Channel::Plus) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<double> k_grid(int n, double dz) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::acos(-1.0) / (n * dz);
  for (int j = 0; j < n; ++j) k[j] = (j <= (n - 1) / 2 ? j : j - n) * dk;
  return k;
}

struct Transform::Plans {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Transform::Transform(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  plans_->buf = fftw_alloc_complex(n);
  plans_->fwd = fftw_plan_dft_1d(n, plans_->buf, plans_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_1d(n, plans_->buf, plans_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Transform::~Transform() {
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
  fftw_free(plans_->buf);
}

Field Transform::forward(const Field& x) const {
  std::copy(x.begin(), x.end(), reinterpret_cast<cplx*>(plans_->buf));
  fftw_execute(plans_->fwd);
  Field out(n_);
  const cplx* b = reinterpret_cast<const cplx*>(plans_->buf);
  for (int i = 0; i < n_; ++i) out[i] = b[i] / static_cast<double>(n_);
  return out;
}

Field Transform::inverse(const Field& xk) const {
  std::copy(xk.begin(), xk.end(), reinterpret_cast<cplx*>(plans_->buf));
  fftw_execute(plans_->bwd);
  const cplx* b = reinterpret_cast<const cplx*>(plans_->buf);
  return Field(b, b + n_);
}

SpectralPropagator::SpectralPropagator(const MediumModel& m, const Field& psi_plus, double dz,
                                       Ordering ordering)
    : m_(m),
      dz_(dz),
      ordering_(ordering),
      fft_(static_cast<int>(psi_plus.size())),
      k_(k_grid(static_cast<int>(psi_plus.size()), dz)),
      spec_(fft_.forward(psi_plus)) {}

void SpectralPropagator::propagate(const Coefficients& c, double dtau) {
  if (dtau == 0) return;
  for (std::size_t j = 0; j < k_.size(); ++j) {
    const cplx f = std::exp(I * dispersion_omega(m_, c, k_[j], ordering_) * dtau);
    if (std::abs(f) > 1.0 + 1e-9) {
      fail(ErrorCode::ModeBlowup, "growth factor " + std::to_string(std::abs(f)) + " at k = " +
                                      std::to_string(k_[j]));
    }
    spec_[j] *= f;
  }
  tau_ += dtau;
}

void SpectralPropagator::propagate(const ControlSchedule& s, double t0, double t1) {
  if (t1 <= t0) return;
  if (controls_constant(s, t0, t1)) {
    propagate(coefficients_at(m_, s, 0.5 * (t0 + t1)), tau_between(m_, s, t0, t1));
    return;
  }
  const auto bp = breakpoints(s);
  double t = t0;
  while (t < t1) {
    const auto c = coefficients_at(m_, s, t);
    double wmax = 0.0;
    for (double k : k_) wmax = std::max(wmax, std::abs(dispersion_omega(m_, c, k, ordering_).real()));
    double dt = t1 - t;
    if (wmax > 0) dt = std::min(dt, 0.1 / wmax / c.tau_rate);
    for (const auto& seg : s.segments) {
      if (t >= seg.t_start && t < seg.t_start + seg.ramp) dt = std::min(dt, seg.ramp / 32.0);
    }
    for (double b : bp) {
      if (b > t && b < t + dt) dt = b - t;
    }
    const double tn = (t1 - (t + dt) < 1e-12 * std::max(1.0, std::abs(t1))) ? t1 : t + dt;
    propagate(coefficients_at(m_, s, 0.5 * (t + tn)), tau_between(m_, s, t, tn));
    t = tn;
  }
}

Field SpectralPropagator::psi_plus() const { return fft_.inverse(spec_); }

Field SpectralPropagator::reconstruct_minus() const {
  Field sm(spec_.size());
  for (std::size_t j = 0; j < k_.size(); ++j) sm[j] = slaving_kernel(m_, k_[j]) * spec_[j];
  return fft_.inverse(sm);
}

}  // namespace stlight
