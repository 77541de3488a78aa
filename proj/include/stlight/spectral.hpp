#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "stlight/medium.hpp"
#include "stlight/oracle.hpp"

namespace stlight {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

/// Which index ordering multiplies the drift term of the dispersion relation.
/// Reconciled uses (xi- alpha+ - xi+ alpha-), AsPrinted (xi+ alpha+ - xi- alpha-).
enum class Ordering { Reconciled, AsPrinted };

/// Closed-form EIT-branch frequency per unit tau for the mode exp(ikz + i omega tau).
/// `d_eta_alpha_tilde` is d(eta alpha_tilde)/dtau; zero for constant controls.
cplx dispersion_omega(const MediumModel& m, const Coefficients& c, double k,
                      Ordering ordering = Ordering::Reconciled, double d_eta_alpha_tilde = 0.0);

/// Root of the 2x2 plane-wave determinant of the transport equations.
cplx omega_from_determinant(const MediumModel& m, const Coefficients& c, double k);

/// Finite-difference -(dtau/dt) d omega/dk at k = 0: the group velocity in units of c.
double spectral_group_velocity(const MediumModel& m, const Coefficients& c,
                               Ordering ordering = Ordering::Reconciled, double dk = 1e-6);

/// f(k) with psi-~(k) = f(k) psi+~(k).
cplx slaving_kernel(const MediumModel& m, double k);

struct KernelValue {
  double continuous;    // one-sided exponential part at offset x
  double delta_weight;  // weight of the delta function at x = 0
};

/// Real-space kernel F_sigma(x) with psi_sigma(z) = integral F_sigma(z - z') psi_sigma'(z') dz'.
/// Channel::Minus maps psi+ to psi- (support x < 0); Channel::Plus maps psi- to psi+ (x > 0).
KernelValue realspace_kernel(const MediumModel& m, Channel ch, double x);

/// Real-space evaluation of the slaving relation on a uniform grid with spacing dz,
/// treating the field as zero beyond the grid. Piecewise-cubic interpolation.
Field convolve_kernel(const MediumModel& m, Channel target, const Field& source, double dz);

/// Uniform wavenumber grid matching an n-point periodic transform with spacing dz.
std::vector<double> k_grid(int n, double dz);

/// Forward transform with psi(z_j) = sum_k exp(i k z_j) psi~(k).
class Transform {
 public:
  explicit Transform(int n);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  Field forward(const Field& x) const;
  Field inverse(const Field& xk) const;
  int size() const { return n_; }

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

/// Propagates the forward channel in wavenumber space under two-colour controls.
class SpectralPropagator {
 public:
  SpectralPropagator(const MediumModel& m, const Field& psi_plus, double dz,
                     Ordering ordering = Ordering::Reconciled);

  /// Advances by dtau with fixed coefficients.
  void propagate(const Coefficients& c, double dtau);

  /// Advances from t0 to t1 along the schedule (midpoint rule in tau).
  void propagate(const ControlSchedule& s, double t0, double t1);

  Field psi_plus() const;
  /// Inverse transform of f(k) psi+~(k).
  Field reconstruct_minus() const;

  const Field& spectrum() const { return spec_; }
  const std::vector<double>& k() const { return k_; }
  double tau() const { return tau_; }
  double dz() const { return dz_; }

 private:
  MediumModel m_;
  double dz_;
  Ordering ordering_;
  Transform fft_;
  std::vector<double> k_;
  Field spec_;
  double tau_ = 0.0;
};

}  // namespace stlight
