#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stlight {

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const Integrand& f, double a, double b, double tol = 1e-10,
                        int max_depth = 48);

/// Adaptive Simpson with mandatory panel boundaries. Breakpoints outside (a, b)
/// are ignored; the tolerance is shared between panels in proportion to length.
double integrate_panels(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                        double tol = 1e-10);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

}  // namespace stlight
