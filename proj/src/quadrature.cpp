#include "stlight/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stlight {
namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const Integrand& f, const Panel& p, double tol, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Integrand& f, double a, double b, double tol, int max_depth) {
  if (b == a) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  // Start from four panels so smooth-but-localized features are not missed by the
  // first three samples.
  constexpr int kInitial = 4;
  const double h = (b - a) / kInitial;
  double total = 0.0;
  for (int i = 0; i < kInitial; ++i) {
    const double pa = a + i * h;
    const double pb = (i + 1 == kInitial) ? b : a + (i + 1) * h;
    const double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
    total += refine(f, {pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)}, tol / kInitial,
                    max_depth);
  }
  return total;
}

double integrate_panels(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                        double tol) {
  if (b == a) return 0.0;
  if (b < a) return -integrate_panels(f, b, a, breakpoints, tol);
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double share = tol * (cuts[i + 1] - cuts[i]) / (b - a);
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], std::max(share, 1e-300));
  }
  return total;
}

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace stlight
