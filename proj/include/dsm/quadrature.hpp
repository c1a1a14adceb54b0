#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <type_traits>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Nodes by Newton iteration on P_n with the Bonnet recurrence; accurate to
// a few ulp for n up to several thousand.  Cached per order.
inline const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature order must be >= 1");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    {  // one recurrence pass at the converged node for the weight
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    g.x[i] = -x;
    g.x[n - 1 - i] = x;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) g.x[n / 2] = 0.0;
  return cache.emplace(n, std::move(g)).first->second;
}

struct IntegrateOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 48;
  double divergence_cap = 1e13;
};

namespace detail {

template <class F>
auto gl15_panel(F& f, double a, double b) {
  const GaussLegendre& g = gauss_legendre(15);
  using R = std::invoke_result_t<F&, double>;
  R acc{};
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (int i = 0; i < 15; ++i) acc += g.w[i] * f(m + h * g.x[i]);
  return acc * h;
}

template <class F, class R>
R integrate_rec(F& f, double a, double b, R whole, double tol_abs,
                const IntegrateOptions& opt, int depth, double span) {
  double m = 0.5 * (a + b);
  R left = gl15_panel(f, a, m);
  R right = gl15_panel(f, m, b);
  R sum = left + right;
  double err = std::abs(sum - whole);
  double local = tol_abs * ((b - a) / span) + opt.rel_tol * std::abs(sum);
  if (err <= std::max(local, 1e-300)) return sum;
  if (std::abs(sum) > opt.divergence_cap)
    throw DivergentIntegral("integral exceeds divergence cap");
  if (depth >= opt.max_depth)
    throw DivergentIntegral("adaptive refinement stalled");
  return integrate_rec(f, a, m, left, tol_abs, opt, depth + 1, span) +
         integrate_rec(f, m, b, right, tol_abs, opt, depth + 1, span);
}

}  // namespace detail

// adaptive Gauss-Legendre on [a,b]; works for real or complex integrands
template <class F>
auto integrate(F&& f, double a, double b, IntegrateOptions opt = {}) {
  using R = std::invoke_result_t<F&, double>;
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("bad integration interval");
  if (a == b) return R{};
  R whole = detail::gl15_panel(f, a, b);
  double tol_abs = opt.abs_tol + opt.rel_tol * std::abs(whole);
  return detail::integrate_rec(f, a, b, whole, tol_abs, opt, 0, b - a);
}

// same, splitting at interior breakpoints (for piecewise-defined integrands)
template <class F>
auto integrate_split(F&& f, double a, double b,
                     const std::vector<double>& breaks,
                     IntegrateOptions opt = {}) {
  using R = std::invoke_result_t<F&, double>;
  std::vector<double> pts{a};
  for (double t : breaks)
    if (t > a + 1e-15 && t < b - 1e-15) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  R acc{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    acc += integrate(f, pts[i], pts[i + 1], opt);
  return acc;
}

}  // namespace dsm
