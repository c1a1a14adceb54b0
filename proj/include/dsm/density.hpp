#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {

enum class DensityFamily { Constant, Linear, Exponential, Power, Table };

// Named density on [0,1]; one of the closed families or a piecewise-linear
// table.  Exponential means scale * exp(-gamma * s).
struct Density {
  DensityFamily family = DensityFamily::Constant;
  double a = 1.0, b = 0.0;          // family parameters, see factories
  std::vector<double> ts, vs;       // table nodes

  static Density constant(double value) {
    Density d;
    d.family = DensityFamily::Constant;
    d.a = value;
    return d;
  }
  static Density linear(double a0, double a1) {
    Density d;
    d.family = DensityFamily::Linear;
    d.a = a0;
    d.b = a1;
    return d;
  }
  static Density exponential(double gamma, double scale = 1.0) {
    Density d;
    d.family = DensityFamily::Exponential;
    d.a = scale;
    d.b = gamma;
    return d;
  }
  static Density power(double coeff, double exponent) {
    Density d;
    d.family = DensityFamily::Power;
    d.a = coeff;
    d.b = exponent;
    return d;
  }
  static Density table(std::vector<double> s, std::vector<double> v) {
    if (s.size() != v.size() || s.size() < 2)
      throw InvalidArgument("table density needs >= 2 matching (s, v) pairs");
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (!(s[i] < s[i + 1]))
        throw InvalidArgument("table abscissae must be strictly increasing");
    if (s.front() > 0.0 || s.back() < 1.0)
      throw InvalidArgument("table must cover [0,1]");
    Density d;
    d.family = DensityFamily::Table;
    d.ts = std::move(s);
    d.vs = std::move(v);
    return d;
  }

  double operator()(double s) const {
    switch (family) {
      case DensityFamily::Constant:
        return a;
      case DensityFamily::Linear:
        return a + b * s;
      case DensityFamily::Exponential:
        return a * std::exp(-b * s);
      case DensityFamily::Power:
        return a * std::pow(s, b);
      case DensityFamily::Table: {
        auto it = std::upper_bound(ts.begin(), ts.end(), s);
        if (it == ts.begin()) return vs.front();
        if (it == ts.end()) return vs.back();
        std::size_t i = static_cast<std::size_t>(it - ts.begin());
        double w = (s - ts[i - 1]) / (ts[i] - ts[i - 1]);
        return vs[i - 1] + w * (vs[i] - vs[i - 1]);
      }
    }
    return 0.0;
  }

  // interior kinks, used to split quadrature panels
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    if (family == DensityFamily::Table)
      for (double t : ts)
        if (t > 0.0 && t < 1.0) out.push_back(t);
    return out;
  }

  // exact range bounds on [0,1] (monotone families; table scans nodes)
  double min_on_unit() const {
    switch (family) {
      case DensityFamily::Constant:
        return a;
      case DensityFamily::Linear:
        return std::min(a, a + b);
      case DensityFamily::Exponential:
        return std::min(a, a * std::exp(-b));
      case DensityFamily::Power:
        return b >= 0 ? (b == 0 ? a : std::min(0.0, a))
                      : std::min(a, operator()(1.0));
      case DensityFamily::Table: {
        double m = vs.front();
        for (double v : vs) m = std::min(m, v);
        return m;
      }
    }
    return 0.0;
  }
  double max_on_unit() const {
    switch (family) {
      case DensityFamily::Constant:
        return a;
      case DensityFamily::Linear:
        return std::max(a, a + b);
      case DensityFamily::Exponential:
        return std::max(a, a * std::exp(-b));
      case DensityFamily::Power:
        return b >= 0 ? std::max(0.0, operator()(1.0))
                      : std::numeric_limits<double>::infinity();
      case DensityFamily::Table: {
        double m = vs.front();
        for (double v : vs) m = std::max(m, v);
        return m;
      }
    }
    return 0.0;
  }
};

// Continuum model: x_i = f(i/n), y_j = g(j/k), k = round(c n).
struct Model {
  Density f, g;
  double c = 1.0;
};

// discrete specialization
struct XY {
  Eigen::VectorXd x, y;
  int n() const { return static_cast<int>(x.size()); }
  int k() const { return static_cast<int>(y.size()); }
};

inline XY discretize(const Model& m, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (!(m.c > 0)) throw InvalidArgument("aspect ratio c must be positive");
  int k = static_cast<int>(std::llround(m.c * n));
  XY xy;
  xy.x.resize(n);
  xy.y.resize(k);
  for (int i = 1; i <= n; ++i) {
    double v = m.f(static_cast<double>(i) / n);
    if (!(v > 0) || !std::isfinite(v))
      throw InvalidParams("x_i = f(i/n) must be positive and finite");
    xy.x[i - 1] = v;
  }
  for (int j = 1; j <= k; ++j) {
    double v = m.g(static_cast<double>(j) / k);
    if (!(v > 0) || !std::isfinite(v))
      throw InvalidParams("y_j = g(j/k) must be positive and finite");
    xy.y[j - 1] = v;
  }
  return xy;
}

}  // namespace dsm
