#include "dsm/edge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <Eigen/Dense>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"

namespace dsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// power series about 0; accurate for x in [-8, 2] where the growing and
// decaying pieces do not yet cancel catastrophically
void airy_series(double x, double& ai, double& aip) {
  const double c1 = 0.35502805388781723926;  // Ai(0)
  const double c2 = 0.25881940379280679840;  // -Ai'(0)
  double x3 = x * x * x;
  double f = 1.0, g = x, fp = 0.0, gp = 1.0;
  double tf = 1.0, tg = x, tfp = 0.5 * x * x, tgp = 1.0;
  fp = tfp;
  for (int k = 0;; ++k) {
    tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    tgp *= x3 / ((3.0 * k + 1.0) * (3.0 * k + 3.0));
    f += tf;
    g += tg;
    gp += tgp;
    if (k >= 1) {
      tfp *= x3 / ((3.0 * k) * (3.0 * k + 2.0));
      fp += tfp;
    }
    double scale = std::abs(f) + std::abs(g) + 1.0;
    if (k > 3 && std::abs(tf) < 1e-20 * scale && std::abs(tg) < 1e-20 * scale)
      break;
    if (k > 400) break;
  }
  ai = c1 * f - c2 * g;
  aip = c1 * fp - c2 * gp;
}

// c_k of the Poincare expansion and the paired d_k = -(6k+1)/(6k-1) c_k
void airy_asym_coeffs(std::vector<double>& c, std::vector<double>& d, int K) {
  c.assign(K, 0.0);
  d.assign(K, 0.0);
  double ck = 1.0;
  for (int k = 0; k < K; ++k) {
    c[k] = ck;
    d[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * ck;
    ck *= (6.0 * k + 1.0) * (6.0 * k + 3.0) * (6.0 * k + 5.0) /
          (216.0 * (k + 1.0) * (2.0 * k + 1.0));
  }
}

void airy_asym_pos(double x, double& ai, double& aip) {
  double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  std::vector<double> c, d;
  airy_asym_coeffs(c, d, 30);
  double sa = 0.0, sd = 0.0, zk = 1.0, sgn = 1.0, prev = kInf;
  for (std::size_t k = 0; k < c.size(); ++k) {
    double ta = c[k] * zk;
    if (ta > prev) break;  // past the optimal truncation point
    sa += sgn * ta;
    sd += sgn * d[k] * zk;
    prev = ta;
    zk /= zeta;
    sgn = -sgn;
  }
  double root = std::pow(x, 0.25), pref = std::exp(-zeta) / (2.0 * std::sqrt(M_PI));
  ai = pref / root * sa;
  aip = -pref * root * sd;
}

void airy_asym_neg(double xabs, double& ai, double& aip) {
  double zeta = 2.0 / 3.0 * std::pow(xabs, 1.5);
  std::vector<double> c, d;
  airy_asym_coeffs(c, d, 30);
  double pa = 0.0, qa = 0.0, pd = 0.0, qd = 0.0;
  double z2 = zeta * zeta, zk = 1.0, sgn = 1.0, prev = kInf;
  for (std::size_t j = 0; 2 * j + 1 < c.size(); ++j) {
    double even = c[2 * j] * zk, odd = c[2 * j + 1] * zk / zeta;
    if (even > prev) break;
    pa += sgn * even;
    qa += sgn * odd;
    pd += sgn * d[2 * j] * zk;
    qd += sgn * d[2 * j + 1] * zk / zeta;
    prev = even;
    zk /= z2;
    sgn = -sgn;
  }
  double ang = zeta + M_PI / 4.0, root = std::pow(xabs, 0.25);
  double sp = std::sqrt(M_PI);
  ai = (std::sin(ang) * pa - std::cos(ang) * qa) / (sp * root);
  aip = -root / sp * (std::cos(ang) * pd + std::sin(ang) * qd);
}

// one exact-Taylor step of y'' = x y; the backward direction (toward
// smaller x) keeps the decaying solution dominant
void airy_taylor_step(double& x0, double h, double& y, double& yp) {
  const int M = 30;
  double a[M + 1];
  a[0] = y;
  a[1] = yp;
  a[2] = x0 * a[0] / 2.0;
  for (int m = 1; m + 2 <= M; ++m)
    a[m + 2] = (x0 * a[m] + a[m - 1]) / ((m + 2.0) * (m + 1.0));
  double v = 0.0, dv = 0.0;
  for (int m = M; m >= 0; --m) {
    dv = dv * h + v;
    v = v * h + a[m];
  }
  y = v;
  yp = dv;
  x0 += h;
}

void airy_pair(double x, double& ai, double& aip) {
  if (x <= 2.0) {
    if (x >= -8.0)
      airy_series(x, ai, aip);
    else
      airy_asym_neg(-x, ai, aip);
    return;
  }
  if (x >= 8.0) {
    airy_asym_pos(x, ai, aip);
    return;
  }
  airy_asym_pos(8.0, ai, aip);
  double x0 = 8.0;
  int steps = static_cast<int>(std::ceil((8.0 - x) / 0.4));
  double h = (x - 8.0) / steps;
  for (int s = 0; s < steps; ++s) airy_taylor_step(x0, h, ai, aip);
}

double fredholm_once(double s, int m, int quad_map) {
  const GaussLegendre& gl = gauss_legendre(m);
  Eigen::VectorXd xi(m), sw(m), ai(m), aip(m);
  for (int i = 0; i < m; ++i) {
    double u = gl.x[i], x, jac;
    if (quad_map == 1) {
      double a = M_PI * (1.0 + u) / 4.0;
      x = s + 10.0 * std::tan(a);
      double cs = std::cos(a);
      jac = 10.0 * (M_PI / 4.0) / (cs * cs);
    } else {
      x = s - 2.0 * std::log((1.0 - u) / 2.0);
      jac = 2.0 / (1.0 - u);
    }
    xi[i] = x;
    sw[i] = std::sqrt(gl.w[i] * jac);
    airy_pair(x, ai[i], aip[i]);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double kij;
      if (i == j) {
        kij = aip[i] * aip[i] - xi[i] * ai[i] * ai[i];
      } else {
        double dx = xi[i] - xi[j];
        if (std::abs(dx) < 1e-7) {
          double mid = 0.5 * (xi[i] + xi[j]), am, apm;
          airy_pair(mid, am, apm);
          kij = apm * apm - mid * am * am;
        } else {
          kij = (ai[i] * aip[j] - aip[i] * ai[j]) / dx;
        }
      }
      a(i, j) -= sw[i] * kij * sw[j];
    }
  return a.determinant();
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Convex:
      return "convex";
    case Branch::Concave:
      return "concave";
    default:
      return "critical";
  }
}

Branch branch(const Model& m) {
  std::vector<double> br = m.f.breakpoints();
  for (double t : m.g.breakpoints()) br.push_back(t);
  std::sort(br.begin(), br.end());
  double intf = integrate_split([&](double s) { return m.f(s); }, 0.0, 1.0, br);
  double intg;
  try {
    intg = integrate_split([&](double s) { return 1.0 / m.g(s); }, 0.0, 1.0, br);
  } catch (const DivergentIntegral&) {
    return Branch::Convex;  // int 1/g = +inf dominates
  }
  double residual = intf - m.c * intg;
  if (std::abs(residual) < 1e-10) return Branch::Critical;
  return residual < 0 ? Branch::Convex : Branch::Concave;
}

double sigma(const Model& m, const SupportData& sup) {
  if (!std::isfinite(sup.z_plus) || std::abs(sup.z_plus) < 1e-9) return kInf;
  double t3;
  try {
    t3 = zdz_derivatives(Complex(sup.z_plus, 0.0), m, 3).real();
  } catch (const Error&) {
    return kInf;
  }
  if (!(t3 > 1e-12)) return kInf;
  return std::cbrt(2.0 / t3);
}

EdgeScaling edge_scaling(const Model& m, const SupportData& sup) {
  EdgeScaling sc;
  sc.branch = branch(m);
  sc.x_plus = sup.x_plus;
  sc.z_plus = sup.z_plus;
  sc.sigma = sigma(m, sup);
  return sc;
}

double edge_statistic(const Partition& lam, const XY& xy, Branch b) {
  require_in_box(lam, xy.n(), xy.k());
  if (b == Branch::Concave) {
    int full = 0;
    for (int i = 1; i <= xy.n(); ++i)
      if (lam.part(i) == xy.k()) ++full;
    return static_cast<double>(xy.n() - full);
  }
  return static_cast<double>(lam.part(1));
}

std::vector<double> edge_rescale(const std::vector<double>& values,
                                 const EdgeScaling& scaling, int n) {
  if (!std::isfinite(scaling.sigma))
    throw CriticalRegime("edge rescaling undefined: sigma is infinite");
  if (n < 1) throw InvalidArgument("n must be positive");
  double cb = std::cbrt(static_cast<double>(n));
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = scaling.sigma * (values[i] - scaling.x_plus * n) / cb;
  return out;
}

double airy_ai(double x) {
  double ai, aip;
  airy_pair(x, ai, aip);
  return ai;
}

double airy_ai_prime(double x) {
  double ai, aip;
  airy_pair(x, ai, aip);
  return aip;
}

double airy_kernel(double xi, double eta) {
  if (std::abs(xi - eta) < 1e-7) {
    double mid = 0.5 * (xi + eta), ai, aip;
    airy_pair(mid, ai, aip);
    return aip * aip - mid * ai * ai;
  }
  double a1, p1, a2, p2;
  airy_pair(xi, a1, p1);
  airy_pair(eta, a2, p2);
  return (a1 * p2 - p1 * a2) / (xi - eta);
}

double tracy_widom_cdf(double s, int quad_map) {
  if (quad_map != 1 && quad_map != 2)
    throw InvalidArgument("quad_map must be 1 or 2");
  double prev = 0.0;
  bool have_prev = false;
  for (int m = 16; m <= 2048; m *= 2) {
    double cur = fredholm_once(s, m, quad_map);
    if (have_prev && std::abs(cur - prev) <= 1e-10)
      return cur;
    prev = cur;
    have_prev = true;
  }
  throw NoConvergence("Fredholm determinant did not stabilize under doubling");
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptyInput("no samples given");
  std::sort(samples.begin(), samples.end());
  double nn = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - (i + 1.0) / nn));
    d = std::max(d, std::abs(f - static_cast<double>(i) / nn));
  }
  return d;
}

}  // namespace dsm
