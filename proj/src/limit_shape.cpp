#include "dsm/limit_shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"

namespace dsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> model_breaks(const Model& m) {
  std::vector<double> b = m.f.breakpoints();
  for (double t : m.g.breakpoints()) b.push_back(t);
  std::sort(b.begin(), b.end());
  return b;
}

template <class F>
auto unit_integral(const Model& m, F&& f) {
  // absolute floor keeps exact cancellations (e.g. the residual of a
  // critical model, which integrates to zero pointwise up to roundoff)
  // from stalling the purely relative refinement
  IntegrateOptions opt;
  opt.abs_tol = 1e-13;
  return integrate_split(std::forward<F>(f), 0.0, 1.0, model_breaks(m), opt);
}

// real z lies on (or within eps of) one of the pole segments {1/f(s)}, {-g(s)}
bool on_pole_segment(Complex z, const Model& m, double eps = 1e-12) {
  if (std::abs(z.imag()) > eps) return false;
  double x = z.real();
  double fmin = m.f.min_on_unit(), fmax = m.f.max_on_unit();
  double gmin = m.g.min_on_unit(), gmax = m.g.max_on_unit();
  double flo = fmax > 0 ? 1.0 / fmax : kInf;
  double fhi = fmin > 0 ? 1.0 / fmin : kInf;
  if (x >= flo - eps && x <= fhi + eps) return true;
  if (x >= -gmax - eps && x <= -gmin + eps && gmax > 0) return true;
  return false;
}

void require_off_poles(Complex z, const Model& m) {
  if (on_pole_segment(z, m))
    throw SingularPoint("z lies on a singular segment of the action");
}

Complex guard(Complex denom) {
  if (std::abs(denom) < 1e-14)
    throw SingularPoint("integrand pole encountered");
  return denom;
}

// t(z) for real z in the pole-free inner region
double x_of_inner(double z, const Model& m) {
  return unit_integral(m, [&](double s) {
           double fv = m.f(s), gv = m.g(s);
           return fv * z / (1.0 - fv * z) + m.c * gv / (z + gv);
         });
}

// t(z) at z = 1/u for u in the pole-free outer region; u = 0 gives -1
double x_of_outer(double u, const Model& m) {
  return unit_integral(m, [&](double s) {
           double fv = m.f(s), gv = m.g(s);
           return fv / (u - fv) + m.c * gv * u / (1.0 + gv * u);
         });
}

// (z dz)^2 S / z restricted to the real inner region; sign changes of this
// function locate the inner saddle roots
double inner_d(double z, const Model& m) {
  return unit_integral(m, [&](double s) {
           double fv = m.f(s), gv = m.g(s);
           double a = 1.0 - fv * z, b = z + gv;
           return fv / (a * a) - m.c * gv / (b * b);
         });
}

// same function mapped to the outer region via z = 1/u (scaled by u^2)
double outer_v(double u, const Model& m) {
  return unit_integral(m, [&](double s) {
           double fv = m.f(s), gv = m.g(s);
           double a = u - fv, b = 1.0 + gv * u;
           return fv / (a * a) - m.c * gv / (b * b);
         });
}

double bisect(double (*h)(double, const Model&), const Model& m, double lo,
              double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (std::abs(lo) + std::abs(hi) + 1e-30);
       ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = h(mid, m);
    if ((fm < 0) == (flo < 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// sign-change scan on (A, B) with endpoint clustering
std::vector<double> scan_roots(double (*h)(double, const Model&),
                               const Model& m, double A, double B) {
  std::vector<double> roots;
  if (!(B > A)) return roots;
  const int M = 400;
  const double inset = 1e-7;
  double prev_t = 0, prev_v = 0;
  bool have_prev = false;
  for (int i = 0; i <= M; ++i) {
    double xi = (1.0 - std::cos(M_PI * i / M)) / 2.0;  // clustered at ends
    double t = A + (B - A) * (inset + (1.0 - 2.0 * inset) * xi);
    double v;
    try {
      v = h(t, m);
    } catch (const DivergentIntegral&) {
      have_prev = false;
      continue;
    }
    if (have_prev && ((v < 0) != (prev_v < 0)))
      roots.push_back(bisect(h, m, prev_t, t, prev_v));
    prev_t = t;
    prev_v = v;
    have_prev = true;
  }
  return roots;
}

Complex t1(Complex z, const Model& m, double t) {
  return unit_integral(m, [&](double s) -> Complex {
           double fv = m.f(s), gv = m.g(s);
           return fv * z / guard(1.0 - fv * z) + m.c * gv / guard(z + gv);
         }) -
         t;
}

Complex t2(Complex z, const Model& m) {
  return unit_integral(m, [&](double s) -> Complex {
    double fv = m.f(s), gv = m.g(s);
    Complex a = guard(1.0 - fv * z), b = guard(z + gv);
    return fv * z / (a * a) - m.c * gv * z / (b * b);
  });
}

Complex t3(Complex z, const Model& m) {
  return t2(z, m) + unit_integral(m, [&](double s) -> Complex {
           double fv = m.f(s), gv = m.g(s);
           Complex a = guard(1.0 - fv * z), b = guard(z + gv);
           return 2.0 * fv * fv * z * z / (a * a * a) +
                  2.0 * m.c * gv * z * z / (b * b * b);
         });
}

// damped Newton on (z dz)S = 0 with derivative T2/z
Complex newton_t1(double t, const Model& m, Complex z, bool& ok) {
  ok = false;
  Complex r = t1(z, m, t);
  for (int it = 0; it < 80; ++it) {
    if (std::abs(r) < 1e-12 * (1.0 + std::abs(t))) {
      ok = true;
      return z;
    }
    Complex dr = t2(z, m) / z;
    if (std::abs(dr) < 1e-300) return z;
    Complex step = r / dr;
    for (int damp = 0; damp < 12; ++damp) {
      Complex zn = z - step;
      if (zn.imag() < 0.0) zn = std::conj(zn);
      try {
        Complex rn = t1(zn, m, t);
        if (std::abs(rn) < std::abs(r) || damp == 11) {
          z = zn;
          r = rn;
          break;
        }
      } catch (const Error&) {
      }
      step *= 0.5;
    }
  }
  ok = std::abs(r) < 1e-10 * (1.0 + std::abs(t));
  return z;
}

}  // namespace

Complex action(Complex z, double t, const Model& m) {
  if (std::abs(z) < 1e-12) throw SingularPoint("action is singular at z = 0");
  require_off_poles(z, m);
  Complex logs = unit_integral(m, [&](double s) -> Complex {
    double fv = m.f(s), gv = m.g(s);
    return -std::log(guard(1.0 - fv * z)) -
           m.c * std::log(guard(1.0 + gv / z));
  });
  return logs - t * std::log(z);
}

Complex zdz_derivatives(Complex z, const Model& m, int order, double t) {
  require_off_poles(z, m);
  switch (order) {
    case 1:
      return t1(z, m, t);
    case 2:
      return t2(z, m);
    case 3:
      return t3(z, m);
    default:
      throw InvalidArgument("derivative order must be 1, 2 or 3");
  }
}

double saddle_position(double z, const Model& m) {
  require_off_poles(Complex(z, 0.0), m);
  return x_of_inner(z, m);
}

SupportData support(const Model& m) {
  if (!(m.c > 0)) throw InvalidParams("aspect ratio c must be positive");
  double fmin = m.f.min_on_unit(), fmax = m.f.max_on_unit();
  double gmin = m.g.min_on_unit(), gmax = m.g.max_on_unit();
  if (!(fmax > 0) || !(gmin > 0))
    throw InvalidParams("densities must be positive for the saddle analysis");

  struct Root {
    double z, x;
  };
  std::vector<Root> roots;
  // inner region between the two pole families
  for (double z : scan_roots(&inner_d, m, -gmin, 1.0 / fmax))
    roots.push_back({z, x_of_inner(z, m)});
  // outer region through infinity, parametrized by u = 1/z
  double ulo = gmax > 0 ? -1.0 / gmax : -kInf;
  if (std::isinf(gmax)) ulo = 0.0;
  for (double u : scan_roots(&outer_v, m, ulo, fmin)) {
    if (std::abs(u) < 1e-13)
      roots.push_back({kInf, -1.0});
    else
      roots.push_back({1.0 / u, x_of_outer(u, m)});
  }
  if (roots.size() != 2)
    throw RootCountMismatch("expected exactly 2 saddle roots, found " +
                            std::to_string(roots.size()));
  if (roots[0].x > roots[1].x) std::swap(roots[0], roots[1]);
  SupportData sup;
  sup.x_minus = roots[0].x;
  sup.x_plus = roots[1].x;
  sup.z_minus = roots[0].z;
  sup.z_plus = roots[1].z;
  auto edge = [](double z) {
    if (std::isinf(z)) return 1;           // root at infinity sits at x = -1
    return z < 0.0 ? 1 : 0;
  };
  sup.edge_density_minus = edge(sup.z_minus);
  sup.edge_density_plus = edge(sup.z_plus);
  return sup;
}

Complex critical_point(double t, const Model& m, const SupportData& sup) {
  if (!(t > sup.x_minus && t < sup.x_plus))
    throw NoRoot("t outside the open support");
  // start radii from the edge saddles, but tamed: a wall-contact edge has
  // z at 0 or infinity, which says nothing about interior root magnitudes
  auto tame = [](double r) {
    if (!std::isfinite(r) || r > 1e2) return 1e2;
    return r < 1e-2 ? 1e-2 : r;
  };
  double rp = tame(std::abs(sup.z_plus)), rm = tame(std::abs(sup.z_minus));
  double tau = (sup.x_plus - t) / (sup.x_plus - sup.x_minus);
  double theta0 = M_PI * std::min(0.97, std::max(0.03, tau));
  double r0 = std::exp((1.0 - tau) * std::log(rp) + tau * std::log(rm));
  bool ok = false;
  Complex z = newton_t1(t, m, std::polar(r0, theta0), ok);
  if (!ok) {
    for (double sc : {1.0, 0.3, 3.0, 0.1, 10.0, 0.03, 30.0}) {
      for (double th : {0.5, 0.25, 0.75, 0.1, 0.9}) {
        z = newton_t1(t, m, std::polar(r0 * sc, M_PI * th), ok);
        if (ok) break;
      }
      if (ok) break;
    }
  }
  if (!ok) throw NoRoot("Newton iteration failed to locate the saddle");
  if (z.imag() < 0.0) z = std::conj(z);
  return z;
}

Complex critical_point(double t, const Model& m) {
  return critical_point(t, m, support(m));
}

double density(double t, const Model& m, const SupportData& sup) {
  if (t < -1.0) return 1.0;
  if (t > m.c) return 0.0;
  if (t <= sup.x_minus) return sup.edge_density_minus;
  if (t >= sup.x_plus) return sup.edge_density_plus;
  Complex z = critical_point(t, m, sup);
  double rho = std::atan2(z.imag(), z.real()) / M_PI;
  return std::min(1.0, std::max(0.0, rho));
}

double discrete_sine(double rho, long long d) {
  if (d == 0) return rho;
  return std::sin(M_PI * rho * d) / (M_PI * d);
}

double sine_kernel_limit(double t, double m1, double m2, const Model& m,
                         const SupportData& sup) {
  double d = m1 - m2;
  long long di = static_cast<long long>(std::llround(d));
  if (std::abs(d - di) > 1e-9)
    throw InvalidArgument("m - m' must be an integer for the sine kernel");
  return discrete_sine(density(t, m, sup), di);
}

LimitShapeCurve limit_curve(const Model& m, double grid_step) {
  if (!(grid_step > 0)) throw InvalidArgument("grid step must be positive");
  SupportData sup = support(m);
  LimitShapeCurve curve;
  for (double u = -1.0;; u += grid_step) {
    if (u > m.c - 1e-12) u = m.c;
    curve.u.push_back(u);
    if (u >= m.c) break;
  }
  std::size_t np = curve.u.size();
  curve.rho.resize(np);
  curve.omega.resize(np);
  // Gauss nodes per interval, evaluated with warm-started Newton so the
  // saddle tracks continuously along the support
  const GaussLegendre& gl = gauss_legendre(9);
  Complex zprev(0.0, 1.0);
  bool have_prev = false;
  auto rho_at = [&](double t) -> double {
    if (t <= sup.x_minus || t >= sup.x_plus)
      return density(t, m, sup);
    bool ok = false;
    if (have_prev) {
      Complex z = newton_t1(t, m, zprev, ok);
      if (ok && z.imag() >= -1e-14) {
        if (z.imag() < 0) z = std::conj(z);
        zprev = z;
        return std::min(1.0, std::max(0.0, std::atan2(z.imag(), z.real()) / M_PI));
      }
    }
    Complex z = critical_point(t, m, sup);
    zprev = z;
    have_prev = true;
    return std::min(1.0, std::max(0.0, std::atan2(z.imag(), z.real()) / M_PI));
  };
  curve.omega[0] = 1.0;
  curve.rho[0] = rho_at(curve.u[0]);
  for (std::size_t i = 1; i < np; ++i) {
    double a = curve.u[i - 1], b = curve.u[i];
    // split at support edges so each panel is smooth
    std::vector<double> cuts{a};
    for (double e : {sup.x_minus, sup.x_plus})
      if (e > a + 1e-14 && e < b - 1e-14) cuts.push_back(e);
    cuts.push_back(b);
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      double h = 0.5 * (cuts[s + 1] - cuts[s]), mid = 0.5 * (cuts[s] + cuts[s + 1]);
      for (int q = 0; q < 9; ++q)
        acc += gl.w[q] * (1.0 - 2.0 * rho_at(mid + h * gl.x[q])) * h;
    }
    curve.omega[i] = curve.omega[i - 1] + acc;
    curve.rho[i] = rho_at(curve.u[i]);
  }
  return curve;
}

double oracle_constant_density(double alpha, double c, double t) {
  if (!(alpha > 0) || !(c > 0)) throw InvalidParams("need alpha > 0, c > 0");
  double rad = alpha * (c - t) * (t + 1.0);
  if (!(rad > 0)) return t <= -1.0 ? 1.0 : 0.0;
  double arg = (alpha * (c - 1.0) + t * (1.0 - alpha)) / (2.0 * std::sqrt(rad));
  arg = std::min(1.0, std::max(-1.0, arg));
  return std::acos(arg) / M_PI;
}

void oracle_constant_support(double alpha, double c, double& xm, double& xp) {
  if (!(alpha > 0) || !(c > 0)) throw InvalidParams("need alpha > 0, c > 0");
  double s = 2.0 * std::sqrt(alpha * c);
  xm = (alpha * (c - 1.0) - s) / (alpha + 1.0);
  xp = (alpha * (c - 1.0) + s) / (alpha + 1.0);
}

Complex oracle_constant_z(double alpha, double c, double t) {
  if (!(alpha > 0) || !(c > 0)) throw InvalidParams("need alpha > 0, c > 0");
  // root of alpha(1+t) z^2 + (alpha(1+t) - (alpha c + t)) z + (c - t) = 0
  Complex A(alpha * (1.0 + t), 0.0);
  Complex B(alpha * (1.0 + t) - (alpha * c + t), 0.0);
  Complex C(c - t, 0.0);
  Complex z = (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  if (z.imag() < 0.0) z = std::conj(z);
  return z;
}

double oracle_constant_sigma(double alpha, double c) {
  if (!(alpha > 0) || !(c > 0)) throw InvalidParams("need alpha > 0, c > 0");
  if (alpha == c) return kInf;
  double num = (alpha + 1.0) * std::pow(c, 1.0 / 6.0);
  double den = std::pow(alpha, 1.0 / 6.0) *
               std::cbrt(std::pow(std::sqrt(c) - std::sqrt(alpha), 2.0)) *
               std::cbrt(std::pow(1.0 + std::sqrt(alpha * c), 2.0));
  return num / den;
}

double oracle_rho_principal(double gamma, double c, double t) {
  if (gamma == 0.0 || !(c > 0)) throw InvalidParams("need gamma != 0, c > 0");
  double rad = (1.0 - std::exp(gamma * (t + 1.0))) *
               (1.0 - std::exp(gamma * (c - t)));
  if (!(rad > 0)) return t <= -1.0 ? 1.0 : 0.0;
  double arg = (gamma < 0 ? 1.0 : -1.0) *
               std::exp(gamma - gamma * (t + 1.0) / 2.0) / 2.0 *
               (1.0 - std::exp(gamma * (c - 1.0))) / std::sqrt(rad);
  arg = std::min(1.0, std::max(-1.0, arg));
  return std::acos(arg) / M_PI;
}

void oracle_xpm_principal(double gamma, double c, double& xm, double& xp) {
  if (gamma == 0.0 || !(c > 0)) throw InvalidParams("need gamma != 0, c > 0");
  double base = 3.0 * std::exp((c + 1.0) * gamma) - std::exp(c * gamma) -
                std::exp(gamma) + 3.0;
  double rad = (std::exp(gamma) - 1.0) * (std::exp(c * gamma) - 1.0) *
               (std::exp((c + 1.0) * gamma) + 1.0);
  double R = 2.0 * std::sqrt(2.0) * std::sqrt(rad);
  double den = std::pow(1.0 + std::exp(c * gamma), 2.0);
  double sg = gamma > 0 ? 1.0 : -1.0;
  double a = -sg / gamma * std::log((base - R) / den);
  double b = -sg / gamma * std::log((base + R) / den);
  xm = std::min(a, b);
  xp = std::max(a, b);
}

double oracle_rho_principal_inverse(double gamma, double c, double t) {
  if (gamma == 0.0 || !(c > 0)) throw InvalidParams("need gamma != 0, c > 0");
  double rad = (1.0 - std::exp(gamma * (t + 1.0))) *
               (1.0 - std::exp(gamma * (c - t)));
  if (!(rad > 0)) return t <= -1.0 ? 1.0 : 0.0;
  double num = 1.0 - std::exp(gamma * c) - std::exp(gamma * (c - t - 1.0)) +
               std::exp(gamma * (c - t));
  double arg = (gamma < 0 ? 1.0 : -1.0) *
               std::exp(gamma / 2.0 * (t + 1.0 - c)) / 2.0 * num /
               std::sqrt(rad);
  arg = std::min(1.0, std::max(-1.0, arg));
  return std::acos(arg) / M_PI;
}

void oracle_xpm_principal_inverse(double gamma, double c, double& xm,
                                  double& xp) {
  if (gamma == 0.0 || !(c > 0)) throw InvalidParams("need gamma != 0, c > 0");
  double rad = (std::exp(2.0 * gamma * c) - 1.0) * (std::exp(2.0 * gamma) - 1.0);
  double R = std::sqrt(rad);
  double a = -1.0 - std::log(2.0) / gamma +
             std::log(1.0 + std::exp(gamma * (c + 1.0)) + R) / gamma;
  double b = -1.0 - std::log(2.0) / gamma +
             std::log(1.0 + std::exp(gamma * (c + 1.0)) - R) / gamma;
  xm = std::min(a, b);
  xp = std::max(a, b);
}

OracleValues example_oracles(int name, const std::vector<double>& params,
                             double t) {
  if (params.size() != 2) throw InvalidParams("expected two parameters");
  OracleValues out;
  switch (name) {
    case 1:
      out.rho = oracle_constant_density(params[0], params[1], t);
      oracle_constant_support(params[0], params[1], out.x_minus, out.x_plus);
      return out;
    case 2:
      out.rho = oracle_rho_principal(params[0], params[1], t);
      oracle_xpm_principal(params[0], params[1], out.x_minus, out.x_plus);
      return out;
    case 3:
      out.rho = oracle_rho_principal_inverse(params[0], params[1], t);
      oracle_xpm_principal_inverse(params[0], params[1], out.x_minus,
                                   out.x_plus);
      return out;
    default:
      throw InvalidParams("example name must be 1, 2 or 3");
  }
}

}  // namespace dsm
