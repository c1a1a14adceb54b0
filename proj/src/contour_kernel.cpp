#include "dsm/contour_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>

#include "dsm/errors.hpp"

namespace dsm {

namespace {

long long half_integer_index(double m, const char* what) {
  long long p = std::llround(m - 0.5);
  if (std::abs(m - 0.5 - static_cast<double>(p)) > 1e-9)
    throw InvalidArgument(std::string(what) +
                          " must be a half-integer particle position");
  return p;  // m = p + 1/2
}

void validate_contours(const ContourConfig& cfg, const XY& xy) {
  if (!(cfg.r_z > 0) || !(cfg.r_w > 0))
    throw ContourInfeasible("contour radii must be positive");
  Complex cz(cfg.center_z, 0.0), cw(cfg.center_w, 0.0);
  if (std::abs(cw - cz) + cfg.r_w >= cfg.r_z)
    throw ContourInfeasible("w contour is not nested inside the z contour");
  if (std::abs(cz) >= cfg.r_z || std::abs(cw) >= cfg.r_w)
    throw ContourInfeasible("contours must wind around the origin");
  for (int j = 0; j < xy.k(); ++j)
    if (std::abs(cz + Complex(xy.y[j], 0.0)) >= cfg.r_z)
      throw ContourInfeasible("z contour must enclose every -y_j");
  for (int i = 0; i < xy.n(); ++i)
    if (xy.x[i] > 0 && std::abs(cz - Complex(1.0 / xy.x[i], 0.0)) <= cfg.r_z)
      throw ContourInfeasible("z contour must exclude every 1/x_i");
}

struct NodeData {
  std::vector<Complex> pos;   // points on the circle
  std::vector<Complex> amp;   // exp(log-integrand - shift)
  double shift = 0.0;         // max real part of the log-integrand
};

// log-integrand along one circle: sgn * logF(z) + expo * Log z + log r + i t
NodeData circle_nodes(int N, double center, double r, double offset,
                      double sgn, long long expo, const XY& xy) {
  NodeData nd;
  nd.pos.resize(N);
  std::vector<Complex> lg(N);
  double max_re = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < N; ++a) {
    double th = 2.0 * M_PI * (a + offset) / N;
    Complex z = Complex(center, 0.0) + std::polar(r, th);
    nd.pos[a] = z;
    Complex l = sgn * log_f_symbol(z, xy) +
                static_cast<double>(expo) * std::log(z) +
                Complex(std::log(r), th);
    lg[a] = l;
    max_re = std::max(max_re, l.real());
  }
  nd.shift = max_re;
  nd.amp.resize(N);
  for (int a = 0; a < N; ++a) nd.amp[a] = std::exp(lg[a] - max_re);
  return nd;
}

Complex kernel_once(int N, long long p, long long q, const XY& xy,
                    const ContourConfig& cfg) {
  // z^{-m-1/2} = z^{-p-1} with p = m - 1/2; w^{m'-1/2} = w^{q}
  NodeData zn = circle_nodes(N, cfg.center_z, cfg.r_z, 0.0, +1.0, -(p + 1), xy);
  NodeData wn = circle_nodes(N, cfg.center_w, cfg.r_w, 0.5, -1.0, q, xy);
  Complex s(0.0, 0.0);
  for (int a = 0; a < N; ++a) {
    Complex za = zn.pos[a], ua = zn.amp[a];
    Complex acc(0.0, 0.0);
    for (int b = 0; b < N; ++b) acc += wn.amp[b] / (za - wn.pos[b]);
    s += ua * acc;
  }
  return std::exp(zn.shift + wn.shift) * s / (static_cast<double>(N) * N);
}

}  // namespace

Complex log_f_symbol(Complex z, const XY& xy) {
  if (std::abs(z) < 1e-12 && xy.k() > 0)
    throw PoleHit("symbol vanishes to high order at z = 0");
  Complex s(0.0, 0.0);
  for (int i = 0; i < xy.n(); ++i) {
    Complex d = 1.0 - xy.x[i] * z;
    if (std::abs(d) < 1e-12) throw PoleHit("z within 1e-12 of a pole 1/x_i");
    s -= std::log(d);
  }
  for (int j = 0; j < xy.k(); ++j) {
    Complex d = 1.0 + xy.y[j] / z;
    if (std::abs(d) < 1e-12) throw PoleHit("z within 1e-12 of a zero -y_j");
    s -= std::log(d);
  }
  return s;
}

Complex f_symbol(Complex z, const XY& xy) { return std::exp(log_f_symbol(z, xy)); }

ContourConfig default_contours(const XY& xy) {
  if (xy.n() < 1) throw InvalidArgument("need at least one row variable");
  double mx = *std::max_element(xy.x.data(), xy.x.data() + xy.n());
  ContourConfig cfg;
  if (xy.k() == 0) {
    cfg.r_z = 0.5 / mx;  // vacuum specialization: only 1/x_i to avoid
  } else {
    double my = *std::max_element(xy.y.data(), xy.y.data() + xy.k());
    if (mx * my >= 1.0)
      throw ContourInfeasible(
          "max x_i * max y_j >= 1: no circle separates -y_j from 1/x_i");
    cfg.r_z = std::sqrt(my / mx);
  }
  cfg.r_w = cfg.r_z / 2.0;
  return cfg;
}

KernelValue correlation_kernel(double m, double mprime, const XY& xy,
                               const ContourConfig& user) {
  long long p = half_integer_index(m, "m");
  long long q = half_integer_index(mprime, "m'");
  ContourConfig cfg = user;
  if (cfg.r_z <= 0 || cfg.r_w <= 0) {
    ContourConfig d = default_contours(xy);
    if (cfg.r_z <= 0) cfg.r_z = d.r_z;
    if (cfg.r_w <= 0) cfg.r_w = d.r_w;
  }
  validate_contours(cfg, xy);
  if (cfg.start_nodes < 4 || cfg.max_nodes < cfg.start_nodes)
    throw InvalidArgument("bad node budget");
  Complex prev(0.0, 0.0);
  bool have_prev = false;
  for (int N = cfg.start_nodes; N <= cfg.max_nodes; N *= 2) {
    Complex cur = kernel_once(N, p, q, xy, cfg);
    if (have_prev) {
      double est = std::abs(cur - prev);
      if (est <= cfg.tol) {
        if (std::abs(cur.imag()) > 1e-6 * std::max(1.0, std::abs(cur.real())))
          throw NoConvergence("kernel value kept a large imaginary part");
        return {cur.real(), N, est};
      }
    }
    prev = cur;
    have_prev = true;
  }
  throw NoConvergence("contour quadrature did not stabilize within the node cap");
}

double correlation_probability(const std::vector<double>& positions,
                               const XY& xy, const ContourConfig& cfg) {
  std::size_t p = positions.size();
  if (p == 0) return 1.0;
  std::vector<double> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < p; ++i)
    if (std::abs(sorted[i + 1] - sorted[i]) < 1e-9)
      throw InvalidArgument("particle positions must be distinct");
  Eigen::MatrixXd mat(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      mat(i, j) = correlation_kernel(positions[i], positions[j], xy, cfg).value;
  return mat.determinant();
}

}  // namespace dsm
