#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "dsm/density.hpp"
#include "dsm/errors.hpp"
#include "dsm/partition.hpp"

namespace dsm {

// complete homogeneous symmetric polynomials h_0..h_M of the given variables
inline std::vector<double> complete_homogeneous(const Eigen::VectorXd& x,
                                                int M) {
  std::vector<double> h(static_cast<std::size_t>(M) + 1, 0.0);
  h[0] = 1.0;
  for (int v = 0; v < x.size(); ++v)
    for (int m = 1; m <= M; ++m) h[m] += x[v] * h[m - 1];
  return h;
}

// Schur polynomial s_lambda(x) by the Jacobi-Trudi determinant
// det[h_{lambda_i - i + j}].  Zero when lambda has more rows than variables.
inline double schur(const Partition& lam, const Eigen::VectorXd& x) {
  int r = lam.rows();
  if (r == 0) return 1.0;
  if (r > x.size()) return 0.0;
  auto h = complete_homogeneous(x, lam.part(1) + r);
  Eigen::MatrixXd A(r, r);
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      int m = lam.part(i) - i + j;
      A(i - 1, j - 1) = m < 0 ? 0.0 : h[m];
    }
  return A.determinant();
}

// log s_lambda(x) for positive variables, stable for large boxes: factor out
// max x by homogeneity, then accumulate the LU diagonal in logs.  s is
// positive here, so the log is well defined.
inline double log_schur(const Partition& lam, const Eigen::VectorXd& x) {
  int r = lam.rows();
  if (r == 0) return 0.0;
  if (r > x.size()) return -std::numeric_limits<double>::infinity();
  double rho = x.maxCoeff();
  auto h = complete_homogeneous(x / rho, lam.part(1) + r);
  Eigen::MatrixXd A(r, r);
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      int m = lam.part(i) - i + j;
      A(i - 1, j - 1) = m < 0 ? 0.0 : h[m];
    }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  double logdet = 0.0;
  for (int i = 0; i < r; ++i) {
    double d = std::abs(lu.matrixLU()(i, i));
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    logdet += std::log(d);
  }
  return lam.weight() * std::log(rho) + logdet;
}

inline double log_e_product(const XY& xy) {
  double s = 0.0;
  for (int i = 0; i < xy.n(); ++i)
    for (int j = 0; j < xy.k(); ++j) s += std::log1p(xy.x[i] * xy.y[j]);
  return s;
}

// E(X;Y) = prod (1 + x_i y_j), the dual Cauchy normalizer
inline double e_product(const XY& xy) { return std::exp(log_e_product(xy)); }

inline double log_measure_weight(const Partition& lam, const XY& xy) {
  if (!in_box(lam, xy.n(), xy.k()))
    return -std::numeric_limits<double>::infinity();
  return log_schur(lam, xy.x) + log_schur(conjugate(lam), xy.y) -
         log_e_product(xy);
}

// mu(lambda | X, Y) = s_lambda(X) s_lambda'(Y) / E(X;Y); zero outside the box
inline double measure_weight(const Partition& lam, const XY& xy) {
  if (!in_box(lam, xy.n(), xy.k())) return 0.0;
  if (static_cast<long long>(xy.n()) * xy.k() > 200)
    return std::exp(log_measure_weight(lam, xy));
  return schur(lam, xy.x) * schur(conjugate(lam), xy.y) / e_product(xy);
}

struct ExactDistribution {
  std::vector<Partition> lambdas;   // colex order
  std::vector<double> weights;      // s_lambda(X) s_lambda'(Y)
  std::vector<double> probability;  // weights / E(X;Y)
  double normalizer = 0.0;          // E(X;Y)
};

// full measure over the n x k box; cap guards combinatorial explosion
inline ExactDistribution enumerate_measure(const XY& xy, long long cap = -1) {
  ExactDistribution d;
  d.lambdas = enumerate_box(xy.n(), xy.k(), cap);
  d.normalizer = e_product(xy);
  d.weights.reserve(d.lambdas.size());
  d.probability.reserve(d.lambdas.size());
  for (const Partition& lam : d.lambdas) {
    double w = schur(lam, xy.x) * schur(conjugate(lam), xy.y);
    d.weights.push_back(w);
    d.probability.push_back(w / d.normalizer);
  }
  return d;
}

// |mu_{n,k}(lambda | X,Y) - mu_{k,n}(lambda' | Y,X)|, which is exactly zero
// by the symmetry of the construction
inline double transpose_symmetry_check(const Partition& lam, const XY& xy) {
  XY swapped{xy.y, xy.x};
  return std::abs(measure_weight(lam, xy) -
                  measure_weight(conjugate(lam), swapped));
}

}  // namespace dsm
