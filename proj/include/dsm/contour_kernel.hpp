#pragma once

#include <complex>
#include <vector>

#include "dsm/density.hpp"

namespace dsm {

using Complex = std::complex<double>;

// double circle contours for the correlation kernel; radii of 0 are
// replaced by the feasibility defaults for the given specialization
struct ContourConfig {
  double r_z = 0.0, r_w = 0.0;
  double center_z = 0.0, center_w = 0.0;
  int start_nodes = 64;
  int max_nodes = 32768;
  double tol = 1e-10;
};

struct KernelValue {
  double value = 0.0;
  int nodes = 0;
  double est_error = 0.0;
};

// log of prod 1/(1-x_i z) * prod 1/(1+y_j/z) as a sum of principal
// per-factor logs; exponentiates to the symbol exactly
Complex log_f_symbol(Complex z, const XY& xy);
Complex f_symbol(Complex z, const XY& xy);

// r_z the geometric mean of the two pole scales, r_w = r_z/2
ContourConfig default_contours(const XY& xy);

// K(m, m') at half-integer positions via nested circles, node doubling
KernelValue correlation_kernel(double m, double mprime, const XY& xy,
                               const ContourConfig& cfg = {});

// det[K(a_i, a_j)] over a finite set of distinct half-integer positions
double correlation_probability(const std::vector<double>& positions,
                               const XY& xy, const ContourConfig& cfg = {});

}  // namespace dsm
