#pragma once

#include <cstdint>

#include "dsm/density.hpp"

namespace dsm {

struct CriticalData {
  double residual = 0.0;  // int f - c int 1/g; critical iff ~0
  double s2 = 0.0;        // S''(0) = int f^2 + c int 1/g^2
};

CriticalData critical_residual(const Model& m);

// entry of the discrete critical kernel; sum over ell to floor((delta-j-1)/2)
double k_crit(int i, int j, int delta);

// det(I - K_crit) over the top delta positions = P(lambda_1 <= nc - delta)
double gap_probability(int delta);

// finite-n corner kernel at half-integer h, h'; Hankel loop evaluation
double finite_corner_kernel(double h, double hprime, long long n,
                            const Model& m);

// det(delta_ij - K_n(i+1/2, j+1/2)); converges to gap_probability as n grows
double finite_corner_gap(int delta, long long n, const Model& m);

struct GapEstimate {
  double empirical = 0.0;
  double std_error = 0.0;
};

GapEstimate critical_gap_mc(const Model& m, int n, int delta, int samples,
                            std::uint64_t seed, int workers = 1);

}  // namespace dsm
