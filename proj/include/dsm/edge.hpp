#pragma once

#include <functional>
#include <vector>

#include "dsm/density.hpp"
#include "dsm/limit_shape.hpp"
#include "dsm/partition.hpp"

namespace dsm {

enum class Branch { Convex, Concave, Critical };

const char* branch_name(Branch b);

// convex when int f < c int 1/g (a divergent int 1/g settles it), concave
// for the reverse inequality, critical on equality
Branch branch(const Model& m);

struct EdgeScaling {
  Branch branch = Branch::Convex;
  double x_plus = 0.0;
  double z_plus = 0.0;
  double sigma = 0.0;  // +inf in the critical regime
};

// sigma = (2 / (z d/dz)^3 S(z_plus))^{1/3}; +inf when the saddle sits at 0
double sigma(const Model& m, const SupportData& sup);

EdgeScaling edge_scaling(const Model& m, const SupportData& sup);

// largest row on the convex branch, n - #{rows = k} on the concave branch
double edge_statistic(const Partition& lam, const XY& xy, Branch b);

// xi = sigma (L - x_plus n) / n^{1/3}
std::vector<double> edge_rescale(const std::vector<double>& values,
                                 const EdgeScaling& scaling, int n);

double airy_ai(double x);
double airy_ai_prime(double x);

// (Ai Ai' - Ai' Ai)/(xi - eta), Ai'(xi)^2 - xi Ai(xi)^2 on the diagonal
double airy_kernel(double xi, double eta);

// Fredholm determinant of the Airy kernel on (s, inf); quad_map selects
// between two substitutions mapping (-1,1) to the half line
double tracy_widom_cdf(double s, int quad_map = 1);

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

}  // namespace dsm
