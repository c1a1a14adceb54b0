#pragma once

#include <complex>
#include <vector>

#include "dsm/density.hpp"

namespace dsm {

using Complex = std::complex<double>;

// Support of the bulk density and the saddle roots that produce it.
// z_minus/z_plus may be +-infinity (root at u = 1/z = 0).
struct SupportData {
  double z_minus = 0.0, z_plus = 0.0;
  double x_minus = 0.0, x_plus = 0.0;
  int edge_density_minus = 1;  // rho just left of x_minus
  int edge_density_plus = 0;   // rho just right of x_plus
};

struct LimitShapeCurve {
  std::vector<double> u, omega, rho;
};

struct OracleValues {
  double rho = 0.0, x_minus = 0.0, x_plus = 0.0;
};

// action S(z;t) = -int ln(1-f z) - c int ln(1+g/z) - t ln z
Complex action(Complex z, double t, const Model& m);

// (z d/dz)^order of S; order 1 carries the -t term
Complex zdz_derivatives(Complex z, const Model& m, int order, double t = 0.0);

// saddle t(z) = int f z/(1-f z) + c int g/(z+g) for real z off the poles
double saddle_position(double z, const Model& m);

SupportData support(const Model& m);

// upper-half-plane root of (z dz)S = 0 for t in the open support
Complex critical_point(double t, const Model& m);
Complex critical_point(double t, const Model& m, const SupportData& sup);

// rho(t) = arg z(t)/pi inside the support, edge values outside,
// 1 below t = -1 and 0 above t = c
double density(double t, const Model& m, const SupportData& sup);

// Omega(u) = 1 + int_{-1}^u (1 - 2 rho); 1-Lipschitz
LimitShapeCurve limit_curve(const Model& m, double grid_step);

// discrete sine kernel sin(pi rho d)/(pi d), value rho on the diagonal
double discrete_sine(double rho, long long d);
double sine_kernel_limit(double t, double m1, double m2, const Model& m,
                         const SupportData& sup);

// closed forms from the worked constant and geometric specializations
double oracle_constant_density(double alpha, double c, double t);
void oracle_constant_support(double alpha, double c, double& xm, double& xp);
Complex oracle_constant_z(double alpha, double c, double t);
double oracle_constant_sigma(double alpha, double c);  // inf when alpha == c
double oracle_rho_principal(double gamma, double c, double t);
void oracle_xpm_principal(double gamma, double c, double& xm, double& xp);
double oracle_rho_principal_inverse(double gamma, double c, double t);
void oracle_xpm_principal_inverse(double gamma, double c, double& xm,
                                  double& xp);

// name = 1 (constant, params {alpha, c}), 2 or 3 (geometric, params
// {gamma, c}); returns the published closed forms for that example
OracleValues example_oracles(int name, const std::vector<double>& params,
                             double t);

}  // namespace dsm
