#include "dsm/critical.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <Eigen/Dense>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"
#include "dsm/sampler.hpp"

namespace dsm {

namespace {

double fact(long long m) {
  double r = 1.0;
  for (long long i = 2; i <= m; ++i) r *= static_cast<double>(i);
  return r;
}

// Gamma(twice_x / 2) for odd twice_x; reflection below 0 keeps half-integer
// arguments exact up to rounding
double gamma_half(long long twice_x) {
  long long m = (twice_x - 1) / 2;  // argument = m + 1/2
  if (m >= 0) return std::tgamma(twice_x / 2.0);
  double sign = (m & 1) ? -1.0 : 1.0;  // sin(pi(m+1/2)) = (-1)^m
  return M_PI / (sign * std::tgamma(0.5 - static_cast<double>(m)));
}

void check_critical(const CriticalData& cd) {
  if (std::abs(cd.residual) >= 1e-10)
    throw NotCritical("specialization is not critical: residual = " +
                      std::to_string(cd.residual));
}

}  // namespace

CriticalData critical_residual(const Model& m) {
  std::vector<double> br = m.f.breakpoints();
  for (double t : m.g.breakpoints()) br.push_back(t);
  std::sort(br.begin(), br.end());
  CriticalData cd;
  double intf = integrate_split([&](double s) { return m.f(s); }, 0.0, 1.0, br);
  double intg =
      integrate_split([&](double s) { return 1.0 / m.g(s); }, 0.0, 1.0, br);
  cd.residual = intf - m.c * intg;
  double intf2 =
      integrate_split([&](double s) { double v = m.f(s); return v * v; }, 0.0,
                      1.0, br);
  double intg2 =
      integrate_split([&](double s) { double v = m.g(s); return 1.0 / (v * v); },
                      0.0, 1.0, br);
  cd.s2 = intf2 + m.c * intg2;
  return cd;
}

double k_crit(int i, int j, int delta) {
  if (delta < 1) throw InvalidArgument("delta must be at least 1");
  if (i < 0 || j < 0 || i > delta - 1 || j > delta - 1)
    throw InvalidArgument("kernel indices must lie in [0, delta-1]");
  int lmax = (delta - j - 1) / 2;
  double sum = 0.0;
  int diff = j - i;
  for (int ell = 0; ell <= lmax; ++ell) {
    if (diff % 2 == 0) {
      int a = ell + diff / 2;
      if (a <= 0)  // sin pole of Gamma cancel to the integer branch
        sum += 0.5 * ((ell & 1) ? -1.0 : 1.0) / (fact(ell) * fact(-a));
      // a > 0: sin(pi * diff / 2) = 0 kills the term
    } else {
      int q = ((diff % 4) + 4) % 4;  // sin(pi diff/2): 1 -> +1, 3 -> -1
      double s = (q == 1) ? 1.0 : -1.0;
      sum += s / (2.0 * M_PI) / fact(ell) * gamma_half(2 * ell + diff);
    }
  }
  return sum;
}

double gap_probability(int delta) {
  if (delta < 1) throw InvalidArgument("delta must be at least 1");
  Eigen::MatrixXd k(delta, delta);
  for (int i = 0; i < delta; ++i)
    for (int j = 0; j < delta; ++j) k(i, j) = k_crit(i, j, delta);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(delta, delta) - k;
  return a.determinant();
}

double finite_corner_kernel(double h, double hprime, long long n,
                            const Model& m) {
  long long hi = std::llround(h - 0.5), hpi = std::llround(hprime - 0.5);
  if (std::abs(h - 0.5 - static_cast<double>(hi)) > 1e-9 ||
      std::abs(hprime - 0.5 - static_cast<double>(hpi)) > 1e-9 || hi < 0 ||
      hpi < 0)
    throw InvalidArgument("h and h' must be positive half-integers");
  if (n < 1) throw InvalidArgument("n must be positive");
  CriticalData cd = critical_residual(m);
  check_critical(cd);

  long long d = hi - hpi;  // h - h'
  long long lmax = hpi / 2;  // floor(h'/2 - 1/4)
  double kappa = static_cast<double>(n) * cd.s2;
  std::complex<double> phase =
      std::exp(std::complex<double>(0.0, -M_PI * (d + 1) / 2.0));
  double pref = std::pow(2.0, d / 2.0 - 1.0) / std::pow(kappa, d / 2.0);
  std::complex<double> acc(0.0, 0.0);
  for (long long ell = 0; ell <= lmax; ++ell) {
    std::complex<double> loop;  // the t-integral from infinity around 0
    if (d % 2 == 0) {
      long long a = d / 2 + ell;
      if (a > 0) continue;  // single-valued integrand: closed loop vanishes
      double sgn = (a & 1) ? -1.0 : 1.0;  // (-1)^{(h-h')/2 + ell}
      loop = sgn * std::complex<double>(0.0, 2.0 * M_PI) / fact(-a);
    } else {
      double a = d / 2.0 + static_cast<double>(ell);
      std::complex<double> wind =
          std::exp(std::complex<double>(0.0, 2.0 * M_PI * a)) - 1.0;
      loop = wind * gamma_half(d + 2 * ell);
    }
    acc += phase * pref / fact(ell) * loop;
  }
  acc /= 2.0 * M_PI;
  if (std::abs(acc.imag()) > std::max(1e-12, 1e-13 * std::abs(acc.real())))
    throw NoConvergence("corner kernel did not assemble to a real value");
  return acc.real();
}

double finite_corner_gap(int delta, long long n, const Model& m) {
  if (delta < 1) throw InvalidArgument("delta must be at least 1");
  Eigen::MatrixXd k(delta, delta);
  for (int i = 0; i < delta; ++i)
    for (int j = 0; j < delta; ++j)
      k(i, j) = finite_corner_kernel(i + 0.5, j + 0.5, n, m);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(delta, delta) - k;
  return a.determinant();
}

GapEstimate critical_gap_mc(const Model& m, int n, int delta, int samples,
                            std::uint64_t seed, int workers) {
  if (delta < 1) throw InvalidArgument("delta must be at least 1");
  if (samples < 1) throw InvalidArgument("need at least one sample");
  CriticalData cd = critical_residual(m);
  check_critical(cd);
  double nc = m.c * static_cast<double>(n);
  long long k = std::llround(nc);
  if (std::abs(nc - static_cast<double>(k)) > 1e-9)
    throw InvalidArgument("n c must be an integer so that k = c n is exact");
  XY xy = discretize(m, n);
  SampleBatch batch = monte_carlo(xy, samples, Statistic::Lambda1, seed, workers);
  long long threshold = k - delta;
  long long count = 0;
  for (double v : batch.values)
    if (static_cast<long long>(std::llround(v)) <= threshold) ++count;
  GapEstimate est;
  est.empirical = static_cast<double>(count) / samples;
  est.std_error =
      std::sqrt(std::max(0.0, est.empirical * (1.0 - est.empirical) /
                                  static_cast<double>(samples)));
  return est;
}

}  // namespace dsm
