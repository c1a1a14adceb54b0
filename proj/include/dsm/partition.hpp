#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {

// Integer partition stored as its nonzero parts, weakly decreasing.
struct Partition {
  std::vector<int> parts;

  Partition() = default;

  Partition(std::initializer_list<int> xs) : Partition(std::vector<int>(xs)) {}

  explicit Partition(std::vector<int> xs) : parts(std::move(xs)) {
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
      if (parts[i] < parts[i + 1])
        throw InvalidArgument("partition parts must be weakly decreasing");
    if (!parts.empty() && parts.back() < 0)
      throw InvalidArgument("partition parts must be nonnegative");
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
  }

  int rows() const { return static_cast<int>(parts.size()); }

  // 1-based part access; zero beyond the last row
  int part(int i) const {
    return (i >= 1 && i <= rows()) ? parts[i - 1] : 0;
  }

  long long weight() const {
    long long s = 0;
    for (int p : parts) s += p;
    return s;
  }

  bool operator==(const Partition& o) const { return parts == o.parts; }
  bool operator!=(const Partition& o) const { return parts != o.parts; }
};

inline bool in_box(const Partition& lam, int n, int k) {
  return lam.rows() <= n && (lam.rows() == 0 || lam.parts[0] <= k);
}

inline void require_in_box(const Partition& lam, int n, int k) {
  if (!in_box(lam, n, k))
    throw BoxViolation("partition exceeds the " + std::to_string(n) + "x" +
                       std::to_string(k) + " box");
}

inline Partition conjugate(const Partition& lam) {
  if (lam.rows() == 0) return {};
  std::vector<int> out(lam.parts[0], 0);
  for (int p : lam.parts)
    for (int j = 0; j < p; ++j) ++out[j];
  return Partition(std::move(out));
}

// complement inside the n x k box, rotated by 180 degrees
inline Partition complement(const Partition& lam, int n, int k) {
  require_in_box(lam, n, k);
  std::vector<int> out(n);
  for (int i = 1; i <= n; ++i) out[i - 1] = k - lam.part(n + 1 - i);
  return Partition(std::move(out));
}

// sum of (i-1) * lambda_i
inline long long weighted_size(const Partition& lam) {
  long long s = 0;
  for (int i = 1; i <= lam.rows(); ++i)
    s += static_cast<long long>(i - 1) * lam.part(i);
  return s;
}

// particle positions lambda_i - i + 1/2 for i = 1..depth
inline std::vector<double> maya(const Partition& lam, int depth) {
  if (depth < 0) throw InvalidArgument("maya depth must be nonnegative");
  std::vector<double> out(depth);
  for (int i = 1; i <= depth; ++i) out[i - 1] = lam.part(i) - i + 0.5;
  return out;
}

// continuous piecewise-linear function with slope-(+-1) extension outside
// its breakpoint range
struct PiecewiseLinear {
  std::vector<double> u;  // strictly increasing
  std::vector<double> v;

  double operator()(double x) const {
    if (u.empty()) return 0.0;
    if (x <= u.front()) return v.front() + (u.front() - x);
    if (x >= u.back()) return v.back() + (x - u.back());
    auto it = std::upper_bound(u.begin(), u.end(), x);
    std::size_t i = static_cast<std::size_t>(it - u.begin());
    double w = (x - u[i - 1]) / (u[i] - u[i - 1]);
    return v[i - 1] + w * (v[i] - v[i - 1]);
  }
};

// Rescaled boundary profile of lambda in the n x k box: the Young diagram
// border in Russian coordinates, scaled by 1/n in both directions.  Slope is
// -1 across the cell [(a-1/2)/n, (a+1/2)/n] of each particle a = lambda_i-i+1/2
// and +1 elsewhere; for the empty partition the profile is |u| exactly.
inline PiecewiseLinear profile(const Partition& lam, int n, int k) {
  if (n < 1 || k < 0) throw InvalidArgument("profile needs n >= 1, k >= 0");
  require_in_box(lam, n, k);
  const double uL = -(n + 1.0) / n;
  const double uR = (k + 1.0) / n;
  // walk right to left, anchored at profile(uR) = uR
  std::vector<double> us{uR}, vs{uR};
  double cu = uR, cv = uR;
  for (int i = 1; i <= n + 2; ++i) {
    double a = lam.part(i) - i + 0.5;
    double hi = (a + 0.5) / n, lo = (a - 0.5) / n;
    if (hi < uL) break;     // cell entirely left of the domain
    if (hi < cu - 1e-15) {         // ascent gap, slope +1
      cv -= cu - hi;
      cu = hi;
      us.push_back(cu);
      vs.push_back(cv);
    }
    double stop = std::max(lo, uL);  // descent cell, slope -1
    cv += cu - stop;
    cu = stop;
    us.push_back(cu);
    vs.push_back(cv);
    if (cu <= uL + 1e-15) break;
  }
  if (cu > uL + 1e-15) {  // left of all cells the profile continues as -u
    vs.push_back(cv + (cu - uL));
    us.push_back(uL);
  }
  std::reverse(us.begin(), us.end());
  std::reverse(vs.begin(), vs.end());
  return PiecewiseLinear{std::move(us), std::move(vs)};
}

// number of partitions inside the n x k box = C(n+k, n), as a double
inline double box_count(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= std::min(n, k); ++i)
    c *= static_cast<double>(std::max(n, k) + i) / i;
  return c;
}

inline long long default_enum_cap() {
  if (const char* s = std::getenv("DUAL_SCHUR_MAX_ENUM")) {
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw ConfigInvalid("DUAL_SCHUR_MAX_ENUM must be a positive integer");
  }
  return 1000000;
}

// all partitions in the n x k box in colex order (last differing part
// decides; lambda_1 varies fastest)
inline std::vector<Partition> enumerate_box(int n, int k, long long cap = -1) {
  if (n < 0 || k < 0) throw InvalidArgument("box dimensions must be >= 0");
  if (cap < 0) cap = default_enum_cap();
  if (box_count(n, k) > static_cast<double>(cap))
    throw TooLarge("box holds more than " + std::to_string(cap) +
                   " partitions");
  std::vector<Partition> out;
  std::vector<int> cur(std::max(n, 1), 0);
  std::function<void(int, int)> rec = [&](int i, int lo) {
    if (i == 0) {
      // cur[0] >= cur[1] >= ... already: cur is the partition itself
      out.push_back(Partition(std::vector<int>(cur.begin(), cur.begin() + n)));
      return;
    }
    for (int v = lo; v <= k; ++v) {
      cur[i - 1] = v;
      rec(i - 1, v);
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(n, 0);
  return out;
}

}  // namespace dsm
