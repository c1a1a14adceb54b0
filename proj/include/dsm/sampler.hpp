#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "dsm/density.hpp"
#include "dsm/errors.hpp"
#include "dsm/partition.hpp"
#include "dsm/rng.hpp"

namespace dsm {

// Bernoulli site percolation environment: P(bit(i,j) = 1) = x_i y_j/(1+x_i y_j)
struct Environment {
  int n = 0, k = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> bits;  // row-major, n*k entries

  std::uint8_t bit(int i, int j) const {  // 1-based
    return bits[static_cast<std::size_t>(i - 1) * k + (j - 1)];
  }
};

// bits are a pure function of (seed, i, j); same seed reproduces exactly
inline Environment sample_environment(const XY& xy, std::uint64_t seed) {
  Environment env;
  env.n = xy.n();
  env.k = xy.k();
  env.seed = seed;
  env.bits.resize(static_cast<std::size_t>(env.n) * env.k);
  CounterRng rng(seed);
  std::size_t cell = 0;
  for (int i = 0; i < env.n; ++i)
    for (int j = 0; j < env.k; ++j, ++cell) {
      double q = xy.x[i] * xy.y[j];
      env.bits[cell] = rng.unit(cell) < q / (1.0 + q) ? 1 : 0;
    }
  return env;
}

// Longest chain of 1-cells with column strictly increasing and row weakly
// increasing, by one O(nk) sweep.  D[i] = best length over columns seen so
// far among chains whose last row is <= i+1; monotone in i.
inline int lpp_statistic(const Environment& env) {
  std::vector<int> D(static_cast<std::size_t>(env.n), 0);
  for (int j = 1; j <= env.k; ++j) {
    int best = 0;
    for (int i = 1; i <= env.n; ++i) {
      int pv = D[i - 1];
      if (env.bit(i, j) && pv + 1 > best) best = pv + 1;
      if (best > pv) D[i - 1] = best;
    }
  }
  return env.n ? D[env.n - 1] : 0;
}

// Dual RSK shape: insert the row-major word of column indices with
// "bump the leftmost entry >= x" (rows strictly increasing).  Greene's
// theorem gives lambda_1 = lpp_statistic and lambda inside the n x k box.
inline Partition rsk_shape(const Environment& env) {
  std::vector<std::vector<int>> rows;
  for (int i = 1; i <= env.n; ++i)
    for (int j = 1; j <= env.k; ++j) {
      if (!env.bit(i, j)) continue;
      int x = j;
      for (std::size_t r = 0;; ++r) {
        if (r == rows.size()) {
          rows.push_back({x});
          break;
        }
        auto it = std::lower_bound(rows[r].begin(), rows[r].end(), x);
        if (it == rows[r].end()) {
          rows[r].push_back(x);
          break;
        }
        std::swap(x, *it);
      }
    }
  std::vector<int> parts(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    parts[r] = static_cast<int>(rows[r].size());
  return Partition(std::move(parts));
}

// exact draw from the dual Schur measure
inline Partition sample_partition(const XY& xy, std::uint64_t seed) {
  return rsk_shape(sample_environment(xy, seed));
}

enum class Statistic { Lambda1, Size, Shape, EdgeConvex, EdgeConcave };

inline const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::Lambda1: return "lambda1";
    case Statistic::Size: return "size";
    case Statistic::Shape: return "shape";
    case Statistic::EdgeConvex: return "edge-convex";
    case Statistic::EdgeConcave: return "edge-concave";
  }
  return "?";
}

struct SampleBatch {
  int n = 0, k = 0;
  std::uint64_t seed = 0;
  int count = 0, workers = 1;
  Statistic statistic = Statistic::Lambda1;
  std::vector<double> values;      // scalar statistics, index = sample id
  std::vector<Partition> shapes;   // filled for Statistic::Shape
  double wall_ms = 0.0;
};

// Deterministic parallel Monte Carlo: sample i uses seed sample_seed(seed,i),
// so the batch depends only on (xy, count, statistic, seed).
inline SampleBatch monte_carlo(const XY& xy, int count, Statistic stat,
                               std::uint64_t seed, int workers = 1) {
  if (count < 1) throw InvalidArgument("sample count must be >= 1");
  if (workers < 1) throw InvalidArgument("worker count must be >= 1");
  SampleBatch batch;
  batch.n = xy.n();
  batch.k = xy.k();
  batch.seed = seed;
  batch.count = count;
  batch.workers = workers;
  batch.statistic = stat;
  bool full_shape =
      stat == Statistic::Shape || stat == Statistic::EdgeConcave;
  if (stat == Statistic::Shape)
    batch.shapes.resize(static_cast<std::size_t>(count));
  else
    batch.values.resize(static_cast<std::size_t>(count));
  auto t0 = std::chrono::steady_clock::now();
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int s = next.fetch_add(1);
      if (s >= count) return;
      Environment env = sample_environment(xy, sample_seed(seed, s));
      if (stat == Statistic::Size) {
        // |lambda| equals the number of letters dual RSK inserts
        batch.values[s] = std::accumulate(env.bits.begin(), env.bits.end(), 0.0);
        continue;
      }
      if (!full_shape) {
        batch.values[s] = lpp_statistic(env);
        continue;
      }
      Partition lam = rsk_shape(env);
      switch (stat) {
        case Statistic::Shape:
          batch.shapes[s] = std::move(lam);
          break;
        case Statistic::Size:
          batch.values[s] = static_cast<double>(lam.weight());
          break;
        case Statistic::EdgeConcave: {
          int full = 0;
          for (int p : lam.parts) full += p == env.k;
          batch.values[s] = env.n - full;
          break;
        }
        default:
          break;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  batch.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return batch;
}

}  // namespace dsm
