#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "harmlab/builders.hpp"
#include "harmlab/graph.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random spanning tree plus `extra` random chords.
inline harmlab::OrientedGraph connected_graph(Rng& rng, int n, int extra) {
  std::vector<std::pair<harmlab::VertexId, harmlab::VertexId>> pairs;
  std::vector<std::vector<char>> seen(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  auto add = [&](int a, int b) {
    if (a == b || seen[a][b]) return;
    seen[a][b] = seen[b][a] = 1;
    pairs.emplace_back(a, b);
  };
  for (int v = 1; v < n; ++v) add(v, uniform_int(rng, 0, v - 1));
  for (int i = 0; i < extra; ++i) add(uniform_int(rng, 0, n - 1), uniform_int(rng, 0, n - 1));
  return harmlab::OrientedGraph::from_pairs(n, pairs);
}

template <class F>
F random_field(Rng& rng, std::size_t size, double lo = -1.0, double hi = 1.0) {
  F f(size);
  for (std::size_t i = 0; i < size; ++i) f[i] = uniform_real(rng, lo, hi);
  return f;
}

// Probability vector on `size` points; some entries zeroed to vary the support.
inline std::vector<double> random_probability(Rng& rng, std::size_t size, double zero_fraction = 0.3) {
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& x : p) {
    x = uniform_real(rng) < zero_fraction ? 0.0 : -std::log(uniform_real(rng, 1e-12, 1.0));
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Random nonnegative mass on vertices in `pool`, total `mass`.
inline harmlab::VertexField random_measure(Rng& rng, harmlab::VertexId n, const std::vector<harmlab::VertexId>& pool,
                                           int support, double mass = 1.0) {
  harmlab::VertexField f(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < support; ++i) {
    const auto v = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    const double m = uniform_real(rng, 0.05, 1.0);
    f[static_cast<std::size_t>(v)] += m;
    total += m;
  }
  f *= mass / total;
  return f;
}

}  // namespace testgen
