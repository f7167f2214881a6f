#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/graph.hpp"
#include "rumor/random.hpp"

namespace rumor {

/// K_n.
inline Graph generate_complete(std::size_t n) {
  if (n == 0) throw InvalidArgument("empty graph: complete graph needs n >= 1");
  std::vector<std::size_t> offsets(n + 1);
  for (std::size_t v = 0; v <= n; ++v) offsets[v] = v * (n - 1);
  std::vector<node_id> adjacency;
  adjacency.reserve(n * (n - 1));
  for (node_id v = 0; v < n; ++v)
    for (node_id w = 0; w < n; ++w)
      if (w != v) adjacency.push_back(w);
  return Graph::from_csr_unchecked(std::move(offsets), std::move(adjacency));
}

/// G(n, p). Uses geometric skipping over the C(n,2) candidate pairs, so the
/// cost is proportional to the number of edges produced.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("empty graph: G(n,p) needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0,1]");
  if (p == 1.0) return generate_complete(n);
  std::vector<Edge> edges;
  if (p > 0.0) {
    const double expected = p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    edges.reserve(static_cast<std::size_t>(expected + 6.0 * std::sqrt(expected) + 16.0));
    CounterStream rng(derive_seed(seed, {0xE7D05}));
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
      const double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
      // Clamp huge skips before converting; anything past the end terminates.
      w += 1 + (skip > 4e18 ? static_cast<std::int64_t>(4e18) : static_cast<std::int64_t>(skip));
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) edges.push_back({static_cast<node_id>(w), static_cast<node_id>(v)});
    }
  }
  return Graph::from_edges(n, edges);
}

/// K_{n/2} + K_{n/2}: nodes [0, n/2) and [n/2, n) form two cliques.
inline Graph generate_disjoint_cliques(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("disjoint cliques need an even n >= 2, got " + std::to_string(n));
  const std::size_t half = n / 2;
  std::vector<Edge> edges;
  edges.reserve(half * (half - 1));
  for (std::size_t offset : {std::size_t{0}, half})
    for (std::size_t a = 0; a < half; ++a)
      for (std::size_t b = a + 1; b < half; ++b)
        edges.push_back({static_cast<node_id>(offset + a), static_cast<node_id>(offset + b)});
  return Graph::from_edges(n, edges);
}

inline Graph generate_path(std::size_t n) {
  if (n == 0) throw InvalidArgument("empty graph: path needs n >= 1");
  std::vector<Edge> edges;
  for (node_id v = 1; v < n; ++v) edges.push_back({v - 1, v});
  return Graph::from_edges(n, edges);
}

inline Graph generate_cycle(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (node_id v = 1; v < n; ++v) edges.push_back({v - 1, v});
  edges.push_back({0, static_cast<node_id>(n - 1)});
  return Graph::from_edges(n, edges);
}

/// Star with center 0 and leaves 1..n-1.
inline Graph generate_star(std::size_t n) {
  if (n == 0) throw InvalidArgument("empty graph: star needs n >= 1");
  std::vector<Edge> edges;
  for (node_id v = 1; v < n; ++v) edges.push_back({0, v});
  return Graph::from_edges(n, edges);
}

/// Two K_m joined by a path with `bridge` interior nodes. Clique nodes are
/// [0, m) and [m + bridge, 2m + bridge); node m-1 and node m+bridge are the
/// path endpoints.
inline Graph generate_barbell(std::size_t m, std::size_t bridge) {
  if (m < 1) throw InvalidArgument("barbell needs cliques of size >= 1");
  const std::size_t n = 2 * m + bridge;
  std::vector<Edge> edges;
  const auto clique = [&](std::size_t offset) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        edges.push_back({static_cast<node_id>(offset + a), static_cast<node_id>(offset + b)});
  };
  clique(0);
  clique(m + bridge);
  for (std::size_t v = m - 1; v < m + bridge; ++v)
    edges.push_back({static_cast<node_id>(v), static_cast<node_id>(v + 1)});
  return Graph::from_edges(n, edges);
}

}  // namespace rumor
