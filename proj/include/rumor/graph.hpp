#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/node_set.hpp"
#include "rumor/random.hpp"

namespace rumor {

struct Edge {
  node_id u;
  node_id v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes 0..n-1 in CSR form. Every
/// adjacency list is sorted, so equality and serialization are canonical.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Both orientations and repeated edges collapse
  /// to one undirected edge; self-loops and out-of-range ids are rejected.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : edges) {
      validate_edge(n, e);
      ++degree[e.u];
      ++degree[e.v];
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : edges) {
      g.adjacency_[fill[e.u]++] = e.v;
      g.adjacency_[fill[e.v]++] = e.u;
    }
    g.canonicalize();
    return g;
  }

  /// Builds from explicit adjacency lists and rejects anything that is not a
  /// simple undirected graph (asymmetry, duplicates, self-loops).
  static Graph from_adjacency(const std::vector<std::vector<node_id>>& lists) {
    const std::size_t n = lists.size();
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + lists[v].size();
    g.adjacency_.reserve(g.offsets_[n]);
    for (std::size_t v = 0; v < n; ++v) {
      auto sorted = lists[v];
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const node_id w = sorted[i];
        if (w >= n) throw InvalidArgument("neighbor " + std::to_string(w) + " out of range");
        if (w == v) throw InvalidArgument("self-loop at node " + std::to_string(v));
        if (i > 0 && sorted[i - 1] == w) {
          throw InvalidArgument("duplicate edge {" + std::to_string(v) + "," + std::to_string(w) + "}");
        }
      }
      g.adjacency_.insert(g.adjacency_.end(), sorted.begin(), sorted.end());
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (node_id w : g.neighbors(static_cast<node_id>(v))) {
        if (!g.has_edge(w, static_cast<node_id>(v))) {
          throw InvalidArgument("asymmetric adjacency between " + std::to_string(v) + " and " +
                                std::to_string(w));
        }
      }
    }
    g.finish();
    return g;
  }

  /// Trusted constructor for generators that emit sorted, symmetric lists.
  static Graph from_csr_unchecked(std::vector<std::size_t> offsets, std::vector<node_id> adjacency) {
    Graph g;
    g.offsets_ = std::move(offsets);
    g.adjacency_ = std::move(adjacency);
    g.finish();
    return g;
  }

  std::size_t n() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  std::size_t degree(node_id v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  std::span<const node_id> neighbors(node_id v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool has_edge(node_id u, node_id v) const noexcept {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// True iff every pair of distinct nodes is adjacent.
  bool is_complete() const noexcept {
    const std::size_t nn = n();
    return edge_count() == nn * (nn == 0 ? 0 : nn - 1) / 2;
  }

  /// Canonical edge list, u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (node_id u = 0; u < n(); ++u)
      for (node_id v : neighbors(u))
        if (u < v) out.push_back({u, v});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  static void validate_edge(std::size_t n, const Edge& e) {
    if (e.u >= n || e.v >= n) {
      throw InvalidArgument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            "} out of range for n=" + std::to_string(n));
    }
    if (e.u == e.v) throw InvalidArgument("self-loop at node " + std::to_string(e.u));
  }

  // Sorts and deduplicates each list, then compacts the CSR arrays.
  void canonicalize() {
    const std::size_t nn = n();
    std::size_t write = 0;
    std::size_t begin = 0;
    for (std::size_t v = 0; v < nn; ++v) {
      const std::size_t end = offsets_[v + 1];
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(begin);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(end);
      std::sort(first, last);
      last = std::unique(first, last);
      offsets_[v] = write;
      for (auto it = first; it != last; ++it) adjacency_[write++] = *it;
      begin = end;
    }
    offsets_[nn] = write;
    adjacency_.resize(write);
    adjacency_.shrink_to_fit();
    finish();
  }

  void finish() noexcept {
    max_degree_ = 0;
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v)
      max_degree_ = std::max(max_degree_, offsets_[v + 1] - offsets_[v]);
  }

  std::vector<std::size_t> offsets_;
  std::vector<node_id> adjacency_;
  std::size_t max_degree_ = 0;
};

// ---------------------------------------------------------------------------
// Structural queries

/// N(S): nodes adjacent to at least one member of s. May intersect s.
inline NodeSet neighborhood(const Graph& g, const NodeSet& s) {
  NodeSet out(g.n());
  s.for_each([&](node_id u) {
    for (node_id w : g.neighbors(u)) out.insert(w);
  });
  return out;
}

/// dS = N(S) minus S.
inline NodeSet boundary(const Graph& g, const NodeSet& s) {
  NodeSet out(g.n());
  s.for_each([&](node_id u) {
    for (node_id w : g.neighbors(u))
      if (!s.contains(w)) out.insert(w);
  });
  return out;
}

/// N[S] = S united with N(S).
inline NodeSet inclusive_neighborhood(const Graph& g, const NodeSet& s) {
  NodeSet out = s;
  s.for_each([&](node_id u) {
    for (node_id w : g.neighbors(u)) out.insert(w);
  });
  return out;
}

inline constexpr std::int64_t kUnreachable = -1;

/// Hop distances from v; kUnreachable for other components.
inline std::vector<std::int64_t> bfs_distances(const Graph& g, node_id source) {
  if (source >= g.n()) throw InvalidArgument("source " + std::to_string(source) + " out of range");
  std::vector<std::int64_t> dist(g.n(), kUnreachable);
  std::vector<node_id> queue;
  queue.reserve(g.n());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const node_id u = queue[head];
    for (node_id w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

/// Cumulative ball sizes |N^i[v]| for i = 0, 1, ... until the ball stops
/// growing; the last entry is the size of v's component.
inline std::vector<std::size_t> bfs_layers(const Graph& g, node_id source) {
  const auto dist = bfs_distances(g, source);
  std::int64_t max_d = 0;
  for (auto d : dist) max_d = std::max(max_d, d);
  std::vector<std::size_t> per_layer(static_cast<std::size_t>(max_d) + 1, 0);
  for (auto d : dist)
    if (d != kUnreachable) ++per_layer[static_cast<std::size_t>(d)];
  std::vector<std::size_t> cumulative(per_layer.size());
  std::size_t acc = 0;
  for (std::size_t i = 0; i < per_layer.size(); ++i) cumulative[i] = acc += per_layer[i];
  return cumulative;
}

inline bool is_connected(const Graph& g) {
  if (g.n() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == kUnreachable; });
}

inline std::size_t min_degree(const Graph& g) {
  if (g.n() == 0) throw InvalidArgument("min_degree of empty graph");
  std::size_t best = g.degree(0);
  for (node_id v = 1; v < g.n(); ++v) best = std::min(best, g.degree(v));
  return best;
}

/// Exact diameter; std::nullopt stands for an infinite diameter (the graph
/// is disconnected). Runs 64 breadth-first searches at once with one bit per
/// source, so the cost is O((n/64) * D * m).
inline std::optional<std::uint64_t> diameter(const Graph& g) {
  const std::size_t n = g.n();
  if (n == 0) throw InvalidArgument("diameter of empty graph");
  if (n == 1) return 0;
  if (!is_connected(g)) return std::nullopt;

  std::vector<std::uint64_t> seen(n), frontier(n), next(n);
  std::uint64_t diam = 0;
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t batch = std::min<std::size_t>(64, n - base);
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t j = 0; j < batch; ++j) seen[base + j] = frontier[base + j] = std::uint64_t{1} << j;
    std::uint64_t level = 0;
    for (;;) {
      bool grew = false;
      for (node_id v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (node_id u : g.neighbors(v)) acc |= frontier[u];
        acc &= ~seen[v];
        next[v] = acc;
        grew |= acc != 0;
      }
      if (!grew) break;
      ++level;
      for (std::size_t v = 0; v < n; ++v) seen[v] |= next[v];
      frontier.swap(next);
    }
    diam = std::max(diam, level);
  }
  return diam;
}

/// Lower bound on the diameter from `sources` random double sweeps, for
/// graphs too large for the exact routine. nullopt if disconnected.
inline std::optional<std::uint64_t> diameter_lower_bound(const Graph& g, std::size_t sources,
                                                         std::uint64_t seed = kDefaultSeed) {
  const std::size_t n = g.n();
  if (n == 0) throw InvalidArgument("diameter of empty graph");
  std::uint64_t best = 0;
  CounterStream rng(derive_seed(seed, {0xD1A3}));
  for (std::size_t i = 0; i < std::max<std::size_t>(sources, 1); ++i) {
    auto dist = bfs_distances(g, static_cast<node_id>(rng.below(n)));
    node_id far = 0;
    for (node_id v = 0; v < n; ++v) {
      if (dist[v] == kUnreachable) return std::nullopt;
      if (dist[v] > dist[far]) far = v;
    }
    dist = bfs_distances(g, far);
    for (auto d : dist) best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(d));
  }
  return best;
}

}  // namespace rumor
