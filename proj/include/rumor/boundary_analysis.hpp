#pragma once

// Degree buckets of the boundary, the good-index set, regime labels, and the
// empirical growth and pull diagnostics built on them.
//
// Bucket i >= 1 holds boundary nodes u with 2^(i-1) <= deg(u) < 2^i.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/graph.hpp"
#include "rumor/node_set.hpp"
#include "rumor/protocol.hpp"
#include "rumor/random.hpp"
#include "rumor/rational.hpp"

namespace rumor {

/// Base of the logarithm in the good-index size threshold.
enum class LogBase { natural, binary, decimal };

inline double log_in_base(double x, LogBase base) {
  switch (base) {
    case LogBase::natural: return std::log(x);
    case LogBase::binary: return std::log2(x);
    case LogBase::decimal: return std::log10(x);
  }
  return std::log(x);
}

inline const char* to_string(LogBase b) noexcept {
  switch (b) {
    case LogBase::natural: return "natural";
    case LogBase::binary: return "binary";
    case LogBase::decimal: return "decimal";
  }
  return "?";
}

struct Bucket {
  unsigned index = 0;          // i
  std::uint64_t d = 0;         // 2^(i-1)
  NodeSet members;             // A_i
  std::uint64_t volume = 0;    // sum of degrees over A_i
  bool good = false;

  std::size_t size() const noexcept { return members.size(); }
};

struct BoundaryPartition {
  std::size_t n = 0;
  std::size_t boundary_size = 0;
  LogBase log_base = LogBase::natural;
  double log_n = 0.0;
  std::vector<Bucket> buckets;          // nonempty buckets, ascending index
  std::vector<unsigned> good_indices;   // ascending

  const Bucket* find(unsigned i) const noexcept {
    for (const auto& b : buckets)
      if (b.index == i) return &b;
    return nullptr;
  }
};

/// Bucket index of a node with positive degree: floor(log2 deg) + 1.
inline unsigned bucket_index(std::size_t degree) noexcept {
  return static_cast<unsigned>(std::bit_width(degree));
}

inline BoundaryPartition partition_boundary(const Graph& g, const NodeSet& informed,
                                            LogBase base = LogBase::natural) {
  const std::size_t n = g.n();
  if (informed.universe() != n) throw InvalidArgument("informed set does not match graph size");
  if (informed.empty()) throw InvalidArgument("informed set must be nonempty");
  if (informed.size() == n) throw InvalidArgument("informed set must not contain every node");

  BoundaryPartition p;
  p.n = n;
  p.log_base = base;
  p.log_n = log_in_base(static_cast<double>(n), base);
  const NodeSet bd = boundary(g, informed);
  p.boundary_size = bd.size();
  if (bd.empty()) return p;

  // Boundary nodes have an informed neighbor, so every degree is >= 1.
  std::vector<std::optional<Bucket>> by_index(bucket_index(g.max_degree()) + 1);
  bd.for_each([&](node_id u) {
    const std::size_t deg = g.degree(u);
    const unsigned i = bucket_index(deg);
    auto& slot = by_index[i];
    if (!slot) {
      slot.emplace();
      slot->index = i;
      slot->d = std::uint64_t{1} << (i - 1);
      slot->members = NodeSet(n);
    }
    slot->members.insert(u);
    slot->volume += deg;
  });

  const double bd_size = static_cast<double>(p.boundary_size);
  for (auto& slot : by_index) {
    if (!slot) continue;
    Bucket& b = *slot;
    const std::uint64_t a = b.size();
    const bool large = static_cast<double>(a) * 4.0 * p.log_n >= bd_size;
    const bool balanced = b.d <= 16 * a || b.d >= 2 * p.boundary_size;
    b.good = large && balanced;
    if (b.good) p.good_indices.push_back(b.index);
    p.buckets.push_back(std::move(b));
  }
  return p;
}

/// Whether the good buckets together hold at least half the boundary.
inline bool check_half_boundary(const BoundaryPartition& p) {
  std::size_t covered = 0;
  for (const auto& b : p.buckets)
    if (b.good) covered += b.size();
  return 2 * covered >= p.boundary_size;
}

/// Labels of one bucket; LOW, MEDIUM and HIGH are not exclusive.
struct RegimeSet {
  bool low = false;
  bool medium = false;
  bool high = false;

  bool none() const noexcept { return !low && !medium && !high; }

  std::string str() const {
    if (none()) return "NONE";
    std::string s;
    const auto add = [&](const char* name) {
      if (!s.empty()) s += '|';
      s += name;
    };
    if (low) add("LOW");
    if (medium) add("MEDIUM");
    if (high) add("HIGH");
    return s;
  }

  friend bool operator==(const RegimeSet&, const RegimeSet&) = default;
};

inline constexpr std::uint64_t kLowDegreeFactor = 1024ULL * 96ULL;

inline RegimeSet classify_bucket(std::uint64_t d, std::uint64_t bucket_size, std::uint64_t boundary_size,
                                 std::uint32_t k) {
  RegimeSet r;
  const std::uint64_t low_cap = kLowDegreeFactor * k;
  r.low = d <= low_cap;
  r.medium = d > low_cap && d <= 16 * bucket_size;
  r.high = d >= 2 * boundary_size;
  return r;
}

struct BucketRegime {
  unsigned index = 0;
  RegimeSet labels;
};

inline std::vector<BucketRegime> classify_regimes(const BoundaryPartition& p, std::uint32_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::vector<BucketRegime> out;
  out.reserve(p.buckets.size());
  for (const auto& b : p.buckets) out.push_back({b.index, classify_bucket(b.d, b.size(), p.boundary_size, k)});
  return out;
}

/// h(v) = |N(v) intersected with bucket| for every node v.
inline std::vector<std::size_t> h_counts(const Graph& g, const NodeSet& bucket) {
  if (bucket.universe() != g.n()) throw InvalidArgument("bucket does not match graph size");
  std::vector<std::size_t> h(g.n(), 0);
  bucket.for_each([&](node_id u) {
    for (node_id w : g.neighbors(u)) ++h[w];
  });
  return h;
}

/// S_t: nodes neither informed nor on the boundary.
inline NodeSet outer_region(const Graph& g, const NodeSet& informed) {
  return inclusive_neighborhood(g, informed).complement();
}

/// Nodes u with |N(u) & S_t| >= k |N(u) & I_t|.
inline NodeSet outer_heavy_nodes(const Graph& g, const NodeSet& informed, std::uint32_t k) {
  const NodeSet outer = outer_region(g, informed);
  NodeSet out(g.n());
  for (node_id u = 0; u < g.n(); ++u) {
    std::size_t in_outer = 0, in_informed = 0;
    for (node_id w : g.neighbors(u)) {
      in_outer += outer.contains(w) ? 1 : 0;
      in_informed += informed.contains(w) ? 1 : 0;
    }
    if (in_outer >= static_cast<std::size_t>(k) * in_informed) out.insert(u);
  }
  return out;
}

/// i, d_i, |A_i|, Vol(A_i), in_good_set, regime, plus |S_t| on every row.
inline void write_bucket_table_csv(const Graph& g, const NodeSet& informed, const BoundaryPartition& p,
                                   std::uint32_t k, std::ostream& out) {
  const std::size_t outer = outer_region(g, informed).size();
  out << "i,d_i,size,volume,in_good_set,regime,outer_size\n";
  for (const auto& b : p.buckets) {
    out << b.index << ',' << b.d << ',' << b.size() << ',' << b.volume << ',' << (b.good ? 1 : 0) << ','
        << classify_bucket(b.d, b.size(), p.boundary_size, k).str() << ',' << outer << '\n';
  }
}

// ---------------------------------------------------------------------------
// Pull progress

struct PullProgressReport {
  std::uint64_t rounds = 0;       // ceil(1/(qk))
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;    // trials where >= |B|/4 of B pulled
  double success_rate = 1.0;
  std::size_t b_size = 0;
  double log_n = 0.0;
  bool b_large_enough = false;    // |B| >= ln n
};

/// ceil(1/(qk)).
inline std::uint64_t pull_rounds_needed(const Rational& q, std::uint32_t k) {
  if (q.num() <= 0 || q > Rational(1)) throw InvalidArgument("q must lie in (0,1]");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const auto num = static_cast<std::uint64_t>(q.den());
  const auto den = static_cast<std::uint64_t>(q.num()) * k;
  return (num + den - 1) / den;
}

/// Runs ceil(1/(qk)) pull-only rounds against the fixed set `informed`,
/// `trials` times, and reports how often at least a quarter of B pulled.
inline PullProgressReport pull_progress_check(const Graph& g, const NodeSet& informed, const NodeSet& b,
                                              const Rational& q, std::uint32_t k, std::uint64_t trials,
                                              std::uint64_t seed = kDefaultSeed) {
  if (informed.universe() != g.n() || b.universe() != g.n()) {
    throw InvalidArgument("set does not match graph size");
  }
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  PullProgressReport r;
  r.rounds = pull_rounds_needed(q, k);
  r.trials = trials;
  r.b_size = b.size();
  r.log_n = std::log(static_cast<double>(g.n()));
  r.b_large_enough = static_cast<double>(r.b_size) >= r.log_n;

  std::vector<node_id> outside, weak;
  std::vector<double> probability;
  b.for_each([&](node_id u) {
    std::size_t c = 0;
    for (node_id w : g.neighbors(u)) c += informed.contains(w) ? 1 : 0;
    if (informed.contains(u) || c == 0) {
      outside.push_back(u);
      return;
    }
    // c/deg >= q, compared exactly.
    const auto lhs = static_cast<__int128>(c) * q.den();
    const auto rhs = static_cast<__int128>(q.num()) * static_cast<__int128>(g.degree(u));
    if (lhs < rhs) weak.push_back(u);
    probability.push_back(pull_success_probability(c, g.degree(u), k));
  });
  if (!outside.empty()) throw PreconditionViolation("B is not contained in the boundary", outside);
  if (!weak.empty()) {
    throw PreconditionViolation("informed-neighbor fraction below q=" + q.str(), weak);
  }
  if (b.empty()) {
    r.successes = trials;
    r.success_rate = 1.0;
    return r;
  }

  const auto members = b.members();
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::size_t pulled = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      for (std::uint64_t round = 0; round < r.rounds; ++round) {
        CounterStream rng(derive_seed(seed, {trial, round, members[j]}));
        if (rng.bernoulli(probability[j])) {
          ++pulled;
          break;
        }
      }
    }
    if (4 * pulled >= members.size()) ++r.successes;
  }
  r.success_rate = static_cast<double>(r.successes) / static_cast<double>(trials);
  return r;
}

// ---------------------------------------------------------------------------
// Growth audit

struct GrowthWindow {
  std::uint64_t t = 0;
  std::size_t informed = 0;
  std::size_t boundary = 0;
  std::size_t informed_growth = 0;      // |I_{t+r}| - |I_t|
  std::int64_t boundary_growth = 0;     // |dI_{t+r}| - |dI_t|
  bool informed_ok = false;             // informed_growth >= |dI_t| / 256
  bool boundary_ok = false;             // boundary_growth >= k^(1/6)/64 |dI_t|
  double informed_margin = 0.0;         // informed_growth / (|dI_t| / 256)
  double boundary_margin = 0.0;         // boundary_growth / (k^(1/6)/64 |dI_t|)

  bool holds() const noexcept { return informed_ok || boundary_ok; }
};

struct GrowthAuditReport {
  std::uint32_t k = 1;
  std::uint64_t window = 1;
  std::vector<GrowthWindow> windows;   // audited windows only (|I_t| <= n/2)
  std::size_t holding = 0;

  double rate() const noexcept {
    return windows.empty() ? 1.0 : static_cast<double>(holding) / static_cast<double>(windows.size());
  }
};

inline GrowthAuditReport growth_audit(std::span<const RoundTrace> trace, std::size_t n, std::uint32_t k,
                                      std::uint64_t window) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  GrowthAuditReport rep;
  rep.k = k;
  rep.window = window;
  const double boundary_factor = std::pow(static_cast<double>(k), 1.0 / 6.0) / 64.0;
  for (std::size_t t = 0; t + window < trace.size(); ++t) {
    const RoundTrace& a = trace[t];
    if (2 * a.informed > n) continue;
    const RoundTrace& b = trace[t + window];
    GrowthWindow w;
    w.t = a.t;
    w.informed = a.informed;
    w.boundary = a.boundary;
    w.informed_growth = b.informed - a.informed;
    w.boundary_growth = static_cast<std::int64_t>(b.boundary) - static_cast<std::int64_t>(a.boundary);
    if (a.boundary > 0) {
      const double bd = static_cast<double>(a.boundary);
      w.informed_ok = 256 * w.informed_growth >= a.boundary;
      w.boundary_ok = static_cast<double>(w.boundary_growth) >= boundary_factor * bd;
      w.informed_margin = static_cast<double>(w.informed_growth) / (bd / 256.0);
      w.boundary_margin = static_cast<double>(w.boundary_growth) / (boundary_factor * bd);
    }
    if (w.holds()) ++rep.holding;
    rep.windows.push_back(w);
  }
  return rep;
}

inline GrowthAuditReport growth_audit(const TrialResult& trial, std::uint32_t k, std::uint64_t window) {
  return growth_audit(trial.trace, trial.n, k, window);
}

}  // namespace rumor
