#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/graph.hpp"
#include "rumor/node_set.hpp"
#include "rumor/parallel.hpp"
#include "rumor/random.hpp"
#include "rumor/rational.hpp"

namespace rumor {

enum class ExpansionMethod { exact, sampled };

inline const char* to_string(ExpansionMethod m) noexcept { return m == ExpansionMethod::exact ? "exact" : "sampled"; }

/// Outcome of minimizing |dS|/|S| over nonempty S with |S| <= floor(alpha*n).
/// For the sampled method phi_min is an upper bound on the true minimum.
struct ExpansionReport {
  Rational alpha;
  Rational phi_min;
  NodeSet witness;
  ExpansionMethod method = ExpansionMethod::exact;
  std::uint64_t sets_examined = 0;
  std::size_t max_set_size = 0;
};

inline constexpr std::uint64_t kDefaultWorkBudget = 50'000'000;

/// floor(alpha * n) after validating 0 < alpha <= 1/2 and that at least one
/// nonempty set is admissible.
inline std::size_t admissible_set_size(std::size_t n, const Rational& alpha) {
  if (alpha <= Rational(0) || alpha > Rational(1, 2)) {
    throw InvalidArgument("alpha must lie in (0, 1/2], got " + alpha.str());
  }
  const auto s = floor_times(alpha, static_cast<std::int64_t>(n));
  if (s < 1) {
    throw InvalidArgument("floor(alpha*n) = 0 for alpha=" + alpha.str() + ", n=" + std::to_string(n) +
                          ": no admissible set");
  }
  return static_cast<std::size_t>(s);
}

/// Sum_{s=1}^{max_size} C(n, s), saturating at UINT64_MAX.
inline std::uint64_t exact_enumeration_size(std::size_t n, std::size_t max_size) {
  constexpr unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 total = 0;
  unsigned __int128 c = 1;  // C(n, 0)
  for (std::size_t s = 1; s <= max_size && s <= n; ++s) {
    c = c * (n - s + 1) / s;  // exact: C(n,s) = C(n,s-1) * (n-s+1) / s
    if (c > cap) return std::numeric_limits<std::uint64_t>::max();
    total += c;
    if (total > cap) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(total);
}

namespace detail {

inline std::uint64_t binom_u64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return static_cast<std::uint64_t>(c);
}

// |dS|/|S| < best? with both as integer pairs.
inline bool ratio_less(std::uint64_t b1, std::uint64_t s1, std::uint64_t b2, std::uint64_t s2) noexcept {
  return static_cast<unsigned __int128>(b1) * s2 < static_cast<unsigned __int128>(b2) * s1;
}

struct Candidate {
  std::uint64_t boundary = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t size = 1;
  std::vector<node_id> members;
  bool valid() const noexcept { return !members.empty(); }
  bool better_than(const Candidate& other) const noexcept {
    if (!valid()) return false;
    if (!other.valid()) return true;
    return ratio_less(boundary, size, other.boundary, other.size);
  }
};

/// Adjacency rows as multi-word bitsets, row v at [v*words, (v+1)*words).
struct BitRows {
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;

  explicit BitRows(const Graph& g) : words((g.n() + 63) / 64), bits(g.n() * words, 0) {
    for (node_id v = 0; v < g.n(); ++v)
      for (node_id w : g.neighbors(v)) bits[v * words + (w >> 6)] |= std::uint64_t{1} << (w & 63);
  }
  const std::uint64_t* row(node_id v) const noexcept { return bits.data() + v * words; }
};

}  // namespace detail

/// Exact minimum of |dS|/|S| by enumerating every nonempty S with
/// |S| <= floor(alpha*n), sizes ascending and lexicographic within a size.
/// The reported witness is the first minimizer in that order, and a ratio of
/// zero stops the enumeration. sets_examined counts subsets up to the stop
/// point in that order, so it is the same for any thread count.
inline ExpansionReport vertex_expansion_exact(const Graph& g, const Rational& alpha,
                                              std::uint64_t work_budget = kDefaultWorkBudget,
                                              unsigned threads = 1) {
  const std::size_t n = g.n();
  const std::size_t max_size = admissible_set_size(n, alpha);
  const std::uint64_t total = exact_enumeration_size(n, max_size);
  if (total > work_budget) throw BudgetExceeded(total, work_budget);

  const detail::BitRows rows(g);
  const std::size_t W = rows.words;

  // One task per (size, first element); tasks are listed in enumeration order.
  struct Task {
    std::size_t size;
    node_id first;
    std::uint64_t base;  // global index of the task's first subset
    std::uint64_t count;
  };
  std::vector<Task> tasks;
  std::uint64_t offset = 0;
  for (std::size_t s = 1; s <= max_size; ++s) {
    for (node_id f = 0; f + s <= n; ++f) {
      const std::uint64_t cnt = detail::binom_u64(n - 1 - f, s - 1);
      tasks.push_back({s, f, offset, cnt});
      offset += cnt;
    }
  }

  struct TaskResult {
    detail::Candidate best;
    std::optional<std::uint64_t> zero_index;
  };
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::uint64_t> first_zero{std::numeric_limits<std::uint64_t>::max()};

  parallel_for(tasks.size(), threads, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    if (task.base > first_zero.load(std::memory_order_relaxed)) return;
    const std::size_t rest = task.size - 1;
    std::vector<node_id> combo(rest);
    for (std::size_t j = 0; j < rest; ++j) combo[j] = static_cast<node_id>(task.first + 1 + j);
    // nbr[j], set[j]: union over {first} and combo[0..j-1]; level 0 is {first}.
    std::vector<std::uint64_t> nbr((rest + 1) * W, 0), set((rest + 1) * W, 0);
    const auto load_level = [&](std::size_t level) {
      const node_id v = level == 0 ? task.first : combo[level - 1];
      const std::uint64_t* r = rows.row(v);
      std::uint64_t* dn = nbr.data() + level * W;
      std::uint64_t* ds = set.data() + level * W;
      if (level == 0) {
        std::copy(r, r + W, dn);
        std::fill(ds, ds + W, 0);
      } else {
        const std::uint64_t* pn = dn - W;
        const std::uint64_t* ps = ds - W;
        for (std::size_t w = 0; w < W; ++w) {
          dn[w] = pn[w] | r[w];
          ds[w] = ps[w];
        }
      }
      ds[v >> 6] |= std::uint64_t{1} << (v & 63);
    };
    for (std::size_t level = 0; level <= rest; ++level) load_level(level);

    TaskResult& out = results[ti];
    const std::uint64_t size = task.size;
    for (std::uint64_t local = 0;; ++local) {
      const std::uint64_t* dn = nbr.data() + rest * W;
      const std::uint64_t* ds = set.data() + rest * W;
      std::uint64_t bsize = 0;
      for (std::size_t w = 0; w < W; ++w) bsize += static_cast<std::uint64_t>(std::popcount(dn[w] & ~ds[w]));
      if (!out.best.valid() || detail::ratio_less(bsize, size, out.best.boundary, out.best.size)) {
        out.best.boundary = bsize;
        out.best.size = size;
        out.best.members.assign(1, task.first);
        out.best.members.insert(out.best.members.end(), combo.begin(), combo.end());
        if (bsize == 0) {
          const std::uint64_t idx = task.base + local;
          out.zero_index = idx;
          std::uint64_t cur = first_zero.load(std::memory_order_relaxed);
          while (idx < cur && !first_zero.compare_exchange_weak(cur, idx)) {
          }
          return;
        }
      }
      if ((local & 0xFFFF) == 0xFFFF && task.base + local > first_zero.load(std::memory_order_relaxed)) return;
      // Next combination of `rest` elements from (first, n).
      std::size_t j = rest;
      while (j > 0 && combo[j - 1] == n - rest + (j - 1)) --j;
      if (j == 0) return;
      ++combo[j - 1];
      for (std::size_t t = j; t < rest; ++t) combo[t] = combo[t - 1] + 1;
      for (std::size_t level = j; level <= rest; ++level) load_level(level);
    }
  });

  detail::Candidate best;
  std::optional<std::uint64_t> zero;
  for (auto& r : results) {
    if (r.best.better_than(best)) best = std::move(r.best);
    if (r.zero_index && !zero) zero = r.zero_index;
    if (zero) break;
  }

  ExpansionReport report;
  report.alpha = alpha;
  report.phi_min = Rational(static_cast<std::int64_t>(best.boundary), static_cast<std::int64_t>(best.size));
  report.witness = NodeSet::from(n, best.members);
  report.method = ExpansionMethod::exact;
  report.sets_examined = zero ? *zero + 1 : total;
  report.max_set_size = max_size;
  return report;
}

/// Which candidate families the sampler draws from.
struct SamplingPool {
  bool singletons = true;
  bool uniform_subsets = true;  // uniform random sets at sizes 1, 2, 4, ..., floor(alpha*n)
  bool bfs_balls = true;        // every prefix of a BFS order from a random node
};

namespace detail {

/// Geometric size ladder 1, 2, 4, ... capped by and ending at max_size.
inline std::vector<std::size_t> size_ladder(std::size_t max_size) {
  std::vector<std::size_t> sizes;
  for (std::size_t s = 1; s < max_size; s *= 2) sizes.push_back(s);
  sizes.push_back(max_size);
  return sizes;
}

inline std::uint64_t boundary_size(const Graph& g, std::span<const node_id> members, std::vector<std::uint8_t>& mark) {
  for (node_id v : members) mark[v] = 1;
  std::vector<node_id> touched;
  std::uint64_t count = 0;
  for (node_id v : members) {
    for (node_id w : g.neighbors(v)) {
      if (mark[w] == 0) {
        mark[w] = 2;
        touched.push_back(w);
        ++count;
      }
    }
  }
  for (node_id v : members) mark[v] = 0;
  for (node_id w : touched) mark[w] = 0;
  return count;
}

}  // namespace detail

/// Minimum of |dS|/|S| over a randomized candidate pool. The result is an
/// upper bound on the exact expansion. Sample i draws from its own stream
/// derive_seed(seed, {i}); even samples are uniform subsets and odd ones BFS
/// balls when both families are enabled.
inline ExpansionReport vertex_expansion_sample(const Graph& g, const Rational& alpha, std::size_t samples,
                                               std::uint64_t seed = kDefaultSeed, const SamplingPool& pool = {},
                                               unsigned threads = 1) {
  if (samples == 0) throw InvalidArgument("vertex_expansion_sample needs samples >= 1");
  const std::size_t n = g.n();
  const std::size_t max_size = admissible_set_size(n, alpha);
  const auto ladder = detail::size_ladder(max_size);

  detail::Candidate best;
  std::uint64_t examined = 0;
  if (pool.singletons) {
    for (node_id v = 0; v < n; ++v) {
      detail::Candidate c{g.degree(v), 1, {v}};
      if (c.better_than(best)) best = std::move(c);
    }
    examined += n;
  }

  const bool uniform = pool.uniform_subsets;
  const bool balls = pool.bfs_balls;
  if (uniform || balls) {
    struct SampleResult {
      detail::Candidate best;
      std::uint64_t examined = 0;
    };
    std::vector<SampleResult> results(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
      CounterStream rng(derive_seed(seed, {i}));
      const bool use_ball = balls && (!uniform || i % 2 == 1);
      SampleResult& out = results[i];
      std::vector<std::uint8_t> mark(n, 0);
      if (!use_ball) {
        const std::size_t s = ladder[(uniform && balls ? i / 2 : i) % ladder.size()];
        // Floyd's algorithm: s distinct nodes, uniform over s-subsets.
        std::vector<node_id> members;
        members.reserve(s);
        for (std::size_t j = n - s; j < n; ++j) {
          const auto t = static_cast<node_id>(rng.below(j + 1));
          if (mark[t]) {
            mark[j] = 1;
            members.push_back(static_cast<node_id>(j));
          } else {
            mark[t] = 1;
            members.push_back(t);
          }
        }
        for (node_id v : members) mark[v] = 0;
        std::sort(members.begin(), members.end());
        const auto b = detail::boundary_size(g, members, mark);
        out.best = {b, s, std::move(members)};
        out.examined = 1;
        return;
      }
      // BFS ball: evaluate every prefix of the BFS order incrementally.
      // cover[w] = number of neighbors of w inside the prefix.
      const auto start = static_cast<node_id>(rng.below(n));
      std::vector<std::uint32_t> cover(n, 0);
      std::vector<node_id> order{start};
      order.reserve(max_size);
      mark[start] = 1;  // 1 = discovered by BFS
      std::vector<std::uint8_t> in_set(n, 0);
      std::uint64_t bsize = 0;
      std::size_t best_len = 0;
      std::uint64_t best_b = 0;
      for (std::size_t head = 0; head < order.size() && head < max_size; ++head) {
        const node_id v = order[head];
        if (cover[v] > 0) --bsize;
        in_set[v] = 1;
        for (node_id w : g.neighbors(v)) {
          if (!in_set[w] && cover[w]++ == 0) ++bsize;
          if (!mark[w] && order.size() < max_size) {
            mark[w] = 1;
            order.push_back(w);
          }
        }
        const std::size_t len = head + 1;
        ++out.examined;
        if (best_len == 0 || detail::ratio_less(bsize, len, best_b, best_len)) {
          best_len = len;
          best_b = bsize;
        }
      }
      std::vector<node_id> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
      std::sort(members.begin(), members.end());
      out.best = {best_b, best_len, std::move(members)};
    });
    for (auto& r : results) {
      examined += r.examined;
      if (r.best.better_than(best)) best = std::move(r.best);
    }
  }
  if (!best.valid()) throw InvalidArgument("sampling pool is empty: enable at least one candidate family");

  ExpansionReport report;
  report.alpha = alpha;
  report.phi_min = Rational(static_cast<std::int64_t>(best.boundary), static_cast<std::int64_t>(best.size));
  report.witness = NodeSet::from(n, best.members);
  report.method = ExpansionMethod::sampled;
  report.sets_examined = examined;
  report.max_set_size = max_size;
  return report;
}

// ---------------------------------------------------------------------------
// Certification

enum class Verdict { certified, refuted, unknown };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

struct ExpansionOptions {
  std::uint64_t work_budget = kDefaultWorkBudget;
  std::size_t samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  SamplingPool pool{};
  unsigned threads = 1;
};

/// verdict is certified only after exact enumeration; refuted carries the
/// witness in report.witness.
struct ExpanderVerdict {
  Verdict verdict = Verdict::unknown;
  ExpansionReport report;
};

inline ExpanderVerdict is_expander(const Graph& g, const Rational& phi, const Rational& alpha, ExpansionMethod mode,
                                   const ExpansionOptions& options = {}) {
  if (phi <= Rational(0)) throw InvalidArgument("phi must be positive, got " + phi.str());
  ExpanderVerdict out;
  if (mode == ExpansionMethod::exact) {
    out.report = vertex_expansion_exact(g, alpha, options.work_budget, options.threads);
    out.verdict = out.report.phi_min >= phi ? Verdict::certified : Verdict::refuted;
  } else {
    out.report = vertex_expansion_sample(g, alpha, options.samples, options.seed, options.pool, options.threads);
    out.verdict = out.report.phi_min < phi ? Verdict::refuted : Verdict::unknown;
  }
  return out;
}

/// Where (phi, alpha) sits relative to the structural thresholds
/// 1/(2+2phi) < alpha <= 1/(1+phi).
enum class Feasibility { impossible, restricted, risk_disconnected, standard };

inline const char* to_string(Feasibility f) noexcept {
  switch (f) {
    case Feasibility::impossible: return "IMPOSSIBLE";
    case Feasibility::restricted: return "RESTRICTED";
    case Feasibility::risk_disconnected: return "RISK_DISCONNECTED";
    case Feasibility::standard: return "STANDARD";
  }
  return "?";
}

inline Feasibility check_alpha_feasibility(const Rational& phi, const Rational& alpha) {
  if (phi <= Rational(0)) throw InvalidArgument("phi must be positive, got " + phi.str());
  if (alpha <= Rational(0) || alpha > Rational(1, 2)) {
    throw InvalidArgument("alpha must lie in (0, 1/2], got " + alpha.str());
  }
  const Rational upper = Rational(1) / (Rational(1) + phi);
  const Rational lower = Rational(1) / (Rational(2) + Rational(2) * phi);
  if (alpha > upper) return Feasibility::impossible;
  if (alpha == upper && phi >= Rational(1)) return Feasibility::restricted;
  if (alpha <= lower) return Feasibility::risk_disconnected;
  return Feasibility::standard;
}

/// Smallest j >= 0 with phi^j >= n, for phi > 1. Exact while p^j fits in
/// 128 bits; integer phi is the only case where phi^j can equal n.
inline std::uint64_t ceil_log(const Rational& phi, std::uint64_t n) {
  if (phi <= Rational(1)) throw InvalidArgument("ceil_log needs phi > 1");
  const auto p = static_cast<unsigned __int128>(phi.num());
  const auto q = static_cast<unsigned __int128>(phi.den());
  unsigned __int128 pj = 1, qj = 1;
  std::uint64_t j = 0;
  constexpr unsigned __int128 p_limit = static_cast<unsigned __int128>(1) << 120;
  constexpr unsigned __int128 q_limit = static_cast<unsigned __int128>(1) << 60;
  while (pj < static_cast<unsigned __int128>(n) * qj) {
    if (pj > p_limit / p || qj > q_limit / q) {
      // Fall back to floating point once exact powers would overflow.
      long double x = static_cast<long double>(pj) / static_cast<long double>(qj);
      const long double f = phi.to_long_double();
      while (x < static_cast<long double>(n)) {
        x *= f;
        ++j;
      }
      return j;
    }
    pj *= p;
    qj *= q;
    ++j;
  }
  return j;
}

struct DiameterLemmaReport {
  std::optional<std::uint64_t> diameter;  // nullopt: infinite
  std::optional<std::uint64_t> bound;     // 2 * ceil(log_phi n), phi > 1 only
  bool precondition_met = false;          // phi > 1 and alpha > 1/(2+2phi)
  bool floor_precondition_met = false;    // phi > 1 and floor(alpha n) > n/(2+2phi)
  bool holds = false;
  std::string note;
};

inline DiameterLemmaReport check_diameter_lemma(const Graph& g, const Rational& phi, const Rational& alpha) {
  DiameterLemmaReport r;
  const auto regime = check_alpha_feasibility(phi, alpha);
  r.precondition_met = phi > Rational(1) && regime != Feasibility::risk_disconnected;
  // Ball growth only certifies sets of size floor(alpha n), so two balls are
  // forced to meet only when (1+phi) floor(alpha n) > n/2.
  const Rational largest(floor_times(alpha, static_cast<std::int64_t>(g.n())));
  r.floor_precondition_met =
      phi > Rational(1) &&
      largest * (Rational(2) + Rational(2) * phi) > Rational(static_cast<std::int64_t>(g.n()));
  r.diameter = diameter(g);
  if (phi > Rational(1)) r.bound = 2 * ceil_log(phi, g.n());
  if (!r.diameter) {
    r.holds = false;
    r.note = "graph is disconnected (infinite diameter)";
  } else if (!r.bound) {
    r.holds = false;
    r.note = "bound undefined for phi <= 1";
  } else {
    r.holds = *r.diameter <= *r.bound;
  }
  if (!r.precondition_met) {
    if (!r.note.empty()) r.note += "; ";
    r.note += regime == Feasibility::risk_disconnected ? "alpha <= 1/(2+2phi): lemma precondition violated"
                                                       : "phi <= 1: lemma precondition violated";
  } else if (!r.floor_precondition_met) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "floor(alpha n) <= n/(2+2phi): set sizes too coarse for the ball-growth argument";
  }
  return r;
}

struct RestrictedRegimeReport {
  bool applicable = false;  // exact certification at alpha = 1/(1+phi) succeeded
  std::string note;
  std::optional<ExpansionReport> certification;
  std::optional<std::uint64_t> diameter;
  std::size_t min_degree = 0;
  std::int64_t degree_threshold = 0;  // ceil(phi*n/(1+phi))
  bool diameter_ok = false;           // diameter <= 2
  bool min_degree_ok = false;
};

/// Certifies g exactly as a (phi, 1/(1+phi))-expander and, if it is one,
/// checks diameter <= 2 and minimum degree >= ceil(phi*n/(1+phi)).
inline RestrictedRegimeReport check_restricted_regime(const Graph& g, const Rational& phi,
                                                      std::uint64_t work_budget = kDefaultWorkBudget,
                                                      unsigned threads = 1) {
  RestrictedRegimeReport r;
  if (phi < Rational(1)) {
    r.note = "phi < 1: restricted regime needs phi >= 1";
    return r;
  }
  const Rational alpha = Rational(1) / (Rational(1) + phi);
  r.degree_threshold = (phi * Rational(static_cast<std::int64_t>(g.n())) / (Rational(1) + phi)).ceil();
  r.certification = vertex_expansion_exact(g, alpha, work_budget, threads);
  if (r.certification->phi_min < phi) {
    r.note = "not a (" + phi.str() + ", " + alpha.str() + ")-expander: exact expansion " +
             r.certification->phi_min.str();
    return r;
  }
  r.applicable = true;
  r.diameter = diameter(g);
  r.min_degree = min_degree(g);
  r.diameter_ok = r.diameter && *r.diameter <= 2;
  r.min_degree_ok = static_cast<std::int64_t>(r.min_degree) >= r.degree_threshold;
  return r;
}

}  // namespace rumor
