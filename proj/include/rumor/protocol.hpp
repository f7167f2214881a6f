#pragma once

// Synchronous k-PUSH, k-PULL and k-PUSH&PULL.
//
// In round t every informed node draws k neighbors uniformly with
// replacement and informs them (push); every uninformed node draws k
// neighbors and becomes informed if any draw is informed (pull). Both
// mechanisms read the informed set as it was at the start of the round.
//
// Randomness is keyed by (seed, round, node, role), never by schedule, so a
// trial is a pure function of (graph, source, config).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rumor/error.hpp"
#include "rumor/graph.hpp"
#include "rumor/node_set.hpp"
#include "rumor/random.hpp"

namespace rumor {

enum class Mode { push, pull, push_pull };

inline const char* to_string(Mode m) noexcept {
  switch (m) {
    case Mode::push: return "push";
    case Mode::pull: return "pull";
    case Mode::push_pull: return "push_pull";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "push") return Mode::push;
  if (s == "pull") return Mode::pull;
  if (s == "push_pull" || s == "pushpull" || s == "push-pull") return Mode::push_pull;
  throw InvalidArgument("unknown protocol mode '" + std::string(s) + "'");
}

/// How the k calls of one node are drawn. Both are exact: per_call makes the
/// k draws literally; aggregated skips straight to the draws that can change
/// the outcome (geometric waiting times), which is far cheaper when k is
/// large.
enum class Sampler { aggregated, per_call };

/// in_place is a deliberately wrong engine kept for mutation testing: nodes
/// act in id order and see updates made earlier in the same round.
enum class RoundSemantics { synchronous, in_place };

/// 100 * (ceil(log2 n) + 1).
inline std::uint64_t default_round_cap(std::size_t n) {
  const auto bits = n <= 1 ? 0U : static_cast<unsigned>(std::bit_width(n - 1));
  return 100ULL * (bits + 1);
}

struct ProtocolConfig {
  Mode mode = Mode::push_pull;
  std::uint32_t k = 1;
  std::optional<std::uint64_t> round_cap;
  std::uint64_t seed = kDefaultSeed;
  Sampler sampler = Sampler::aggregated;
  RoundSemantics semantics = RoundSemantics::synchronous;
  bool complete_fast_path = true;

  void validate() const {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    if (round_cap && *round_cap < 1) throw InvalidArgument("round cap must be >= 1");
  }

  std::uint64_t cap_for(std::size_t n) const { return round_cap ? *round_cap : default_round_cap(n); }
};

/// State at the start of round t and what round t added. The gains
/// partition I_{t+1} \ I_t.
struct RoundTrace {
  std::uint64_t t = 0;
  std::size_t informed = 0;   // |I_t|
  std::size_t boundary = 0;   // |dI_t|
  std::size_t push_only = 0;
  std::size_t pull_only = 0;
  std::size_t both = 0;

  std::size_t gained() const noexcept { return push_only + pull_only + both; }
  friend bool operator==(const RoundTrace&, const RoundTrace&) = default;
};

/// trace[t] for t = 0..T; the last row is the final state with zero gains.
/// rounds is empty when the trial was censored at the cap.
struct TrialResult {
  std::optional<std::uint64_t> rounds;
  std::uint64_t cap = 0;
  std::size_t n = 0;
  node_id source = 0;
  ProtocolConfig config;
  std::vector<RoundTrace> trace;

  bool censored() const noexcept { return !rounds.has_value(); }
  std::size_t final_informed() const noexcept { return trace.empty() ? 0 : trace.back().informed; }
};

/// Probability that an uninformed node with `informed_neighbors` of `degree`
/// neighbors informed pulls successfully with k draws.
inline double pull_success_probability(std::size_t informed_neighbors, std::size_t degree, std::uint32_t k) {
  if (informed_neighbors == 0 || degree == 0) return 0.0;
  if (informed_neighbors >= degree) return 1.0;
  const double f = static_cast<double>(informed_neighbors) / static_cast<double>(degree);
  return -std::expm1(static_cast<double>(k) * std::log1p(-f));
}

/// |dS| without materializing the set.
inline std::size_t boundary_count(const Graph& g, const NodeSet& s) {
  std::size_t count = 0;
  for (node_id v = 0; v < g.n(); ++v) {
    if (s.contains(v)) continue;
    for (node_id w : g.neighbors(v)) {
      if (s.contains(w)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

/// Executes rounds for one graph and config, reusing scratch buffers.
class RoundEngine {
 public:
  RoundEngine(const Graph& g, const ProtocolConfig& cfg) : g_(g), cfg_(cfg), flags_(g.n(), 0), pick_mark_(g.n(), 0) {
    cfg_.validate();
  }

  /// Runs round `round` from `informed`, writes I_{t+1} into `next`, and
  /// returns the trace row for round t.
  RoundTrace advance(const NodeSet& informed, std::uint64_t round, NodeSet& next) {
    if (informed.universe() != g_.n()) throw InvalidArgument("informed set does not match graph size");
    RoundTrace row;
    row.t = round;
    row.informed = informed.size();
    gained_.clear();

    if (cfg_.semantics == RoundSemantics::in_place) {
      row.boundary = boundary_count(g_, informed);
      advance_in_place(informed, round, next, row);
      return row;
    }

    const bool do_push = cfg_.mode != Mode::pull;
    const bool do_pull = cfg_.mode != Mode::push;
    const std::size_t n = g_.n();

    if (cfg_.complete_fast_path && cfg_.sampler == Sampler::aggregated && n >= 2 && g_.is_complete()) {
      // Every uninformed node sees all |I_t| informed nodes among n-1 neighbors.
      uninformed_.clear();
      for (node_id v = 0; v < n; ++v)
        if (!informed.contains(v)) uninformed_.push_back(v);
      const std::size_t m = informed.size();
      row.boundary = m > 0 ? uninformed_.size() : 0;
      if (do_push && !uninformed_.empty()) {
        informed.for_each([&](node_id u) { push_aggregated(u, round, uninformed_, n - 1); });
      }
      if (do_pull && m > 0) {
        const double p = pull_success_probability(m, n - 1, cfg_.k);
        for (node_id v : uninformed_) {
          CounterStream rng(derive_seed(cfg_.seed, {round, v, kPullRole}));
          if (rng.bernoulli(p)) mark(v, kPulled);
        }
      }
    } else {
      for (node_id v = 0; v < n; ++v) {
        const auto nb = g_.neighbors(v);
        if (nb.empty()) continue;
        if (informed.contains(v)) {
          if (!do_push) continue;
          if (cfg_.sampler == Sampler::per_call) {
            CounterStream rng(derive_seed(cfg_.seed, {round, v, kPushRole}));
            for (std::uint32_t d = 0; d < cfg_.k; ++d) {
              const node_id w = nb[rng.below(nb.size())];
              if (!informed.contains(w)) mark(w, kPushed);
            }
          } else {
            candidates_.clear();
            for (node_id w : nb)
              if (!informed.contains(w)) candidates_.push_back(w);
            if (!candidates_.empty()) push_aggregated(v, round, candidates_, nb.size());
          }
        } else {
          std::size_t c = 0;
          for (node_id w : nb) c += informed.contains(w) ? 1 : 0;
          if (c == 0) continue;
          ++row.boundary;
          if (!do_pull) continue;
          CounterStream rng(derive_seed(cfg_.seed, {round, v, kPullRole}));
          if (cfg_.sampler == Sampler::per_call) {
            for (std::uint32_t d = 0; d < cfg_.k; ++d) {
              if (informed.contains(nb[rng.below(nb.size())])) {
                mark(v, kPulled);
                break;
              }
            }
          } else if (rng.bernoulli(pull_success_probability(c, nb.size(), cfg_.k))) {
            mark(v, kPulled);
          }
        }
      }
    }

    next = informed;
    for (node_id v : gained_) {
      switch (flags_[v]) {
        case kPushed: ++row.push_only; break;
        case kPulled: ++row.pull_only; break;
        default: ++row.both; break;
      }
      flags_[v] = 0;
      next.insert(v);
    }
    return row;
  }

 private:
  static constexpr std::uint64_t kPushRole = 0;
  static constexpr std::uint64_t kPullRole = 1;
  static constexpr std::uint8_t kPushed = 1;
  static constexpr std::uint8_t kPulled = 2;

  void mark(node_id v, std::uint8_t how) {
    if (flags_[v] == 0) gained_.push_back(v);
    flags_[v] |= how;
  }

  // k draws from `degree` neighbors, of which `targets` are uninformed. With
  // d targets already hit, the wait for the next draw that hits a new target
  // is Geometric((|targets| - d) / degree) and that target is uniform among
  // the ones not hit yet.
  void push_aggregated(node_id u, std::uint64_t round, std::span<const node_id> targets, std::size_t degree) {
    CounterStream rng(derive_seed(cfg_.seed, {round, u, kPushRole}));
    const std::size_t total = targets.size();
    std::uint64_t remaining = cfg_.k;
    std::size_t picked = 0;
    picked_.clear();
    bool list_mode = false;
    while (picked < total) {
      const double p = static_cast<double>(total - picked) / static_cast<double>(degree);
      const std::uint64_t wait = rng.geometric(p, remaining + 1);
      if (wait > remaining) break;
      remaining -= wait;
      std::size_t idx = 0;
      if (!list_mode && 2 * picked < total) {
        do {
          idx = rng.below(total);
        } while (pick_mark_[idx] != 0);
      } else {
        if (!list_mode) {
          list_mode = true;
          unpicked_.clear();
          for (std::size_t i = 0; i < total; ++i)
            if (pick_mark_[i] == 0) unpicked_.push_back(i);
        }
        const std::size_t j = rng.below(unpicked_.size());
        idx = unpicked_[j];
        unpicked_[j] = unpicked_.back();
        unpicked_.pop_back();
      }
      pick_mark_[idx] = 1;
      picked_.push_back(idx);
      ++picked;
      mark(targets[idx], kPushed);
    }
    for (std::size_t idx : picked_) pick_mark_[idx] = 0;
  }

  void advance_in_place(const NodeSet& informed, std::uint64_t round, NodeSet& next, RoundTrace& row) {
    const bool do_push = cfg_.mode != Mode::pull;
    const bool do_pull = cfg_.mode != Mode::push;
    next = informed;
    for (node_id v = 0; v < g_.n(); ++v) {
      const auto nb = g_.neighbors(v);
      if (nb.empty()) continue;
      if (next.contains(v)) {
        if (!do_push) continue;
        CounterStream rng(derive_seed(cfg_.seed, {round, v, kPushRole}));
        for (std::uint32_t d = 0; d < cfg_.k; ++d)
          if (next.insert(nb[rng.below(nb.size())])) ++row.push_only;
      } else if (do_pull) {
        CounterStream rng(derive_seed(cfg_.seed, {round, v, kPullRole}));
        for (std::uint32_t d = 0; d < cfg_.k; ++d) {
          if (next.contains(nb[rng.below(nb.size())])) {
            next.insert(v);
            ++row.pull_only;
            break;
          }
        }
      }
    }
  }

  const Graph& g_;
  ProtocolConfig cfg_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint8_t> pick_mark_;
  std::vector<node_id> gained_;
  std::vector<node_id> uninformed_;
  std::vector<node_id> candidates_;
  std::vector<std::size_t> picked_;
  std::vector<std::size_t> unpicked_;
};

struct StepResult {
  NodeSet informed;
  RoundTrace row;
};

/// One round from `informed`; `round` selects the random substreams.
inline StepResult step(const Graph& g, const NodeSet& informed, const ProtocolConfig& cfg, std::uint64_t round = 0) {
  if (informed.empty()) throw InvalidArgument("step needs a nonempty informed set");
  RoundEngine engine(g, cfg);
  StepResult out;
  out.row = engine.advance(informed, round, out.informed);
  return out;
}

struct NoObserver {
  void operator()(std::uint64_t, const NodeSet&) const noexcept {}
};

/// Spreads from `source` until everyone is informed or the cap is reached.
/// `observe(t, I_t)` sees every recorded state, including the final one.
template <class Observer = NoObserver>
TrialResult run_trial(const Graph& g, node_id source, const ProtocolConfig& cfg, Observer&& observe = {}) {
  cfg.validate();
  const std::size_t n = g.n();
  if (source >= n) throw InvalidArgument("source " + std::to_string(source) + " out of range");
  TrialResult result;
  result.cap = cfg.cap_for(n);
  result.n = n;
  result.source = source;
  result.config = cfg;

  RoundEngine engine(g, cfg);
  NodeSet informed(n), next(n);
  informed.insert(source);
  for (std::uint64_t t = 0;; ++t) {
    observe(t, informed);
    if (informed.size() == n) {
      result.trace.push_back({t, n, 0, 0, 0, 0});
      result.rounds = t;
      break;
    }
    if (t == result.cap) {
      result.trace.push_back({t, informed.size(), boundary_count(g, informed), 0, 0, 0});
      break;
    }
    const RoundTrace row = engine.advance(informed, t, next);
    result.trace.push_back(row);
    if (row.boundary == 0) {
      // Nothing outside the informed component is reachable; every later
      // round repeats this state.
      for (std::uint64_t s = t + 1; s <= result.cap; ++s) {
        observe(s, informed);
        result.trace.push_back({s, informed.size(), 0, 0, 0, 0});
      }
      break;
    }
    std::swap(informed, next);
  }
  return result;
}

/// Rounds until the informed set first meets `target`; 0 if it starts
/// there, nullopt if the cap is reached first.
inline std::optional<std::uint64_t> run_until_target(const Graph& g, const NodeSet& start, const NodeSet& target,
                                                     const ProtocolConfig& cfg) {
  cfg.validate();
  if (start.empty() || target.empty()) throw InvalidArgument("start and target sets must be nonempty");
  if (start.universe() != g.n() || target.universe() != g.n()) {
    throw InvalidArgument("start/target sets do not match graph size");
  }
  const std::uint64_t cap = cfg.cap_for(g.n());
  RoundEngine engine(g, cfg);
  NodeSet informed = start, next(g.n());
  for (std::uint64_t t = 0;; ++t) {
    if (informed.intersects(target)) return t;
    if (t == cap) return std::nullopt;
    const RoundTrace row = engine.advance(informed, t, next);
    if (row.boundary == 0) return std::nullopt;
    std::swap(informed, next);
  }
}

}  // namespace rumor
