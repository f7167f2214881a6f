#pragma once

// Batch trials over sweeps of (n, k, phi or p), per-cell summaries, scaling
// fits, and the two-sample symmetry test.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rumor/edge_list.hpp"
#include "rumor/error.hpp"
#include "rumor/generators.hpp"
#include "rumor/graph.hpp"
#include "rumor/parallel.hpp"
#include "rumor/protocol.hpp"
#include "rumor/random.hpp"
#include "rumor/stats.hpp"

namespace rumor {

enum class Family { complete, er, disjoint_cliques, file };

inline const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::complete: return "complete";
    case Family::er: return "er";
    case Family::disjoint_cliques: return "disjoint_cliques";
    case Family::file: return "file";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "complete") return Family::complete;
  if (s == "er") return Family::er;
  if (s == "disjoint_cliques") return Family::disjoint_cliques;
  if (s == "file") return Family::file;
  throw InvalidArgument("unknown family '" + std::string(s) + "'");
}

enum class SourcePolicy { fixed, uniform };

inline const char* to_string(SourcePolicy s) noexcept { return s == SourcePolicy::fixed ? "fixed" : "uniform"; }

inline SourcePolicy parse_source_policy(std::string_view s) {
  if (s == "fixed") return SourcePolicy::fixed;
  if (s == "uniform") return SourcePolicy::uniform;
  throw InvalidArgument("unknown source policy '" + std::string(s) + "'");
}

inline constexpr double kOneMinusInvE = 0.63212055882855767;  // 1 - 1/e

/// alpha(phi) = 1/(1 + 1.6 phi) moved `margin_fraction` of the way toward
/// 1/(1 + phi/(1 - 1/e)), the upper end of the range where G(n, 3phi/n) is
/// an expander.
struct AlphaPolicy {
  double margin_fraction = 0.25;

  double alpha(double phi) const {
    const double lo = 1.0 / (1.0 + 1.6 * phi);
    const double hi = 1.0 / (1.0 + phi / kOneMinusInvE);
    return lo + margin_fraction * (hi - lo);
  }
};

/// (log_phi n + 1/(phi (alpha - 1/(2+2phi)))) log_k n.
inline double expander_model_rounds(double n, double phi, double alpha, double k) {
  const double gap = alpha - 1.0 / (2.0 + 2.0 * phi);
  return (std::log(n) / std::log(phi) + 1.0 / (phi * gap)) * (std::log(n) / std::log(k));
}

/// log_phi n + log_k n.
inline double expander_lower_bound(double n, double phi, double k) {
  return std::log(n) / std::log(phi) + std::log(n) / std::log(k);
}

/// Explicit-constant form of the minimum phi for which G(n, 3phi/n) is a
/// (phi, alpha)-expander with failure exponent c = 1. Infinite when alpha is
/// too large for the argument to apply.
inline double random_graph_phi_requirement(double n, double phi, double alpha) {
  const double a = (1.0 / alpha - 1.0) / phi;
  const double b = a * kOneMinusInvE;
  if (b <= 1.0) return kInf;
  const double gap = 1.0 - 1.0 / b;
  return std::max(50.0, 2.0 / (gap * gap * b)) * 3.0 * std::log(n);
}

struct ExperimentPlan {
  Family family = Family::complete;
  std::vector<std::size_t> n;
  std::vector<std::uint32_t> k{1};
  std::vector<double> phi;       // ER only: p = 3 phi / n
  std::vector<double> p;         // ER only, used when phi is empty
  std::string graph_path;        // FILE only
  Mode mode = Mode::push_pull;
  std::optional<std::uint64_t> round_cap;
  std::uint64_t trials = 100;
  std::uint64_t seed = kDefaultSeed;
  SourcePolicy source = SourcePolicy::fixed;
  Sampler sampler = Sampler::aggregated;
  AlphaPolicy alpha_policy;

  void validate() const {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (k.empty()) throw InvalidArgument("k sweep is empty");
    for (auto kk : k)
      if (kk < 1) throw InvalidArgument("k must be >= 1");
    if (round_cap && *round_cap < 1) throw InvalidArgument("round cap must be >= 1");
    if (family == Family::file) {
      if (graph_path.empty()) throw InvalidArgument("file family needs a graph path");
    } else if (n.empty()) {
      throw InvalidArgument("n sweep is empty");
    }
    if (family == Family::er && phi.empty() && p.empty()) throw InvalidArgument("ER family needs a phi or p sweep");
    for (double f : phi)
      if (!(f > 0.0)) throw InvalidArgument("phi must be positive");
    for (double q : p)
      if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
  }
};

struct CellSummary {
  std::size_t index = 0;
  Family family = Family::complete;
  std::size_t n = 0;
  std::uint32_t k = 1;
  std::optional<double> phi;
  std::optional<double> p;
  std::optional<double> alpha;
  RoundStats stats;
  std::optional<double> model_value;
  std::optional<double> lower_bound;
  std::optional<double> ratio;        // mean / model_value, only without censoring
  std::uint32_t instance_attempts = 0;
  std::vector<std::string> flags;
  std::optional<std::string> error;
  std::vector<std::optional<std::uint64_t>> rounds;
};

struct ExperimentSummary {
  ExperimentPlan plan;
  std::vector<CellSummary> cells;
};

namespace detail {

struct CellSpec {
  std::size_t n = 0;
  std::uint32_t k = 1;
  std::optional<double> phi;
  std::optional<double> p;
};

inline std::vector<CellSpec> enumerate_cells(const ExperimentPlan& plan, std::size_t file_n) {
  std::vector<std::size_t> ns = plan.family == Family::file ? std::vector<std::size_t>{file_n} : plan.n;
  std::vector<CellSpec> cells;
  for (std::size_t n : ns) {
    for (std::uint32_t k : plan.k) {
      if (plan.family == Family::er && !plan.phi.empty()) {
        for (double f : plan.phi) cells.push_back({n, k, f, 3.0 * f / static_cast<double>(n)});
      } else if (plan.family == Family::er) {
        for (double q : plan.p) cells.push_back({n, k, std::nullopt, q});
      } else {
        cells.push_back({n, k, std::nullopt, std::nullopt});
      }
    }
  }
  return cells;
}

}  // namespace detail

inline constexpr std::uint32_t kInstanceResamples = 3;

/// Runs every cell of the plan. `threads` only changes speed: trial i of
/// cell c always uses seed derive_seed(plan.seed, {c, i}). A FILE plan reads
/// plan.graph_path unless `preloaded` is given.
inline ExperimentSummary run_experiment(const ExperimentPlan& plan, unsigned threads = 1,
                                        const Graph* preloaded = nullptr) {
  plan.validate();
  ExperimentSummary out;
  out.plan = plan;

  std::optional<Graph> file_graph;
  if (plan.family == Family::file && preloaded == nullptr) file_graph = load_edge_list_file(plan.graph_path);
  const Graph* fixed_graph = preloaded != nullptr ? preloaded : (file_graph ? &*file_graph : nullptr);

  const auto cells_to_run = detail::enumerate_cells(plan, fixed_graph != nullptr ? fixed_graph->n() : 0);
  for (std::size_t c = 0; c < cells_to_run.size(); ++c) {
    const auto& sc = cells_to_run[c];
    CellSummary cell;
    cell.index = c;
    cell.family = plan.family;
    cell.n = sc.n;
    cell.k = sc.k;
    cell.phi = sc.phi;
    cell.p = sc.p;
    const double n = static_cast<double>(sc.n);
    const double k = static_cast<double>(sc.k);

    std::optional<Graph> owned;
    const Graph* g = fixed_graph;
    try {
      switch (plan.family) {
        case Family::complete: owned = generate_complete(sc.n); break;
        case Family::disjoint_cliques: owned = generate_disjoint_cliques(sc.n); break;
        case Family::er: {
          if (!(*sc.p >= 0.0 && *sc.p <= 1.0)) {
            throw InvalidArgument("edge probability " + std::to_string(*sc.p) + " outside [0,1]");
          }
          for (std::uint32_t attempt = 0; attempt <= kInstanceResamples; ++attempt) {
            owned = generate_er(sc.n, *sc.p, derive_seed(plan.seed, {c, 0x1257A, attempt}));
            cell.instance_attempts = attempt + 1;
            if (is_connected(*owned)) break;
          }
          if (!is_connected(*owned)) cell.flags.push_back("disconnected_instance");
          break;
        }
        case Family::file: break;
      }
      if (owned) g = &*owned;
      if (plan.family != Family::er) cell.instance_attempts = 1;
    } catch (const Error& e) {
      cell.error = std::string(e.kind()) + ": " + e.what();
      out.cells.push_back(std::move(cell));
      continue;
    }

    // Reference values for the report columns.
    if (plan.family == Family::complete && sc.n >= 2) {
      cell.model_value = sc.k >= 2 ? std::log(n) / std::log(k) : std::log2(n);
    }
    if (sc.phi) {
      const double phi = *sc.phi;
      cell.alpha = plan.alpha_policy.alpha(phi);
      if (phi > 1.0 && sc.k >= 2) {
        cell.model_value = expander_model_rounds(n, phi, *cell.alpha, k);
        cell.lower_bound = expander_lower_bound(n, phi, k);
      }
      if (!(*cell.alpha > 1.0 / (2.0 + 2.0 * phi))) cell.flags.push_back("alpha_at_or_below_disconnection_threshold");
      const double ln_n = std::log(n);
      if (!(k > ln_n * ln_n * ln_n)) cell.flags.push_back("k_not_above_log3_n");
      if (phi < random_graph_phi_requirement(n, phi, *cell.alpha)) cell.flags.push_back("phi_below_random_graph_bound");
    }

    ProtocolConfig cfg;
    cfg.mode = plan.mode;
    cfg.k = sc.k;
    cfg.round_cap = plan.round_cap;
    cfg.sampler = plan.sampler;
    cell.rounds.assign(plan.trials, std::nullopt);
    parallel_for(plan.trials, threads, [&](std::size_t i) {
      ProtocolConfig trial_cfg = cfg;
      trial_cfg.seed = derive_seed(plan.seed, {c, i});
      node_id source = 0;
      if (plan.source == SourcePolicy::uniform) {
        CounterStream rng(derive_seed(plan.seed, {c, i, 0x5012CE}));
        source = static_cast<node_id>(rng.below(g->n()));
      }
      cell.rounds[i] = run_trial(*g, source, trial_cfg).rounds;
    });
    cell.stats = summarize_rounds(cell.rounds);
    if (cell.model_value && cell.stats.censored == 0 && *cell.model_value > 0.0) {
      cell.ratio = cell.stats.mean / *cell.model_value;
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scaling fits

enum class FitAxis { k, n, phi };

inline const char* to_string(FitAxis a) noexcept {
  switch (a) {
    case FitAxis::k: return "K";
    case FitAxis::n: return "N";
    case FitAxis::phi: return "PHI";
  }
  return "?";
}

inline FitAxis parse_fit_axis(std::string_view s) {
  if (s == "K" || s == "k") return FitAxis::k;
  if (s == "N" || s == "n") return FitAxis::n;
  if (s == "PHI" || s == "phi") return FitAxis::phi;
  throw InvalidArgument("unknown fit axis '" + std::string(s) + "'");
}

struct FitReport {
  FitAxis axis = FitAxis::n;
  std::string regressor;
  std::vector<double> x;
  std::vector<double> y;
  LinearFit fit;
};

/// Least squares of mean rounds against ln n / ln k (K), log2 n (N) or
/// ln n / ln phi (PHI). Cells with censored trials or errors refuse the fit.
inline FitReport fit_log_scaling(const ExperimentSummary& summary, FitAxis axis) {
  FitReport r;
  r.axis = axis;
  r.regressor = axis == FitAxis::k ? "ln n / ln k" : axis == FitAxis::n ? "log2 n" : "ln n / ln phi";
  for (const auto& cell : summary.cells) {
    const std::string where = "cell " + std::to_string(cell.index);
    if (cell.error) throw PreconditionViolation("fit refused: " + where + " failed: " + *cell.error, {});
    if (cell.stats.censored > 0) {
      throw PreconditionViolation("fit refused: " + where + " has " + std::to_string(cell.stats.censored) +
                                      " censored trials",
                                  {});
    }
    const double n = static_cast<double>(cell.n);
    double x = 0.0;
    switch (axis) {
      case FitAxis::k:
        if (cell.k < 2) throw PreconditionViolation("fit refused: " + where + " has k < 2", {});
        x = std::log(n) / std::log(static_cast<double>(cell.k));
        break;
      case FitAxis::n: x = std::log2(n); break;
      case FitAxis::phi:
        if (!cell.phi || *cell.phi <= 1.0) throw PreconditionViolation("fit refused: " + where + " needs phi > 1", {});
        x = std::log(n) / std::log(*cell.phi);
        break;
    }
    r.x.push_back(x);
    r.y.push_back(cell.stats.mean);
  }
  if (r.x.size() < 3) {
    throw PreconditionViolation("fit refused: need at least 3 cells, got " + std::to_string(r.x.size()), {});
  }
  r.fit = least_squares(r.x, r.y);
  return r;
}

// ---------------------------------------------------------------------------
// Symmetry

struct SymmetryReport {
  std::uint64_t trials = 0;
  double significance = 0.01;
  double ks = 0.0;
  double critical = 0.0;
  bool consistent = true;
  RoundStats forward;    // S -> T
  RoundStats backward;   // T -> S
};

/// Samples the hitting time S -> T and T -> S `trials` times each and
/// compares the two laws with a two-sample KS test.
inline SymmetryReport symmetry_test(const Graph& g, const NodeSet& s, const NodeSet& t, const ProtocolConfig& cfg,
                                    std::uint64_t trials, unsigned threads = 1, double significance = 0.01) {
  cfg.validate();
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (s.empty() || t.empty()) throw InvalidArgument("S and T must be nonempty");
  if (s.universe() != g.n() || t.universe() != g.n()) throw InvalidArgument("S/T do not match graph size");
  if (s.intersects(t)) throw InvalidArgument("S and T must be disjoint");

  std::vector<std::optional<std::uint64_t>> fwd(trials), bwd(trials);
  parallel_for(2 * trials, threads, [&](std::size_t job) {
    const std::uint64_t side = job % 2;
    const std::uint64_t i = job / 2;
    ProtocolConfig c = cfg;
    c.seed = derive_seed(cfg.seed, {side, i});
    if (side == 0) {
      fwd[i] = run_until_target(g, s, t, c);
    } else {
      bwd[i] = run_until_target(g, t, s, c);
    }
  });
  SymmetryReport r;
  r.trials = trials;
  r.significance = significance;
  r.ks = ks_statistic(as_extended(fwd), as_extended(bwd));
  r.critical = ks_critical_value(significance, trials, trials);
  r.consistent = r.ks < r.critical;
  r.forward = summarize_rounds(fwd);
  r.backward = summarize_rounds(bwd);
  return r;
}

// ---------------------------------------------------------------------------
// Expander scaling

/// G(n, 3phi/n) sweep reported against the expander model and lower bound.
inline ExperimentSummary expander_scaling_experiment(const std::vector<double>& phis,
                                                     const std::vector<std::uint32_t>& ks,
                                                     const std::vector<std::size_t>& ns, AlphaPolicy policy,
                                                     std::uint64_t trials, std::uint64_t seed,
                                                     unsigned threads = 1) {
  ExperimentPlan plan;
  plan.family = Family::er;
  plan.phi = phis;
  plan.k = ks;
  plan.n = ns;
  plan.alpha_policy = policy;
  plan.trials = trials;
  plan.seed = seed;
  return run_experiment(plan, threads);
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal; "nan" and "inf" for non-finite values.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

inline constexpr const char* kSummaryCsvHeader =
    "family,n,k,phi,p,trials,mean,median,q05,q25,q75,q95,max,censored,model_value,ratio";

inline void write_summary_csv(const ExperimentSummary& s, std::ostream& out) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& c : s.cells) {
    out << to_string(c.family) << ',' << c.n << ',' << c.k << ',' << format_optional(c.phi) << ','
        << format_optional(c.p) << ',' << c.stats.trials << ',' << format_number(c.stats.mean) << ','
        << format_number(c.stats.median) << ',' << format_number(c.stats.q05) << ',' << format_number(c.stats.q25)
        << ',' << format_number(c.stats.q75) << ',' << format_number(c.stats.q95) << ','
        << format_number(c.stats.max) << ',' << c.stats.censored << ',' << format_optional(c.model_value) << ','
        << format_optional(c.ratio) << '\n';
  }
}

inline void write_trace_csv(const TrialResult& r, std::ostream& out) {
  out << "t,informed,boundary,push_only,pull_only,both\n";
  for (const auto& row : r.trace) {
    out << row.t << ',' << row.informed << ',' << row.boundary << ',' << row.push_only << ',' << row.pull_only << ','
        << row.both << '\n';
  }
}

}  // namespace rumor
