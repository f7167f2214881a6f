#pragma once

// JSON forms of graphs, reports, trials, plans and summaries. Every
// document carries "schema"; top-level outputs also carry "version" and the
// resolved "config" they were produced with.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumor/boundary_analysis.hpp"
#include "rumor/error.hpp"
#include "rumor/expansion.hpp"
#include "rumor/experiment.hpp"
#include "rumor/graph.hpp"
#include "rumor/protocol.hpp"
#include "rumor/rational.hpp"
#include "rumor/stats.hpp"
#include "rumor/version.hpp"

namespace rumor {

using json = nlohmann::ordered_json;

inline constexpr const char* kGraphSchema = "rumor.graph/1";
inline constexpr const char* kPlanSchema = "rumor.plan/1";

/// Finite numbers as numbers, +inf as the string "inf", NaN as null.
inline json number_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json optional_json(const std::optional<double>& x) { return x ? number_json(*x) : json(nullptr); }

inline json envelope(const std::string& kind, json config) {
  json j;
  j["schema"] = "rumor." + kind + "/1";
  j["version"] = kVersion;
  j["config"] = std::move(config);
  return j;
}

// ---------------------------------------------------------------------------
// Graph

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  json j;
  j["schema"] = kGraphSchema;
  j["n"] = g.n();
  j["edges"] = std::move(edges);
  return j;
}

inline Graph graph_from_json(const json& j) {
  try {
    const json& doc = j.contains("graph") ? j.at("graph") : j;
    if (!doc.contains("n") || !doc.contains("edges")) throw ParseError(0, "graph JSON needs 'n' and 'edges'");
    const auto n = doc.at("n").get<std::uint64_t>();
    if (n == 0) throw ParseError(0, "graph JSON has n = 0");
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError(0, "graph JSON edge must be [u, v]");
      edges.push_back({e[0].get<node_id>(), e[1].get<node_id>()});
    }
    return Graph::from_edges(static_cast<std::size_t>(n), edges);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("graph JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Expansion

inline json expansion_report_json(const ExpansionReport& r) {
  json j;
  j["alpha"] = r.alpha.str();
  j["phi_min"] = r.phi_min.str();
  j["witness"] = r.witness.members();
  j["method"] = to_string(r.method);
  j["sets_examined"] = r.sets_examined;
  j["max_set_size"] = r.max_set_size;
  return j;
}

// ---------------------------------------------------------------------------
// Protocol

inline json protocol_config_json(const ProtocolConfig& c, std::size_t n) {
  json j;
  j["mode"] = to_string(c.mode);
  j["k"] = c.k;
  j["round_cap"] = c.cap_for(n);
  j["seed"] = c.seed;
  j["sampler"] = c.sampler == Sampler::aggregated ? "aggregated" : "per_call";
  return j;
}

inline json trace_row_json(const RoundTrace& r) {
  return json{{"t", r.t},
              {"informed", r.informed},
              {"boundary", r.boundary},
              {"push_only", r.push_only},
              {"pull_only", r.pull_only},
              {"both", r.both}};
}

inline json trial_result_json(const TrialResult& r) {
  json j;
  j["n"] = r.n;
  j["source"] = r.source;
  j["rounds_to_completion"] = r.rounds ? json(*r.rounds) : json(nullptr);
  j["censored"] = r.censored();
  j["cap"] = r.cap;
  j["final_informed"] = r.final_informed();
  j["config"] = protocol_config_json(r.config, r.n);
  json rows = json::array();
  for (const auto& row : r.trace) rows.push_back(trace_row_json(row));
  j["trace"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// Statistics

inline json round_stats_json(const RoundStats& s) {
  return json{{"trials", s.trials},       {"completed", s.completed},       {"censored", s.censored},
              {"mean", number_json(s.mean)}, {"std_error", number_json(s.std_error)},
              {"median", number_json(s.median)}, {"q05", number_json(s.q05)}, {"q25", number_json(s.q25)},
              {"q75", number_json(s.q75)},   {"q95", number_json(s.q95)},   {"max", number_json(s.max)}};
}

inline json symmetry_report_json(const SymmetryReport& r) {
  json j;
  j["trials"] = r.trials;
  j["significance"] = r.significance;
  j["ks_statistic"] = r.ks;
  j["critical_value"] = r.critical;
  j["decision"] = r.consistent ? "CONSISTENT" : "INCONSISTENT";
  j["forward"] = round_stats_json(r.forward);
  j["backward"] = round_stats_json(r.backward);
  return j;
}

inline json fit_report_json(const FitReport& r) {
  json j;
  j["axis"] = to_string(r.axis);
  j["regressor"] = r.regressor;
  j["x"] = r.x;
  j["y"] = r.y;
  j["slope"] = r.fit.slope;
  j["intercept"] = r.fit.intercept;
  j["r_squared"] = r.fit.r_squared;
  j["residuals"] = r.fit.residuals;
  return j;
}

// ---------------------------------------------------------------------------
// Experiment plans and summaries

inline json plan_to_json(const ExperimentPlan& p) {
  json j;
  j["schema"] = kPlanSchema;
  j["family"] = to_string(p.family);
  j["n"] = p.n;
  j["k"] = p.k;
  j["phi"] = p.phi;
  j["p"] = p.p;
  if (p.family == Family::file) j["graph"] = p.graph_path;
  j["mode"] = to_string(p.mode);
  j["round_cap"] = p.round_cap ? json(*p.round_cap) : json(nullptr);
  j["trials"] = p.trials;
  j["seed"] = p.seed;
  j["source"] = to_string(p.source);
  j["sampler"] = p.sampler == Sampler::aggregated ? "aggregated" : "per_call";
  j["alpha_margin_fraction"] = p.alpha_policy.margin_fraction;
  return j;
}

/// Accepts a plan document or any document embedding one under "plan" (such
/// as an experiment summary). Missing fields keep their defaults.
inline ExperimentPlan plan_from_json(const json& doc) {
  try {
    const json& j = doc.contains("plan") ? doc.at("plan") : doc;
    ExperimentPlan p;
    if (j.contains("family")) p.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("n")) p.n = j.at("n").get<std::vector<std::size_t>>();
    if (j.contains("k")) p.k = j.at("k").get<std::vector<std::uint32_t>>();
    if (j.contains("phi")) p.phi = j.at("phi").get<std::vector<double>>();
    if (j.contains("p")) p.p = j.at("p").get<std::vector<double>>();
    if (j.contains("graph")) p.graph_path = j.at("graph").get<std::string>();
    if (j.contains("mode")) p.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("round_cap") && !j.at("round_cap").is_null()) p.round_cap = j.at("round_cap").get<std::uint64_t>();
    if (j.contains("trials")) p.trials = j.at("trials").get<std::uint64_t>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("source")) p.source = parse_source_policy(j.at("source").get<std::string>());
    if (j.contains("sampler")) {
      const auto s = j.at("sampler").get<std::string>();
      if (s == "aggregated") {
        p.sampler = Sampler::aggregated;
      } else if (s == "per_call") {
        p.sampler = Sampler::per_call;
      } else {
        throw InvalidArgument("unknown sampler '" + s + "'");
      }
    }
    if (j.contains("alpha_margin_fraction")) p.alpha_policy.margin_fraction = j.at("alpha_margin_fraction").get<double>();
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("plan JSON: ") + e.what());
  }
}

inline json cell_json(const CellSummary& c) {
  json j;
  j["index"] = c.index;
  j["family"] = to_string(c.family);
  j["n"] = c.n;
  j["k"] = c.k;
  j["phi"] = optional_json(c.phi);
  j["p"] = optional_json(c.p);
  j["alpha"] = optional_json(c.alpha);
  j["stats"] = round_stats_json(c.stats);
  j["model_value"] = optional_json(c.model_value);
  j["lower_bound"] = optional_json(c.lower_bound);
  j["ratio"] = optional_json(c.ratio);
  j["instance_attempts"] = c.instance_attempts;
  j["flags"] = c.flags;
  j["error"] = c.error ? json(*c.error) : json(nullptr);
  return j;
}

inline json summary_to_json(const ExperimentSummary& s) {
  json j = envelope("experiment", plan_to_json(s.plan));
  j["plan"] = plan_to_json(s.plan);
  json cells = json::array();
  for (const auto& c : s.cells) cells.push_back(cell_json(c));
  j["cells"] = std::move(cells);
  return j;
}

// ---------------------------------------------------------------------------
// Boundary analysis

inline json partition_json(const BoundaryPartition& p, std::uint32_t k) {
  json buckets = json::array();
  for (const auto& b : p.buckets) {
    buckets.push_back({{"i", b.index},
                       {"d_i", b.d},
                       {"size", b.size()},
                       {"volume", b.volume},
                       {"in_good_set", b.good},
                       {"regime", classify_bucket(b.d, b.size(), p.boundary_size, k).str()}});
  }
  json j;
  j["boundary_size"] = p.boundary_size;
  j["log_base"] = to_string(p.log_base);
  j["good_indices"] = p.good_indices;
  j["half_boundary"] = check_half_boundary(p);
  j["buckets"] = std::move(buckets);
  return j;
}

inline json growth_audit_json(const GrowthAuditReport& r) {
  json windows = json::array();
  for (const auto& w : r.windows) {
    windows.push_back({{"t", w.t},
                       {"informed", w.informed},
                       {"boundary", w.boundary},
                       {"informed_growth", w.informed_growth},
                       {"boundary_growth", w.boundary_growth},
                       {"informed_ok", w.informed_ok},
                       {"boundary_ok", w.boundary_ok},
                       {"informed_margin", number_json(w.informed_margin)},
                       {"boundary_margin", number_json(w.boundary_margin)}});
  }
  json j;
  j["k"] = r.k;
  j["window"] = r.window;
  j["audited"] = r.windows.size();
  j["holding"] = r.holding;
  j["rate"] = r.rate();
  j["windows"] = std::move(windows);
  return j;
}

}  // namespace rumor
