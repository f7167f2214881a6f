#pragma once

// Command-line front end. run_cli is the whole program minus main(), so
// tests can drive it with string arguments and captured streams.
//
// Exit codes: 0 success, 1 domain error ("error: <kind>: <message>" on the
// error stream), 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rumor/boundary_analysis.hpp"
#include "rumor/edge_list.hpp"
#include "rumor/error.hpp"
#include "rumor/expansion.hpp"
#include "rumor/experiment.hpp"
#include "rumor/generators.hpp"
#include "rumor/graph.hpp"
#include "rumor/json_io.hpp"
#include "rumor/protocol.hpp"
#include "rumor/rational.hpp"
#include "rumor/stats.hpp"
#include "rumor/version.hpp"

namespace rumor::cli {

struct GlobalOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string format;   // empty: subcommand default
  std::string out_path;
  bool seed_given = false;
};

/// Where a subcommand's graph comes from: a file, or a generator family.
struct GraphSource {
  std::string path;
  std::string family;
  std::size_t n = 0;
  std::string p;
  std::string phi;
  std::size_t m = 0;
  std::size_t bridge = 0;
};

inline const std::vector<std::string> kGeneratorFamilies = {"complete", "er",   "disjoint_cliques", "path",
                                                            "cycle",    "star", "barbell"};

inline void add_graph_options(CLI::App* sub, GraphSource& gs, bool allow_file) {
  if (allow_file) sub->add_option("--graph", gs.path, "graph file: edge list or JSON");
  sub->add_option("--family", gs.family, "generator family")->check(CLI::IsMember(kGeneratorFamilies));
  sub->add_option("--n", gs.n, "node count for the generator");
  sub->add_option("--p", gs.p, "edge probability for er");
  sub->add_option("--phi-er", gs.phi, "er with p = 3 phi / n");
  sub->add_option("--m", gs.m, "clique size for barbell");
  sub->add_option("--bridge", gs.bridge, "bridge path length for barbell");
}

/// Edge list unless the first non-blank character is '{'.
inline Graph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(0, "'" + path + "': " + e.what());
    }
    return graph_from_json(doc);
  }
  return parse_edge_list(text);
}

inline double parse_probability(const std::string& s) { return Rational::parse(s).to_double(); }

inline Graph build_graph(const GraphSource& gs, std::uint64_t seed) {
  if (!gs.path.empty()) {
    if (!gs.family.empty()) throw InvalidArgument("give either --graph or --family, not both");
    return load_graph_file(gs.path);
  }
  if (gs.family.empty()) throw InvalidArgument("no graph: pass --graph or --family");
  const std::string& f = gs.family;
  if (f == "barbell") {
    if (gs.m == 0) throw InvalidArgument("barbell needs --m");
    return generate_barbell(gs.m, gs.bridge);
  }
  if (gs.n == 0) throw InvalidArgument("family '" + f + "' needs --n >= 1");
  if (f == "complete") return generate_complete(gs.n);
  if (f == "disjoint_cliques") return generate_disjoint_cliques(gs.n);
  if (f == "path") return generate_path(gs.n);
  if (f == "cycle") return generate_cycle(gs.n);
  if (f == "star") return generate_star(gs.n);
  // er
  double p = 0.0;
  if (!gs.p.empty() && !gs.phi.empty()) throw InvalidArgument("give either --p or --phi-er, not both");
  if (!gs.p.empty()) {
    p = parse_probability(gs.p);
  } else if (!gs.phi.empty()) {
    p = 3.0 * parse_probability(gs.phi) / static_cast<double>(gs.n);
  } else {
    throw InvalidArgument("er needs --p or --phi-er");
  }
  return generate_er(gs.n, p, seed);
}

inline json graph_source_json(const GraphSource& gs) {
  json j;
  if (!gs.path.empty()) {
    j["graph"] = gs.path;
    return j;
  }
  j["family"] = gs.family;
  if (gs.n) j["n"] = gs.n;
  if (!gs.p.empty()) j["p"] = gs.p;
  if (!gs.phi.empty()) j["phi_er"] = gs.phi;
  if (gs.family == "barbell") {
    j["m"] = gs.m;
    j["bridge"] = gs.bridge;
  }
  return j;
}

inline std::vector<node_id> parse_node_list(const std::string& s) {
  std::vector<node_id> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || v >= UINT32_MAX) {
      throw InvalidArgument("bad node id '" + tok + "'");
    }
    out.push_back(static_cast<node_id>(v));
  }
  return out;
}

inline std::string human_from_json(const json& j, const std::string& indent = "") {
  std::string s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      s += indent + it.key() + ":\n" + human_from_json(*it, indent + "  ");
    } else {
      s += indent + it.key() + ": " + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
    }
  }
  return s;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"k-PUSH&PULL rumor spreading toolkit", "rumor"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    auto* seed_opt = app.add_option("--seed", g_.seed, "master seed")->capture_default_str();
    app.add_option("--threads", g_.threads, "worker threads (0: all cores)")->capture_default_str();
    app.add_option("--format", g_.format, "output format")->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--out", g_.out_path, "write output to this file");

    setup_gen(app);
    setup_expansion(app);
    setup_diameter(app);
    setup_simulate(app);
    setup_experiment(app);
    setup_audit(app);
    setup_symmetry(app);
    setup_tailbound(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out_ << kVersion << '\n';
      return 0;
    } catch (const CLI::ParseError& e) {
      err_ << "error: usage: " << single_line(e.what()) << '\n';
      return 2;
    }
    g_.seed_given = seed_opt->count() > 0;

    try {
      action_();
      return 0;
    } catch (const Error& e) {
      err_ << "error: " << e.kind() << ": " << single_line(e.what()) << '\n';
      return 1;
    } catch (const std::exception& e) {
      err_ << "error: internal: " << single_line(e.what()) << '\n';
      return 1;
    }
  }

 private:
  static std::string single_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  }

  std::string format_or(const std::string& fallback) const { return g_.format.empty() ? fallback : g_.format; }

  void emit(const std::string& text) {
    if (g_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(g_.out_path, std::ios::binary);
    if (!f) throw IoError("cannot write output file '" + g_.out_path + "'");
    f << text;
  }

  void emit_json(const json& j, const std::string& csv = {}) {
    const std::string fmt = format_or("json");
    if (fmt == "json") {
      emit(j.dump(2) + "\n");
    } else if (fmt == "csv") {
      if (csv.empty()) throw InvalidArgument("csv output is not available for this subcommand");
      emit(csv);
    } else {
      emit(human_from_json(j));
    }
  }

  json base_config(const char* command) const {
    json c;
    c["command"] = command;
    c["seed"] = g_.seed;
    return c;
  }

  // ---- gen ---------------------------------------------------------------
  void setup_gen(CLI::App& app) {
    auto* sub = app.add_subcommand("gen", "generate a graph");
    add_graph_options(sub, gen_, false);
    sub->callback([this] {
      action_ = [this] {
        if (gen_.family.empty()) throw InvalidArgument("gen needs --family");
        const Graph g = build_graph(gen_, g_.seed);
        json config = base_config("gen");
        config["source"] = graph_source_json(gen_);
        const std::string fmt = format_or("human");
        if (fmt == "json") {
          json j = envelope("gen", config);
          j["graph"] = graph_to_json(g);
          emit(j.dump(2) + "\n");
        } else if (fmt == "csv") {
          std::string s = "u,v\n";
          for (const auto& e : g.edges()) s += std::to_string(e.u) + "," + std::to_string(e.v) + "\n";
          emit(s);
        } else {
          emit("# rumor " + std::string(kVersion) + " " + config.dump() + "\n" + to_edge_list(g));
        }
      };
    });
  }

  // ---- expansion ---------------------------------------------------------
  void setup_expansion(CLI::App& app) {
    auto* sub = app.add_subcommand("expansion", "vertex expansion and expander certification");
    add_graph_options(sub, exp_graph_, true);
    sub->add_option("--alpha", exp_alpha_, "set-size fraction, p/q or decimal")->required();
    sub->add_option("--phi", exp_phi_, "certify as a (phi, alpha)-expander");
    sub->add_option("--mode", exp_mode_, "exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}))
        ->capture_default_str();
    sub->add_option("--budget", exp_budget_, "maximum subsets for exact enumeration")->capture_default_str();
    sub->add_option("--samples", exp_samples_, "candidate sets for sampled mode")->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        const Graph g = build_graph(exp_graph_, g_.seed);
        const Rational alpha = Rational::parse(exp_alpha_);
        const auto method = exp_mode_ == "exact" ? ExpansionMethod::exact : ExpansionMethod::sampled;
        json config = base_config("expansion");
        config["source"] = graph_source_json(exp_graph_);
        config["alpha"] = alpha.str();
        config["mode"] = exp_mode_;
        config["budget"] = exp_budget_;
        config["samples"] = exp_samples_;
        std::optional<Rational> phi;
        if (!exp_phi_.empty()) {
          phi = Rational::parse(exp_phi_);
          config["phi"] = phi->str();
        }
        json j = envelope("expansion", config);
        if (phi) {
          const Feasibility f = check_alpha_feasibility(*phi, alpha);
          j["feasibility"] = to_string(f);
          if (f == Feasibility::impossible) {
            err_ << "warning: IMPOSSIBLE regime: alpha=" << alpha.str()
                 << " exceeds 1/(1+phi)=" << (Rational(1) / (Rational(1) + *phi)).str() << '\n';
          }
          ExpansionOptions opts;
          opts.work_budget = exp_budget_;
          opts.samples = exp_samples_;
          opts.seed = g_.seed;
          opts.threads = g_.threads;
          const auto v = is_expander(g, *phi, alpha, method, opts);
          j["verdict"] = to_string(v.verdict);
          j.update(expansion_report_json(v.report));
        } else {
          const auto r = method == ExpansionMethod::exact
                             ? vertex_expansion_exact(g, alpha, exp_budget_, g_.threads)
                             : vertex_expansion_sample(g, alpha, exp_samples_, g_.seed, {}, g_.threads);
          j.update(expansion_report_json(r));
        }
        emit_json(j);
      };
    });
  }

  // ---- diameter ----------------------------------------------------------
  void setup_diameter(CLI::App& app) {
    auto* sub = app.add_subcommand("diameter", "exact diameter, optionally against the expander bound");
    add_graph_options(sub, diam_graph_, true);
    sub->add_option("--phi", diam_phi_, "phi for the 2 ceil(log_phi n) bound");
    sub->add_option("--alpha", diam_alpha_, "alpha for the bound's precondition");
    sub->add_option("--estimate", diam_estimate_, "only a double-sweep lower bound from this many sources");
    sub->callback([this] {
      action_ = [this] {
        const Graph g = build_graph(diam_graph_, g_.seed);
        json config = base_config("diameter");
        config["source"] = graph_source_json(diam_graph_);
        json j;
        if (diam_estimate_ > 0) {
          config["estimate_sources"] = diam_estimate_;
          j = envelope("diameter", config);
          const auto lb = diameter_lower_bound(g, diam_estimate_, g_.seed);
          j["diameter_lower_bound"] = lb ? json(*lb) : json("infinite");
        } else {
          j = envelope("diameter", config);
          const auto d = diameter(g);
          j["diameter"] = d ? json(*d) : json("infinite");
          if (!diam_phi_.empty() || !diam_alpha_.empty()) {
            if (diam_phi_.empty() || diam_alpha_.empty()) throw InvalidArgument("--phi and --alpha go together");
            const auto rep = check_diameter_lemma(g, Rational::parse(diam_phi_), Rational::parse(diam_alpha_));
            j["bound"] = rep.bound ? json(*rep.bound) : json(nullptr);
            j["precondition_met"] = rep.precondition_met;
            j["floor_precondition_met"] = rep.floor_precondition_met;
            j["holds"] = rep.holds;
            j["note"] = rep.note;
          }
        }
        j["n"] = g.n();
        j["edges"] = g.edge_count();
        emit_json(j);
      };
    });
  }

  // ---- simulate ----------------------------------------------------------
  struct ProtocolOptions {
    std::string mode = "push_pull";
    std::uint32_t k = 1;
    std::uint64_t cap = 0;
    std::string sampler = "aggregated";
    std::string semantics = "synchronous";
  };

  void add_protocol_options(CLI::App* sub, ProtocolOptions& p) {
    sub->add_option("--mode", p.mode, "push, pull or push_pull")
        ->check(CLI::IsMember({"push", "pull", "push_pull"}))
        ->capture_default_str();
    sub->add_option("--k", p.k, "calls per node per round")->check(CLI::Range(1U, UINT32_MAX))->capture_default_str();
    sub->add_option("--cap", p.cap, "round cap (default 100 (ceil(log2 n) + 1))")->check(CLI::PositiveNumber);
    sub->add_option("--sampler", p.sampler, "aggregated or per_call")
        ->check(CLI::IsMember({"aggregated", "per_call"}))
        ->capture_default_str();
  }

  ProtocolConfig protocol_config(const ProtocolOptions& p) const {
    ProtocolConfig c;
    c.mode = parse_mode(p.mode);
    c.k = p.k;
    if (p.cap > 0) c.round_cap = p.cap;
    c.seed = g_.seed;
    c.sampler = p.sampler == "per_call" ? Sampler::per_call : Sampler::aggregated;
    c.semantics = p.semantics == "in_place" ? RoundSemantics::in_place : RoundSemantics::synchronous;
    return c;
  }

  void setup_simulate(CLI::App& app) {
    auto* sub = app.add_subcommand("simulate", "run rumor-spreading trials");
    add_graph_options(sub, sim_graph_, true);
    add_protocol_options(sub, sim_proto_);
    sub->add_option("--source", sim_source_, "source node")->capture_default_str();
    sub->add_option("--trials", sim_trials_, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        const Graph g = build_graph(sim_graph_, g_.seed);
        const ProtocolConfig cfg = protocol_config(sim_proto_);
        json config = base_config("simulate");
        config["source"] = graph_source_json(sim_graph_);
        config["protocol"] = protocol_config_json(cfg, g.n());
        config["source_node"] = sim_source_;
        config["trials"] = sim_trials_;
        if (sim_trials_ == 1) {
          const auto r = run_trial(g, sim_source_, cfg);
          json j = envelope("simulate", config);
          j["result"] = trial_result_json(r);
          std::ostringstream csv;
          write_trace_csv(r, csv);
          emit_json(j, csv.str());
          return;
        }
        std::vector<std::optional<std::uint64_t>> rounds(sim_trials_);
        parallel_for(sim_trials_, g_.threads, [&](std::size_t i) {
          ProtocolConfig c = cfg;
          c.seed = derive_seed(cfg.seed, {i});
          rounds[i] = run_trial(g, sim_source_, c).rounds;
        });
        json j = envelope("simulate", config);
        j["stats"] = round_stats_json(summarize_rounds(rounds));
        json list = json::array();
        for (const auto& r : rounds) list.push_back(r ? json(*r) : json(nullptr));
        j["rounds"] = std::move(list);
        std::string csv = "trial,rounds\n";
        for (std::size_t i = 0; i < rounds.size(); ++i)
          csv += std::to_string(i) + "," + (rounds[i] ? std::to_string(*rounds[i]) : "censored") + "\n";
        emit_json(j, csv);
      };
    });
  }

  // ---- experiment --------------------------------------------------------
  void setup_experiment(CLI::App& app) {
    auto* sub = app.add_subcommand("experiment", "sweep trials over a plan");
    sub->add_option("--plan", ex_plan_path_, "plan JSON (an experiment summary also works)");
    sub->add_option("--family", ex_family_, "complete, er, disjoint_cliques or file")
        ->check(CLI::IsMember({"complete", "er", "disjoint_cliques", "file"}));
    sub->add_option("--graph", ex_graph_, "graph file for the file family");
    sub->add_option("--n", ex_n_, "node counts")->delimiter(',');
    sub->add_option("--k", ex_k_, "call counts")->delimiter(',')->check(CLI::Range(1U, UINT32_MAX));
    sub->add_option("--phi", ex_phi_, "expansion targets (er: p = 3 phi / n)")->delimiter(',');
    sub->add_option("--p", ex_p_, "edge probabilities (er)")->delimiter(',');
    sub->add_option("--trials", ex_trials_, "trials per cell")->check(CLI::PositiveNumber);
    sub->add_option("--mode", ex_mode_, "push, pull or push_pull")->check(CLI::IsMember({"push", "pull", "push_pull"}));
    sub->add_option("--cap", ex_cap_, "round cap")->check(CLI::PositiveNumber);
    sub->add_option("--source-policy", ex_source_, "fixed or uniform")->check(CLI::IsMember({"fixed", "uniform"}));
    sub->add_option("--fit", ex_fit_, "least-squares fit along K, N or PHI")->check(CLI::IsMember({"K", "N", "PHI"}));
    sub->callback([this] {
      action_ = [this] {
        ExperimentPlan plan;
        if (!ex_plan_path_.empty()) {
          std::ifstream in(ex_plan_path_, std::ios::binary);
          if (!in) throw IoError("cannot open plan file '" + ex_plan_path_ + "'");
          json doc;
          try {
            doc = json::parse(in);
          } catch (const json::parse_error& e) {
            throw ParseError(0, "'" + ex_plan_path_ + "': " + e.what());
          }
          plan = plan_from_json(doc);
        } else {
          plan.seed = g_.seed;
        }
        if (!ex_family_.empty()) plan.family = parse_family(ex_family_);
        if (!ex_graph_.empty()) plan.graph_path = ex_graph_;
        if (!ex_n_.empty()) plan.n = ex_n_;
        if (!ex_k_.empty()) plan.k = ex_k_;
        if (!ex_phi_.empty()) plan.phi = ex_phi_;
        if (!ex_p_.empty()) plan.p = ex_p_;
        if (ex_trials_ > 0) plan.trials = ex_trials_;
        if (!ex_mode_.empty()) plan.mode = parse_mode(ex_mode_);
        if (ex_cap_ > 0) plan.round_cap = ex_cap_;
        if (!ex_source_.empty()) plan.source = parse_source_policy(ex_source_);
        if (g_.seed_given) plan.seed = g_.seed;
        plan.validate();
        const auto summary = run_experiment(plan, g_.threads);
        json j = summary_to_json(summary);
        if (!ex_fit_.empty()) j["fit"] = fit_report_json(fit_log_scaling(summary, parse_fit_axis(ex_fit_)));
        std::ostringstream csv;
        write_summary_csv(summary, csv);
        emit_json(j, csv.str());
      };
    });
  }

  // ---- audit -------------------------------------------------------------
  void setup_audit(CLI::App& app) {
    auto* sub = app.add_subcommand("audit", "boundary buckets and growth audit along trials");
    add_graph_options(sub, au_graph_, true);
    add_protocol_options(sub, au_proto_);
    sub->add_option("--source", au_source_, "source node")->capture_default_str();
    sub->add_option("--trials", au_trials_, "trials to audit")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--window", au_window_, "growth window r")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--log-base", au_log_base_, "natural, binary or decimal")
        ->check(CLI::IsMember({"natural", "binary", "decimal"}))
        ->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        const Graph g = build_graph(au_graph_, g_.seed);
        const ProtocolConfig cfg = protocol_config(au_proto_);
        const LogBase base = au_log_base_ == "binary"    ? LogBase::binary
                             : au_log_base_ == "decimal" ? LogBase::decimal
                                                         : LogBase::natural;
        json config = base_config("audit");
        config["source"] = graph_source_json(au_graph_);
        config["protocol"] = protocol_config_json(cfg, g.n());
        config["source_node"] = au_source_;
        config["trials"] = au_trials_;
        config["window"] = au_window_;
        config["log_base"] = au_log_base_;

        // Bucket tables along the first trial.
        json rounds = json::array();
        std::ostringstream csv;
        csv << "t,i,d_i,size,volume,in_good_set,regime,outer_size\n";
        ProtocolConfig first = cfg;
        first.seed = derive_seed(cfg.seed, {0});
        run_trial(g, au_source_, first, [&](std::uint64_t t, const NodeSet& informed) {
          if (informed.size() == g.n()) return;
          const auto p = partition_boundary(g, informed, base);
          if (p.boundary_size == 0) return;
          json row = partition_json(p, cfg.k);
          row["t"] = t;
          row["informed"] = informed.size();
          const std::size_t outer = outer_region(g, informed).size();
          row["outer_size"] = outer;
          rounds.push_back(std::move(row));
          for (const auto& b : p.buckets) {
            csv << t << ',' << b.index << ',' << b.d << ',' << b.size() << ',' << b.volume << ','
                << (b.good ? 1 : 0) << ',' << classify_bucket(b.d, b.size(), p.boundary_size, cfg.k).str() << ','
                << outer << '\n';
          }
        });

        std::vector<GrowthAuditReport> audits(au_trials_);
        parallel_for(au_trials_, g_.threads, [&](std::size_t i) {
          ProtocolConfig c = cfg;
          c.seed = derive_seed(cfg.seed, {i});
          audits[i] = growth_audit(run_trial(g, au_source_, c), cfg.k, au_window_);
        });
        std::size_t audited = 0, holding = 0;
        for (const auto& a : audits) {
          audited += a.windows.size();
          holding += a.holding;
        }
        json j = envelope("audit", config);
        j["growth"] = {{"audited_windows", audited},
                       {"holding_windows", holding},
                       {"rate", audited == 0 ? 1.0 : static_cast<double>(holding) / static_cast<double>(audited)},
                       {"first_trial", growth_audit_json(audits.front())}};
        j["partitions"] = std::move(rounds);
        emit_json(j, csv.str());
      };
    });
  }

  // ---- symmetry ----------------------------------------------------------
  void setup_symmetry(CLI::App& app) {
    auto* sub = app.add_subcommand("symmetry", "two-sample test of T(S,T) against T(T,S)");
    add_graph_options(sub, sym_graph_, true);
    add_protocol_options(sub, sym_proto_);
    sub->add_option("--S", sym_s_, "comma-separated start set")->required();
    sub->add_option("--T", sym_t_, "comma-separated target set")->required();
    sub->add_option("--trials", sym_trials_, "samples per direction")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--significance", sym_alpha_, "KS significance level")->capture_default_str();
    sub->add_option("--semantics", sym_proto_.semantics, "synchronous, or in_place for mutation testing")
        ->check(CLI::IsMember({"synchronous", "in_place"}))
        ->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        const Graph g = build_graph(sym_graph_, g_.seed);
        const ProtocolConfig cfg = protocol_config(sym_proto_);
        const NodeSet s = NodeSet::from(g.n(), parse_node_list(sym_s_));
        const NodeSet t = NodeSet::from(g.n(), parse_node_list(sym_t_));
        json config = base_config("symmetry");
        config["source"] = graph_source_json(sym_graph_);
        config["protocol"] = protocol_config_json(cfg, g.n());
        config["semantics"] = sym_proto_.semantics;
        config["S"] = s.members();
        config["T"] = t.members();
        config["trials"] = sym_trials_;
        const auto r = symmetry_test(g, s, t, cfg, sym_trials_, g_.threads, sym_alpha_);
        json j = envelope("symmetry", config);
        j.update(symmetry_report_json(r));
        emit_json(j);
      };
    });
  }

  // ---- tailbound ---------------------------------------------------------
  void setup_tailbound(CLI::App& app) {
    auto* sub = app.add_subcommand("tailbound", "binomial tail bound against the exact tail");
    sub->add_option("--n", tb_n_, "number of trials")->required();
    sub->add_option("--p", tb_p_, "success probability")->required();
    sub->add_option("--a", tb_a_, "threshold fraction, p < a < 1")->required();
    sub->callback([this] {
      action_ = [this] {
        const double p = parse_probability(tb_p_);
        const double a = parse_probability(tb_a_);
        const double bound = binomial_tail_bound(tb_n_, p, a);
        const auto j_min = static_cast<std::uint64_t>(std::ceil(a * static_cast<double>(tb_n_) - 1e-12));
        json config = base_config("tailbound");
        config["n"] = tb_n_;
        config["p"] = p;
        config["a"] = a;
        json j = envelope("tailbound", config);
        j["bound"] = bound;
        j["threshold"] = j_min;
        j["exact_tail"] = binomial_upper_tail(tb_n_, p, j_min);
        emit_json(j);
      };
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions g_;
  std::function<void()> action_;

  GraphSource gen_;

  GraphSource exp_graph_;
  std::string exp_alpha_, exp_phi_, exp_mode_ = "exact";
  std::uint64_t exp_budget_ = kDefaultWorkBudget;
  std::size_t exp_samples_ = 1000;

  GraphSource diam_graph_;
  std::string diam_phi_, diam_alpha_;
  std::size_t diam_estimate_ = 0;

  GraphSource sim_graph_;
  ProtocolOptions sim_proto_;
  node_id sim_source_ = 0;
  std::uint64_t sim_trials_ = 1;

  std::string ex_plan_path_, ex_family_, ex_graph_, ex_mode_, ex_source_, ex_fit_;
  std::vector<std::size_t> ex_n_;
  std::vector<std::uint32_t> ex_k_;
  std::vector<double> ex_phi_, ex_p_;
  std::uint64_t ex_trials_ = 0;
  std::uint64_t ex_cap_ = 0;

  GraphSource au_graph_;
  ProtocolOptions au_proto_;
  node_id au_source_ = 0;
  std::uint64_t au_trials_ = 10;
  std::uint64_t au_window_ = 1;
  std::string au_log_base_ = "natural";

  GraphSource sym_graph_;
  ProtocolOptions sym_proto_;
  std::string sym_s_, sym_t_;
  std::uint64_t sym_trials_ = 1000;
  double sym_alpha_ = 0.01;

  std::uint64_t tb_n_ = 0;
  std::string tb_p_, tb_a_;
};

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  return runner.run(args);
}

}  // namespace rumor::cli
