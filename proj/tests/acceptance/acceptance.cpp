// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Every tolerance is pinned below; the committed
// band fixture may tighten the calibrated bands but never widen them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rumor/rumor.hpp"

using namespace rumor;

namespace {

// ---- pinned tolerances -----------------------------------------------------
constexpr double kCliqueBandFloor = 0.25;       // widest band the fixture may declare
constexpr double kCliqueBandCeiling = 8.0;
constexpr double kMonotoneStdErrors = 2.0;
constexpr double kCliqueSeconds = 120.0;
constexpr double kSingleCallMinR2 = 0.95;
constexpr double kSingleCallSeconds = 60.0;
constexpr double kExpanderModelMultiple = 8.0;
constexpr double kDiameterFloorFactor = 0.25;
constexpr double kExpanderSeconds = 600.0;
constexpr double kOracleSeconds = 60.0;
constexpr std::size_t kHalfBoundaryInstances = 10000;
constexpr std::size_t kSymmetrySamples = 10000;
constexpr double kSymmetryFamilyAlpha = 0.01;
constexpr std::size_t kSymmetryTests = 10;
constexpr std::size_t kSymmetryMaxRejections = 1;
constexpr std::size_t kPullSamples = 100000;
constexpr double kPullAlpha = 1e-3;
constexpr std::size_t kPullMinAccepted = 8;
constexpr double kTailOracleTolerance = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream o;
  o.precision(precision);
  o << x;
  return o.str();
}

json load_bands() {
  const std::string path = std::string(RUMOR_FIXTURE_DIR) + "/bands.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixture '" + path + "'");
  return json::parse(in);
}

// ---- items 1-3 ---------------------------------------------------------------

ExperimentPlan clique_plan(const json& f) {
  ExperimentPlan p;
  p.family = Family::complete;
  p.n = {f.at("n").get<std::size_t>()};
  p.k = f.at("k").get<std::vector<std::uint32_t>>();
  p.trials = f.at("trials").get<std::uint64_t>();
  p.seed = f.at("seed").get<std::uint64_t>();
  p.mode = Mode::push_pull;
  return p;
}

ExperimentPlan single_call_plan(const json& f) {
  ExperimentPlan p;
  p.family = Family::complete;
  p.n = f.at("n").get<std::vector<std::size_t>>();
  p.k = {1};
  p.trials = f.at("trials").get<std::uint64_t>();
  p.seed = f.at("seed").get<std::uint64_t>();
  p.mode = Mode::push_pull;
  return p;
}

ExperimentPlan expander_plan(const json& f) {
  ExperimentPlan p;
  p.family = Family::er;
  p.n = {f.at("n").get<std::size_t>()};
  p.phi = {f.at("phi").get<double>()};
  p.k = {f.at("k").get<std::uint32_t>()};
  p.trials = f.at("trials").get<std::uint64_t>();
  p.seed = f.at("seed").get<std::uint64_t>();
  p.mode = Mode::push_pull;
  return p;
}

Outcome clique_scaling(const ExperimentSummary& s, const json& f, double elapsed) {
  const auto band = f.at("ratio_band").get<std::vector<double>>();
  Outcome o;
  if (band.size() != 2 || band[0] < kCliqueBandFloor || band[1] > kCliqueBandCeiling || band[0] >= band[1]) {
    o.detail = "fixture band outside the pinned limits";
    return o;
  }
  bool ok = true;
  std::ostringstream d;
  d << "ratios";
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const auto& c = s.cells[i];
    const double scale = std::log(static_cast<double>(c.n)) / std::log(static_cast<double>(c.k));
    const double ratio = c.stats.mean / scale;
    d << " k=" << c.k << ":" << fmt(ratio);
    ok = ok && c.stats.censored == 0 && ratio >= band[0] && ratio <= band[1];
    if (i > 0) {
      const auto& a = s.cells[i - 1].stats;
      ok = ok && c.stats.mean <= a.mean + kMonotoneStdErrors * std::hypot(a.std_error, c.stats.std_error);
    }
  }
  d << "; means";
  for (const auto& c : s.cells) d << " " << fmt(c.stats.mean);
  d << "; band [" << band[0] << ", " << band[1] << "]; " << fmt(elapsed, 3) << " s";
  o.pass = ok && elapsed <= kCliqueSeconds;
  o.detail = d.str();
  return o;
}

Outcome single_call(const ExperimentSummary& s, const json& f, double elapsed) {
  Outcome o;
  const double min_r2 = f.at("min_r_squared").get<double>();
  if (min_r2 < kSingleCallMinR2) {
    o.detail = "fixture R^2 floor below the pinned limit";
    return o;
  }
  try {
    const auto r = fit_log_scaling(s, FitAxis::n);
    o.pass = r.fit.slope > 0.0 && r.fit.r_squared >= min_r2 && elapsed <= kSingleCallSeconds;
    std::ostringstream d;
    d << "means";
    for (const auto& c : s.cells) d << " n=" << c.n << ":" << fmt(c.stats.mean);
    d << "; slope " << fmt(r.fit.slope) << " per log2 n, R^2 " << fmt(r.fit.r_squared, 5) << "; " << fmt(elapsed, 3)
      << " s";
    o.detail = d.str();
  } catch (const Error& e) {
    o.detail = e.what();
  }
  return o;
}

Outcome expander_regime(const ExperimentSummary& s, const json& f, double elapsed) {
  Outcome o;
  const double multiple = f.at("max_model_multiple").get<double>();
  const double floor_factor = f.at("diameter_floor_factor").get<double>();
  if (multiple > kExpanderModelMultiple || floor_factor < kDiameterFloorFactor) {
    o.detail = "fixture window outside the pinned limits";
    return o;
  }
  const auto& c = s.cells.at(0);
  if (c.error || !c.model_value || !c.phi) {
    o.detail = "cell failed: " + c.error.value_or("no model value");
    return o;
  }
  const double floor = floor_factor * std::log(static_cast<double>(c.n)) / std::log(*c.phi);
  const double ceiling = multiple * *c.model_value;
  o.pass = c.stats.censored == 0 && c.stats.mean >= floor && c.stats.mean <= ceiling && elapsed <= kExpanderSeconds;
  std::ostringstream d;
  d << "mean " << fmt(c.stats.mean) << " (se " << fmt(c.stats.std_error, 3) << ", censored " << c.stats.censored
    << "), model " << fmt(*c.model_value) << " at alpha " << fmt(*c.alpha, 6) << ", window [" << fmt(floor) << ", "
    << fmt(ceiling) << "]";
  if (!c.flags.empty()) {
    d << "; flags";
    for (const auto& fl : c.flags) d << " " << fl;
  }
  d << "; " << fmt(elapsed, 3) << " s";
  o.detail = d.str();
  return o;
}

// ---- item 4: independent enumerator -----------------------------------------

struct NaiveRatio {
  std::uint64_t boundary;
  std::uint64_t size;
};

// Minimum |N(S) \ S| / |S| over all nonempty S with |S| <= max_size, using an
// adjacency matrix and plain bitmask loops.
NaiveRatio naive_expansion(std::size_t n, const std::vector<std::pair<unsigned, unsigned>>& edges,
                           std::size_t max_size) {
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : edges) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  NaiveRatio best{1, 0};  // +infinity
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size > max_size) continue;
    std::uint32_t nb = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) nb |= adj[v];
    const std::uint64_t b = static_cast<std::uint64_t>(__builtin_popcount(nb & ~mask));
    if (best.size == 0 || b * best.size < best.boundary * size) best = {b, size};
  }
  return best;
}

struct CorpusGraph {
  std::string name;
  Graph g;
};

std::vector<CorpusGraph> build_corpus() {
  std::vector<CorpusGraph> c;
  for (std::size_t n = 2; n <= 12; ++n) {
    c.push_back({"K" + std::to_string(n), generate_complete(n)});
    c.push_back({"P" + std::to_string(n), generate_path(n)});
    c.push_back({"S" + std::to_string(n), generate_star(n)});
    if (n >= 3) c.push_back({"C" + std::to_string(n), generate_cycle(n)});
    if (n % 2 == 0) c.push_back({"2K" + std::to_string(n / 2), generate_disjoint_cliques(n)});
  }
  CounterStream rng(derive_seed(4004, {0}));
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(11);
    c.push_back({"G" + std::to_string(n) + "#" + std::to_string(i), generate_er(n, 0.5, derive_seed(4004, {1, i}))});
  }
  return c;
}

Outcome oracle_equivalence(const std::vector<CorpusGraph>& corpus) {
  const auto t0 = Clock::now();
  const std::vector<Rational> alphas{Rational(1, 4), Rational(1, 3), Rational(1, 2)};
  std::size_t compared = 0, mismatches = 0;
  std::string first_bad;
  for (const auto& item : corpus) {
    std::vector<std::pair<unsigned, unsigned>> edges;
    for (const auto& e : item.g.edges()) edges.emplace_back(e.u, e.v);
    const std::size_t n = item.g.n();
    for (const auto& a : alphas) {
      const std::size_t max_size = static_cast<std::size_t>(a.num() * static_cast<std::int64_t>(n) / a.den());
      if (max_size == 0) continue;
      const auto naive = naive_expansion(n, edges, max_size);
      const auto report = vertex_expansion_exact(item.g, a);
      ++compared;
      const bool same = static_cast<std::int64_t>(naive.boundary) * report.phi_min.den() ==
                            report.phi_min.num() * static_cast<std::int64_t>(naive.size) &&
                        report.phi_min.den() > 0;
      if (!same) {
        ++mismatches;
        if (first_bad.empty())
          first_bad = item.name + " alpha=" + a.str() + " naive " + std::to_string(naive.boundary) + "/" +
                      std::to_string(naive.size) + " vs " + report.phi_min.str();
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && compared > 0 && elapsed <= kOracleSeconds;
  o.detail = std::to_string(corpus.size()) + " graphs, " + std::to_string(compared) + " (graph, alpha) pairs, " +
             std::to_string(mismatches) + " mismatches" + (first_bad.empty() ? "" : " (first: " + first_bad + ")") +
             "; " + fmt(elapsed, 3) + " s";
  return o;
}

// ---- item 5: structural lemma suite -------------------------------------------

Outcome lemma_suite(const std::vector<CorpusGraph>& corpus) {
  std::size_t failures = 0;
  std::vector<std::string> notes;
  auto fail = [&](const std::string& what) {
    if (failures++ < 3) notes.push_back(what);
  };

  // (a) cliques
  std::size_t a_checked = 0;
  for (std::int64_t inv : {2, 3, 4}) {
    const Rational alpha(1, inv);
    const Rational phi = Rational(inv) - Rational(1);
    for (std::size_t n = static_cast<std::size_t>(inv); n <= 16; ++n) {
      ++a_checked;
      if (is_expander(generate_complete(n), phi, alpha, ExpansionMethod::exact).verdict != Verdict::certified)
        fail("(a) K" + std::to_string(n) + " alpha=" + alpha.str());
    }
  }

  // (b) two disjoint cliques: certified and never finished
  std::size_t b_checked = 0;
  for (std::int64_t phi_i : {1, 2, 3}) {
    const Rational phi(phi_i);
    const Rational alpha = Rational(1) / (Rational(2) + Rational(2) * phi);
    for (std::size_t n = 2; n <= 20; n += 2) {
      if (static_cast<std::int64_t>(n) * alpha.num() < alpha.den()) continue;
      ++b_checked;
      const Graph g = generate_disjoint_cliques(n);
      if (is_expander(g, phi, alpha, ExpansionMethod::exact).verdict != Verdict::certified)
        fail("(b) 2K" + std::to_string(n / 2) + " phi=" + phi.str());
      ExperimentPlan plan;
      plan.family = Family::disjoint_cliques;
      plan.n = {n};
      plan.trials = 100;
      plan.seed = derive_seed(5005, {n, static_cast<std::uint64_t>(phi_i)});
      const auto s = run_experiment(plan);
      if (s.cells.at(0).stats.censored != plan.trials) fail("(b) 2K" + std::to_string(n / 2) + " finished a trial");
    }
  }

  // (c) alpha above 1/(1+phi)
  const std::vector<std::pair<Rational, Rational>> above{
      {Rational(3, 2), Rational(1, 2)}, {Rational(2), Rational(2, 5)}, {Rational(2), Rational(1, 2)},
      {Rational(3), Rational(3, 10)},   {Rational(3), Rational(1, 3)}, {Rational(3), Rational(1, 2)}};
  std::size_t c_checked = 0, c_refuted = 0;
  for (const auto& item : corpus) {
    for (const auto& [phi, alpha] : above) {
      if (floor_times(alpha, static_cast<std::int64_t>(item.g.n())) < 1) continue;
      ++c_checked;
      const bool impossible = check_alpha_feasibility(phi, alpha) == Feasibility::impossible;
      const bool refuted = is_expander(item.g, phi, alpha, ExpansionMethod::exact).verdict == Verdict::refuted;
      c_refuted += refuted ? 1 : 0;
      if (!impossible && !refuted) fail("(c) " + item.name + " phi=" + phi.str() + " alpha=" + alpha.str());
    }
  }

  // (d) diameter of certified expanders
  const std::vector<std::pair<Rational, Rational>> grid{
      {Rational(3, 2), Rational(2, 5)}, {Rational(3, 2), Rational(1, 3)}, {Rational(2), Rational(1, 3)},
      {Rational(2), Rational(1, 4)},    {Rational(3), Rational(1, 4)},    {Rational(3), Rational(1, 5)}};
  std::size_t d_certified = 0, d_floor_gap = 0;
  for (const auto& item : corpus) {
    for (const auto& [phi, alpha] : grid) {
      if (!(alpha > Rational(1) / (Rational(2) + Rational(2) * phi))) continue;
      if (floor_times(alpha, static_cast<std::int64_t>(item.g.n())) < 1) continue;
      if (is_expander(item.g, phi, alpha, ExpansionMethod::exact).verdict != Verdict::certified) continue;
      ++d_certified;
      const auto r = check_diameter_lemma(item.g, phi, alpha);
      if (!r.precondition_met || !r.holds) {
        fail("(d) " + item.name + " phi=" + phi.str() + " alpha=" + alpha.str() +
             (r.floor_precondition_met ? "" : " [floor(alpha n) <= n/(2+2phi)]"));
        if (!r.floor_precondition_met) ++d_floor_gap;
      }
    }
  }

  Outcome o;
  o.pass = failures == 0 && d_certified > 0;
  std::ostringstream d;
  d << "(a) " << a_checked << " cliques, (b) " << b_checked << " split graphs, (c) " << c_checked << " cases ("
    << c_refuted << " also refuted by enumeration), (d) " << d_certified << " certified expanders, "
    << d_floor_gap << " diameter violations inside the floor gap; " << failures
    << " failures";
  for (const auto& n : notes) d << "; " << n;
  o.detail = d.str();
  return o;
}

// ---- item 6 ----------------------------------------------------------------------

Outcome half_boundary() {
  std::size_t failures = 0, nonempty = 0;
  for (std::uint64_t i = 0; i < kHalfBoundaryInstances; ++i) {
    CounterStream rng(derive_seed(6006, {i}));
    const std::size_t n = 2 + rng.below(511);
    const double avg_degree = 0.5 + 30.0 * rng.uniform();
    const double p = std::min(1.0, avg_degree / static_cast<double>(n));
    const Graph g = generate_er(n, p, derive_seed(6006, {i, 1}));
    const double fraction = 0.01 + 0.9 * rng.uniform();
    NodeSet informed(n);
    for (node_id v = 0; v < n; ++v)
      if (rng.bernoulli(fraction)) informed.insert(v);
    if (informed.empty()) informed.insert(static_cast<node_id>(rng.below(n)));
    if (informed.size() == n) informed.erase(static_cast<node_id>(rng.below(n)));
    const auto part = partition_boundary(g, informed);
    if (part.boundary_size > 0) ++nonempty;
    if (!check_half_boundary(part)) ++failures;
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(kHalfBoundaryInstances) + " instances (" + std::to_string(nonempty) +
             " with nonempty boundary), " + std::to_string(failures) + " failures";
  return o;
}

// ---- item 7 ----------------------------------------------------------------------

Outcome symmetry(unsigned threads) {
  struct Instance {
    std::string name;
    Graph g;
    NodeSet s, t;
  };
  std::vector<Instance> inst;
  inst.push_back({"clique", generate_complete(16), NodeSet::of(16, {0}), NodeSet::of(16, {1})});
  inst.push_back({"star", generate_star(16), NodeSet::of(16, {0}), NodeSet::of(16, {5})});
  inst.push_back({"path", generate_path(10), NodeSet::of(10, {0}), NodeSet::of(10, {9})});
  {
    Graph er = generate_er(24, 0.25, 7007);
    std::uint64_t seed = 7007;
    while (!is_connected(er)) er = generate_er(24, 0.25, ++seed);
    inst.push_back({"er", std::move(er), NodeSet::of(24, {0}), NodeSet::of(24, {17})});
  }
  inst.push_back({"barbell", generate_barbell(6, 2), NodeSet::of(14, {0}), NodeSet::of(14, {13})});

  const double per_test = kSymmetryFamilyAlpha / static_cast<double>(kSymmetryTests);
  std::size_t rejections = 0, tests = 0;
  std::ostringstream d;
  for (const auto& in : inst) {
    for (std::uint32_t k : {1u, 4u}) {
      ProtocolConfig cfg;
      cfg.mode = Mode::push_pull;
      cfg.k = k;
      cfg.seed = derive_seed(7007, {tests});
      const auto r = symmetry_test(in.g, in.s, in.t, cfg, kSymmetrySamples, threads, per_test);
      ++tests;
      if (!r.consistent) ++rejections;
      d << in.name << "/k" << k << " D=" << fmt(r.ks, 3) << (r.consistent ? "" : "!") << " ";
    }
  }
  ProtocolConfig broken;
  broken.seed = 7008;
  broken.semantics = RoundSemantics::in_place;
  const Graph star = generate_star(16);
  const auto m =
      symmetry_test(star, NodeSet::of(16, {1}), NodeSet::of(16, {2}), broken, kSymmetrySamples, threads, 0.01);

  Outcome o;
  o.pass = tests == kSymmetryTests && rejections <= kSymmetryMaxRejections && !m.consistent;
  d << "(critical " << fmt(ks_critical_value(per_test, kSymmetrySamples, kSymmetrySamples), 3) << "); "
    << rejections << " rejections of " << tests << "; mutation D=" << fmt(m.ks, 3) << " vs "
    << fmt(m.critical, 3) << (m.consistent ? " not rejected" : " rejected");
  o.detail = d.str();
  return o;
}

// ---- item 8 ----------------------------------------------------------------------

Outcome pull_law() {
  const std::size_t n = 16;
  const Graph g = generate_complete(n);
  std::size_t accepted = 0, cells = 0;
  std::ostringstream d;
  for (std::size_t m : {1u, 4u, 8u}) {
    NodeSet informed(n);
    for (node_id v = 0; v < m; ++v) informed.insert(v);
    for (std::uint32_t k : {1u, 2u, 8u}) {
      const std::size_t u = n - m;
      const double q = 1.0 - std::pow(1.0 - static_cast<double>(m) / static_cast<double>(n - 1), k);
      std::vector<std::uint64_t> hist(u + 1, 0);
      std::vector<std::uint64_t> per_node(n, 0);
      for (std::uint64_t s = 0; s < kPullSamples; ++s) {
        ProtocolConfig cfg;
        cfg.mode = Mode::pull;
        cfg.k = k;
        cfg.seed = derive_seed(8008, {cells, s});
        const auto r = step(g, informed, cfg);
        ++hist[r.informed.size() - m];
        r.informed.for_each([&](node_id v) { ++per_node[v]; });
      }
      boost::math::binomial_distribution<double> law(static_cast<double>(u), q);
      std::vector<double> probs(u + 1);
      for (std::size_t j = 0; j <= u; ++j) probs[j] = boost::math::pdf(law, static_cast<double>(j));
      const auto chi = chi_square_gof(hist, probs);
      double worst = 0.0;
      for (node_id v = static_cast<node_id>(m); v < n; ++v)
        worst = std::max(worst, std::abs(static_cast<double>(per_node[v]) / kPullSamples - q));
      ++cells;
      const bool ok = chi.p_value >= kPullAlpha;
      accepted += ok ? 1 : 0;
      d << "m=" << m << ",k=" << k << " p=" << fmt(chi.p_value, 3) << (ok ? "" : "!") << " ";
      if (worst > 0.01) d << "(per-node drift " << fmt(worst, 3) << ") ";
    }
  }
  Outcome o;
  o.pass = accepted >= kPullMinAccepted;
  d << "; " << accepted << " of " << cells << " not rejected";
  o.detail = d.str();
  return o;
}

// ---- item 9 ----------------------------------------------------------------------

Outcome tail_bound() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  std::size_t checked = 0, violations = 0;
  std::string first_bad;
  for (unsigned n = 1; n <= 30; ++n) {
    for (int p10 = 1; p10 <= 9; ++p10) {
      const Big bp = Big(p10) / 10;
      for (int a100 = 10 * p10 + 5; a100 < 100; a100 += 5) {
        // ceil(a n) in integers
        const unsigned j = static_cast<unsigned>((a100 * static_cast<int>(n) + 99) / 100);
        Big exact = 0;
        Big choose = 1;  // C(n, i), updated incrementally
        for (unsigned i = 0; i <= n; ++i) {
          if (i > 0) choose = choose * (n - i + 1) / i;
          if (i >= j) exact += choose * pow(bp, i) * pow(1 - bp, n - i);
        }
        const double bound = binomial_tail_bound(n, p10 / 10.0, a100 / 100.0);
        ++checked;
        if (Big(bound) < exact) {
          ++violations;
          if (first_bad.empty())
            first_bad = "n=" + std::to_string(n) + " p=" + fmt(p10 / 10.0) + " a=" + fmt(a100 / 100.0);
        }
      }
    }
  }
  const Big a = Big(8) / 10, p = Big(1) / 2;
  const Big oracle = exp(-10 * (a * log(a / p) + (1 - a) * log((1 - a) / (1 - p))));
  const double got = binomial_tail_bound(10, 0.5, 0.8);
  const double err = std::abs(static_cast<double>(Big(got) - oracle));
  Outcome o;
  o.pass = violations == 0 && checked > 0 && err <= kTailOracleTolerance;
  o.detail = std::to_string(checked) + " grid points, " + std::to_string(violations) + " violations" +
             (first_bad.empty() ? "" : " (first: " + first_bad + ")") + "; bound(10,0.5,0.8)=" + fmt(got, 12) +
             ", oracle error " + fmt(err, 3);
  return o;
}

void report(int id, const std::string& name, const Outcome& o, bool& all) {
  all = all && o.pass;
  std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << std::endl;
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  bool all = true;
  const auto start = Clock::now();
  json bands;
  try {
    bands = load_bands();
  } catch (const std::exception& e) {
    std::cout << "FAIL fixture: " << e.what() << std::endl;
    return 1;
  }

  const ExperimentPlan p1 = clique_plan(bands.at("clique_scaling"));
  const ExperimentPlan p2 = single_call_plan(bands.at("single_call"));
  const ExperimentPlan p3 = expander_plan(bands.at("expander"));
  std::string s1, s2, s3;

  report(1, "clique scaling", guarded([&] {
           const auto t0 = Clock::now();
           const auto s = run_experiment(p1, 1);
           const double el = seconds_since(t0);
           s1 = summary_to_json(s).dump();
           return clique_scaling(s, bands.at("clique_scaling"), el);
         }),
         all);
  report(2, "single-call clique", guarded([&] {
           const auto t0 = Clock::now();
           const auto s = run_experiment(p2, 1);
           const double el = seconds_since(t0);
           s2 = summary_to_json(s).dump();
           return single_call(s, bands.at("single_call"), el);
         }),
         all);
  report(3, "expander regime", guarded([&] {
           const auto t0 = Clock::now();
           const auto s = run_experiment(p3, 1);
           const double el = seconds_since(t0);
           s3 = summary_to_json(s).dump();
           return expander_regime(s, bands.at("expander"), el);
         }),
         all);

  const auto corpus = build_corpus();
  report(4, "exact expansion oracle", guarded([&] { return oracle_equivalence(corpus); }), all);
  report(5, "structural lemmas", guarded([&] { return lemma_suite(corpus); }), all);
  report(6, "half-boundary", guarded(half_boundary), all);
  report(7, "symmetry", guarded([] { return symmetry(4); }), all);
  report(8, "single-round pull law", guarded(pull_law), all);
  report(9, "binomial tail bound", guarded(tail_bound), all);
  report(10, "determinism", guarded([&] {
           Outcome o;
           o.pass = !s1.empty() && !s2.empty() && !s3.empty();
           std::ostringstream d;
           for (unsigned threads : {4u, 8u}) {
             const bool same = summary_to_json(run_experiment(p1, threads)).dump() == s1 &&
                               summary_to_json(run_experiment(p2, threads)).dump() == s2 &&
                               summary_to_json(run_experiment(p3, threads)).dump() == s3;
             o.pass = o.pass && same;
             d << "threads " << threads << (same ? " identical" : " DIFFERENT") << "; ";
           }
           d << "reference at 1 thread (" << s1.size() + s2.size() + s3.size() << " bytes)";
           o.detail = d.str();
           return o;
         }),
         all);

  std::cout << (all ? "ALL PASS" : "SOME FAILED") << " (" << fmt(seconds_since(start), 4) << " s)" << std::endl;
  return all ? 0 : 1;
}
