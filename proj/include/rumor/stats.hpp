#pragma once

// Statistics used by the experiment harness: binomial tails, two-sample
// Kolmogorov-Smirnov, chi-square goodness of fit, least squares, and
// censoring-aware summaries of completion times.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "rumor/error.hpp"

namespace rumor {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// exp(-n KL(a || p)): an upper bound on P[Bin(n,p) >= an] for p < a < 1.
inline double binomial_tail_bound(std::uint64_t n, double p, double a) {
  if (!(p > 0.0 && p < a && a < 1.0)) throw InvalidArgument("binomial tail bound needs 0 < p < a < 1");
  const double kl = a * std::log(a / p) + (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
  return std::exp(-static_cast<double>(n) * kl);
}

/// P[Bin(n,p) >= j].
inline double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t j) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
  if (j == 0) return 1.0;
  if (j > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return boost::math::ibeta(static_cast<double>(j), static_cast<double>(n - j + 1), p);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Values may be
/// +inf (censored); ties are handled by evaluating the empirical CDFs only
/// after each distinct value.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// c(alpha) sqrt((m+n)/(mn)) with c(alpha) = sqrt(-ln(alpha/2)/2).
inline double ks_critical_value(double alpha, std::size_t m, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("significance must lie in (0,1)");
  if (m == 0 || n == 0) throw InvalidArgument("sample sizes must be positive");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double mm = static_cast<double>(m), nn = static_cast<double>(n);
  return c * std::sqrt((mm + nn) / (mm * nn));
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;   // after merging
};

/// Pearson goodness of fit of `observed` counts against `probabilities`.
/// Adjacent bins are merged left to right until each expected count reaches
/// `min_expected`; a short tail is folded into the last full bin.
inline ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                      double min_expected = 5.0) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw InvalidArgument("observed and expected bins must have the same nonzero length");
  }
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  if (total == 0) throw InvalidArgument("no observations");

  std::vector<double> exp_bins;
  std::vector<double> obs_bins;
  double e_acc = 0.0, o_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    e_acc += probabilities[i] * static_cast<double>(total);
    o_acc += static_cast<double>(observed[i]);
    if (e_acc >= min_expected) {
      exp_bins.push_back(e_acc);
      obs_bins.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_bins.empty()) {
      exp_bins.push_back(e_acc);
      obs_bins.push_back(o_acc);
    } else {
      exp_bins.back() += e_acc;
      obs_bins.back() += o_acc;
    }
  }

  ChiSquareResult r;
  r.bins = exp_bins.size();
  for (std::size_t i = 0; i < exp_bins.size(); ++i) {
    if (exp_bins[i] <= 0.0) {
      if (obs_bins[i] > 0.0) {
        r.statistic = kInf;
        r.p_value = 0.0;
        r.dof = r.bins > 0 ? r.bins - 1 : 0;
        return r;
      }
      continue;
    }
    const double diff = obs_bins[i] - exp_bins[i];
    r.statistic += diff * diff / exp_bins[i];
  }
  r.dof = r.bins - 1;
  if (r.dof == 0) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope x + intercept.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("x and y must have equal length");
  if (x.size() < 2) throw InvalidArgument("least squares needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("regressor is constant");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    f.residuals.push_back(r);
    ss_res += r * r;
  }
  f.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

/// Completion-time summary. Moments use completed trials only; quantiles
/// are nearest-rank over all trials with censored ones as +inf.
struct RoundStats {
  std::uint64_t trials = 0;
  std::uint64_t completed = 0;
  std::uint64_t censored = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double median = kInf;
  double q05 = kInf;
  double q25 = kInf;
  double q75 = kInf;
  double q95 = kInf;
  double max = kInf;
};

/// Nearest-rank quantile of sorted values: the ceil(q N)-th smallest.
inline double nearest_rank(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty sample");
  const double rank = std::ceil(q * static_cast<double>(sorted.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size()))) - 1;
  return sorted[idx];
}

inline std::vector<double> as_extended(std::span<const std::optional<std::uint64_t>> rounds) {
  std::vector<double> v;
  v.reserve(rounds.size());
  for (const auto& r : rounds) v.push_back(r ? static_cast<double>(*r) : kInf);
  return v;
}

inline RoundStats summarize_rounds(std::span<const std::optional<std::uint64_t>> rounds) {
  RoundStats s;
  s.trials = rounds.size();
  if (rounds.empty()) return s;
  std::vector<double> all = as_extended(rounds);
  std::sort(all.begin(), all.end());
  double sum = 0.0;
  for (const auto& r : rounds) {
    if (r) {
      ++s.completed;
      sum += static_cast<double>(*r);
    } else {
      ++s.censored;
    }
  }
  if (s.completed > 0) {
    s.mean = sum / static_cast<double>(s.completed);
    double ss = 0.0;
    for (const auto& r : rounds)
      if (r) ss += (static_cast<double>(*r) - s.mean) * (static_cast<double>(*r) - s.mean);
    s.std_error = s.completed > 1
                      ? std::sqrt(ss / static_cast<double>(s.completed - 1) / static_cast<double>(s.completed))
                      : 0.0;
  }
  s.median = nearest_rank(all, 0.5);
  s.q05 = nearest_rank(all, 0.05);
  s.q25 = nearest_rank(all, 0.25);
  s.q75 = nearest_rank(all, 0.75);
  s.q95 = nearest_rank(all, 0.95);
  s.max = all.back();
  return s;
}

}  // namespace rumor
