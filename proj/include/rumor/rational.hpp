#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "rumor/error.hpp"

namespace rumor {

/// Exact fraction num/den with den > 0 and gcd(num, den) = 1.
///
/// Expansion thresholds such as 1/(1+phi) are compared exactly, so every
/// ratio that feeds a certificate goes through this type rather than double.
/// Arithmetic is carried out in 128 bits and throws on 64-bit overflow.
class Rational {
 public:
  constexpr Rational() = default;

  constexpr Rational(std::int64_t num, std::int64_t den = 1) {  // NOLINT(google-explicit-constructor)
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const noexcept {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// Largest integer <= value.
  constexpr std::int64_t floor() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Smallest integer >= value.
  constexpr std::int64_t ceil() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  /// Always "p/q", including integers ("3/1").
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  /// Accepts "p/q", an integer, or a plain decimal ("0.25", "-1.5").
  /// Decimals with up to six fractional digits convert exactly; longer ones
  /// are replaced by the best approximation with denominator <= 10^6.
  static Rational parse(std::string_view text);

  friend constexpr Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
             static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  friend constexpr Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
             static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  friend constexpr Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  friend constexpr Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("rational division by zero");
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    return r;
  }

  friend constexpr bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static constexpr __int128 gcd128(__int128 a, __int128 b) noexcept {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  constexpr void assign(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
    constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) throw InvalidArgument("rational overflow");
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// floor(r * n) for non-negative n, exact.
inline std::int64_t floor_times(const Rational& r, std::int64_t n) {
  return (r * Rational(n)).floor();
}

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InvalidArgument("malformed fraction '" + std::string(whole) + "'");
  }
  return v;
}

/// Best rational approximation of num/den (den a power of ten) with
/// denominator at most max_den, by continued fractions.
inline Rational best_approximation(__int128 num, __int128 den, std::int64_t max_den) {
  const bool negative = num < 0;
  if (negative) num = -num;
  __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  __int128 a = num, b = den;
  while (b != 0) {
    const __int128 term = a / b;
    const __int128 q2 = q0 + term * q1;
    if (q2 > max_den) {
      // Semiconvergent check: largest t with q0 + t*q1 <= max_den.
      const __int128 t = (max_den - q0) / q1;
      const __int128 ps = p0 + t * p1, qs = q0 + t * q1;
      // Pick whichever of p1/q1 and ps/qs is closer to num/den.
      const __int128 d1 = p1 * den - num * q1;
      const __int128 ds = ps * den - num * qs;
      const auto abs128 = [](__int128 x) { return x < 0 ? -x : x; };
      const bool semi_better = abs128(ds) * q1 < abs128(d1) * qs;
      const __int128 p = semi_better ? ps : p1;
      const __int128 q = semi_better ? qs : q1;
      return Rational(static_cast<std::int64_t>(negative ? -p : p), static_cast<std::int64_t>(q));
    }
    const __int128 p2 = p0 + term * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const __int128 r = a - term * b;
    a = b;
    b = r;
  }
  return Rational(static_cast<std::int64_t>(negative ? -p1 : p1), static_cast<std::int64_t>(q1));
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw InvalidArgument("empty fraction");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto p = detail::parse_int(text.substr(0, slash), text);
    const auto q = detail::parse_int(text.substr(slash + 1), text);
    if (q == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }

  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(detail::parse_int(text, text));

  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  bool negative = false;
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    negative = int_part.front() == '-';
    int_part.remove_prefix(1);
  }
  if (int_part.empty() && frac_part.empty()) throw InvalidArgument("malformed fraction '" + std::string(text) + "'");
  for (char c : int_part)
    if (c < '0' || c > '9') throw InvalidArgument("malformed fraction '" + std::string(text) + "'");
  for (char c : frac_part)
    if (c < '0' || c > '9') throw InvalidArgument("malformed fraction '" + std::string(text) + "'");
  if (frac_part.size() > 18 || int_part.size() > 18) {
    throw InvalidArgument("too many digits in '" + std::string(text) + "'");
  }

  __int128 num = 0;
  for (char c : int_part) num = num * 10 + (c - '0');
  __int128 den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  if (negative) num = -num;

  constexpr std::int64_t kMaxDen = 1'000'000;
  if (den <= kMaxDen) {
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  }
  return detail::best_approximation(num, den, kMaxDen);
}

}  // namespace rumor
