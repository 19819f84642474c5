#pragma once

// Exact scalars: arbitrary-precision rationals and elements x + y*sqrt(r)
// of a real quadratic extension of Q. Nothing in here touches floating point
// except to_decimal(), which exists for display only.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace capcalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Rational& x) { return x.sign(); }
inline int sign(const BigInt& x) { return x.sign(); }

inline BigInt numerator_of(const Rational& x) {
  return boost::multiprecision::numerator(x);
}
inline BigInt denominator_of(const Rational& x) {
  return boost::multiprecision::denominator(x);
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  BigInt n(num), d(den);
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return Rational(n, d);
}

/// Largest integer <= x.
inline BigInt floor_of(const Rational& x) {
  BigInt q = numerator_of(x) / denominator_of(x);  // truncates toward zero
  if (x.sign() < 0 && q * denominator_of(x) != numerator_of(x)) q -= 1;
  return q;
}

/// "p/q" for non-integers, "p" for integers.
inline std::string to_string(const Rational& x) {
  if (denominator_of(x) == 1) return numerator_of(x).str();
  return numerator_of(x).str() + "/" + denominator_of(x).str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses "p/q", "p" or a plain decimal such as "1.24" (read exactly as
/// 124/100). A leading sign is allowed on the numerator only.
namespace detail {

// cpp_int reads a leading 0 as an octal prefix, so strip it first.
inline BigInt decimal_digits(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(first)));
}

}  // namespace detail

inline Rational parse_rational(std::string_view text) {
  std::string_view s = detail::trim(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  if (s.empty()) return fail();
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    BigInt d = detail::decimal_digits(den);
    if (d == 0) throw std::domain_error("zero denominator in '" + std::string(text) + "'");
    value = Rational(detail::decimal_digits(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return fail();
    if ((!whole.empty() && !detail::all_digits(whole)) || (!frac.empty() && !detail::all_digits(frac)))
      return fail();
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt w = detail::decimal_digits(whole);
    BigInt f = detail::decimal_digits(frac);
    value = Rational(w * scale + f, scale);
  } else {
    if (!detail::all_digits(s)) return fail();
    value = Rational(detail::decimal_digits(s));
  }
  return negative ? Rational(-value) : value;
}

/// Decimal rendering with `digits` significant digits. Display only.
inline std::string to_decimal(const Rational& x, int digits = 15) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  Float f = Float(numerator_of(x)) / Float(denominator_of(x));
  return f.str(digits, std::ios_base::fmtflags(0));
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Exact square root of a nonnegative integer, if it has one.
inline bool integer_sqrt_exact(const BigInt& n, BigInt& root) {
  if (n.sign() < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

/// True when x = root^2 for some rational root >= 0.
inline bool is_rational_square(const Rational& x, Rational* root = nullptr) {
  if (x.sign() < 0) return false;
  BigInt rn, rd;
  if (!integer_sqrt_exact(numerator_of(x), rn) || !integer_sqrt_exact(denominator_of(x), rd))
    return false;
  if (root) *root = Rational(rn, rd);
  return true;
}

/// An element base + coeff*sqrt(radicand) of Q(sqrt(radicand)), radicand > 0.
///
/// When the radicand is the square of a rational the value is folded into the
/// base and coeff stays zero, so rational-lambda problems never carry a
/// surd. Binary operations require equal radicands.
class QuadExt {
 public:
  QuadExt(Rational base, Rational coeff, Rational radicand)
      : base_(std::move(base)), coeff_(std::move(coeff)), radicand_(std::move(radicand)) {
    if (radicand_.sign() <= 0) throw std::domain_error("QuadExt radicand must be positive");
    Rational root;
    if (coeff_.sign() != 0 && is_rational_square(radicand_, &root)) {
      base_ += coeff_ * root;
      coeff_ = 0;
    }
  }

  /// sqrt(radicand) itself.
  static QuadExt sqrt_of(const Rational& radicand) { return QuadExt(Rational(0), Rational(1), radicand); }

  /// A rational constant living in Q(sqrt(radicand)).
  static QuadExt rational(const Rational& value, const Rational& radicand) {
    return QuadExt(value, Rational(0), radicand);
  }

  const Rational& base() const { return base_; }
  const Rational& coeff() const { return coeff_; }
  const Rational& radicand() const { return radicand_; }
  bool is_rational() const { return coeff_.sign() == 0; }

  QuadExt operator-() const { return QuadExt(-base_, -coeff_, radicand_, Raw{}); }

  QuadExt& operator+=(const QuadExt& o) {
    check_compatible(o);
    base_ += o.base_;
    coeff_ += o.coeff_;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) {
    check_compatible(o);
    base_ -= o.base_;
    coeff_ -= o.coeff_;
    return *this;
  }
  QuadExt& operator*=(const QuadExt& o) {
    check_compatible(o);
    Rational b = base_ * o.base_ + coeff_ * o.coeff_ * radicand_;
    Rational c = base_ * o.coeff_ + coeff_ * o.base_;
    base_ = std::move(b);
    coeff_ = std::move(c);
    return *this;
  }
  QuadExt& operator/=(const QuadExt& o) {
    check_compatible(o);
    // (x + y s)/(u + v s) = (x + y s)(u - v s)/(u^2 - v^2 r)
    Rational norm = o.base_ * o.base_ - o.coeff_ * o.coeff_ * radicand_;
    if (norm.sign() == 0) throw std::domain_error("QuadExt division by zero");
    QuadExt conj(o.base_, -o.coeff_, radicand_, Raw{});
    *this *= conj;
    base_ /= norm;
    coeff_ /= norm;
    return *this;
  }

  QuadExt& operator+=(const Rational& r) { base_ += r; return *this; }
  QuadExt& operator-=(const Rational& r) { base_ -= r; return *this; }
  QuadExt& operator*=(const Rational& r) { base_ *= r; coeff_ *= r; return *this; }
  QuadExt& operator/=(const Rational& r) {
    if (r.sign() == 0) throw std::domain_error("QuadExt division by zero");
    base_ /= r;
    coeff_ /= r;
    return *this;
  }

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }
  friend QuadExt operator+(QuadExt a, const Rational& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const Rational& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const Rational& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const Rational& b) { return a /= b; }
  friend QuadExt operator+(const Rational& a, QuadExt b) { return b += a; }
  friend QuadExt operator-(const Rational& a, const QuadExt& b) { return -b + a; }
  friend QuadExt operator*(const Rational& a, QuadExt b) { return b *= a; }

  /// Exact sign of base + coeff*sqrt(radicand).
  int sign() const {
    int sx = base_.sign();
    int sy = coeff_.sign();
    if (sy == 0) return sx;
    if (sx == 0) return sy;
    if (sx == sy) return sx;
    // opposite signs: whichever of |x| and |y|sqrt(r) dominates wins
    Rational lhs = base_ * base_;
    Rational rhs = coeff_ * coeff_ * radicand_;
    if (lhs > rhs) return sx;
    if (lhs < rhs) return sy;
    return 0;
  }

  friend std::strong_ordering operator<=>(const QuadExt& a, const QuadExt& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const QuadExt& a, const QuadExt& b) {
    a.check_compatible(b);
    return a.base_ == b.base_ && a.coeff_ == b.coeff_;
  }

  friend std::strong_ordering operator<=>(const QuadExt& a, const Rational& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const QuadExt& a, const Rational& b) {
    return a.coeff_.sign() == 0 && a.base_ == b;
  }

  /// Display approximation.
  double approx() const {
    return to_double(base_) + to_double(coeff_) * std::sqrt(to_double(radicand_));
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadExt& v) { return os << v.str(); }

  /// "x + y*sqrt(r)"; just "x" when the surd part vanishes.
  std::string str() const {
    if (coeff_.sign() == 0) return to_string(base_);
    std::string s = to_string(base_);
    if (coeff_.sign() < 0)
      s += " - " + to_string(Rational(-coeff_));
    else
      s += " + " + to_string(coeff_);
    return s + "*sqrt(" + to_string(radicand_) + ")";
  }

 private:
  struct Raw {};
  QuadExt(Rational base, Rational coeff, Rational radicand, Raw)
      : base_(std::move(base)), coeff_(std::move(coeff)), radicand_(std::move(radicand)) {}

  void check_compatible(const QuadExt& o) const {
    if (radicand_ != o.radicand_)
      throw std::invalid_argument("QuadExt radicand mismatch: " + to_string(radicand_) + " vs " +
                                  to_string(o.radicand_));
  }

  Rational base_;
  Rational coeff_;
  Rational radicand_;
};

inline int quad_sign(const QuadExt& v) { return v.sign(); }

/// Total order on a shared radicand; throws std::invalid_argument otherwise.
inline std::strong_ordering quad_compare(const QuadExt& u, const QuadExt& v) { return u <=> v; }

}  // namespace capcalc
