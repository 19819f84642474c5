#pragma once

// Obstruction functions mu_b(C)(a) = <m, w(a)> / (d + b e) of classes
// C = <d, e; m>, exact comparison against the volume constraint sqrt(a/2b),
// and the closed forms for c_b(8) and the rigid-flexible value RF(b) on the
// intervals I_n = (((n+2)/(n+1))^2, ((n+1)/n)^2).
//
// Every comparison with the volume constraint is carried out on squares, so
// square roots never appear as approximations.

#include "capcalc/classes.hpp"
#include "capcalc/exactnum.hpp"
#include "capcalc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcalc {

/// Raised for b on the excluded set {((n+1)/n)^2}, where RF is not known.
class UnknownValueError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// <m, w> with both sequences taken in the given order; the shorter one is
/// padded with zeros.
inline Rational pairing(const Tail& tail, const WeightExpansion& w) {
  Rational sum = 0;
  std::size_t i = 0;
  for (const auto& block : w.blocks()) {
    std::int64_t block_sum = 0;
    for (std::size_t j = 0; j < block.multiplicity && i < tail.size(); ++j, ++i) block_sum += tail[i];
    if (block_sum != 0) sum += block.value * block_sum;
    if (i >= tail.size()) break;
  }
  return sum;
}

namespace detail {

inline Tail sorted_tail_for_pairing(const ClassSxS& c, bool* reordered = nullptr) {
  Tail t = c.tail;
  bool sorted = is_non_increasing(t);
  if (!sorted) {
    std::clog << "warning: tail of " << to_string(c) << " reordered descending before pairing\n";
    sort_descending(t);
  }
  if (reordered) *reordered = !sorted;
  return t;
}

inline Rational class_denominator(const ClassSxS& c, const Rational& b) {
  Rational den = Rational(c.d) + b * c.e;
  if (den.sign() <= 0) throw std::domain_error("d + b e must be positive for " + to_string(c));
  return den;
}

}  // namespace detail

/// mu_b(C)(a) as an exact rational.
inline Rational mu(const ClassSxS& c, const Rational& a, const Rational& b) {
  Rational den = detail::class_denominator(c, b);
  WeightExpansion w = weight_expansion(a);
  return pairing(detail::sorted_tail_for_pairing(c), w) / den;
}

/// The volume constraint sqrt(a / 2b), held through its square.
struct VolumeBound {
  Rational a;
  Rational b;

  Rational squared() const { return a / (2 * b); }
  /// sqrt(a/2b) as an element of Q(sqrt(a/2b)).
  QuadExt value() const { return QuadExt::sqrt_of(squared()); }
  /// Sign of x - sqrt(a/2b) for x >= 0.
  int compare(const Rational& x) const {
    if (x.sign() < 0) return -1;
    Rational diff = x * x - squared();
    return diff.sign();
  }
};

inline VolumeBound volume_bound(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0) throw std::domain_error("volume bound needs a, b > 0");
  return VolumeBound{a, b};
}

struct ObstructionReport {
  ClassSxS cls;
  Rational a;
  Rational b;
  Rational mu_num;  ///< <m, w(a)>
  Rational mu_den;  ///< d + b e
  bool obstructive = false;
  /// 2b <m,w>^2 - a (d+be)^2; positive exactly when obstructive (given mu_num >= 0).
  Rational margin_sq;
  bool tail_reordered = false;

  Rational mu() const { return mu_num / mu_den; }
};

/// Whether mu_b(C)(a) exceeds sqrt(a/2b).
inline ObstructionReport is_obstructive_at(const ClassSxS& c, const Rational& a, const Rational& b) {
  ObstructionReport r;
  r.cls = c;
  r.a = a;
  r.b = b;
  r.mu_den = detail::class_denominator(c, b);
  Tail t = detail::sorted_tail_for_pairing(c, &r.tail_reordered);
  r.mu_num = pairing(t, weight_expansion(a));
  r.margin_sq = 2 * b * r.mu_num * r.mu_num - a * r.mu_den * r.mu_den;
  r.obstructive = r.mu_num.sign() > 0 && r.margin_sq.sign() > 0;
  return r;
}

/// Whether C is obstructive at a for some b in [b_lo, b_hi].
///
/// mu^2 (2b/a) = <m,w>^2 2b / (a (d+be)^2) has b-derivative with the sign of
/// d - b e, so over an interval it peaks at b = d/e clamped into the
/// interval. For e <= 0 it is increasing and peaks at b_hi.
inline bool is_obstructive_on_b_interval(const ClassSxS& c, const Rational& a, const Rational& b_lo,
                                         const Rational& b_hi) {
  if (b_lo > b_hi) throw std::invalid_argument("empty b interval");
  if (b_lo.sign() <= 0) throw std::domain_error("b interval must be positive");
  Tail t = detail::sorted_tail_for_pairing(c);
  Rational num = pairing(t, weight_expansion(a));
  if (num.sign() <= 0) return false;
  Rational best;
  if (c.e > 0) {
    best = std::clamp(Rational(c.d, c.e), b_lo, b_hi);
  } else {
    // e <= 0: the ratio is increasing in b wherever d + be > 0
    best = b_hi;
  }
  Rational den = Rational(c.d) + best * c.e;
  if (den.sign() <= 0) return false;
  return 2 * best * num * num > a * den * den;
}

struct IntervalIndex {
  std::int64_t n = 0;
  Rational lo;  ///< ((n+2)/(n+1))^2
  Rational hi;  ///< ((n+1)/n)^2
  /// b sits exactly on ((n+1)/n)^2; lo/hi then describe I_n for that n.
  bool boundary = false;
};

inline IntervalIndex interval_bounds(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("I_n needs n >= 1");
  Rational hi(BigInt(n + 1) * (n + 1), BigInt(n) * n);
  Rational lo(BigInt(n + 2) * (n + 2), BigInt(n + 1) * (n + 1));
  return IntervalIndex{n, lo, hi, false};
}

/// The n with b in I_n, or a boundary marker when b = ((n+1)/n)^2.
/// Accepts 1 < b < 4 (I_1 = (9/4, 4)).
inline IntervalIndex interval_index(const Rational& b) {
  if (b <= 1 || b >= 4) throw std::domain_error("interval index needs 1 < b < 4, got " + to_string(b));
  // (n+1)/n > sqrt(b)  <=>  n < 1/(sqrt(b) - 1); start from a float guess, settle exactly
  double t = std::sqrt(to_double(b));
  double guess = 1.0 / (t - 1.0);
  std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(guess)) - 1);
  while (n > 1 && interval_bounds(n).hi <= b) --n;
  for (;;) {
    IntervalIndex idx = interval_bounds(n);
    if (b == idx.hi) {
      idx.boundary = true;
      return idx;
    }
    if (b < idx.hi && b > idx.lo) return idx;
    ++n;
  }
}

struct RfValue {
  Rational b;
  std::int64_t n = 0;
  ClassSxS determining;
  std::string class_name;  ///< "S_3", "T_2", ...
  Rational cb8;            ///< mu_b(class)(8)
  Rational rf;             ///< 2 b cb8^2
};

namespace detail {

inline void require_rf_domain(const Rational& b) {
  if (b <= 1 || b > 2) throw std::domain_error("b must lie in (1, 2], got " + to_string(b));
}

}  // namespace detail

/// Class and values governing c_b(8) and RF(b): S_{k+1} on I_{2k+1} and
/// T_k on I_{2k}. Also accepts b = 2, which lies in I_2, where the T_1
/// formula gives RF(2) = 289/36.
inline RfValue rf_detail(const Rational& b) {
  detail::require_rf_domain(b);
  IntervalIndex idx = interval_index(b);
  if (idx.boundary)
    throw UnknownValueError("b = " + to_string(b) + " = ((n+1)/n)^2 with n = " + std::to_string(idx.n) +
                            ": RF(b) is unknown here");
  RfValue v;
  v.b = b;
  v.n = idx.n;
  if (idx.n % 2 == 1) {
    std::int64_t k = (idx.n - 1) / 2;
    v.determining = make_S(k + 1);
    v.class_name = "S_" + std::to_string(k + 1);
  } else {
    std::int64_t k = idx.n / 2;
    v.determining = make_T(k);
    v.class_name = "T_" + std::to_string(k);
  }
  v.cb8 = mu(v.determining, Rational(8), b);
  v.rf = 2 * b * v.cb8 * v.cb8;
  return v;
}

/// RF(b) for b in (1, 2] off the excluded set.
inline Rational rf(const Rational& b) { return rf_detail(b).rf; }

/// c_b(8) for b in (1, 2] off the excluded set.
inline Rational cb8(const Rational& b) { return rf_detail(b).cb8; }

/// max(sqrt(a/2b), max_C mu_b(C)(a)) over a finite list of classes: a
/// certified lower bound for c_b(a).
struct CapacityBound {
  bool is_volume = true;
  /// Winning mu when !is_volume.
  Rational mu;
  std::optional<std::size_t> class_index;
  /// Square of the bound (a/2b when the volume wins).
  Rational squared;
};

inline CapacityBound cb_lower_bound(const Rational& a, const Rational& b, std::span<const ClassSxS> classes) {
  VolumeBound vol = volume_bound(a, b);
  CapacityBound best{true, Rational(0), std::nullopt, vol.squared()};
  for (std::size_t i = 0; i < classes.size(); ++i) {
    Rational m = mu(classes[i], a, b);
    if (m.sign() <= 0) continue;
    if (m * m > best.squared) {
      best = CapacityBound{false, m, i, m * m};
    }
  }
  return best;
}

/// Classes <d, e; m> with 1 <= e <= e_max, d >= e, satisfying both
/// Diophantine equations, with a length-8 tail shaped (m^8), (m^7, m-1) or
/// (m+1, m^7), m >= 0 and all entries >= 0. Sorted by (e, d).
///
/// Each shape fixes sum m_i as a linear function of m, so the linear
/// equation determines m and only the quadratic one needs checking.
inline std::vector<ClassSxS> classify_center8(std::int64_t e_max) {
  std::vector<ClassSxS> out;
  for (std::int64_t e = 1; e <= e_max; ++e) {
    // sum m_i <= sqrt(8 sum m_i^2) gives 2(d+e)-1 <= sqrt(8(2de+1)); d is far below this cap
    for (std::int64_t d = e;; ++d) {
      const std::int64_t s1 = 2 * (d + e) - 1;
      const std::int64_t s2 = 2 * d * e + 1;
      if (s1 * s1 > 8 * s2) break;
      // (m^8): 8m = s1, impossible for odd s1
      // (m^7, m-1): 8m - 1 = s1
      if ((s1 + 1) % 8 == 0) {
        std::int64_t m = (s1 + 1) / 8;
        if (m >= 1 && 7 * m * m + (m - 1) * (m - 1) == s2) {
          ClassSxS c{d, e, Tail(7, m)};
          c.tail.push_back(m - 1);
          out.push_back(std::move(c));
        }
      }
      // (m+1, m^7): 8m + 1 = s1
      if ((s1 - 1) % 8 == 0) {
        std::int64_t m = (s1 - 1) / 8;
        if (m >= 0 && (m + 1) * (m + 1) + 7 * m * m == s2) {
          ClassSxS c{d, e, Tail{m + 1}};
          c.tail.insert(c.tail.end(), 7, m);
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace capcalc
