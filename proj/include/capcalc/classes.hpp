#pragma once

// Homology classes in the blow-up of CP^2, written (d; m1, ..., mn), and in
// the blow-up of S^2 x S^2, written (d, e; m1, ..., mn). Entries are small
// integers throughout the searches here, so they are stored as int64.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capcalc {

using Tail = std::vector<std::int64_t>;

struct ClassP2 {
  std::int64_t degree = 0;
  Tail tail;

  friend bool operator==(const ClassP2&, const ClassP2&) = default;
};

struct ClassSxS {
  std::int64_t d = 0;
  std::int64_t e = 0;
  Tail tail;

  friend bool operator==(const ClassSxS&, const ClassSxS&) = default;
  friend auto operator<=>(const ClassSxS&, const ClassSxS&) = default;
};

namespace detail {

/// Renders a tail with runs compressed: "4^7,3".
inline std::string tail_str(const Tail& tail) {
  std::string s;
  for (std::size_t i = 0; i < tail.size();) {
    std::size_t j = i;
    while (j < tail.size() && tail[j] == tail[i]) ++j;
    if (!s.empty()) s += ",";
    s += std::to_string(tail[i]);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("bad integer '" + std::string(s) + "' in '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

/// Parses a comma separated tail; "x^n" repeats x n times.
inline Tail parse_tail(std::string_view text) {
  Tail out;
  if (text.find_first_not_of(' ') == std::string_view::npos) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (auto caret = item.find('^'); caret != std::string_view::npos) {
      std::int64_t value = detail::parse_int(item.substr(0, caret), text);
      std::int64_t reps = detail::parse_int(item.substr(caret + 1), text);
      if (reps < 0) throw std::invalid_argument("negative repeat count in '" + std::string(text) + "'");
      out.insert(out.end(), static_cast<std::size_t>(reps), value);
    } else {
      out.push_back(detail::parse_int(item, text));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parses "d,e;m1,m2,..." (also accepts "d,e; 4^7,3").
inline ClassSxS parse_class(std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("class needs 'd,e;tail': " + std::string(text));
  auto head = text.substr(0, semi);
  auto comma = head.find(',');
  if (comma == std::string_view::npos) throw std::invalid_argument("class needs 'd,e;tail': " + std::string(text));
  ClassSxS c;
  c.d = detail::parse_int(head.substr(0, comma), text);
  c.e = detail::parse_int(head.substr(comma + 1), text);
  c.tail = parse_tail(text.substr(semi + 1));
  return c;
}

inline std::string to_string(const ClassSxS& c) {
  return "(" + std::to_string(c.d) + "," + std::to_string(c.e) + ";" + detail::tail_str(c.tail) + ")";
}
inline std::string to_string(const ClassP2& c) {
  return "(" + std::to_string(c.degree) + ";" + detail::tail_str(c.tail) + ")";
}
inline std::ostream& operator<<(std::ostream& os, const ClassSxS& c) { return os << to_string(c); }
inline std::ostream& operator<<(std::ostream& os, const ClassP2& c) { return os << to_string(c); }

inline bool is_non_increasing(const Tail& t) { return std::is_sorted(t.begin(), t.end(), std::greater<>()); }

inline void sort_descending(Tail& t) { std::sort(t.begin(), t.end(), std::greater<>()); }

inline ClassP2 ordered(ClassP2 c) {
  sort_descending(c.tail);
  return c;
}

inline void strip_trailing_zeros(Tail& t) {
  while (!t.empty() && t.back() == 0) t.pop_back();
}

/// Number of nonzero tail entries.
inline std::size_t support_length(const Tail& t) {
  return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](std::int64_t m) { return m != 0; }));
}

/// (d; m) -> (2d-m1-m2-m3; d-m2-m3, d-m1-m3, d-m1-m2, m4, ...). Tails shorter
/// than three are zero-padded. The result is not reordered.
inline ClassP2 cremona(ClassP2 c) {
  if (c.tail.size() < 3) c.tail.resize(3, 0);
  auto& m = c.tail;
  const std::int64_t d = c.degree;
  const std::int64_t m1 = m[0], m2 = m[1], m3 = m[2];
  c.degree = 2 * d - m1 - m2 - m3;
  m[0] = d - m2 - m3;
  m[1] = d - m1 - m3;
  m[2] = d - m1 - m2;
  return c;
}

/// d - m1 - m2 - m3 of the vector as given (callers order it first).
inline std::int64_t defect(const ClassP2& c) {
  std::int64_t s = c.degree;
  for (std::size_t i = 0; i < 3 && i < c.tail.size(); ++i) s -= c.tail[i];
  return s;
}

/// <d, e; m1, ..., mn> -> (d+e-m1; d-m1, e-m1, m2, ..., mn). Not reordered.
inline ClassP2 to_p2(const ClassSxS& c) {
  const std::int64_t m1 = c.tail.empty() ? 0 : c.tail.front();
  ClassP2 out;
  out.degree = c.d + c.e - m1;
  out.tail.reserve(c.tail.size() + 1);
  out.tail.push_back(c.d - m1);
  out.tail.push_back(c.e - m1);
  for (std::size_t i = 1; i < c.tail.size(); ++i) out.tail.push_back(c.tail[i]);
  return out;
}

/// sum m_i = 2(d+e) - 1 and sum m_i^2 = 2de + 1.
inline bool diophantine_check(const ClassSxS& c) {
  std::int64_t s1 = 0, s2 = 0;
  for (auto m : c.tail) {
    s1 += m;
    s2 += m * m;
  }
  return s1 == 2 * (c.d + c.e) - 1 && s2 == 2 * c.d * c.e + 1;
}

/// 3d - 1 = sum m_i and d^2 + 1 = sum m_i^2.
inline bool diophantine_check(const ClassP2& c) {
  std::int64_t s1 = 0, s2 = 0;
  for (auto m : c.tail) {
    s1 += m;
    s2 += m * m;
  }
  return s1 == 3 * c.degree - 1 && s2 == c.degree * c.degree + 1;
}

enum class Verdict { yes, no, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ExceptionalityResult {
  Verdict verdict = Verdict::inconclusive;
  bool diophantine = false;
  int moves = 0;
  /// Ordered vector before each move, then the final vector.
  std::vector<ClassP2> trace;
  std::string reason;
};

namespace detail {

inline bool is_base_class(const ClassP2& ordered_vec) {
  if (ordered_vec.degree != 0) return false;
  std::size_t nonzero = 0;
  bool has_minus_one = false;
  for (auto m : ordered_vec.tail) {
    if (m == 0) continue;
    ++nonzero;
    has_minus_one = m == -1;
  }
  return nonzero == 1 && has_minus_one;
}

}  // namespace detail

inline constexpr int kDefaultExceptionalMoves = 1000;

/// Decides membership in the set of exceptional classes: the Diophantine
/// pair must hold and repeated order-then-Cremona steps must reach (0; -1).
///
/// A reduced vector (defect >= 0) that is not (0; -1) is final, so the
/// answer is no. So is a negative degree: Cremona moves preserve the set of
/// exceptional classes and the only one with d <= 0 is (0; -1) up to
/// permutation.
inline ExceptionalityResult is_exceptional(const ClassSxS& c, int max_moves = kDefaultExceptionalMoves) {
  ExceptionalityResult r;
  r.diophantine = diophantine_check(c);
  if (!r.diophantine) {
    r.verdict = Verdict::no;
    r.reason = "Diophantine equations fail";
    return r;
  }
  ClassP2 v = to_p2(c);
  for (;;) {
    sort_descending(v.tail);
    std::erase(v.tail, 0);
    r.trace.push_back(v);
    if (detail::is_base_class(v)) {
      r.verdict = Verdict::yes;
      r.reason = "reached (0;-1)";
      return r;
    }
    if (v.degree < 0 || (v.degree == 0 && !v.tail.empty() && v.tail.front() > 0)) {
      r.verdict = Verdict::no;
      r.reason = "degree left the positive range";
      return r;
    }
    if (defect(v) >= 0) {
      r.verdict = Verdict::no;
      r.reason = "reduced vector is not (0;-1)";
      return r;
    }
    if (r.moves >= max_moves) {
      r.verdict = Verdict::inconclusive;
      r.reason = "move limit reached";
      return r;
    }
    v = cremona(std::move(v));
    ++r.moves;
  }
}

/// S_k = (2k^2+k, 2k^2-k; (k^2)^7, k^2-1).
inline ClassSxS make_S(std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("S_k needs k >= 1");
  const std::int64_t k2 = k * k;
  ClassSxS c{2 * k2 + k, 2 * k2 - k, Tail(7, k2)};
  c.tail.push_back(k2 - 1);
  return c;
}

/// T_k = ((2k+1)(k+1), k(2k+1); k^2+k+1, (k^2+k)^7).
inline ClassSxS make_T(std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("T_k needs k >= 1");
  ClassSxS c{(2 * k + 1) * (k + 1), k * (2 * k + 1), Tail{k * k + k + 1}};
  c.tail.insert(c.tail.end(), 7, k * k + k);
  return c;
}

}  // namespace capcalc
