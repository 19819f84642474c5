#pragma once

// Reduction at a point. With lambda = sqrt(a/2b) the vector
//   ((b+1) lambda; b lambda, lambda, w(a))
// lives in Q(lambda). Cremona moves are applied to its ordered form until
// the defect is nonnegative; reaching such a vector with nonnegative
// entries certifies E(1,a) -> P(lambda, lambda b) at volume.

#include "capcalc/exactnum.hpp"
#include "capcalc/weights.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace capcalc {

struct ReductionVector {
  QuadExt head;
  std::vector<QuadExt> tail;  ///< non-increasing, zeros stripped

  const Rational& radicand() const { return head.radicand(); }

  std::string str() const {
    std::string s = "(" + head.str() + ";";
    for (std::size_t i = 0; i < tail.size();) {
      std::size_t j = i;
      while (j < tail.size() && tail[j] == tail[i]) ++j;
      s += (i == 0 ? " " : ", ") + tail[i].str();
      if (j - i > 1) s += "^x" + std::to_string(j - i);
      i = j;
    }
    return s + ")";
  }
};

namespace detail {

/// Descending order; exact ties fall back to (base, coeff) so the result is
/// deterministic.
inline void order_tail(std::vector<QuadExt>& tail) {
  std::erase_if(tail, [](const QuadExt& v) { return v.sign() == 0; });
  std::stable_sort(tail.begin(), tail.end(), [](const QuadExt& x, const QuadExt& y) {
    auto c = x <=> y;
    if (c != 0) return c > 0;
    if (x.base() != y.base()) return x.base() > y.base();
    return x.coeff() > y.coeff();
  });
}

inline QuadExt top3_defect(const ReductionVector& v) {
  QuadExt delta = v.head;
  for (std::size_t i = 0; i < 3 && i < v.tail.size(); ++i) delta -= v.tail[i];
  return delta;
}

}  // namespace detail

/// Adds the defect to the head and the first three tail entries (zero-padded)
/// without reordering. Applying it twice restores the vector.
inline void cremona_move(ReductionVector& v) {
  while (v.tail.size() < 3) v.tail.push_back(QuadExt::rational(0, v.radicand()));
  const QuadExt delta = detail::top3_defect(v);
  v.head += delta;
  for (std::size_t i = 0; i < 3; ++i) v.tail[i] += delta;
}

/// ((b+1) lambda; b lambda, lambda, w(a)), ordered.
inline ReductionVector initial_vector(const Rational& a, const Rational& b) {
  if (a < 1) throw std::domain_error("reduction needs a >= 1");
  if (b < 1) throw std::domain_error("reduction needs b >= 1");
  const Rational r = a / (2 * b);
  const QuadExt lambda = QuadExt::sqrt_of(r);
  ReductionVector v{lambda * (b + 1), {}};
  WeightExpansion w = weight_expansion(a);
  v.tail.reserve(w.length() + 2);
  v.tail.push_back(lambda * b);
  v.tail.push_back(lambda);
  for (const auto& block : w.blocks())
    v.tail.insert(v.tail.end(), block.multiplicity, QuadExt::rational(block.value, r));
  detail::order_tail(v.tail);
  return v;
}

enum class ReductionOutcome { success, failed_negative_entry, inconclusive_max_moves };

inline std::string to_string(ReductionOutcome o) {
  switch (o) {
    case ReductionOutcome::success: return "success";
    case ReductionOutcome::failed_negative_entry: return "failed_negative_entry";
    case ReductionOutcome::inconclusive_max_moves: return "inconclusive_max_moves";
  }
  return "?";
}

struct ReductionStep {
  ReductionVector vector;
  QuadExt defect;
};

struct ReductionTrace {
  Rational a;
  Rational b;
  std::vector<ReductionStep> steps;  ///< ordered vector and its defect, before each move and at the end
  ReductionOutcome outcome = ReductionOutcome::inconclusive_max_moves;
  int moves = 0;
};

inline constexpr int kDefaultReductionMoves = 200;

/// Runs Cremona moves on the ordered vector at lambda = sqrt(a/2b).
///
/// Each move adds the (negative) defect to the head and the three largest
/// tail entries, drops zeros and reorders. Stops with success once the
/// defect is >= 0 with every entry >= 0, and with failed_negative_entry as
/// soon as an entry (or the head) is negative.
inline ReductionTrace reduce_at_point(const Rational& a, const Rational& b, int max_moves = kDefaultReductionMoves,
                                      bool keep_trace = true) {
  if (b > 2) throw std::domain_error("reduction is set up for b in [1, 2]");
  ReductionTrace tr;
  tr.a = a;
  tr.b = b;
  ReductionVector v = initial_vector(a, b);
  for (;;) {
    QuadExt delta = detail::top3_defect(v);
    const bool negative = v.head.sign() < 0 || (!v.tail.empty() && v.tail.back().sign() < 0);
    if (keep_trace || negative || delta.sign() >= 0 || tr.moves >= max_moves)
      tr.steps.push_back({v, delta});
    if (negative) {
      tr.outcome = ReductionOutcome::failed_negative_entry;
      return tr;
    }
    if (delta.sign() >= 0) {
      tr.outcome = ReductionOutcome::success;
      return tr;
    }
    if (tr.moves >= max_moves) {
      tr.outcome = ReductionOutcome::inconclusive_max_moves;
      return tr;
    }
    cremona_move(v);
    detail::order_tail(v.tail);
    ++tr.moves;
  }
}

/// h(k) = b lambda - 1 + k (lambda - 2).
inline QuadExt h_of(std::int64_t k, const Rational& a, const Rational& b) {
  const QuadExt lambda = QuadExt::sqrt_of(a / (2 * b));
  return lambda * b - Rational(1) + (lambda - Rational(2)) * Rational(k);
}

/// m(p, q) = 4q^2 / (2+p)^2: for p >= 2, (b+p) lambda >= q on all of
/// b in [1,2] iff a >= m(p, q).
inline Rational m_threshold(const Rational& p, const Rational& q) {
  if (p < 2) throw std::domain_error("m(p,q) needs p >= 2");
  if (q.sign() <= 0) throw std::domain_error("m(p,q) needs q > 0");
  return 4 * q * q / ((2 + p) * (2 + p));
}

struct VolumeFillPoint {
  Rational a;
  Rational b;
  ReductionOutcome outcome = ReductionOutcome::inconclusive_max_moves;
  int moves = 0;
  /// Full trace, kept only for points that did not succeed.
  std::vector<ReductionStep> trace;
};

struct VolumeFillReport {
  std::vector<VolumeFillPoint> points;  ///< a-major, b-minor
  bool all_success = true;
  int max_moves_used = 0;
};

/// Reduction on the grid a_samples x b_samples. Success everywhere
/// certifies c_b(a) = sqrt(a/2b) at those points.
inline VolumeFillReport verify_volume_fills(const std::vector<Rational>& a_samples,
                                            const std::vector<Rational>& b_samples, unsigned jobs = 1,
                                            int max_moves = kDefaultReductionMoves) {
  VolumeFillReport rep;
  rep.points.resize(a_samples.size() * b_samples.size());
  for (std::size_t i = 0; i < a_samples.size(); ++i)
    for (std::size_t j = 0; j < b_samples.size(); ++j) {
      auto& p = rep.points[i * b_samples.size() + j];
      p.a = a_samples[i];
      p.b = b_samples[j];
    }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < rep.points.size();) {
      auto& p = rep.points[k];
      ReductionTrace tr = reduce_at_point(p.a, p.b, max_moves, false);
      p.outcome = tr.outcome;
      p.moves = tr.moves;
      if (tr.outcome != ReductionOutcome::success) p.trace = reduce_at_point(p.a, p.b, max_moves, true).steps;
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (const auto& p : rep.points) {
    rep.all_success = rep.all_success && p.outcome == ReductionOutcome::success;
    rep.max_moves_used = std::max(rep.max_moves_used, p.moves);
  }
  return rep;
}

}  // namespace capcalc
