#pragma once

// Search for obstructive exceptional classes <d, e; m> whose center lies in
// a window of a-values (by default (8, 9)), for every b in a window (by
// default (1, 2)).
//
// Candidate centers are a = n/q with q <= q_max. For each center and each
// (d, e) pair in range, tails m solve
//     sum m_i = 2(d+e) - 1,   sum m_i^2 = 2de + 1,
// have exactly l(a) positive entries and respect the block shapes of w(a):
// each block of equal weights carries (m,...,m), (m,...,m,m-1) or
// (m+1,m,...,m), with at most one non-constant block. Survivors are tested
// for obstructiveness over the whole b window and then for exceptionality.

#include "capcalc/classes.hpp"
#include "capcalc/exactnum.hpp"
#include "capcalc/obstruction.hpp"
#include "capcalc/weights.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace capcalc {

namespace detail {

inline std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline void extend_into(std::int64_t l2, std::int64_t l1, std::int64_t prev, Tail& prefix, std::vector<Tail>& out) {
  if (l2 < l1 || l2 < 0 || l1 < 0) return;
  if (l2 == l1) {
    Tail t = prefix;
    t.insert(t.end(), static_cast<std::size_t>(l2), 1);
    out.push_back(std::move(t));
    return;
  }
  std::int64_t start = isqrt(l2);
  if (prev != 0) start = std::min(prev, start);
  for (std::int64_t i = start; i >= 1; --i) {
    prefix.push_back(i);
    extend_into(l2 - i * i, l1 - i, i, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// All non-increasing tuples of positive integers with sum of squares l2,
/// sum l1 and first entry <= prev (prev == 0: unbounded). Largest-first
/// recursion; output is in lexicographically decreasing order.
inline std::vector<Tail> extend(std::int64_t l2, std::int64_t l1, std::int64_t prev = 0) {
  std::vector<Tail> out;
  Tail prefix;
  detail::extend_into(l2, l1, prev, prefix, out);
  return out;
}

/// Whether a non-increasing tail of length l(a) has the block shapes allowed
/// for a class obstructive with center a. Throws on a length mismatch.
inline bool block_filter(const Tail& tail, const WeightExpansion& w) {
  if (tail.size() != w.length())
    throw std::invalid_argument("block_filter: tail length " + std::to_string(tail.size()) +
                                " differs from l(a) = " + std::to_string(w.length()));
  std::size_t pos = 0;
  int non_constant = 0;
  for (const auto& block : w.blocks()) {
    const std::size_t s = block.multiplicity;
    const auto first = tail.begin() + static_cast<std::ptrdiff_t>(pos);
    const auto last = first + static_cast<std::ptrdiff_t>(s);
    pos += s;
    const std::int64_t hi = *first;
    const std::int64_t lo = *(last - 1);
    if (hi == lo) continue;
    if (hi - lo != 1) return false;
    // exactly one entry differs: the last one (m,...,m,m-1) or the first (m+1,m,...,m)
    const auto count_hi = std::count(first, last, hi);
    const auto count_lo = std::count(first, last, lo);
    if (count_hi + count_lo != static_cast<std::ptrdiff_t>(s)) return false;
    if (count_hi != 1 && count_lo != 1) return false;
    if (++non_constant > 1) return false;
  }
  return true;
}

inline bool block_filter(const Tail& tail, const Rational& a) { return block_filter(tail, weight_expansion(a)); }

namespace detail {

/// Depth-first enumeration of the tails extend() would produce that also
/// have length exactly l(a) and pass block_filter. Each constraint is
/// checked on prefixes, so nothing that survives filtering is pruned.
class CenterTailEnumerator {
 public:
  explicit CenterTailEnumerator(const WeightExpansion& w) {
    for (const auto& block : w.blocks())
      for (std::size_t j = 0; j < block.multiplicity; ++j) slots_.push_back({j, block.multiplicity});
  }

  std::vector<Tail> run(std::int64_t l2, std::int64_t l1) {
    out_.clear();
    tail_.assign(slots_.size(), 0);
    if (!slots_.empty()) visit(0, l2, l1, 0, false, false);
    return std::move(out_);
  }

 private:
  struct Slot {
    std::size_t index_in_block;
    std::size_t block_size;
  };

  // Can r more entries, each in [1, cap], reach sums l1 and l2?
  static bool feasible(std::int64_t r, std::int64_t l2, std::int64_t l1, std::int64_t cap) {
    if (r == 0) return l1 == 0 && l2 == 0;
    if (l1 < r || l1 > r * cap) return false;
    if (l2 < l1 || l2 > cap * l1) return false;
    return r * l2 >= l1 * l1;  // Cauchy-Schwarz
  }

  void place(std::size_t pos, std::int64_t x, std::int64_t l2, std::int64_t l1, bool deviated, bool non_constant_used) {
    const std::int64_t r = static_cast<std::int64_t>(slots_.size() - pos - 1);
    const std::int64_t l2n = l2 - x * x;
    const std::int64_t l1n = l1 - x;
    if (!feasible(r, l2n, l1n, x)) return;
    tail_[pos] = x;
    if (r == 0) {
      out_.push_back(tail_);
      return;
    }
    visit(pos + 1, l2n, l1n, x, deviated, non_constant_used);
  }

  void visit(std::size_t pos, std::int64_t l2, std::int64_t l1, std::int64_t prev, bool deviated,
             bool non_constant_used) {
    const Slot& slot = slots_[pos];
    const std::int64_t remaining = static_cast<std::int64_t>(slots_.size() - pos);
    if (slot.index_in_block == 0) {
      // new block: free value, deviation state resets
      std::int64_t top = isqrt(l2 - (remaining - 1));
      if (prev != 0) top = std::min(top, prev);
      const std::int64_t bottom = std::max<std::int64_t>(1, (l1 + remaining - 1) / remaining);
      for (std::int64_t x = top; x >= bottom; --x) place(pos, x, l2, l1, false, non_constant_used);
      return;
    }
    const std::int64_t m0 = tail_[pos - slot.index_in_block];
    if (deviated) {
      if (m0 - 1 >= 1) place(pos, m0 - 1, l2, l1, true, non_constant_used);
      return;
    }
    place(pos, m0, l2, l1, false, non_constant_used);
    const bool may_deviate = slot.index_in_block == 1 || slot.index_in_block + 1 == slot.block_size;
    if (may_deviate && !non_constant_used && m0 - 1 >= 1) place(pos, m0 - 1, l2, l1, true, true);
  }

  std::vector<Slot> slots_;
  Tail tail_;
  std::vector<Tail> out_;
};

}  // namespace detail

/// Tails for (l2, l1) with exactly l(a) entries passing block_filter for a;
/// the same set as filtering extend(l2, l1, 0), in the same order.
inline std::vector<Tail> center_tails(std::int64_t l2, std::int64_t l1, const WeightExpansion& w) {
  return detail::CenterTailEnumerator(w).run(l2, l1);
}

/// Thread-safe cache of extend(l2, l1, 0). Racing threads may compute the
/// same entry twice; the stored value is the same either way.
class ExtendCache {
 public:
  std::shared_ptr<const std::vector<Tail>> get(std::int64_t l2, std::int64_t l1) {
    const auto key = std::make_pair(l2, l1);
    {
      std::lock_guard lock(mu_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    auto value = std::make_shared<const std::vector<Tail>>(extend(l2, l1, 0));
    std::lock_guard lock(mu_);
    return table_.try_emplace(key, std::move(value)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return table_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const std::vector<Tail>>> table_;
};

enum class TailEnumeration {
  pruned,  ///< center_tails(): length and block shape enforced during the recursion
  naive,   ///< extend() for each (d, e), then filter by length and block shape
};

struct SearchCursor {
  Rational center;
  std::int64_t d = 0;
  std::int64_t e = 0;

  friend bool operator==(const SearchCursor&, const SearchCursor&) = default;
};

struct SearchConfig {
  std::int64_t q_max = 11;
  std::int64_t e_max = 40;
  std::int64_t d_lo_offset = -2;  ///< d >= max(1, e + d_lo_offset)
  std::int64_t d_hi_slope = 2;    ///< d <= d_hi_slope * e + d_hi_offset
  std::int64_t d_hi_offset = 2;
  /// Include d = 5 for e = 1, matching the listing (1,1), ..., (5,1).
  bool include_e1_d5 = true;
  Rational a_lo = 8;  ///< open window for centers
  Rational a_hi = 9;
  Rational b_lo = 1;  ///< b window; obstructiveness is decided exactly over [b_lo, b_hi]
  Rational b_hi = 2;
  /// Replaces candidate_centers() when set.
  std::optional<std::vector<Rational>> centers;
  unsigned jobs = 1;
  TailEnumeration enumeration = TailEnumeration::pruned;
  /// Skip every work item up to and including this one.
  std::optional<SearchCursor> resume_after;
};

inline void validate(const SearchConfig& cfg) {
  if (cfg.q_max < 2) throw std::invalid_argument("q_max must be >= 2");
  if (cfg.e_max < 0) throw std::invalid_argument("e_max must be >= 0");
  if (cfg.a_lo >= cfg.a_hi) throw std::invalid_argument("empty a window");
  if (cfg.b_lo >= cfg.b_hi || cfg.b_lo.sign() <= 0) throw std::invalid_argument("b window must be positive and nonempty");
}

/// Rationals n/q in lowest terms with 2 <= q <= q_max strictly inside
/// (a_lo, a_hi), ascending; or the explicit list when one is configured.
inline std::vector<Rational> candidate_centers(const SearchConfig& cfg) {
  if (cfg.centers) {
    auto out = *cfg.centers;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  if (cfg.q_max < 2) throw std::invalid_argument("q_max must be >= 2");
  std::vector<Rational> out;
  for (std::int64_t q = 2; q <= cfg.q_max; ++q) {
    BigInt n = floor_of(cfg.a_lo * q);
    for (;; ++n) {
      Rational x(n, BigInt(q));
      if (x <= cfg.a_lo) continue;
      if (x >= cfg.a_hi) break;
      if (denominator_of(x) == q) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Convenience overload: centers in (8, 9) with denominators up to q_max.
inline std::vector<Rational> candidate_centers(std::int64_t q_max) {
  SearchConfig cfg;
  cfg.q_max = q_max;
  return candidate_centers(cfg);
}

inline constexpr std::size_t kReferencePairCount = 934;

struct DePairs {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;  ///< (d, e), e-major then d ascending
  std::string warning;  ///< set when the default configuration disagrees with the reference count
};

inline DePairs de_pairs(const SearchConfig& cfg) {
  DePairs out;
  for (std::int64_t e = 1; e <= cfg.e_max; ++e) {
    std::int64_t lo = std::max<std::int64_t>(1, e + cfg.d_lo_offset);
    std::int64_t hi = cfg.d_hi_slope * e + cfg.d_hi_offset;
    if (e == 1 && cfg.include_e1_d5) hi = std::max<std::int64_t>(hi, 5);
    for (std::int64_t d = lo; d <= hi; ++d) out.pairs.emplace_back(d, e);
  }
  const bool default_shape = cfg.e_max == 40 && cfg.d_lo_offset == -2 && cfg.d_hi_slope == 2 &&
                             cfg.d_hi_offset == 2 && cfg.include_e1_d5;
  if (default_shape && out.pairs.size() != kReferencePairCount)
    out.warning = "(d,e) pair count " + std::to_string(out.pairs.size()) + " differs from the reference count " +
                  std::to_string(kReferencePairCount) + "; every listed pair is searched";
  return out;
}

/// The two sides of the error-bound inequality at a = 8 + 1/q, with sigma
/// replaced by its ceiling 1 - h^2/(2b) and v_M by its lower bound 1/3.
/// The expressions nest square roots, so they are evaluated in 50-digit
/// binary floating point rather than exactly.
struct BoundValues {
  using Float = boost::multiprecision::cpp_bin_float_50;
  Float l;
  Float u;
  Float delta;
  Float sigma;
  /// delta <= 0 or sigma <= 0: the inequality gives no bound here.
  bool vacuous = false;
};

inline BoundValues bound_functions(const Rational& q, const Rational& h, const Rational& b,
                                   const Rational& v_m_floor = Rational(1, 3)) {
  using Float = BoundValues::Float;
  if (q < 2) throw std::domain_error("bound functions need q >= 2");
  if (b.sign() <= 0) throw std::domain_error("bound functions need b > 0");
  auto F = [](const Rational& x) { return Float(numerator_of(x)) / Float(denominator_of(x)); };
  const Rational a = 8 + 1 / q;
  BoundValues out;
  const Float fa = F(a), fb = F(b), fq = F(q);
  out.delta = fa + 1 - 2 * (fb + 1) / sqrt(2 * fb) * sqrt(fa) - 1 / fq;
  out.sigma = F(1 - h * h / (2 * b));
  if (out.delta <= 0 || out.sigma <= 0) {
    out.vacuous = true;
    return out;
  }
  const Float c = 1 - F(h) * (1 - 1 / fb);
  const Float scale = sqrt(2 * fb * fa) / out.delta;
  out.l = scale * (sqrt(out.sigma * fq) - c);
  out.u = scale * (out.sigma / (out.delta * F(v_m_floor)) - c);
  return out;
}

/// Smallest q >= 2 (to within tol) where l(q) >= u(q), located by bisection
/// on the real extension of q; nullopt if there is none below q_cap.
inline std::optional<double> bound_crossing(const Rational& h, const Rational& b, double q_cap = 1e6) {
  auto gap = [&](double q) -> std::optional<double> {
    Rational rq = parse_rational(std::to_string(q));
    auto v = bound_functions(rq, h, b);
    if (v.vacuous) return std::nullopt;
    return (v.l - v.u).convert_to<double>();
  };
  double lo = 2, hi = 2;
  auto g = gap(lo);
  if (!g) return std::nullopt;
  if (*g >= 0) return lo;
  while (true) {
    hi *= 2;
    if (hi > q_cap) return std::nullopt;
    auto gh = gap(hi);
    if (gh && *gh >= 0) break;
    lo = hi;
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    auto gm = gap(mid);
    if (gm && *gm >= 0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Error terms of a class against the scaled weight vector at (a, b):
/// m = s w(a) + eps with s = (d + b e)/sqrt(2ab), so that <eps, w(a)> > 0
/// exactly when the class is obstructive at (a, b). Everything lives in
/// Q(lambda), lambda = sqrt(a/2b), using 1/sqrt(2ab) = lambda/a.
struct ErrorData {
  Rational h;                ///< d - b e
  QuadExt scale;             ///< (d + b e)/sqrt(2ab)
  std::vector<QuadExt> v;    ///< scale * w_i
  std::vector<QuadExt> eps;  ///< m_i - v_i, padded to the longer of m and w(a)
  QuadExt eps_dot_w;         ///< <eps, w(a)>
  QuadExt norm_sq;           ///< ||eps||^2
  QuadExt sigma;             ///< sum of eps_i^2 beyond the first l0 entries
  QuadExt sigma_prime;       ///< sum of eps_i from l0+1 to M - l_N
  QuadExt v_m;               ///< (d + b e) sqrt(2b) / (q (b+1) sqrt(a))
};

inline ErrorData error_data(const ClassSxS& c, const Rational& a, const Rational& b) {
  const Rational r = a / (2 * b);
  const QuadExt lambda = QuadExt::sqrt_of(r);
  const Rational dbe = Rational(c.d) + b * c.e;
  WeightExpansion w = weight_expansion(a);
  std::vector<Rational> weights = w.entries();
  Tail m = detail::sorted_tail_for_pairing(c);
  const std::size_t n = std::max(weights.size(), m.size());
  weights.resize(n, Rational(0));
  m.resize(n, 0);

  const QuadExt zero = QuadExt::rational(0, r);
  ErrorData ed{Rational(c.d) - b * c.e, lambda * (dbe / a), {}, {}, zero, zero, zero, zero, zero};
  const std::size_t l0 = w.blocks().front().multiplicity;
  const std::size_t last_block = w.blocks().size() > 1 ? w.blocks().back().multiplicity : 0;
  const std::size_t M = w.length();
  for (std::size_t i = 0; i < n; ++i) {
    ed.v.push_back(ed.scale * weights[i]);
    ed.eps.push_back(QuadExt::rational(Rational(m[i]), r) - ed.v.back());
    const QuadExt& e_i = ed.eps.back();
    ed.eps_dot_w += e_i * weights[i];
    QuadExt sq = e_i * e_i;
    ed.norm_sq += sq;
    if (i >= l0 && i < M) ed.sigma += sq;
    if (i >= l0 && i + last_block < M) ed.sigma_prime += e_i;
  }
  ed.v_m = lambda * (dbe / (Rational(w.last_denominator()) * (b + 1) * r));
  return ed;
}

struct SearchProgress {
  std::size_t centers_done = 0;
  std::size_t centers_total = 0;
  Rational center;
  std::size_t pairs_checked = 0;
  std::size_t classes_generated = 0;
  std::optional<SearchCursor> cursor;  ///< last completed item
};

using ProgressSink = std::function<void(const SearchProgress&)>;

struct SearchReport {
  std::vector<Rational> centers_checked;
  std::size_t pairs_checked = 0;      ///< (center, (d,e)) work items
  std::size_t classes_generated = 0;  ///< tails passing length and block filters
  std::size_t obstructive_candidates = 0;  ///< of those, obstructive somewhere in the b window
  std::size_t non_exceptional_obstructive = 0;
  std::vector<ObstructionReport> obstructive_found;  ///< exceptional and obstructive
  double wall_time = 0;                              ///< seconds
  std::size_t de_pair_count = 0;
  std::string de_pair_warning;
  bool completed = true;
  std::optional<SearchCursor> cursor;

  /// Appends a report covering later work items.
  void merge(const SearchReport& later) {
    centers_checked.insert(centers_checked.end(), later.centers_checked.begin(), later.centers_checked.end());
    std::sort(centers_checked.begin(), centers_checked.end());
    centers_checked.erase(std::unique(centers_checked.begin(), centers_checked.end()), centers_checked.end());
    pairs_checked += later.pairs_checked;
    classes_generated += later.classes_generated;
    obstructive_candidates += later.obstructive_candidates;
    non_exceptional_obstructive += later.non_exceptional_obstructive;
    obstructive_found.insert(obstructive_found.end(), later.obstructive_found.begin(), later.obstructive_found.end());
    wall_time += later.wall_time;
    completed = later.completed;
    if (later.cursor) cursor = later.cursor;
  }
};

namespace detail {

struct ItemResult {
  std::size_t generated = 0;
  std::size_t obstructive = 0;
  std::size_t non_exceptional = 0;
  std::vector<ObstructionReport> found;
};

inline ItemResult run_item(const Rational& a, const WeightExpansion& w, std::int64_t d, std::int64_t e,
                           const SearchConfig& cfg, ExtendCache* cache) {
  ItemResult res;
  const std::int64_t l1 = 2 * (d + e) - 1;
  const std::int64_t l2 = 2 * d * e + 1;
  std::vector<Tail> tails;
  if (cfg.enumeration == TailEnumeration::pruned) {
    tails = center_tails(l2, l1, w);
  } else {
    auto all = cache->get(l2, l1);
    for (const auto& t : *all)
      if (t.size() == w.length() && block_filter(t, w)) tails.push_back(t);
  }
  res.generated = tails.size();
  for (auto& t : tails) {
    ClassSxS c{d, e, std::move(t)};
    if (!is_obstructive_on_b_interval(c, a, cfg.b_lo, cfg.b_hi)) continue;
    ++res.obstructive;
    if (is_exceptional(c).verdict != Verdict::yes) {
      ++res.non_exceptional;
      continue;
    }
    Rational b_star = c.e > 0 ? std::clamp(Rational(c.d, c.e), cfg.b_lo, cfg.b_hi) : cfg.b_hi;
    res.found.push_back(is_obstructive_at(c, a, b_star));
  }
  return res;
}

}  // namespace detail

/// Runs the search. Work items are (center, (d, e)) pairs; within a center
/// they are spread over cfg.jobs threads and merged in item order, so the
/// report does not depend on the thread count. The sink is called after
/// each center. Setting *stop ends the run after the current center with
/// completed = false and the cursor of the last finished item.
inline SearchReport certify_no_obstruction(const SearchConfig& cfg, const ProgressSink& progress = {},
                                           const std::atomic<bool>* stop = nullptr) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  SearchReport rep;
  const std::vector<Rational> centers = candidate_centers(cfg);
  DePairs dp = de_pairs(cfg);
  rep.de_pair_count = dp.pairs.size();
  rep.de_pair_warning = dp.warning;

  // position to resume from
  std::size_t first_center = 0, first_pair = 0;
  if (cfg.resume_after) {
    const auto& cur = *cfg.resume_after;
    auto ci = std::find(centers.begin(), centers.end(), cur.center);
    auto pi = std::find(dp.pairs.begin(), dp.pairs.end(), std::make_pair(cur.d, cur.e));
    if (ci == centers.end() || pi == dp.pairs.end())
      throw std::invalid_argument("resume cursor does not match this configuration");
    first_center = static_cast<std::size_t>(ci - centers.begin());
    first_pair = static_cast<std::size_t>(pi - dp.pairs.begin()) + 1;
    if (first_pair == dp.pairs.size()) {
      ++first_center;
      first_pair = 0;
    }
  }

  ExtendCache cache;
  const unsigned jobs = std::max(1u, cfg.jobs);
  for (std::size_t ci = first_center; ci < centers.size(); ++ci) {
    if (stop && stop->load()) {
      rep.completed = false;
      break;
    }
    const Rational& a = centers[ci];
    const WeightExpansion w = weight_expansion(a);
    const std::size_t begin = ci == first_center ? first_pair : 0;
    const std::size_t count = dp.pairs.size() - begin;
    std::vector<detail::ItemResult> results(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) {
        auto [d, e] = dp.pairs[begin + k];
        results[k] = detail::run_item(a, w, d, e, cfg, &cache);
      }
    };
    if (jobs == 1 || count < 2) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(jobs, count); ++t) pool.emplace_back(worker);
    }
    for (auto& r : results) {
      rep.classes_generated += r.generated;
      rep.obstructive_candidates += r.obstructive;
      rep.non_exceptional_obstructive += r.non_exceptional;
      for (auto& f : r.found) rep.obstructive_found.push_back(std::move(f));
    }
    rep.pairs_checked += count;
    rep.centers_checked.push_back(a);
    if (!dp.pairs.empty()) rep.cursor = SearchCursor{a, dp.pairs.back().first, dp.pairs.back().second};
    if (progress) {
      SearchProgress p;
      p.centers_done = ci + 1;
      p.centers_total = centers.size();
      p.center = a;
      p.pairs_checked = rep.pairs_checked;
      p.classes_generated = rep.classes_generated;
      p.cursor = rep.cursor;
      progress(p);
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace capcalc
