#pragma once

// Weight expansions of rationals a >= 1: the decreasing sequence
// (1^l0, w1^l1, ..., wN^lN) with w_{i+1} = w_{i-1} - l_i w_i, whose
// multiplicities are the continued-fraction digits of a.

#include "capcalc/exactnum.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcalc {

struct WeightBlock {
  Rational value;
  std::size_t multiplicity = 0;

  friend bool operator==(const WeightBlock&, const WeightBlock&) = default;
};

class WeightExpansion {
 public:
  WeightExpansion() = default;
  WeightExpansion(Rational a, std::vector<WeightBlock> blocks, BigInt last_denominator)
      : a_(std::move(a)), blocks_(std::move(blocks)), last_denominator_(std::move(last_denominator)) {
    for (const auto& b : blocks_) length_ += b.multiplicity;
  }

  const Rational& a() const { return a_; }
  const std::vector<WeightBlock>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  /// Total number of weights M, counted with multiplicity.
  std::size_t length() const { return length_; }
  /// q for a = p/q in lowest terms; also the reciprocal of the smallest weight.
  const BigInt& last_denominator() const { return last_denominator_; }

  std::vector<std::size_t> multiplicities() const {
    std::vector<std::size_t> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(b.multiplicity);
    return out;
  }

  /// Flattened weights w_1 >= w_2 >= ... >= w_M.
  std::vector<Rational> entries() const {
    std::vector<Rational> out;
    out.reserve(length_);
    for (const auto& b : blocks_)
      for (std::size_t i = 0; i < b.multiplicity; ++i) out.push_back(b.value);
    return out;
  }

  /// "1^8,1/2^2" style rendering.
  std::string str() const {
    std::string s;
    for (const auto& b : blocks_) {
      if (!s.empty()) s += ",";
      s += to_string(b.value) + "^x" + std::to_string(b.multiplicity);
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const WeightExpansion& w) { return os << w.str(); }

 private:
  Rational a_;
  std::vector<WeightBlock> blocks_;
  BigInt last_denominator_ = 1;
  std::size_t length_ = 0;
};

/// Weight expansion of a >= 1, computed by the Euclidean algorithm on the
/// numerator and denominator of a.
inline WeightExpansion weight_expansion(const Rational& a) {
  if (a < 1) throw std::domain_error("weight expansion needs a >= 1, got " + to_string(a));
  const BigInt q = denominator_of(a);
  BigInt big = numerator_of(a);
  BigInt small = q;
  std::vector<WeightBlock> blocks;
  // all weights are integer multiples of 1/q
  while (small != 0) {
    BigInt k = big / small;
    BigInt r = big % small;
    blocks.push_back({Rational(small, q), k.convert_to<std::size_t>()});
    big = std::move(small);
    small = std::move(r);
  }
  return WeightExpansion(a, std::move(blocks), q);
}

/// l(a): number of weights in w(a), counted with multiplicity.
inline std::size_t weight_length(const Rational& a) { return weight_expansion(a).length(); }

}  // namespace capcalc
