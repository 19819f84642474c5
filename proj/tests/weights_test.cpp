#include "capcalc/weights.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace capcalc;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

// Continued fraction digits of p/q by floor/reciprocal, independent of the
// Euclid loop in weight_expansion.
std::vector<std::size_t> continued_fraction(Rational x) {
  std::vector<std::size_t> out;
  for (;;) {
    BigInt f = floor_of(x);
    out.push_back(f.convert_to<std::size_t>());
    Rational frac = x - Rational(f);
    if (frac == 0) break;
    x = 1 / frac;
  }
  return out;
}

}  // namespace

TEST(Weights, TwentyFiveNinths) {
  WeightExpansion w = weight_expansion(R(25, 9));
  std::vector<Rational> expected{1, 1, R(7, 9), R(2, 9), R(2, 9), R(2, 9), R(1, 9), R(1, 9)};
  EXPECT_EQ(w.entries(), expected);
  EXPECT_EQ(w.length(), 8u);
  EXPECT_EQ(w.multiplicities(), (std::vector<std::size_t>{2, 1, 3, 2}));
  EXPECT_EQ(w.last_denominator(), 9);
}

TEST(Weights, SeventeenHalves) {
  WeightExpansion w = weight_expansion(R(17, 2));
  ASSERT_EQ(w.block_count(), 2u);
  EXPECT_EQ(w.blocks()[0], (WeightBlock{1, 8}));
  EXPECT_EQ(w.blocks()[1], (WeightBlock{R(1, 2), 2}));
  EXPECT_EQ(weight_length(R(17, 2)), 10u);
}

TEST(Weights, IntegersAreAllOnes) {
  WeightExpansion w = weight_expansion(8);
  EXPECT_EQ(w.entries(), std::vector<Rational>(8, Rational(1)));
  EXPECT_EQ(weight_expansion(1).length(), 1u);
}

TEST(Weights, RejectsBelowOne) {
  EXPECT_THROW(weight_expansion(R(1, 2)), std::domain_error);
  EXPECT_THROW(weight_expansion(0), std::domain_error);
}

TEST(Weights, Rendering) { EXPECT_EQ(weight_expansion(R(17, 2)).str(), "1^x8,1/2^x2"); }

TEST(Weights, PropertiesOnRandomRationals) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> den(1, 400);
  for (int i = 0; i < 3000; ++i) {
    std::int64_t q = den(rng);
    std::uniform_int_distribution<std::int64_t> num(q, 20 * q);
    Rational a = R(num(rng), q);
    WeightExpansion w = weight_expansion(a);
    auto e = w.entries();
    Rational sum_sq = 0;
    for (const auto& x : e) sum_sq += x * x;
    ASSERT_EQ(sum_sq, a) << to_string(a);
    ASSERT_TRUE(std::is_sorted(e.begin(), e.end(), std::greater<>()));
    ASSERT_EQ(e.front(), 1);
    ASSERT_EQ(e.back(), Rational(1) / Rational(denominator_of(a)));
    ASSERT_EQ(w.multiplicities(), continued_fraction(a)) << to_string(a);
    // w_{i+1} = w_{i-1} - l_i w_i across blocks, starting from w_{-1} = a
    Rational prev = a;
    for (std::size_t k = 0; k < w.blocks().size(); ++k) {
      const auto& b = w.blocks()[k];
      Rational next = prev - b.value * b.multiplicity;
      if (k + 1 < w.blocks().size())
        ASSERT_EQ(next, w.blocks()[k + 1].value);
      else
        ASSERT_EQ(next, 0);
      prev = b.value;
    }
  }
}
