#include "capcalc/classes.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace capcalc;

namespace {

ClassP2 P2(std::int64_t d, Tail t) { return ClassP2{d, std::move(t)}; }

Tail rep(std::int64_t v, std::size_t n) { return Tail(n, v); }

Tail cat(std::initializer_list<Tail> parts) {
  Tail out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TEST(Parse, ClassAndTailForms) {
  EXPECT_EQ(parse_class("10,6;4^7,3"), make_S(2));
  EXPECT_EQ(parse_class("15, 10; 7, 6^7"), make_T(2));
  EXPECT_EQ(to_string(make_S(2)), "(10,6;4^7,3)");
  EXPECT_EQ(parse_tail(""), Tail{});
  EXPECT_THROW(parse_class("10,6"), std::invalid_argument);
  EXPECT_THROW(parse_class("10;4"), std::invalid_argument);
  EXPECT_THROW(parse_tail("1,x"), std::invalid_argument);
  EXPECT_THROW(parse_tail("1^-2"), std::invalid_argument);
}

TEST(Families, LiteralClasses) {
  EXPECT_EQ(make_S(2), (ClassSxS{10, 6, cat({rep(4, 7), {3}})}));
  EXPECT_EQ(make_T(2), (ClassSxS{15, 10, cat({{7}, rep(6, 7)})}));
  EXPECT_EQ(make_T(1), (ClassSxS{6, 3, cat({{3}, rep(2, 7)})}));
  EXPECT_EQ(make_S(1), (ClassSxS{3, 1, cat({rep(1, 7), {0}})}));
  EXPECT_THROW(make_S(0), std::invalid_argument);
  EXPECT_THROW(make_T(-1), std::invalid_argument);
}

TEST(Cremona, FixedPoint) { EXPECT_EQ(cremona(P2(3, {1, 1, 1})), P2(3, {1, 1, 1})); }

TEST(Cremona, InductionStepAtKTwo) {
  ClassP2 c = ordered(cremona(P2(12, cat({{6}, rep(4, 6), {3, 2}}))));
  EXPECT_EQ(c, P2(10, cat({rep(4, 5), {3}, rep(2, 3)})));
}

TEST(Cremona, PadsShortTails) { EXPECT_EQ(cremona(P2(1, {1})), P2(1, {1, 0, 0})); }

TEST(Defect, Examples) {
  EXPECT_EQ(defect(P2(27, cat({{12}, rep(9, 6), {8, 6}}))), -3);
  EXPECT_EQ(defect(P2(0, {-1, 0, 0})), 1);
  EXPECT_EQ(defect(P2(10, cat({rep(4, 5), {3}, rep(2, 3)}))), -2);
}

TEST(ToP2, Examples) {
  EXPECT_EQ(to_p2(make_S(1)), P2(3, cat({{2, 0}, rep(1, 6), {0}})));
  EXPECT_EQ(ordered(to_p2(make_S(1))), P2(3, cat({{2}, rep(1, 6), {0, 0}})));
  EXPECT_EQ(to_p2(ClassSxS{0, 1, {1}}), P2(0, {-1, 0}));
  EXPECT_EQ(to_p2(make_T(1)), P2(6, cat({{3, 0}, rep(2, 7)})));
  // S_k maps to (3k^2; k^2+k, (k^2)^6, k^2-1, k^2-k) after ordering
  for (std::int64_t k = 2; k <= 6; ++k) {
    const std::int64_t k2 = k * k;
    EXPECT_EQ(ordered(to_p2(make_S(k))), P2(3 * k2, cat({{k2 + k}, rep(k2, 6), {k2 - 1, k2 - k}})));
  }
}

TEST(Diophantine, Examples) {
  EXPECT_TRUE(diophantine_check(make_S(3)));
  EXPECT_TRUE(diophantine_check(make_T(1)));
  EXPECT_FALSE(diophantine_check(ClassSxS{2, 1, {1, 1}}));
  EXPECT_TRUE(diophantine_check(P2(0, {-1})));
  EXPECT_TRUE(diophantine_check(P2(1, {1, 1})));
}

TEST(Exceptional, Examples) {
  EXPECT_EQ(is_exceptional(make_T(1)).verdict, Verdict::yes);
  EXPECT_EQ(is_exceptional(ClassSxS{2, 2, cat({{2}, rep(1, 5)})}).verdict, Verdict::yes);
  EXPECT_EQ(is_exceptional(ClassSxS{0, 1, {1}}).verdict, Verdict::yes);
  EXPECT_EQ(is_exceptional(ClassSxS{1, 0, {1}}).verdict, Verdict::yes);

  auto bad = is_exceptional(ClassSxS{2, 1, {1, 1}});
  EXPECT_EQ(bad.verdict, Verdict::no);
  EXPECT_FALSE(bad.diophantine);
}

TEST(Exceptional, DiophantineButNotExceptional) {
  // <4,2;3,1^8> solves both equations; its image is already reduced.
  ClassSxS c{4, 2, cat({{3}, rep(1, 8)})};
  ASSERT_TRUE(diophantine_check(c));
  auto r = is_exceptional(c);
  EXPECT_EQ(r.verdict, Verdict::no);
  EXPECT_EQ(r.moves, 0);
  EXPECT_EQ(r.trace.back(), P2(3, cat({rep(1, 9), {-1}})));
}

TEST(Exceptional, MoveLimitGivesInconclusive) {
  auto r = is_exceptional(make_S(5), 2);
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
  EXPECT_EQ(r.moves, 2);
}

TEST(Exceptional, FamiliesWithinLinearMoves) {
  for (std::int64_t k = 1; k <= 25; ++k) {
    for (const auto& c : {make_S(k), make_T(k)}) {
      ASSERT_TRUE(diophantine_check(c)) << to_string(c);
      auto r = is_exceptional(c);
      EXPECT_EQ(r.verdict, Verdict::yes) << to_string(c);
      EXPECT_LE(r.moves, 5 * k) << to_string(c) << " took " << r.moves;
    }
  }
}

TEST(Exceptional, TraceStartsAtOrderedImageAndEndsAtBase) {
  auto r = is_exceptional(make_S(2));
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front(), P2(12, cat({{6}, rep(4, 6), {3, 2}})));
  EXPECT_EQ(r.trace.back(), P2(0, {-1}));
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.moves) + 1);
}

TEST(Cremona, InvolutionAndInvariantsOnRandomVectors) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> val(-20, 40);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  for (int i = 0; i < 5000; ++i) {
    ClassP2 c{val(rng), {}};
    c.tail.resize(std::max<std::size_t>(3, len(rng)));
    for (auto& m : c.tail) m = val(rng);
    ClassP2 once = cremona(c);
    ASSERT_EQ(cremona(once), c);
    std::int64_t s1 = 0, s2 = 0, t1 = 0, t2 = 0;
    for (auto m : c.tail) s1 += m, s2 += m * m;
    for (auto m : once.tail) t1 += m, t2 += m * m;
    ASSERT_EQ(3 * c.degree - s1, 3 * once.degree - t1);
    ASSERT_EQ(c.degree * c.degree - s2, once.degree * once.degree - t2);
  }
}

TEST(ToP2, PreservesDiophantineCorrespondence) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::int64_t> val(0, 6);
  std::uniform_int_distribution<std::size_t> len(1, 9);
  int hits = 0;
  for (int i = 0; i < 200000; ++i) {
    ClassSxS c{val(rng), val(rng), {}};
    c.tail.resize(len(rng));
    for (auto& m : c.tail) m = val(rng) / 2;
    sort_descending(c.tail);
    bool sxs = diophantine_check(c);
    hits += sxs;
    ASSERT_EQ(sxs, diophantine_check(to_p2(c))) << to_string(c);
  }
  EXPECT_GT(hits, 0);
  for (std::int64_t k = 1; k <= 10; ++k) {
    EXPECT_TRUE(diophantine_check(to_p2(make_S(k))));
    EXPECT_TRUE(diophantine_check(to_p2(make_T(k))));
  }
}
