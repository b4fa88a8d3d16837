#include <gtest/gtest.h>

#include <algorithm>

#include "nilcrunch/relspace.hpp"

using namespace nilcrunch;

namespace {

NilpotencyResult scan(std::uint32_t n, std::uint32_t d, const char* field,
                      std::uint32_t dmax = 0, unsigned jobs = 1) {
  const FieldSpec f = FieldSpec::parse(field);
  BuildOptions opts;
  opts.jobs = jobs;
  return nilpotency_degree(n, d, f, dmax ? dmax : default_dmax(n, d, f),
                           opts);
}

AnyRelSpace engine(std::uint32_t n, std::uint32_t d, const char* field,
                   std::uint32_t D, unsigned jobs = 1) {
  const FieldSpec f = FieldSpec::parse(field);
  BuildOptions opts;
  opts.jobs = jobs;
  AnyRelSpace s = make_relation_space(n, d, f, D, scheme_for(f),
                                      SeedMode::generators, opts);
  build(s);
  return s;
}

std::vector<std::uint64_t> dims_of(const NilpotencyResult& r) {
  std::vector<std::uint64_t> out;
  const auto dims = quotient_dims(*r.space, r.degree - 1);
  out.assign(dims.begin() + 1, dims.end());
  return out;
}

FreePoly<PrimeField> letter(const PrimeField& f, const WordCodec& c,
                            std::uint32_t i) {
  return FreePoly<PrimeField>::word(f, c.of_letters({i}));
}

}  // namespace

TEST(Nilpotency, SquareZeroCharTwoGrowsWithAlphabet) {
  for (std::uint32_t d = 2; d <= 4; ++d) {
    auto r = scan(2, d, "q2");
    ASSERT_TRUE(r.reached);
    EXPECT_EQ(r.degree, d + 1);
    EXPECT_TRUE(r.boundary_observed);
    // binomial filtration: dimension at degree k counts k-subsets
    const auto dims = dims_of(r);
    for (std::uint32_t k = 1; k < r.degree; ++k) {
      std::uint64_t binom = 1;
      for (std::uint32_t i = 0; i < k; ++i)
        binom = binom * (d - i) / (i + 1);
      EXPECT_EQ(dims[k - 1], binom);
    }
  }
}

TEST(Nilpotency, SquareZeroOverTheRationals) {
  auto r = scan(2, 2, "inf0");
  ASSERT_TRUE(r.reached);
  EXPECT_EQ(r.degree, 3u);
  EXPECT_EQ(dims_of(r), (std::vector<std::uint64_t>{2, 1}));
}

TEST(Nilpotency, CubeZeroTwoLettersAcrossFields) {
  auto q2 = scan(3, 2, "q2");
  ASSERT_TRUE(q2.reached);
  EXPECT_EQ(q2.degree, 6u);
  EXPECT_EQ(dims_of(q2), (std::vector<std::uint64_t>{2, 4, 5, 4, 2}));

  auto q3 = scan(3, 2, "q3");
  ASSERT_TRUE(q3.reached);
  EXPECT_EQ(q3.degree, 7u);
  EXPECT_EQ(dims_of(q3), (std::vector<std::uint64_t>{2, 4, 4, 4, 2, 1}));

  auto i2 = scan(3, 2, "inf2");
  ASSERT_TRUE(i2.reached);
  EXPECT_EQ(i2.degree, 6u);
  EXPECT_EQ(dims_of(i2), (std::vector<std::uint64_t>{2, 4, 4, 4, 2}));

  auto i3 = scan(3, 2, "inf3");
  ASSERT_TRUE(i3.reached);
  EXPECT_EQ(i3.degree, 7u);
  EXPECT_EQ(dims_of(i3), dims_of(q3));
}

TEST(Nilpotency, PrimePowerFieldUsesItsCharacteristic) {
  auto q4 = scan(2, 2, "q4");
  ASSERT_TRUE(q4.reached);
  EXPECT_EQ(q4.degree, 3u);
}

TEST(Nilpotency, EveryDegreeBelowTheBoundarySurvives) {
  auto r = scan(3, 2, "q2");
  const auto dims = dims_of(r);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) EXPECT_GT(dims[k], 0u);
}

TEST(Nilpotency, ProbeLogPinsTheBoundary) {
  auto r = scan(3, 2, "q2");
  bool pass_at = false, fail_below = false;
  for (const auto& [deg, full] : r.probes) {
    if (deg == r.degree && full) pass_at = true;
    if (deg == r.degree - 1 && !full) fail_below = true;
  }
  EXPECT_TRUE(pass_at);
  EXPECT_TRUE(fail_below);
}

TEST(Nilpotency, DegreeCapReportsUnreached) {
  auto r = scan(3, 2, "q2", /*dmax=*/4);
  EXPECT_FALSE(r.reached);
  EXPECT_FALSE(r.space.has_value());
}

TEST(RelationSpace, BasisWordsAreTheNonPivotColumns) {
  auto s = engine(3, 2, "q2", 6);
  const WordCodec c(2);
  const auto basis = basis_words(s, 5);
  const auto dims = quotient_dims(s, 5);
  std::uint64_t expect = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) expect += dims[k];
  EXPECT_EQ(basis.size(), expect);
  EXPECT_TRUE(std::binary_search(basis.begin(), basis.end(),
                                 c.parse("x1*x2*x1")));

  auto i2 = engine(3, 2, "inf2", 6);
  const auto ibasis = basis_words(i2, 5);
  EXPECT_TRUE(std::binary_search(ibasis.begin(), ibasis.end(),
                                 c.parse("x1*x2*x1")));
}

TEST(RelationSpace, SlotSumMembership) {
  auto s = engine(3, 2, "q2", 6);
  const PrimeField f2(2);
  const WordCodec c(2);
  auto x = letter(f2, c, 1), y = letter(f2, c, 2);
  std::vector<FreePoly<PrimeField>> xy = {x, y}, yx = {y, x};
  auto a = partial_linearization(f2, c, {2, 1}, xy);
  auto b = partial_linearization(f2, c, {2, 1}, yx);
  EXPECT_TRUE(contains(s, a.plus(b)));   // the symmetrized sum is a relation
  EXPECT_FALSE(contains(s, a));          // one slot sum alone is not
  EXPECT_TRUE(contains(s, x.pow(c, 3))); // a cube certainly is
}

TEST(RelationSpace, LeftMultipleOfARelationStaysInside) {
  auto s = engine(3, 3, "q2", 6);
  const PrimeField f2(2);
  const WordCodec c(3);
  auto x1 = letter(f2, c, 1), x2 = letter(f2, c, 2), x3 = letter(f2, c, 3);
  std::vector<FreePoly<PrimeField>> ab = {x2, x3};
  auto lhs = x1.mul(c, partial_linearization(f2, c, {2, 1}, ab));
  std::vector<FreePoly<PrimeField>> ab2 = {x2, x1.mul(c, x3)};
  auto rhs = partial_linearization(f2, c, {2, 1}, ab2);
  EXPECT_TRUE(contains(s, lhs.minus(rhs)));
}

TEST(RelationSpace, ContainsValidatesItsInput) {
  auto s = engine(2, 2, "q2", 3);
  const PrimeField f3(3);
  const PrimeField f2(2);
  const WordCodec c(2);
  EXPECT_THROW((void)contains(s, letter(f3, c, 1)), std::invalid_argument);
  auto deep = FreePoly<PrimeField>::word(f2, c.of_letters({1, 1, 1, 1}));
  EXPECT_THROW((void)contains(s, deep), std::invalid_argument);
  EXPECT_TRUE(contains(s, FreePoly<PrimeField>(f2)));  // zero is everywhere
}

TEST(RelationSpace, ParallelSeedingIsDeterministic) {
  auto a = engine(3, 2, "q2", 6, /*jobs=*/1);
  auto b = engine(3, 2, "q2", 6, /*jobs=*/8);
  EXPECT_EQ(flatten(a), flatten(b));
  auto c = engine(3, 2, "q3", 7, /*jobs=*/1);
  auto d = engine(3, 2, "q3", 7, /*jobs=*/8);
  EXPECT_EQ(flatten(c), flatten(d));
}

TEST(RelationSpace, CoordinateBudgetIsEnforced) {
  const FieldSpec f = FieldSpec::finite(2);
  BuildOptions opts;
  opts.budget.max_coords = 10;  // 2 + 4 + 8 words already exceed this
  EXPECT_THROW(make_relation_space(3, 2, f, 3, scheme_for(f),
                                   SeedMode::generators, opts),
               BudgetExceeded);
}

TEST(RelationSpace, ReferenceConstructionAgreesWithGenerators) {
  struct Case {
    std::uint32_t n, d, q, D, k;
  };
  for (const Case& c : {Case{2, 2, 2, 4, 2}, Case{3, 2, 2, 6, 2}}) {
    auto reference = oracle_relation_space(c.n, c.d, c.q, c.D, c.k);
    BuildOptions opts;
    opts.max_arg_degree = c.k;
    const FieldSpec f = FieldSpec::finite(c.q);
    AnyRelSpace direct = make_relation_space(
        c.n, c.d, f, c.D, scheme_for(f), SeedMode::generators, opts);
    build(direct);
    EXPECT_EQ(flatten(reference), flatten(direct))
        << "n=" << c.n << " d=" << c.d << " q=" << c.q;
  }
}

TEST(RelationSpace, FlattenIsCanonicallyOrdered) {
  auto s = engine(2, 2, "q2", 3);
  const auto flat = flatten(s);
  EXPECT_EQ(flat.size(), total_rank(s));
  for (std::size_t i = 1; i < flat.size(); ++i)
    EXPECT_LT(flat[i - 1].first, flat[i].first);  // sorted by pivot word
}

TEST(RelationSpace, RationalEngineMatchesLargePrime) {
  // characteristic zero and a prime far above n see the same filtration
  auto inf0 = scan(2, 2, "inf0");
  auto inf5 = scan(2, 2, "inf5");
  ASSERT_TRUE(inf0.reached);
  ASSERT_TRUE(inf5.reached);
  EXPECT_EQ(inf0.degree, inf5.degree);
  EXPECT_EQ(dims_of(inf0), dims_of(inf5));
}
