#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "nilcrunch/rowspace.hpp"

using namespace nilcrunch;

namespace {

Gf2Rows::Row bits(const Gf2Rows& pol, std::initializer_list<std::size_t> cs) {
  auto r = pol.zero();
  for (auto c : cs) pol.add_term(r, c, 1);
  return r;
}

// canonical dump: (pivot column, set columns) per row in pivot order
std::vector<std::pair<std::size_t, std::vector<std::size_t>>> dump(
    const RowSpace<Gf2Rows>& s) {
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
  for (auto i : s.rows_by_pivot()) {
    std::vector<std::size_t> cols;
    s.pol().for_each(s.row(i), [&](std::size_t c, auto) { cols.push_back(c); });
    out.emplace_back(s.pivot_col(i), cols);
  }
  return out;
}

}  // namespace

TEST(RowSpace, CanonicalBasisMod2) {
  Gf2Rows pol(3);
  RowSpace<Gf2Rows> s(pol);
  EXPECT_GE(s.insert(bits(pol, {0, 1})), 0);
  EXPECT_GE(s.insert(bits(pol, {1, 2})), 0);
  EXPECT_EQ(s.insert(bits(pol, {0, 2})), -1);  // sum of the first two
  EXPECT_EQ(s.rank(), 2u);
  // reduced basis: pivot 0 row {0,2}, pivot 1 row {1,2}
  auto d = dump(s);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].first, 0u);
  EXPECT_EQ(d[0].second, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(d[1].first, 1u);
  EXPECT_EQ(d[1].second, (std::vector<std::size_t>{1, 2}));
}

// the inserted row must be eliminated against pivots that lie to the right
// of its own pivot, not only those at its leading column
TEST(RowSpace, InsertReducesTheWholeRow) {
  Gf2Rows pol(3);
  RowSpace<Gf2Rows> s(pol);
  ASSERT_GE(s.insert(bits(pol, {1, 2})), 0);  // pivot 1
  ASSERT_GE(s.insert(bits(pol, {0, 1})), 0);  // pivot 0; tail hits column 1
  for (std::size_t i = 0; i < s.rank(); ++i)
    for (std::size_t j = 0; j < s.rank(); ++j)
      if (i != j)
        EXPECT_EQ(pol.at(s.row(i), s.pivot_col(j)), 0u)
            << "row " << i << " not reduced at pivot of row " << j;
  // the stored second row is {0,2}: 110 minus the pivot-1 row
  auto d = dump(s);
  EXPECT_EQ(d[0].second, (std::vector<std::size_t>{0, 2}));
}

TEST(RowSpace, MemberAndReduce) {
  Gf2Rows pol(4);
  RowSpace<Gf2Rows> s(pol);
  s.insert(bits(pol, {0, 1}));
  s.insert(bits(pol, {2, 3}));
  EXPECT_TRUE(s.member(bits(pol, {0, 1, 2, 3})));
  EXPECT_FALSE(s.member(bits(pol, {1, 2})));
  auto v = bits(pol, {0, 1, 2});
  // reduction strips {0,1} and then {2,3}, leaving a residual led by column 3
  EXPECT_EQ(s.reduce(v), 3u);
}

TEST(RowSpace, InsertionOrderIsIrrelevant) {
  std::mt19937 rng(20240817);
  Gf2Rows pol(24);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Gf2Rows::Row> rows;
    for (int i = 0; i < 16; ++i) {
      auto r = pol.zero();
      for (std::size_t c = 0; c < 24; ++c) pol.add_term(r, c, rng() & 1);
      rows.push_back(r);
    }
    RowSpace<Gf2Rows> a(pol);
    for (const auto& r : rows) a.insert(r);
    std::shuffle(rows.begin(), rows.end(), rng);
    RowSpace<Gf2Rows> b(pol);
    for (const auto& r : rows) b.insert(r);
    EXPECT_TRUE(same_space(a, b));
    EXPECT_EQ(dump(a), dump(b));
  }
}

TEST(RowSpace, PackedAndByteAgreeMod2) {
  std::mt19937 rng(7);
  PrimeField f2(2);
  Gf2Rows gp(50);
  ByteRows bp(f2, 50);
  for (int trial = 0; trial < 5; ++trial) {
    RowSpace<Gf2Rows> gs(gp);
    RowSpace<ByteRows> bs(bp);
    for (int i = 0; i < 50; ++i) {
      auto gr = gp.zero();
      auto br = bp.zero();
      for (std::size_t c = 0; c < 50; ++c) {
        std::uint32_t bit = rng() & 1;
        gp.add_term(gr, c, bit);
        bp.add_term(br, c, bit);
      }
      gs.insert(gr);
      bs.insert(br);
    }
    EXPECT_EQ(gs.rank(), bs.rank());
    const auto gi = gs.rows_by_pivot(), bi = bs.rows_by_pivot();
    for (std::size_t k = 0; k < gi.size(); ++k)
      EXPECT_EQ(gs.pivot_col(gi[k]), bs.pivot_col(bi[k]));
  }
}

TEST(RowSpace, MergeSpansTheUnion) {
  Gf2Rows pol(6);
  RowSpace<Gf2Rows> a(pol), b(pol), all(pol);
  std::vector<Gf2Rows::Row> rs = {bits(pol, {0, 1}), bits(pol, {1, 2}),
                                  bits(pol, {3, 4}), bits(pol, {4, 5})};
  a.insert(rs[0]);
  a.insert(rs[1]);
  b.insert(rs[2]);
  b.insert(rs[3]);
  for (const auto& r : rs) all.insert(r);
  merge(a, b);
  EXPECT_TRUE(same_space(a, all));
}

TEST(RowSpace, ByteRowsOddCharacteristic) {
  PrimeField f3(3);
  ByteRows pol(f3, 3);
  RowSpace<ByteRows> s(pol);
  auto r1 = pol.zero();
  pol.add_term(r1, 0, 2);
  pol.add_term(r1, 1, 1);
  ASSERT_GE(s.insert(r1), 0);
  // pivot coefficient is normalized to one: 2x+y becomes x+2y over F3
  EXPECT_EQ(pol.at(s.row(0), 0), 1u);
  EXPECT_EQ(pol.at(s.row(0), 1), 2u);
  auto r2 = pol.zero();
  pol.add_term(r2, 0, 1);
  pol.add_term(r2, 1, 2);
  EXPECT_EQ(s.insert(r2), -1);  // the same line
}
