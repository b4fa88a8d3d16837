#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nilcrunch/scalar.hpp"

namespace nilcrunch {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/* Row backends. A backend owns the column count and provides the few dense
 * row operations the reducer needs. Columns are plain 0-based indices; what
 * a column means (which word, in which order) is the caller's business. */

struct Gf2Rows {
  using Ring = PrimeField;
  using Coeff = std::uint32_t;
  struct Row {
    std::vector<std::uint64_t> w;
  };

  std::size_t cols = 0;
  std::size_t words = 0;

  Gf2Rows() = default;
  explicit Gf2Rows(std::size_t cols_) : cols(cols_), words((cols_ + 63) / 64) {}

  Ring ring() const { return PrimeField(2); }
  std::uint64_t row_bytes() const { return words * 8; }

  Row zero() const { return Row{std::vector<std::uint64_t>(words, 0)}; }

  Coeff at(const Row& r, std::size_t c) const {
    return (r.w[c >> 6] >> (c & 63)) & 1u;
  }
  void add_term(Row& r, std::size_t c, Coeff v) const {
    if (v & 1u) r.w[c >> 6] ^= std::uint64_t(1) << (c & 63);
  }
  bool is_zero(const Row& r) const {
    for (auto x : r.w)
      if (x) return false;
    return true;
  }
  std::size_t lead(const Row& r, std::size_t from_col = 0) const {
    std::size_t i = from_col >> 6;
    if (i >= words) return npos;
    std::uint64_t x = r.w[i] & (~std::uint64_t(0) << (from_col & 63));
    for (;;) {
      if (x) {
        std::size_t c = (i << 6) + std::countr_zero(x);
        return c < cols ? c : npos;
      }
      if (++i == words) return npos;
      x = r.w[i];
    }
  }
  std::size_t nnz(const Row& r) const {
    std::size_t n = 0;
    for (auto x : r.w) n += std::popcount(x);
    return n;
  }
  // v -= v[c] * pivot, assuming v[c] != 0, pivot[c] == 1 and pivot is zero
  // left of c (it is a stored reduced row, c its leading column)
  void eliminate(Row& v, std::size_t c, const Row& pivot) const {
    const std::uint64_t* s = pivot.w.data();
    std::uint64_t* d = v.w.data();
    for (std::size_t i = c >> 6; i < words; ++i) d[i] ^= s[i];
  }
  void normalize(Row&, std::size_t) const {}
  template <class F>
  void for_each(const Row& r, F f) const {
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t x = r.w[i];
      while (x) {
        std::size_t c = (i << 6) + std::countr_zero(x);
        f(c, Coeff(1));
        x &= x - 1;
      }
    }
  }
};

struct ByteRows {
  using Ring = PrimeField;
  using Coeff = std::uint32_t;
  struct Row {
    std::vector<std::uint8_t> v;
  };

  PrimeField fp;
  std::size_t cols = 0;

  ByteRows() = default;
  ByteRows(PrimeField f, std::size_t cols_) : fp(f), cols(cols_) {}

  Ring ring() const { return fp; }
  std::uint64_t row_bytes() const { return cols; }

  Row zero() const { return Row{std::vector<std::uint8_t>(cols, 0)}; }

  Coeff at(const Row& r, std::size_t c) const { return r.v[c]; }
  void add_term(Row& r, std::size_t c, Coeff x) const {
    r.v[c] = static_cast<std::uint8_t>(fp.add(r.v[c], x % fp.p));
  }
  bool is_zero(const Row& r) const {
    for (auto x : r.v)
      if (x) return false;
    return true;
  }
  std::size_t lead(const Row& r, std::size_t from_col = 0) const {
    for (std::size_t c = from_col; c < cols; ++c)
      if (r.v[c]) return c;
    return npos;
  }
  std::size_t nnz(const Row& r) const {
    std::size_t n = 0;
    for (auto x : r.v) n += x != 0;
    return n;
  }
  void eliminate(Row& v, std::size_t c, const Row& pivot) const {
    const std::uint32_t m = fp.p - v.v[c];  // v += m * pivot
    const std::uint8_t* s = pivot.v.data();
    std::uint8_t* d = v.v.data();
    for (std::size_t i = c; i < cols; ++i)
      d[i] = static_cast<std::uint8_t>((d[i] + m * s[i]) % fp.p);
  }
  void normalize(Row& r, std::size_t c) const {
    const std::uint32_t m = fp.inv(r.v[c]);
    if (m == 1) return;
    for (auto& x : r.v) x = static_cast<std::uint8_t>(x * m % fp.p);
  }
  template <class F>
  void for_each(const Row& r, F f) const {
    for (std::size_t c = 0; c < cols; ++c)
      if (r.v[c]) f(c, Coeff(r.v[c]));
  }
};

struct RatRows {
  using Ring = RationalRing;
  using Coeff = BigRat;
  struct Row {
    std::vector<BigRat> v;
  };

  std::size_t cols = 0;

  RatRows() = default;
  explicit RatRows(std::size_t cols_) : cols(cols_) {}

  Ring ring() const { return RationalRing{}; }
  // accounting only; a BigRat is heap-backed, this is the fixed footprint
  std::uint64_t row_bytes() const { return cols * sizeof(BigRat); }

  Row zero() const { return Row{std::vector<BigRat>(cols)}; }

  const Coeff& at(const Row& r, std::size_t c) const { return r.v[c]; }
  void add_term(Row& r, std::size_t c, const Coeff& x) const { r.v[c] += x; }
  bool is_zero(const Row& r) const {
    for (const auto& x : r.v)
      if (x != 0) return false;
    return true;
  }
  std::size_t lead(const Row& r, std::size_t from_col = 0) const {
    for (std::size_t c = from_col; c < cols; ++c)
      if (r.v[c] != 0) return c;
    return npos;
  }
  std::size_t nnz(const Row& r) const {
    std::size_t n = 0;
    for (const auto& x : r.v) n += x != 0;
    return n;
  }
  void eliminate(Row& v, std::size_t c, const Row& pivot) const {
    const BigRat m = v.v[c];
    for (std::size_t i = c; i < cols; ++i)
      if (pivot.v[i] != 0) v.v[i] -= m * pivot.v[i];
  }
  void normalize(Row& r, std::size_t c) const {
    const BigRat m = r.v[c];
    if (m == 1) return;
    for (auto& x : r.v)
      if (x != 0) x /= m;
  }
  template <class F>
  void for_each(const Row& r, F f) const {
    for (std::size_t c = 0; c < cols; ++c)
      if (r.v[c] != 0) f(c, r.v[c]);
  }
};

/* Incremental row space in reduced row-echelon form.
 *
 * Invariants, maintained by every insert:
 *   - each stored row has coefficient one at its pivot column;
 *   - a pivot column is nonzero in no other stored row;
 *   - pivot columns are pairwise distinct.
 * The reduced basis of a span is unique, so the final state does not depend
 * on insertion order; rows_by_pivot() is the canonical presentation. */
template <class P>
class RowSpace {
 public:
  using Row = typename P::Row;

  RowSpace() = default;
  explicit RowSpace(P pol)
      : pol_(std::move(pol)), pivot_row_(pol_.cols, -1) {}

  const P& pol() const { return pol_; }
  std::size_t cols() const { return pol_.cols; }
  std::size_t rank() const { return rows_.size(); }
  std::uint64_t row_bytes() const { return rows_.size() * pol_.row_bytes(); }

  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t pivot_col(std::size_t i) const { return pivot_col_[i]; }
  std::int64_t pivot_row(std::size_t col) const { return pivot_row_[col]; }

  // Reduces v in place against the basis; returns the leading column of the
  // residual, or npos when v lies in the span.
  std::size_t reduce(Row& v) const {
    std::size_t c = pol_.lead(v, 0);
    while (c != npos) {
      std::int64_t r = pivot_row_[c];
      if (r < 0) return c;
      pol_.eliminate(v, c, rows_[static_cast<std::size_t>(r)]);
      c = pol_.lead(v, c + 1);
    }
    return npos;
  }

  bool member(const Row& v) const {
    Row t = v;
    return reduce(t) == npos;
  }

  // Returns the new row index, or -1 when v is dependent on the basis.
  std::int64_t insert(Row v) {
    // full reduction: the first free column becomes the pivot, and entries on
    // later pivot columns are still eliminated, so stored rows are zero on
    // every pivot column but their own
    std::size_t c = pol_.lead(v, 0);
    std::size_t piv = npos;
    while (c != npos) {
      std::int64_t r = pivot_row_[c];
      if (r >= 0)
        pol_.eliminate(v, c, rows_[static_cast<std::size_t>(r)]);
      else if (piv == npos)
        piv = c;
      c = pol_.lead(v, c + 1);
    }
    c = piv;
    if (c == npos) return -1;
    pol_.normalize(v, c);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!pol_.ring().is_zero(pol_.at(rows_[i], c)))
        pol_.eliminate(rows_[i], c, v);
    const std::int64_t idx = static_cast<std::int64_t>(rows_.size());
    rows_.push_back(std::move(v));
    pivot_col_.push_back(c);
    pivot_row_[c] = idx;
    return idx;
  }

  // Row indices ordered by pivot column: the canonical presentation.
  std::vector<std::uint32_t> rows_by_pivot() const {
    std::vector<std::uint32_t> idx(rows_.size());
    std::size_t k = 0;
    for (std::size_t c = 0; c < pivot_row_.size(); ++c)
      if (pivot_row_[c] >= 0) idx[k++] = static_cast<std::uint32_t>(pivot_row_[c]);
    return idx;
  }

 private:
  P pol_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivot_col_;
  std::vector<std::int64_t> pivot_row_;
};

template <class P>
struct RrefResult {
  RowSpace<P> space;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // ascending column order
};

template <class P>
RrefResult<P> rref(P pol, const std::vector<typename P::Row>& rows) {
  RrefResult<P> out{RowSpace<P>(std::move(pol)), 0, {}};
  for (const auto& r : rows) out.space.insert(r);
  out.rank = out.space.rank();
  for (auto i : out.space.rows_by_pivot())
    out.pivots.push_back(out.space.pivot_col(i));
  return out;
}

// Row reduction needs division; refuse to do it silently over the integers.
inline void rref(const IntegerRing&, const std::vector<std::vector<BigInt>>&) {
  throw std::invalid_argument(
      "row reduction over the integers is not supported; use rationals");
}

template <class P>
void merge(RowSpace<P>& dst, const RowSpace<P>& src) {
  for (std::size_t i = 0; i < src.rank(); ++i) dst.insert(src.row(i));
}

template <class P>
bool same_space(const RowSpace<P>& a, const RowSpace<P>& b) {
  if (a.cols() != b.cols() || a.rank() != b.rank()) return false;
  const auto ia = a.rows_by_pivot(), ib = b.rows_by_pivot();
  for (std::size_t k = 0; k < ia.size(); ++k) {
    if (a.pivot_col(ia[k]) != b.pivot_col(ib[k])) return false;
    bool eq = true;
    a.pol().for_each(a.row(ia[k]), [&](std::size_t c, auto v) {
      if (eq && b.pol().at(b.row(ib[k]), c) != v) eq = false;
    });
    if (!eq) return false;
  }
  return true;
}

}  // namespace nilcrunch
