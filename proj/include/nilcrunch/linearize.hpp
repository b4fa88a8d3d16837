#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilcrunch/field.hpp"
#include "nilcrunch/freepoly.hpp"

namespace nilcrunch {

using ExpVec = std::vector<std::uint32_t>;

inline std::uint32_t sum(const ExpVec& v) {
  std::uint32_t s = 0;
  for (auto x : v) s += x;
  return s;
}

inline bool is_ordered(const ExpVec& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] < v[i]) return false;
  return true;
}

inline void check_expvec(const ExpVec& v) {
  if (v.empty()) throw std::invalid_argument("empty exponent vector");
  for (auto x : v)
    if (x == 0)
      throw std::invalid_argument("exponent vectors must have positive entries");
}

/* Exponent vectors are graded modulo q-1 componentwise; within the class of
 * vectors congruent to delta with the same total, the lexicographically
 * largest one is the canonical representative. Greedy from the left: slot j
 * can always fall back to its minimal positive residue m_j, so stretching
 * the current slot as far as the remaining minima allow is feasible, and
 * maximizing leftmost entries first is exactly lex-maximality. */
inline ExpVec q_maximal(const ExpVec& delta, std::uint32_t q) {
  check_expvec(delta);
  if (q < 2) throw std::invalid_argument("field size must be at least 2");
  const std::uint32_t step = q - 1;
  const std::size_t r = delta.size();
  std::vector<std::uint32_t> m(r);
  std::uint32_t rest_min = 0;
  for (std::size_t j = 0; j < r; ++j) {
    m[j] = (delta[j] - 1) % step + 1;
    rest_min += m[j];
  }
  std::uint32_t n = sum(delta);
  ExpVec out(r);
  for (std::size_t j = 0; j < r; ++j) {
    rest_min -= m[j];
    const std::uint32_t room = n - rest_min;  // >= m[j] whenever delta is valid
    out[j] = m[j] + (room - m[j]) / step * step;
    n -= out[j];
  }
  return out;
}

// all theta with theta == nu (mod q-1) componentwise, positive entries and
// the same total; lex-descending, so the representative comes first
inline std::vector<ExpVec> congruence_class(const ExpVec& nu, std::uint32_t q) {
  check_expvec(nu);
  const std::uint32_t step = q - 1;
  const std::size_t r = nu.size();
  std::vector<std::uint32_t> m(r);
  for (std::size_t j = 0; j < r; ++j) m[j] = (nu[j] - 1) % step + 1;
  std::vector<ExpVec> out;
  ExpVec cur(r);
  auto rec = [&](auto&& self, std::size_t j, std::uint32_t rest) -> void {
    if (j + 1 == r) {
      if (rest >= 1 && (rest - m[j]) % step == 0 && rest >= m[j]) {
        cur[j] = rest;
        out.push_back(cur);
      }
      return;
    }
    std::uint32_t min_rest = 0;
    for (std::size_t k = j + 1; k < r; ++k) min_rest += m[k];
    for (std::uint32_t v = m[j]; v + min_rest <= rest; v += step) {
      cur[j] = v;
      self(self, j + 1, rest - v);
    }
  };
  rec(rec, 0, sum(nu));
  std::sort(out.begin(), out.end(),
            [](const ExpVec& a, const ExpVec& b) { return b < a; });
  return out;
}

// lex-descending, like every other exponent-vector listing here
inline std::vector<ExpVec> compositions_of(std::uint32_t n, std::uint32_t r) {
  if (r == 0 || r > n) return {};
  std::vector<ExpVec> out;
  ExpVec cur(r);
  auto rec = [&](auto&& self, std::uint32_t j, std::uint32_t rest) -> void {
    if (j + 1 == r) {
      cur[j] = rest;
      out.push_back(cur);
      return;
    }
    for (std::uint32_t v = rest - (r - j - 1); v >= 1; --v) {
      cur[j] = v;
      self(self, j + 1, rest - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

inline std::vector<ExpVec> partitions_of(std::uint32_t n) {
  std::vector<ExpVec> out;
  ExpVec cur;
  auto rec = [&](auto&& self, std::uint32_t rest, std::uint32_t max_part) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t v = std::min(rest, max_part); v >= 1; --v) {
      cur.push_back(v);
      self(self, rest - v, v);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

inline std::uint64_t multinomial(const ExpVec& theta) {
  // number of arrangements of sum(theta) slots with the given multiplicities
  std::uint64_t r = 1, k = 0;
  for (auto t : theta)
    for (std::uint32_t i = 1; i <= t; ++i) {
      ++k;
      r = r * k / i;  // binomial prefix products stay integral
    }
  return r;
}

/* Sum of all products arranging theta_1 copies of args[0], ..., theta_r
 * copies of args[r-1]: the coefficient of a_1^theta_1 ... a_r^theta_r in
 * (a_1 + ... + a_r)^n, n = |theta|. Words of degree above trunc are dropped
 * when trunc >= 0. */
template <class Ring>
FreePoly<Ring> partial_linearization(const Ring& ring, const WordCodec& codec,
                                     const ExpVec& theta,
                                     const std::vector<FreePoly<Ring>>& args,
                                     std::int64_t trunc = -1) {
  check_expvec(theta);
  if (theta.size() != args.size())
    throw std::invalid_argument("arity mismatch between exponents and arguments");
  std::vector<std::uint8_t> slots;
  for (std::size_t i = 0; i < theta.size(); ++i)
    slots.insert(slots.end(), theta[i], static_cast<std::uint8_t>(i));
  FreePoly<Ring> out(ring);
  do {
    FreePoly<Ring> prod = args[slots[0]];
    for (std::size_t k = 1; k < slots.size() && !prod.is_zero(); ++k)
      prod = prod.mul(codec, args[slots[k]], trunc);
    out.add(prod);
  } while (std::next_permutation(slots.begin(), slots.end()));
  return out;
}

// sum of the partial linearizations over the whole congruence class of delta
template <class Ring>
FreePoly<Ring> frobenius_linearization(const Ring& ring, const WordCodec& codec,
                                       const ExpVec& delta, std::uint32_t q,
                                       const std::vector<FreePoly<Ring>>& args,
                                       std::int64_t trunc = -1) {
  FreePoly<Ring> out(ring);
  for (const auto& theta : congruence_class(delta, q))
    out.add(partial_linearization(ring, codec, theta, args, trunc));
  return out;
}

// sum of the partial linearizations over every composition of n of arity r
template <class Ring>
FreePoly<Ring> full_sum(const Ring& ring, const WordCodec& codec,
                        std::uint32_t r, std::uint32_t n,
                        const std::vector<FreePoly<Ring>>& args,
                        std::int64_t trunc = -1) {
  if (args.size() != r) throw std::invalid_argument("arity mismatch");
  FreePoly<Ring> out(ring);
  for (const auto& theta : compositions_of(n, r))
    out.add(partial_linearization(ring, codec, theta, args, trunc));
  return out;
}

/* One generator of the substitution family: the sum of the partial
 * linearizations named in parts. For a field with q >= n elements (and in
 * the infinite mode) each generator is a single L_theta; for small fields a
 * generator sums a whole congruence class. Slots within one group are
 * interchangeable: permuting arguments inside a group fixes the generator. */
struct Generator {
  ExpVec label;                          // canonical, weakly decreasing
  std::vector<ExpVec> parts;             // lex-descending constituent list
  std::uint32_t n = 0;
  std::uint32_t arity = 0;
  std::vector<std::uint32_t> slot_group;
  bool p_style = false;                  // print as P_r (two-element fields)

  std::string text() const {
    if (p_style) return "P" + std::to_string(arity);
    std::string s;
    for (const auto& th : parts) {
      if (!s.empty()) s += "+";
      s += "L(";
      for (std::size_t i = 0; i < th.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(th[i]);
      }
      s += ")";
    }
    return s;
  }
};

namespace detail {

inline bool swap_fixes_parts(const std::vector<ExpVec>& parts, std::size_t i) {
  std::vector<ExpVec> swapped = parts;
  for (auto& th : swapped) std::swap(th[i], th[i + 1]);
  std::sort(swapped.begin(), swapped.end());
  std::vector<ExpVec> sorted = parts;
  std::sort(sorted.begin(), sorted.end());
  return swapped == sorted;
}

inline std::vector<std::uint32_t> slot_groups(const std::vector<ExpVec>& parts,
                                              std::uint32_t arity) {
  std::vector<std::uint32_t> g(arity, 0);
  for (std::size_t i = 0; i + 1 < arity; ++i)
    g[i + 1] = swap_fixes_parts(parts, i) ? g[i] : g[i] + 1;
  return g;
}

}  // namespace detail

/* The generator family for x^n over the given field: every x^n substitution
 * instance truncates into the span of these (with word arguments and word
 * multipliers on both sides).
 *   - infinite field: all L_theta with theta weakly decreasing;
 *   - q >= n elements: the same list;
 *   - q < n: one congruence-class sum per class orbit, labelled by the
 *     lex-largest vector reachable from any slot permutation of the class.
 * Slot permutations of a class give the same generator up to permuting
 * arguments, so only the canonical orbit label is kept. */
inline std::vector<Generator> generator_set(std::uint32_t n,
                                            const FieldSpec& field) {
  if (n < 1) throw std::invalid_argument("power must be at least 1");
  std::set<ExpVec> labels;
  for (const auto& lam : partitions_of(n)) {
    if (field.finite_mode()) {
      ExpVec asc = lam;
      std::sort(asc.begin(), asc.end());
      ExpVec best;
      do {
        ExpVec nu = q_maximal(asc, field.q);
        if (best.empty() || best < nu) best = nu;
      } while (std::next_permutation(asc.begin(), asc.end()));
      labels.insert(best);
    } else {
      labels.insert(lam);
    }
  }
  std::vector<Generator> out;
  for (const auto& label : labels) {
    Generator g;
    g.label = label;
    g.n = n;
    g.arity = static_cast<std::uint32_t>(label.size());
    g.parts = field.finite_mode() ? congruence_class(label, field.q)
                                  : std::vector<ExpVec>{label};
    g.slot_group = detail::slot_groups(g.parts, g.arity);
    g.p_style = field.finite_mode() && field.q == 2;
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const Generator& a, const Generator& b) {
    if (a.arity != b.arity) return a.arity < b.arity;
    return b.label < a.label;
  });
  return out;
}

// the generator applied to polynomial arguments
template <class Ring>
FreePoly<Ring> apply_generator(const Ring& ring, const WordCodec& codec,
                               const Generator& g,
                               const std::vector<FreePoly<Ring>>& args,
                               std::int64_t trunc = -1) {
  if (args.size() != g.arity) throw std::invalid_argument("arity mismatch");
  FreePoly<Ring> out(ring);
  for (const auto& theta : g.parts)
    out.add(partial_linearization(ring, codec, theta, args, trunc));
  return out;
}

}  // namespace nilcrunch
