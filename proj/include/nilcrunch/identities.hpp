#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nilcrunch/freepoly.hpp"
#include "nilcrunch/linearize.hpp"
#include "nilcrunch/scalar.hpp"
#include "nilcrunch/words.hpp"

/* Self-checks for the linearization calculus. Every law below is built once
 * as an integer polynomial (lhs minus rhs) and then judged against a modulus:
 * modulus 0 asks for the zero polynomial over the integers, a prime modulus p
 * asks for every coefficient to vanish mod p. Constructing over the integers
 * and reducing afterwards means one expansion serves every characteristic,
 * and a failure reports an exact integer witness rather than a residue. */

namespace nilcrunch {

struct IdentityReport {
  std::string name;
  std::uint32_t n = 0;        // size parameter of the law instance
  std::uint32_t modulus = 0;  // 0 = integers, otherwise coefficients mod p
  bool expect_zero = true;
  bool zero = false;
  bool passed = false;
  std::string witness;  // least surviving term whenever the value is nonzero
};

namespace detail {

inline IdentityReport judge(std::string name, std::uint32_t n,
                            const WordCodec& codec,
                            const FreePoly<IntegerRing>& value,
                            std::uint32_t modulus, bool expect_zero) {
  IdentityReport rep;
  rep.name = std::move(name);
  rep.n = n;
  rep.modulus = modulus;
  rep.expect_zero = expect_zero;
  rep.zero = true;
  for (const auto& [w, c] : value.terms()) {
    if (modulus != 0 && c % modulus == 0) continue;
    rep.zero = false;
    rep.witness = c.str() + "*" + codec.text(w);
    break;  // terms are kept in degree-then-rank order, so this is the least
  }
  rep.passed = rep.zero == expect_zero;
  return rep;
}

inline std::vector<FreePoly<IntegerRing>> letter_polys(const IntegerRing& Z,
                                                       const WordCodec& codec,
                                                       std::uint32_t r) {
  std::vector<FreePoly<IntegerRing>> xs;
  xs.reserve(r);
  for (std::uint32_t i = 1; i <= r; ++i)
    xs.push_back(FreePoly<IntegerRing>::word(Z, codec.of_letters({i})));
  return xs;
}

}  // namespace detail

/* (x_1 + ... + x_r)^n minus the sum, over the nonempty subsets T of the
 * letters, of the all-compositions sum in the letters of T. Zero over the
 * integers: each word on the left belongs to exactly one bucket, the subset
 * of letters it actually uses. */
inline FreePoly<IntegerRing> complete_expansion_defect(const IntegerRing& Z,
                                                       const WordCodec& codec,
                                                       std::uint32_t r,
                                                       std::uint32_t n) {
  auto xs = detail::letter_polys(Z, codec, r);
  FreePoly<IntegerRing> s(Z);
  for (const auto& x : xs) s.add(x);
  FreePoly<IntegerRing> defect = s.pow(codec, n);
  for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
    std::vector<FreePoly<IntegerRing>> sub;
    for (std::uint32_t i = 0; i < r; ++i)
      if (mask >> i & 1) sub.push_back(xs[i]);
    // more letters than the degree admits means an empty composition sum
    if (sub.size() > n) continue;
    defect.sub(full_sum(Z, codec, static_cast<std::uint32_t>(sub.size()), n,
                        sub));
  }
  return defect;
}

/* The all-compositions sum minus the congruence-class sums taken once per
 * distinct greedy representative. Zero over the integers because the classes
 * partition the compositions of n of the given arity. */
inline FreePoly<IntegerRing> residue_partition_defect(const IntegerRing& Z,
                                                      const WordCodec& codec,
                                                      std::uint32_t q,
                                                      std::uint32_t r,
                                                      std::uint32_t n) {
  auto xs = detail::letter_polys(Z, codec, r);
  FreePoly<IntegerRing> defect = full_sum(Z, codec, r, n, xs);
  std::set<ExpVec> labels;
  for (const auto& theta : compositions_of(n, r))
    labels.insert(q_maximal(theta, q));
  for (const auto& label : labels)
    defect.sub(frobenius_linearization(Z, codec, label, q, xs));
  return defect;
}

// L_(n-1,1)(x, xy) minus x * L_(n-1,1)(x, y): prefixing by x commutes with
// planting the second slot, since both sides enumerate x^(a+1) y x^b.
inline FreePoly<IntegerRing> prefix_pull_defect(const IntegerRing& Z,
                                                const WordCodec& codec,
                                                std::uint32_t n) {
  auto xs = detail::letter_polys(Z, codec, 2);
  const auto& x = xs[0];
  const auto& y = xs[1];
  std::vector<FreePoly<IntegerRing>> in = {x, x.mul(codec, y)};
  FreePoly<IntegerRing> defect =
      partial_linearization(Z, codec, {n - 1, 1}, in);
  defect.sub(x.mul(codec, partial_linearization(Z, codec, {n - 1, 1}, xs)));
  return defect;
}

/* n x y^n - L_(n-1,1)(y, xy) + (n-1) L_(n-1,1)(y, yx) - L_(n-2,1,1)(y, x, y^2)
 * vanishes over the integers: collecting the position of x in each slot sum
 * cancels the coefficients term by term. With `control` set, the middle sign
 * flips and the expression survives with coefficient -2(n-1); useful as a
 * deliberately failing instance. */
inline FreePoly<IntegerRing> power_transfer_defect(const IntegerRing& Z,
                                                   const WordCodec& codec,
                                                   std::uint32_t n,
                                                   bool control = false) {
  auto xs = detail::letter_polys(Z, codec, 2);
  const auto& x = xs[0];
  const auto& y = xs[1];
  FreePoly<IntegerRing> defect =
      x.mul(codec, y.pow(codec, n)).scale(BigInt(n));
  std::vector<FreePoly<IntegerRing>> a = {y, x.mul(codec, y)};
  defect.sub(partial_linearization(Z, codec, {n - 1, 1}, a));
  std::vector<FreePoly<IntegerRing>> b = {y, y.mul(codec, x)};
  const std::int64_t mid = control ? -(std::int64_t(n) - 1) : std::int64_t(n) - 1;
  defect.add(partial_linearization(Z, codec, {n - 1, 1}, b).scale(BigInt(mid)));
  std::vector<FreePoly<IntegerRing>> cargs = {y, x, y.pow(codec, 2)};
  defect.sub(partial_linearization(Z, codec, {n - 2, 1, 1}, cargs));
  return defect;
}

// x L_21(y,z) - L_21(y, xz) - L_111(x, y, yz) + y L_111(x, y, z): moving a
// left factor into a slot costs exactly the mixed-slot correction terms.
inline FreePoly<IntegerRing> triple_exchange_defect(const IntegerRing& Z,
                                                    const WordCodec& codec) {
  auto xs = detail::letter_polys(Z, codec, 3);
  const auto& x = xs[0];
  const auto& y = xs[1];
  const auto& z = xs[2];
  std::vector<FreePoly<IntegerRing>> yz = {y, z};
  FreePoly<IntegerRing> defect =
      x.mul(codec, partial_linearization(Z, codec, {2, 1}, yz));
  std::vector<FreePoly<IntegerRing>> a = {y, x.mul(codec, z)};
  defect.sub(partial_linearization(Z, codec, {2, 1}, a));
  std::vector<FreePoly<IntegerRing>> b = {x, y, y.mul(codec, z)};
  defect.sub(partial_linearization(Z, codec, {1, 1, 1}, b));
  std::vector<FreePoly<IntegerRing>> c = {x, y, z};
  defect.add(
      y.mul(codec, partial_linearization(Z, codec, {1, 1, 1}, c)));
  return defect;
}

// yzx^2y - y^2zx^2 - zx^2y^2 - L_21(y, zx^2) equals -2(y^2zx^2 + zx^2y^2):
// nonzero over the integers but zero in characteristic two, where the slot
// sum absorbs the sandwiched word.
inline FreePoly<IntegerRing> sandwich_rewrite_defect(const IntegerRing& Z,
                                                     const WordCodec& codec) {
  FreePoly<IntegerRing> defect =
      FreePoly<IntegerRing>::word(Z, codec.of_letters({2, 3, 1, 1, 2}));
  defect.add_term(codec.of_letters({2, 2, 3, 1, 1}), BigInt(-1));
  defect.add_term(codec.of_letters({3, 1, 1, 2, 2}), BigInt(-1));
  auto xs = detail::letter_polys(Z, codec, 3);
  std::vector<FreePoly<IntegerRing>> in = {
      xs[1], FreePoly<IntegerRing>::word(Z, codec.of_letters({3, 1, 1}))};
  defect.sub(partial_linearization(Z, codec, {2, 1}, in));
  return defect;
}

/* The full battery, sized by nmax. Every instance is expected to vanish
 * except the final control, which must survive over the integers (it does
 * vanish mod 2, so it is only judged integrally). */
inline std::vector<IdentityReport> run_identity_suite(std::uint32_t nmax = 6) {
  if (nmax < 3) throw std::invalid_argument("identity suite needs nmax >= 3");
  const IntegerRing Z;
  const WordCodec codec(3);
  std::vector<IdentityReport> out;
  for (std::uint32_t n = 2; n <= std::min(nmax, 5u); ++n)
    for (std::uint32_t r = 2; r <= 3; ++r)
      out.push_back(detail::judge(
          "complete_expansion/r" + std::to_string(r), n, codec,
          complete_expansion_defect(Z, codec, r, n), 0, true));
  for (std::uint32_t q : {2u, 3u})
    for (std::uint32_t n = 2; n <= nmax; ++n)
      for (std::uint32_t r = 1; r <= std::min(n, 3u); ++r)
        out.push_back(detail::judge(
            "residue_partition/q" + std::to_string(q) + "r" +
                std::to_string(r),
            n, codec, residue_partition_defect(Z, codec, q, r, n), 0, true));
  for (std::uint32_t n = 3; n <= nmax; ++n)
    out.push_back(detail::judge("prefix_pull", n, codec,
                                prefix_pull_defect(Z, codec, n), 0, true));
  for (std::uint32_t n = 3; n <= nmax; ++n)
    out.push_back(detail::judge("power_transfer", n, codec,
                                power_transfer_defect(Z, codec, n), 0, true));
  out.push_back(detail::judge("triple_exchange", 3, codec,
                              triple_exchange_defect(Z, codec), 0, true));
  out.push_back(detail::judge("triple_exchange", 3, codec,
                              triple_exchange_defect(Z, codec), 2, true));
  out.push_back(detail::judge("sandwich_rewrite", 3, codec,
                              sandwich_rewrite_defect(Z, codec), 2, true));
  out.push_back(detail::judge("power_transfer_negative_control", 3, codec,
                              power_transfer_defect(Z, codec, 3, true), 0,
                              false));
  return out;
}

inline bool all_passed(const std::vector<IdentityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const IdentityReport& r) { return r.passed; });
}

}  // namespace nilcrunch
