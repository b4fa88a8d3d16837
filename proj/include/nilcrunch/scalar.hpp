#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "nilcrunch/field.hpp"

namespace nilcrunch {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/* Coefficient rings. Each ring is a small value type exposing the same
 * operation set; scalars are kept canonical at all times (0..p-1 for the
 * prime field, normalized sign/gcd for rationals, which cpp_rational does
 * on its own). */

struct PrimeField {
  std::uint32_t p = 2;
  using Coeff = std::uint32_t;

  PrimeField() = default;
  explicit PrimeField(std::uint32_t p_) : p(p_) {
    if (!is_prime_u32(p)) throw std::invalid_argument("modulus is not prime");
    if (p > 251)
      throw std::invalid_argument("prime moduli above 251 are not supported");
  }

  Coeff zero() const { return 0; }
  Coeff one() const { return 1 % p; }
  bool is_zero(Coeff a) const { return a == 0; }
  Coeff add(Coeff a, Coeff b) const { return (a + b) % p; }
  Coeff sub(Coeff a, Coeff b) const { return (a + p - b) % p; }
  Coeff neg(Coeff a) const { return a == 0 ? 0 : p - a; }
  Coeff mul(Coeff a, Coeff b) const {
    return static_cast<Coeff>(std::uint64_t(a) * b % p);
  }
  Coeff inv(Coeff a) const {
    if (a % p == 0) throw std::domain_error("inverse of zero");
    // extended Euclid on (a, p)
    std::int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
      std::int64_t q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    if (t < 0) t += p;
    return static_cast<Coeff>(t);
  }
  Coeff from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(p);
    if (m < 0) m += p;
    return static_cast<Coeff>(m);
  }
  std::string text(Coeff a) const { return std::to_string(a); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.p == b.p;
  }
};

struct IntegerRing {
  using Coeff = BigInt;

  Coeff zero() const { return 0; }
  Coeff one() const { return 1; }
  bool is_zero(const Coeff& a) const { return a == 0; }
  Coeff add(const Coeff& a, const Coeff& b) const { return a + b; }
  Coeff sub(const Coeff& a, const Coeff& b) const { return a - b; }
  Coeff neg(const Coeff& a) const { return -a; }
  Coeff mul(const Coeff& a, const Coeff& b) const { return a * b; }
  Coeff inv(const Coeff&) const {
    throw std::domain_error("integers: division is not available");
  }
  Coeff from_int(std::int64_t v) const { return v; }
  std::string text(const Coeff& a) const { return a.str(); }

  friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }
};

struct RationalRing {
  using Coeff = BigRat;

  Coeff zero() const { return 0; }
  Coeff one() const { return 1; }
  bool is_zero(const Coeff& a) const { return a == 0; }
  Coeff add(const Coeff& a, const Coeff& b) const { return a + b; }
  Coeff sub(const Coeff& a, const Coeff& b) const { return a - b; }
  Coeff neg(const Coeff& a) const { return -a; }
  Coeff mul(const Coeff& a, const Coeff& b) const { return a * b; }
  Coeff inv(const Coeff& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  Coeff from_int(std::int64_t v) const { return v; }
  std::string text(const Coeff& a) const { return a.str(); }

  friend bool operator==(const RationalRing&, const RationalRing&) {
    return true;
  }
};

}  // namespace nilcrunch
