#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilcrunch {

inline bool is_prime_u32(std::uint32_t m) {
  if (m < 2) return false;
  for (std::uint32_t k = 2; k * k <= m; ++k)
    if (m % k == 0) return false;
  return true;
}

/* Ground field descriptor. Two modes:
 *   Finite(q):        the field with q = p^l elements. Coefficient arithmetic
 *                     runs over the prime subfield F_p; q itself only selects
 *                     the generator family and the residue grading.
 *   InfiniteChar(p):  an infinite field of characteristic p (p = 0 or prime).
 *                     Coefficients are rationals (p = 0) or F_p (p > 0). */
struct FieldSpec {
  enum class Kind : std::uint8_t { finite, infinite_char };

  Kind kind = Kind::finite;
  std::uint32_t q = 0;  // field size, finite mode only
  std::uint32_t p = 0;  // characteristic (0 allowed only in infinite mode)

  static FieldSpec finite(std::uint32_t q) {
    if (q < 2) throw std::invalid_argument("field size must be at least 2");
    std::uint32_t p = 2;
    while (q % p != 0) {
      ++p;
      if (p > q) throw std::invalid_argument("field size is not a prime power");
    }
    std::uint32_t r = q;
    while (r % p == 0) r /= p;
    if (r != 1)
      throw std::invalid_argument("field size " + std::to_string(q) +
                                  " is not a prime power");
    FieldSpec f;
    f.kind = Kind::finite;
    f.q = q;
    f.p = p;
    return f;
  }

  static FieldSpec infinite_char(std::uint32_t p) {
    if (p != 0 && !is_prime_u32(p))
      throw std::invalid_argument("characteristic must be 0 or a prime");
    FieldSpec f;
    f.kind = Kind::infinite_char;
    f.q = 0;
    f.p = p;
    return f;
  }

  // Accepts "q<k>" (finite with k elements) and "inf<p>".
  static FieldSpec parse(const std::string& s) {
    auto num = [&](std::size_t off) -> std::uint32_t {
      if (off >= s.size()) throw std::invalid_argument("bad field spec: " + s);
      std::size_t pos = 0;
      unsigned long v = std::stoul(s.substr(off), &pos, 10);
      if (off + pos != s.size() || v > 0xfffffffful)
        throw std::invalid_argument("bad field spec: " + s);
      return static_cast<std::uint32_t>(v);
    };
    if (s.rfind("inf", 0) == 0) return infinite_char(num(3));
    if (s.rfind('q', 0) == 0) return finite(num(1));
    throw std::invalid_argument("bad field spec: " + s +
                                " (expected q<k> or inf<p>)");
  }

  bool finite_mode() const { return kind == Kind::finite; }

  std::string text() const {
    return finite_mode() ? "q" + std::to_string(q) : "inf" + std::to_string(p);
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind == b.kind && a.q == b.q && a.p == b.p;
  }
};

}  // namespace nilcrunch
