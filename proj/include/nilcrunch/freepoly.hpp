#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilcrunch/scalar.hpp"
#include "nilcrunch/words.hpp"

namespace nilcrunch {

/* Element of the free associative algebra without unit: a finite sum of
 * words with nonzero coefficients. Terms are kept in a map keyed by packed
 * word code, which is deglex order, so the representation is canonical. */
template <class Ring>
class FreePoly {
 public:
  using Coeff = typename Ring::Coeff;
  using Terms = std::map<std::uint64_t, Coeff>;

  FreePoly() = default;
  explicit FreePoly(Ring r) : ring_(std::move(r)) {}

  static FreePoly word(Ring r, std::uint64_t w) {
    FreePoly f(r);
    f.add_term(w, r.one());
    return f;
  }

  const Ring& ring() const { return ring_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t term_count() const { return t_.size(); }

  std::uint32_t min_deg() const {
    return t_.empty() ? 0 : WordCodec::deg(t_.begin()->first);
  }
  std::uint32_t max_deg() const {
    return t_.empty() ? 0 : WordCodec::deg(t_.rbegin()->first);
  }

  void add_term(std::uint64_t w, const Coeff& c) {
    if (ring_.is_zero(c)) return;
    if (WordCodec::deg(w) == 0)
      throw std::invalid_argument("the empty word cannot occur in a polynomial");
    auto it = t_.find(w);
    if (it == t_.end()) {
      t_.emplace(w, c);
      return;
    }
    it->second = ring_.add(it->second, c);
    if (ring_.is_zero(it->second)) t_.erase(it);
  }

  Coeff coeff(std::uint64_t w) const {
    auto it = t_.find(w);
    return it == t_.end() ? ring_.zero() : it->second;
  }

  void add(const FreePoly& o) {
    check_ring(o);
    for (const auto& [w, c] : o.t_) add_term(w, c);
  }
  void sub(const FreePoly& o) {
    check_ring(o);
    for (const auto& [w, c] : o.t_) add_term(w, ring_.neg(c));
  }

  FreePoly plus(const FreePoly& o) const {
    FreePoly r = *this;
    r.add(o);
    return r;
  }
  FreePoly minus(const FreePoly& o) const {
    FreePoly r = *this;
    r.sub(o);
    return r;
  }
  FreePoly scale(const Coeff& c) const {
    FreePoly r(ring_);
    if (ring_.is_zero(c)) return r;
    for (const auto& [w, v] : t_) r.add_term(w, ring_.mul(c, v));
    return r;
  }

  // product, discarding words of degree above trunc when trunc >= 0
  FreePoly mul(const WordCodec& codec, const FreePoly& o,
               std::int64_t trunc = -1) const {
    check_ring(o);
    FreePoly r(ring_);
    for (const auto& [wa, ca] : t_) {
      const std::uint32_t da = WordCodec::deg(wa);
      if (trunc >= 0 && da + 1 > trunc) continue;
      for (const auto& [wb, cb] : o.t_) {
        if (trunc >= 0 && da + WordCodec::deg(wb) > trunc) continue;
        r.add_term(codec.concat(wa, wb), ring_.mul(ca, cb));
      }
    }
    return r;
  }

  FreePoly pow(const WordCodec& codec, std::uint32_t k,
               std::int64_t trunc = -1) const {
    if (k == 0)
      throw std::invalid_argument("power zero has no meaning without a unit");
    FreePoly r = *this;
    for (std::uint32_t i = 1; i < k; ++i) r = r.mul(codec, *this, trunc);
    return r;
  }

  FreePoly star(const WordCodec& codec) const {
    FreePoly r(ring_);
    for (const auto& [w, c] : t_) r.add_term(codec.star(w), c);
    return r;
  }

  FreePoly truncate(std::uint32_t max_degree) const {
    FreePoly r(ring_);
    for (const auto& [w, c] : t_)
      if (WordCodec::deg(w) <= max_degree) r.add_term(w, c);
    return r;
  }

  // the part supported on words of the given multidegree
  FreePoly component(const WordCodec& codec, const MultiDegree& md) const {
    FreePoly r(ring_);
    for (const auto& [w, c] : t_)
      if (codec.mdeg(w) == md) r.add_term(w, c);
    return r;
  }

  std::vector<MultiDegree> multidegrees(const WordCodec& codec) const {
    std::vector<MultiDegree> out;
    for (const auto& [w, c] : t_) {
      auto md = codec.mdeg(w);
      bool seen = false;
      for (const auto& m : out)
        if (m == md) {
          seen = true;
          break;
        }
      if (!seen) out.push_back(std::move(md));
    }
    return out;
  }

  std::string text(const WordCodec& codec) const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : t_) {
      if (!s.empty()) s += " + ";
      const std::string cs = ring_.text(c);
      if (cs != "1") s += cs + "*";
      s += codec.text(w);
    }
    return s;
  }

  friend bool operator==(const FreePoly& a, const FreePoly& b) {
    return a.ring_ == b.ring_ && a.t_ == b.t_;
  }

 private:
  void check_ring(const FreePoly& o) const {
    if (!(ring_ == o.ring_))
      throw std::invalid_argument("coefficient ring mismatch");
  }

  Ring ring_;
  Terms t_;
};

}  // namespace nilcrunch
