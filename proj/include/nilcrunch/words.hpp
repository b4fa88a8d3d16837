#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilcrunch {

using MultiDegree = std::vector<std::uint16_t>;

/* Packed words over the alphabet x_1..x_d.
 *
 * A word is one machine word: (degree << 56) | rank, where rank encodes the
 * letters base d, most significant digit first (digit = letter - 1). Numeric
 * order on codes is therefore deglex order with x_1 < x_2 < ... < x_d, and
 * within one degree rank runs through the words in lexicographic order.
 * Code 0 is the empty word; it serves as a unit marker only and never occurs
 * inside polynomial supports. */
class WordCodec {
 public:
  WordCodec() = default;
  explicit WordCodec(std::uint32_t d) : d_(d) {
    if (d == 0) throw std::invalid_argument("alphabet must have a letter");
    std::uint64_t v = 1;
    pow_.push_back(1);
    while (v <= (std::uint64_t(1) << 56) / d_) {
      v *= d_;
      pow_.push_back(v);
    }
    max_deg_ = static_cast<std::uint32_t>(pow_.size() - 1);
    cum_.assign(max_deg_ + 1, 0);
    for (std::uint32_t m = 1; m <= max_deg_; ++m) cum_[m] = cum_[m - 1] + pow_[m];
  }

  std::uint32_t d() const { return d_; }
  std::uint32_t max_deg() const { return max_deg_; }
  std::uint64_t pow(std::uint32_t k) const { return pow_.at(k); }
  // number of words of degree 1..m
  std::uint64_t words_up_to(std::uint32_t m) const { return cum_.at(m); }

  static std::uint32_t deg(std::uint64_t w) {
    return static_cast<std::uint32_t>(w >> 56);
  }
  static std::uint64_t rank(std::uint64_t w) {
    return w & ((std::uint64_t(1) << 56) - 1);
  }
  std::uint64_t pack(std::uint32_t deg, std::uint64_t rank) const {
    return (std::uint64_t(deg) << 56) | rank;
  }

  // 0-based position of a word of degree 1..D among all such, deglex order
  std::uint64_t global_index(std::uint64_t w) const {
    return cum_[deg(w) - 1] + rank(w);
  }
  std::uint64_t from_global_index(std::uint64_t g) const {
    std::uint32_t m = 1;
    while (g >= cum_[m]) ++m;
    return pack(m, g - cum_[m - 1]);
  }

  std::uint64_t of_letters(const std::vector<std::uint32_t>& ls) const {
    if (ls.empty())  // no unit in the algebra, so no empty word either
      throw std::invalid_argument("a word needs at least one letter");
    check_deg(static_cast<std::uint32_t>(ls.size()));
    std::uint64_t r = 0;
    for (auto l : ls) {
      if (l < 1 || l > d_) throw std::invalid_argument("letter out of range");
      r = r * d_ + (l - 1);
    }
    return pack(static_cast<std::uint32_t>(ls.size()), r);
  }
  std::vector<std::uint32_t> letters(std::uint64_t w) const {
    const std::uint32_t m = deg(w);
    std::vector<std::uint32_t> ls(m);
    std::uint64_t r = rank(w);
    for (std::uint32_t i = m; i-- > 0;) {
      ls[i] = static_cast<std::uint32_t>(r % d_) + 1;
      r /= d_;
    }
    return ls;
  }

  std::uint64_t concat(std::uint64_t a, std::uint64_t b) const {
    const std::uint32_t m = deg(a) + deg(b);
    check_deg(m);
    return pack(m, rank(a) * pow_[deg(b)] + rank(b));
  }
  std::uint64_t lmul(std::uint32_t letter, std::uint64_t w) const {
    const std::uint32_t m = deg(w) + 1;
    check_deg(m);
    return pack(m, std::uint64_t(letter - 1) * pow_[deg(w)] + rank(w));
  }
  std::uint64_t rmul(std::uint64_t w, std::uint32_t letter) const {
    const std::uint32_t m = deg(w) + 1;
    check_deg(m);
    return pack(m, rank(w) * d_ + (letter - 1));
  }

  MultiDegree mdeg(std::uint64_t w) const {
    MultiDegree md(d_, 0);
    std::uint64_t r = rank(w);
    for (std::uint32_t i = 0; i < deg(w); ++i) {
      ++md[r % d_];
      r /= d_;
    }
    return md;
  }

  // reading the word backwards: the inversion anti-automorphism on words
  std::uint64_t star(std::uint64_t w) const {
    std::uint64_t r = rank(w), s = 0;
    for (std::uint32_t i = 0; i < deg(w); ++i) {
      s = s * d_ + r % d_;
      r /= d_;
    }
    return pack(deg(w), s);
  }

  // all words with the given multidegree, ascending deglex
  std::vector<std::uint64_t> enumerate(const MultiDegree& md) const {
    if (md.size() != d_) throw std::invalid_argument("multidegree arity mismatch");
    std::vector<std::uint32_t> ls;
    for (std::uint32_t i = 0; i < d_; ++i)
      ls.insert(ls.end(), md[i], i + 1);
    std::vector<std::uint64_t> out;
    if (ls.empty()) return out;
    do {
      out.push_back(of_letters(ls));
    } while (std::next_permutation(ls.begin(), ls.end()));
    return out;
  }

  std::string text(std::uint64_t w) const {
    if (deg(w) == 0) return "1";
    std::string s;
    for (auto l : letters(w)) {
      if (!s.empty()) s += '*';
      s += 'x';
      s += std::to_string(l);
    }
    return s;
  }

  // accepts "x1*x2*x1", "x1 x2 x1" and plain juxtaposition
  std::uint64_t parse(const std::string& s) const {
    std::vector<std::uint32_t> ls;
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] == ' ' || s[i] == '*' || s[i] == '\t') {
        ++i;
        continue;
      }
      if (s[i] != 'x')
        throw std::invalid_argument("bad word syntax near '" + s.substr(i) + "'");
      ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      if (j == i) throw std::invalid_argument("letter index missing in word");
      const unsigned long v = std::stoul(s.substr(i, j - i));
      if (v < 1 || v > d_)
        throw std::invalid_argument("letter x" + std::to_string(v) +
                                    " outside alphabet of size " +
                                    std::to_string(d_));
      ls.push_back(static_cast<std::uint32_t>(v));
      i = j;
    }
    if (ls.empty()) throw std::invalid_argument("empty word");
    return of_letters(ls);
  }

 private:
  void check_deg(std::uint32_t m) const {
    if (m > max_deg_)
      throw std::invalid_argument("word degree " + std::to_string(m) +
                                  " exceeds codec limit");
  }

  std::uint32_t d_ = 0;
  std::uint32_t max_deg_ = 0;
  std::vector<std::uint64_t> pow_;
  std::vector<std::uint64_t> cum_;
};

inline std::uint32_t total(const MultiDegree& md) {
  std::uint32_t s = 0;
  for (auto x : md) s += x;
  return s;
}

}  // namespace nilcrunch
