#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "nilcrunch/checkpoint.hpp"
#include "nilcrunch/field.hpp"
#include "nilcrunch/freepoly.hpp"
#include "nilcrunch/linearize.hpp"
#include "nilcrunch/rowspace.hpp"
#include "nilcrunch/scalar.hpp"
#include "nilcrunch/words.hpp"

namespace nilcrunch {

// set by a signal handler; builds stop at the next safe point and save
inline std::atomic<bool> g_interrupt{false};

struct Budget {
  std::uint64_t max_coords = 1'000'000;  // tracked words across all blocks
  std::uint64_t max_row_mb = 2048;       // resident row + worklist storage
  std::uint64_t wall_ms = 0;             // 0 = unlimited
};

struct BuildOptions {
  unsigned jobs = 1;                  // worker threads for seed expansion
  std::uint32_t max_arg_degree = 0;   // cap on argument word degrees, 0 = none
  std::string checkpoint_path;        // empty = never save
  std::uint64_t checkpoint_every_ms = 60'000;
  Budget budget;
  CheckpointHeader header;  // command context stamped into saved state
};

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(const std::string& m, bool saved_, std::string path_)
      : std::runtime_error(m), saved(saved_), path(std::move(path_)) {}
  bool saved;
  std::string path;
};

struct Interrupted : std::runtime_error {
  Interrupted(const std::string& m, bool saved_, std::string path_)
      : std::runtime_error(m), saved(saved_), path(std::move(path_)) {}
  bool saved;
  std::string path;
};

/* How coordinates are split into independent blocks.
 *   residue:     multidegree modulo q-1 componentwise (finite fields; the
 *                congruence-class generators stay inside one block, letter
 *                multiplication shifts one residue coordinate cyclically);
 *   multidegree: full multidegree (infinite ground field, where every
 *                generator instance is multihomogeneous);
 *   single:      no split (reference builds, whose seeds straddle blocks). */
enum class BlockScheme : std::uint8_t { residue = 0, multidegree = 1, single = 2 };

enum class SeedMode : std::uint8_t { generators = 0, powers_of_sums = 1 };

inline BlockScheme scheme_for(const FieldSpec& f) {
  return f.finite_mode() ? BlockScheme::residue : BlockScheme::multidegree;
}

// canonical sparse form of one reduced space for cross-engine comparison:
// (pivot word, [(word, coefficient text)] ascending), sorted by pivot word
using FlatRow =
    std::pair<std::uint64_t, std::vector<std::pair<std::uint64_t, std::string>>>;
using FlatSpace = std::vector<FlatRow>;

/* The span of the relation ideal of x^n, truncated to words of degree <= D.
 *
 * Write W for the span of the words of degree 1..D and V for the two-sided
 * ideal generated by all n-th powers.  The build computes the projection
 * p(V) of V onto W along the words of degree > D:
 *   - seeds: the generator family applied to every tuple of word arguments
 *     that fits under D (constituents that cannot fit are dropped, which is
 *     exactly the projection, since a dropped constituent only produces
 *     words beyond D);
 *   - closure: the span is closed under left and right multiplication by
 *     letters, products beyond degree D dropped.  Dropping is compatible
 *     with multiplication: a word beyond D only ever produces words beyond
 *     D again, so the fixpoint is exactly p(V).
 *
 * Soundness of the two ways the result is consumed:
 *   (1) Nilpotency: every degree-D word lies in p(V)  <=>  the quotient by V
 *       vanishes in degrees >= D.  A degree-D word w with w in p(V) means
 *       w + h in V with h supported beyond D; for a longer word u = w t this
 *       gives u = (w + h) t - h t, so u lies in V up to words of degree
 *       beyond deg(u).  The quotient is a finitely generated nil algebra of
 *       bounded index, hence nilpotent, so iterating the rewrite pushes the
 *       tail past the degree where everything already lies in V and the
 *       tail is absorbed.  Conversely if some degree-D word is missing from
 *       p(V) it is nonzero in the quotient.  The test is therefore exact,
 *       and monotone in D, so the least passing D equals the nilpotency
 *       degree once a failure at D-1 is observed (or D = n, below which the
 *       ideal has no elements at all).
 *   (2) Membership: for f of degree <= D, f in p(V) iff f + h in V for some
 *       h beyond D.  Once D >= nilpotency degree, everything beyond D lies
 *       in V, so h in V and membership in p(V) equals membership in V.
 *
 * Pivot columns run over descending degree-lexicographic word order, so the
 * non-pivot words (the deglex-least in each coset) are the monomial basis of
 * the quotient, and counting pivots per degree yields the dimensions of the
 * quotient along its degree filtration. */
template <class P>
class RelationSpace {
 public:
  using Policy = P;
  using Ring = typename P::Ring;
  using Coeff = typename P::Coeff;
  using Poly = FreePoly<Ring>;

  RelationSpace(Ring ring, std::uint32_t n, std::uint32_t d,
                const FieldSpec& field, std::uint32_t trunc_degree,
                BlockScheme scheme, SeedMode mode, BuildOptions opts)
      : codec_(d),
        ring_(std::move(ring)),
        n_(n),
        d_(d),
        D_(trunc_degree),
        field_(field),
        scheme_(scheme),
        mode_(mode),
        opts_(std::move(opts)) {
    if (n_ < 1) throw std::invalid_argument("power must be at least 1");
    if (D_ < 1) throw std::invalid_argument("truncation degree must be at least 1");
    if (D_ > codec_.max_deg())
      throw std::invalid_argument(
          "truncation degree too large for the packed word representation");
    if constexpr (std::is_same_v<P, Gf2Rows>) {
      if (field_.p != 2)
        throw std::invalid_argument("bit-packed rows need characteristic 2");
    } else if constexpr (std::is_same_v<P, ByteRows>) {
      if (field_.p == 0 || ring_.p != field_.p)
        throw std::invalid_argument("row modulus does not match the field");
    } else {
      if (field_.p != 0)
        throw std::invalid_argument("rational rows need characteristic 0");
    }
    if (opts_.jobs < 1) opts_.jobs = 1;
    if (opts_.jobs > 64) opts_.jobs = 64;
    const std::uint64_t total = codec_.words_up_to(D_);
    if (total > opts_.budget.max_coords)
      throw BudgetExceeded("the truncated word space needs " +
                               std::to_string(total) +
                               " coordinates, above the configured cap",
                           false, "");
    partition_blocks(total);
    gens_ = generator_set(n_, field_);
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t d() const { return d_; }
  std::uint32_t trunc_degree() const { return D_; }
  const FieldSpec& field() const { return field_; }
  const WordCodec& codec() const { return codec_; }
  const Ring& ring() const { return ring_; }
  const std::vector<Generator>& generators() const { return gens_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::uint64_t coords() const { return codec_.words_up_to(D_); }
  bool done() const { return phase_ == Phase::done; }

  std::uint64_t total_rank() const {
    std::uint64_t r = 0;
    for (const auto& b : blocks_) r += b.space.rank();
    return r;
  }

  // runs (or continues) the computation to its fixpoint
  void build() {
    start_ = Clock::now();
    last_save_ = start_;
    if (phase_ == Phase::seeding) {
      if (mode_ == SeedMode::generators)
        seed_generators();
      else
        seed_powers();
      phase_ = Phase::closing;
      safepoint();
    }
    if (phase_ == Phase::closing) {
      close_worklist();
      phase_ = Phase::done;
    }
  }

  // true when every single word of the given degree lies in the space
  bool degree_words_contained(std::uint32_t k) const {
    check_done();
    if (k < 1 || k > D_)
      throw std::invalid_argument("degree outside the built range");
    for (std::uint64_t r = 0; r < codec_.pow(k); ++r) {
      const std::uint64_t gi = codec_.global_index(codec_.pack(k, r));
      const Block& b = blocks_[block_of_[gi]];
      const std::int64_t pr = b.space.pivot_row(local_of_[gi]);
      if (pr < 0) return false;
      // a word lies in the space iff it is a pivot whose row is a singleton:
      // row tails live on non-pivot columns only
      if (b.space.pol().nnz(b.space.row(static_cast<std::size_t>(pr))) != 1)
        return false;
    }
    return true;
  }

  // dimensions of the quotient per degree 1..kmax (index 0 unused)
  std::vector<std::uint64_t> quotient_dims(std::uint32_t kmax) const {
    check_done();
    if (kmax < 1 || kmax > D_)
      throw std::invalid_argument("degree outside the built range");
    std::vector<std::uint64_t> dim(kmax + 1, 0);
    for (std::uint32_t k = 1; k <= kmax; ++k) dim[k] = codec_.pow(k);
    for (const auto& b : blocks_)
      for (std::size_t i = 0; i < b.space.rank(); ++i) {
        const std::uint32_t k = WordCodec::deg(b.words[b.space.pivot_col(i)]);
        if (k <= kmax) --dim[k];
      }
    return dim;
  }

  // the non-pivot words of degree <= kmax, ascending deglex: a monomial
  // basis of the quotient (each is the deglex-least word in its coset)
  std::vector<std::uint64_t> basis_words(std::uint32_t kmax) const {
    check_done();
    if (kmax < 1 || kmax > D_)
      throw std::invalid_argument("degree outside the built range");
    std::vector<std::uint64_t> out;
    for (std::uint32_t k = 1; k <= kmax; ++k)
      for (std::uint64_t r = 0; r < codec_.pow(k); ++r) {
        const std::uint64_t w = codec_.pack(k, r);
        const std::uint64_t gi = codec_.global_index(w);
        if (blocks_[block_of_[gi]].space.pivot_row(local_of_[gi]) < 0)
          out.push_back(w);
      }
    return out;
  }

  // membership in the truncated space; exact membership in the ideal itself
  // once the truncation degree is at least the nilpotency degree
  bool contains(const Poly& f) const {
    check_done();
    if (!(f.ring() == ring_))
      throw std::invalid_argument("coefficient ring mismatch");
    if (f.is_zero()) return true;
    if (f.max_deg() > D_)
      throw std::invalid_argument(
          "polynomial degree exceeds the truncation degree");
    std::map<std::uint32_t, typename P::Row> rows;
    for (const auto& [w, c] : f.terms()) {
      const std::uint64_t gi = codec_.global_index(w);
      const std::uint32_t b = block_of_[gi];
      auto it = rows.find(b);
      if (it == rows.end())
        it = rows.emplace(b, blocks_[b].space.pol().zero()).first;
      blocks_[b].space.pol().add_term(it->second, local_of_[gi], c);
    }
    for (const auto& [b, r] : rows)
      if (!blocks_[b].space.member(r)) return false;
    return true;
  }

  FlatSpace flatten() const {
    check_done();
    FlatSpace out;
    for (const auto& b : blocks_)
      for (std::uint32_t i : b.space.rows_by_pivot()) {
        FlatRow fr;
        fr.first = b.words[b.space.pivot_col(i)];
        b.space.pol().for_each(b.space.row(i), [&](std::size_t c, auto&& v) {
          fr.second.emplace_back(b.words[c], ring_.text(v));
        });
        std::sort(fr.second.begin(), fr.second.end());
        out.push_back(std::move(fr));
      }
    std::sort(out.begin(), out.end(),
              [](const FlatRow& a, const FlatRow& b) { return a.first < b.first; });
    return out;
  }

  // ---- persistence ----------------------------------------------------

  void save(std::ostream& os) const {
    CheckpointHeader h = opts_.header;
    h.n = n_;
    h.d = d_;
    h.field = field_;
    h.trunc_degree = D_;
    h.scheme = static_cast<std::uint8_t>(scheme_);
    h.seed_mode = static_cast<std::uint8_t>(mode_);
    h.max_arg_degree = opts_.max_arg_degree;
    write_header(os, h);
    // shape stamp: the payload refuses to load into a different engine even
    // when the caller skipped the header (block keys alone cannot tell a
    // deeper truncation apart once the residue scheme folds everything into
    // one block)
    bin::put_u32(os, n_);
    bin::put_u32(os, d_);
    bin::put_u32(os, D_);
    bin::put_u8(os, static_cast<std::uint8_t>(scheme_));
    bin::put_u8(os, static_cast<std::uint8_t>(mode_));
    bin::put_u8(os, static_cast<std::uint8_t>(phase_));
    bin::put_u64(os, seeds_done_);
    bin::put_u64(os, blocks_.size());
    for (const auto& b : blocks_) {
      bin::put_u32(os, static_cast<std::uint32_t>(b.key.size()));
      for (auto k : b.key) bin::put_u32(os, k);
      bin::put_u64(os, b.space.rank());
      for (std::size_t i = 0; i < b.space.rank(); ++i) {
        bin::put_u64(os, b.space.pol().nnz(b.space.row(i)));
        b.space.pol().for_each(b.space.row(i), [&](std::size_t c, auto&& v) {
          bin::put_u32(os, static_cast<std::uint32_t>(c));
          write_coeff(os, v);
        });
      }
    }
    bin::put_u64(os, queue_.size());
    for (const auto& p : queue_) {
      bin::put_u32(os, p.block);
      bin::put_u64(os, p.terms.size());
      for (const auto& [c, v] : p.terms) {
        bin::put_u32(os, c);
        write_coeff(os, v);
      }
    }
    bin::put_u32(os, 0x444f4e45);  // trailer guard
  }

  // restores into a freshly constructed engine with identical parameters;
  // the header must already have been consumed from the stream
  void load(std::istream& is) {
    if (phase_ != Phase::seeding || total_rank() != 0 || !queue_.empty())
      throw std::invalid_argument("state can only be loaded into a fresh engine");
    if (bin::get_u32(is) != n_ || bin::get_u32(is) != d_ ||
        bin::get_u32(is) != D_ ||
        bin::get_u8(is) != static_cast<std::uint8_t>(scheme_) ||
        bin::get_u8(is) != static_cast<std::uint8_t>(mode_))
      throw std::runtime_error("checkpoint does not match the computation");
    const std::uint8_t ph = bin::get_u8(is);
    if (ph > 2) throw std::runtime_error("corrupt checkpoint phase");
    phase_ = static_cast<Phase>(ph);
    seeds_done_ = bin::get_u64(is);
    if (bin::get_u64(is) != blocks_.size())
      throw std::runtime_error("checkpoint does not match the computation");
    for (auto& b : blocks_) {
      const std::uint32_t klen = bin::get_u32(is);
      if (klen != b.key.size())
        throw std::runtime_error("checkpoint does not match the computation");
      for (auto k : b.key)
        if (bin::get_u32(is) != k)
          throw std::runtime_error("checkpoint does not match the computation");
      const std::uint64_t rank = bin::get_u64(is);
      for (std::uint64_t i = 0; i < rank; ++i) {
        typename P::Row row = b.space.pol().zero();
        const std::uint64_t nnz = bin::get_u64(is);
        for (std::uint64_t t = 0; t < nnz; ++t) {
          const std::uint32_t c = bin::get_u32(is);
          if (c >= b.space.cols())
            throw std::runtime_error("corrupt checkpoint column");
          b.space.pol().add_term(row, c, read_coeff(is));
        }
        // saved rows are mutually reduced, so re-insertion stores them as-is
        if (b.space.insert(std::move(row)) < 0)
          throw std::runtime_error("corrupt checkpoint row");
        rows_bytes_ += b.space.pol().row_bytes();
      }
    }
    const std::uint64_t pend = bin::get_u64(is);
    for (std::uint64_t i = 0; i < pend; ++i) {
      Pending p;
      p.block = bin::get_u32(is);
      if (p.block >= blocks_.size())
        throw std::runtime_error("corrupt checkpoint block");
      const std::uint64_t nnz = bin::get_u64(is);
      p.terms.reserve(nnz);
      for (std::uint64_t t = 0; t < nnz; ++t) {
        const std::uint32_t c = bin::get_u32(is);
        if (c >= blocks_[p.block].space.cols())
          throw std::runtime_error("corrupt checkpoint column");
        p.terms.emplace_back(c, read_coeff(is));
      }
      pending_bytes_ += pending_cost(p.terms);
      queue_.push_back(std::move(p));
    }
    if (bin::get_u32(is) != 0x444f4e45)
      throw std::runtime_error("corrupt checkpoint trailer");
  }

 private:
  using Clock = std::chrono::steady_clock;
  enum class Phase : std::uint8_t { seeding = 0, closing = 1, done = 2 };

  struct Block {
    std::vector<std::uint16_t> key;
    std::vector<std::uint64_t> words;  // descending deglex; column i <-> words[i]
    RowSpace<P> space;
  };

  struct Pending {
    std::uint32_t block = 0;
    std::vector<std::pair<std::uint32_t, Coeff>> terms;
  };

  void check_done() const {
    if (phase_ != Phase::done)
      throw std::logic_error("the space has not been built yet");
  }

  P make_policy(std::size_t cols) const {
    if constexpr (std::is_same_v<P, ByteRows>)
      return P(ring_, cols);
    else
      return P(cols);
  }

  std::vector<std::uint16_t> block_key(std::uint64_t w) const {
    if (scheme_ == BlockScheme::single) return {};
    MultiDegree md = codec_.mdeg(w);
    if (scheme_ == BlockScheme::residue) {
      const std::uint16_t m = static_cast<std::uint16_t>(field_.q - 1);
      for (auto& x : md) x = static_cast<std::uint16_t>(x % m);
    }
    return md;
  }

  void partition_blocks(std::uint64_t total) {
    block_of_.assign(total, 0);
    local_of_.assign(total, 0);
    for (std::uint32_t k = 1; k <= D_; ++k)
      for (std::uint64_t r = 0; r < codec_.pow(k); ++r) {
        const std::uint64_t w = codec_.pack(k, r);
        const auto key = block_key(w);
        auto [it, fresh] =
            block_index_.try_emplace(key, static_cast<std::uint32_t>(blocks_.size()));
        if (fresh) blocks_.push_back(Block{key, {}, RowSpace<P>()});
        blocks_[it->second].words.push_back(w);
      }
    for (auto& b : blocks_) {
      std::reverse(b.words.begin(), b.words.end());
      b.space = RowSpace<P>(make_policy(b.words.size()));
      for (std::size_t i = 0; i < b.words.size(); ++i)
        local_of_[codec_.global_index(b.words[i])] = static_cast<std::uint32_t>(i);
    }
    for (std::uint32_t bi = 0; bi < blocks_.size(); ++bi)
      for (const std::uint64_t w : blocks_[bi].words)
        block_of_[codec_.global_index(w)] = bi;
  }

  // ---- seeding ---------------------------------------------------------

  std::uint64_t next_word(std::uint64_t w) const {
    const std::uint32_t k = WordCodec::deg(w);
    const std::uint64_t r = WordCodec::rank(w);
    return r + 1 < codec_.pow(k) ? codec_.pack(k, r + 1) : codec_.pack(k + 1, 0);
  }

  void seed_generators() {
    const std::uint32_t amax =
        opts_.max_arg_degree ? std::min(opts_.max_arg_degree, D_) : D_;
    constexpr std::size_t batch_size = 512;
    std::uint64_t leaf = 0;  // visited tuples, including skipped-on-resume
    std::vector<std::vector<std::uint64_t>> batch;
    for (const auto& g : gens_) {
      std::vector<std::uint64_t> args(g.arity);
      std::vector<std::uint32_t> degs(g.arity, 1);
      // some constituent must still fit under D when every open slot is
      // granted the minimum degree 1
      auto feasible = [&](std::uint32_t filled) {
        for (const auto& th : g.parts) {
          std::uint64_t s = 0;
          for (std::size_t j = 0; j < th.size(); ++j)
            s += std::uint64_t(th[j]) * (j < filled ? degs[j] : 1);
          if (s <= D_) return true;
        }
        return false;
      };
      auto flush = [&] {
        if (!batch.empty()) {
          expand_batch(g, batch);
          batch.clear();
        }
        seeds_done_ = leaf;
        safepoint();
      };
      auto rec = [&](auto&& self, std::uint32_t i) -> void {
        // interchangeable slots are enumerated nondecreasing: permuting
        // arguments inside a group fixes the generator
        std::uint64_t w = (i > 0 && g.slot_group[i] == g.slot_group[i - 1])
                              ? args[i - 1]
                              : codec_.pack(1, 0);
        for (;;) {
          const std::uint32_t dw = WordCodec::deg(w);
          if (dw > amax) break;
          degs[i] = dw;
          if (!feasible(i + 1)) break;  // larger codes only raise the degree
          args[i] = w;
          if (i + 1 == g.arity) {
            ++leaf;
            if (leaf > seeds_done_) {
              batch.push_back(args);
              if (batch.size() >= batch_size) flush();
            }
          } else {
            self(self, i + 1);
          }
          w = next_word(w);
        }
      };
      rec(rec, 0);
      flush();
    }
  }

  std::vector<std::pair<std::uint64_t, std::int64_t>> expand_instance(
      const Generator& g, const std::vector<std::uint64_t>& args) const {
    std::map<std::uint64_t, std::int64_t> acc;
    std::vector<std::uint8_t> slots;
    for (const auto& th : g.parts) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < th.size(); ++j)
        s += std::uint64_t(th[j]) * WordCodec::deg(args[j]);
      if (s > D_) continue;
      slots.clear();
      for (std::size_t j = 0; j < th.size(); ++j)
        slots.insert(slots.end(), th[j], static_cast<std::uint8_t>(j));
      do {
        std::uint64_t w = args[slots[0]];
        for (std::size_t k = 1; k < slots.size(); ++k)
          w = codec_.concat(w, args[slots[k]]);
        ++acc[w];
      } while (std::next_permutation(slots.begin(), slots.end()));
    }
    return {acc.begin(), acc.end()};
  }

  void expand_batch(const Generator& g,
                    const std::vector<std::vector<std::uint64_t>>& tuples) {
    std::vector<std::vector<std::pair<std::uint64_t, std::int64_t>>> expanded(
        tuples.size());
    const unsigned workers =
        std::min<std::size_t>(opts_.jobs, tuples.size() ? tuples.size() : 1);
    if (workers <= 1) {
      for (std::size_t i = 0; i < tuples.size(); ++i)
        expanded[i] = expand_instance(g, tuples[i]);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
          for (std::size_t i = t; i < tuples.size(); i += workers)
            expanded[i] = expand_instance(g, tuples[i]);
        });
      for (auto& th : pool) th.join();
    }
    // insertion order stays the enumeration order regardless of the worker
    // count; the reduced basis is unique for the span anyway
    for (const auto& e : expanded) submit_terms(e);
  }

  void seed_powers() {
    if (!field_.finite_mode() || (field_.q != 2 && field_.q != 3))
      throw std::invalid_argument(
          "power-of-sums seeding needs a prime field of size 2 or 3");
    const std::uint32_t k =
        opts_.max_arg_degree ? std::min(opts_.max_arg_degree, D_) : 0;
    if (k == 0)
      throw std::invalid_argument(
          "power-of-sums seeding needs an argument degree cap");
    const std::uint64_t nw = codec_.words_up_to(k);
    constexpr std::uint64_t cap = std::uint64_t(1) << 21;
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < nw; ++i) {
      total *= field_.q;
      if (total > cap)
        throw std::invalid_argument(
            "too many coefficient combinations for power-of-sums seeding");
    }
    std::uint64_t leaf = 0;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
      ++leaf;
      if (leaf <= seeds_done_) continue;
      Poly x(ring_);
      std::uint64_t t = idx;
      for (std::uint64_t wi = 0; wi < nw; ++wi) {
        const std::uint32_t digit = static_cast<std::uint32_t>(t % field_.q);
        t /= field_.q;
        if (digit)
          x.add_term(codec_.from_global_index(wi), ring_.from_int(digit));
      }
      const Poly xn = x.pow(codec_, n_, static_cast<std::int64_t>(D_));
      std::vector<std::pair<std::uint32_t, Coeff>> loc;
      std::uint32_t b = 0;
      for (const auto& [w, c] : xn.terms()) {
        const std::uint64_t gi = codec_.global_index(w);
        b = block_of_[gi];
        loc.emplace_back(local_of_[gi], c);
      }
      if (!loc.empty()) submit_local(b, loc);
      seeds_done_ = leaf;
      if ((idx & 63) == 0) safepoint();
    }
  }

  // ---- insertion and closure -------------------------------------------

  static std::uint64_t pending_cost(
      const std::vector<std::pair<std::uint32_t, Coeff>>& terms) {
    return 32 + terms.size() * (sizeof(std::uint32_t) + sizeof(Coeff));
  }

  std::int64_t submit_terms(
      const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms) {
    std::vector<std::pair<std::uint32_t, Coeff>> loc;
    loc.reserve(terms.size());
    std::uint32_t b = 0;
    for (const auto& [w, m] : terms) {
      Coeff c = ring_.from_int(m);
      if (ring_.is_zero(c)) continue;
      const std::uint64_t gi = codec_.global_index(w);
      b = block_of_[gi];  // one seed always stays inside one block
      loc.emplace_back(local_of_[gi], std::move(c));
    }
    if (loc.empty()) return -1;
    return submit_local(b, loc);
  }

  std::int64_t submit_local(std::uint32_t b,
                            std::vector<std::pair<std::uint32_t, Coeff>>& loc) {
    auto& sp = blocks_[b].space;
    typename P::Row row = sp.pol().zero();
    for (const auto& [c, v] : loc) sp.pol().add_term(row, c, v);
    const std::int64_t idx = sp.insert(std::move(row));
    if (idx >= 0) {
      rows_bytes_ += sp.pol().row_bytes();
      pending_bytes_ += pending_cost(loc);
      queue_.push_back(Pending{b, std::move(loc)});
    }
    return idx;
  }

  void close_worklist() {
    std::uint32_t tick = 0;
    while (!queue_.empty()) {
      if ((++tick & 255) == 0) safepoint();
      Pending p = std::move(queue_.front());
      queue_.pop_front();
      pending_bytes_ -= pending_cost(p.terms);
      const auto& words = blocks_[p.block].words;
      for (std::uint32_t side = 0; side < 2; ++side)
        for (std::uint32_t j = 1; j <= d_; ++j) {
          std::vector<std::pair<std::uint32_t, Coeff>> loc;
          loc.reserve(p.terms.size());
          std::uint32_t tb = 0;
          for (const auto& [col, c] : p.terms) {
            const std::uint64_t w = words[col];
            if (WordCodec::deg(w) + 1 > D_) continue;
            const std::uint64_t w2 =
                side == 0 ? codec_.lmul(j, w) : codec_.rmul(w, j);
            const std::uint64_t gi = codec_.global_index(w2);
            tb = block_of_[gi];  // uniform: all words here share one key
            loc.emplace_back(local_of_[gi], c);
          }
          if (!loc.empty()) submit_local(tb, loc);
        }
    }
  }

  // ---- budget / interruption / persistence hooks -----------------------

  std::uint64_t elapsed_ms() const {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                              start_)
            .count());
  }

  bool save_to_path() {
    if (opts_.checkpoint_path.empty()) return false;
    atomic_write(opts_.checkpoint_path, [&](std::ostream& os) { save(os); });
    return true;
  }

  void safepoint() {
    if (g_interrupt.load(std::memory_order_relaxed)) {
      const bool saved = save_to_path();
      throw Interrupted("interrupted", saved, opts_.checkpoint_path);
    }
    if (opts_.budget.wall_ms && elapsed_ms() > opts_.budget.wall_ms) {
      const bool saved = save_to_path();
      throw BudgetExceeded("wall clock budget exhausted", saved,
                           opts_.checkpoint_path);
    }
    if (rows_bytes_ + pending_bytes_ > (opts_.budget.max_row_mb << 20)) {
      const bool saved = save_to_path();
      throw BudgetExceeded("memory budget exhausted", saved,
                           opts_.checkpoint_path);
    }
    if (!opts_.checkpoint_path.empty() && opts_.checkpoint_every_ms) {
      const auto now = Clock::now();
      if (std::chrono::duration_cast<std::chrono::milliseconds>(now - last_save_)
              .count() >= static_cast<std::int64_t>(opts_.checkpoint_every_ms)) {
        save_to_path();
        last_save_ = now;
      }
    }
  }

  static void write_coeff(std::ostream& os, const Coeff& c) {
    if constexpr (std::is_same_v<P, Gf2Rows>)
      (void)c;  // presence alone encodes the coefficient
    else if constexpr (std::is_same_v<P, ByteRows>)
      bin::put_u8(os, static_cast<std::uint8_t>(c));
    else
      bin::put_string(os, c.str());
  }

  Coeff read_coeff(std::istream& is) const {
    if constexpr (std::is_same_v<P, Gf2Rows>)
      return 1;
    else if constexpr (std::is_same_v<P, ByteRows>)
      return Coeff(bin::get_u8(is));
    else
      return Coeff(bin::get_string(is));
  }

  WordCodec codec_;
  Ring ring_;
  std::uint32_t n_, d_, D_;
  FieldSpec field_;
  BlockScheme scheme_;
  SeedMode mode_;
  BuildOptions opts_;
  std::vector<Generator> gens_;
  std::vector<Block> blocks_;
  std::map<std::vector<std::uint16_t>, std::uint32_t> block_index_;
  std::vector<std::uint32_t> block_of_, local_of_;
  std::deque<Pending> queue_;
  Phase phase_ = Phase::seeding;
  std::uint64_t seeds_done_ = 0;
  std::uint64_t rows_bytes_ = 0, pending_bytes_ = 0;
  Clock::time_point start_{}, last_save_{};
};

// ---- type-erased front end ----------------------------------------------

using AnyRelSpace = std::variant<RelationSpace<Gf2Rows>, RelationSpace<ByteRows>,
                                 RelationSpace<RatRows>>;

inline AnyRelSpace make_relation_space(std::uint32_t n, std::uint32_t d,
                                       const FieldSpec& field, std::uint32_t D,
                                       BlockScheme scheme, SeedMode mode,
                                       const BuildOptions& opts) {
  if (field.p == 2)
    return AnyRelSpace{std::in_place_type<RelationSpace<Gf2Rows>>,
                       PrimeField(2), n, d, field, D, scheme, mode, opts};
  if (field.p != 0)
    return AnyRelSpace{std::in_place_type<RelationSpace<ByteRows>>,
                       PrimeField(field.p), n, d, field, D, scheme, mode, opts};
  return AnyRelSpace{std::in_place_type<RelationSpace<RatRows>>,
                     RationalRing{}, n, d, field, D, scheme, mode, opts};
}

inline void build(AnyRelSpace& s) {
  std::visit([](auto& e) { e.build(); }, s);
}
inline bool degree_words_contained(const AnyRelSpace& s, std::uint32_t k) {
  return std::visit([&](const auto& e) { return e.degree_words_contained(k); }, s);
}
inline std::vector<std::uint64_t> quotient_dims(const AnyRelSpace& s,
                                                std::uint32_t kmax) {
  return std::visit([&](const auto& e) { return e.quotient_dims(kmax); }, s);
}
inline std::vector<std::uint64_t> basis_words(const AnyRelSpace& s,
                                              std::uint32_t kmax) {
  return std::visit([&](const auto& e) { return e.basis_words(kmax); }, s);
}
inline FlatSpace flatten(const AnyRelSpace& s) {
  return std::visit([](const auto& e) { return e.flatten(); }, s);
}
inline std::uint64_t total_rank(const AnyRelSpace& s) {
  return std::visit([](const auto& e) { return e.total_rank(); }, s);
}
inline std::uint64_t coords(const AnyRelSpace& s) {
  return std::visit([](const auto& e) { return e.coords(); }, s);
}
inline std::uint32_t trunc_degree(const AnyRelSpace& s) {
  return std::visit([](const auto& e) { return e.trunc_degree(); }, s);
}

template <class Ring>
bool contains(const AnyRelSpace& s, const FreePoly<Ring>& f) {
  return std::visit(
      [&](const auto& e) -> bool {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<typename E::Ring, Ring>)
          return e.contains(f);
        else
          throw std::invalid_argument(
              "coefficient ring does not match the engine");
      },
      s);
}

inline AnyRelSpace load_checkpoint(const std::string& path, BuildOptions opts,
                                   CheckpointHeader* out_header = nullptr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  const CheckpointHeader h = read_header(is);
  if (out_header) *out_header = h;
  opts.header = h;
  opts.max_arg_degree = h.max_arg_degree;
  AnyRelSpace s = make_relation_space(
      h.n, h.d, h.field, h.trunc_degree, static_cast<BlockScheme>(h.scheme),
      static_cast<SeedMode>(h.seed_mode), opts);
  std::visit([&](auto& e) { e.load(is); }, s);
  return s;
}

// reference construction: the span of u * x^n * v over every x combining the
// words of degree <= max_arg_degree with all possible coefficients, closed
// under letter multiplication, in one undivided block
inline AnyRelSpace oracle_relation_space(std::uint32_t n, std::uint32_t d,
                                         std::uint32_t q, std::uint32_t D,
                                         std::uint32_t max_arg_degree,
                                         BuildOptions opts = {}) {
  const FieldSpec field = FieldSpec::finite(q);
  opts.max_arg_degree = max_arg_degree;
  AnyRelSpace s = make_relation_space(n, d, field, D, BlockScheme::single,
                                      SeedMode::powers_of_sums, opts);
  build(s);
  return s;
}

// ---- nilpotency scan ------------------------------------------------------

struct NilpotencyResult {
  std::uint32_t n = 0, d = 0;
  FieldSpec field;
  std::uint32_t dmax = 0;
  bool reached = false;
  std::uint32_t degree = 0;  // least D with every degree-D word in the ideal
  // true: a failed probe at degree-1 certifies minimality; false: degree == n
  // and no smaller degree can contain words at all
  bool boundary_observed = false;
  std::vector<std::pair<std::uint32_t, bool>> probes;  // in probe order
  std::optional<AnyRelSpace> space;  // the build at the certified degree
};

// starting guess for the scan; correctness never depends on it, since the
// scan always pins the boundary by an explicit pass/fail pair
inline std::uint32_t probe_start(std::uint32_t n, std::uint32_t d,
                                 const FieldSpec& f) {
  if (f.p == 0 || f.p > n) return n * (n + 1) / 2;
  if (f.p == 3 && n == 3) return 3 * d + 1;
  if (f.p == 2 && n == 2) return d + 1;
  return n;
}

inline std::uint32_t default_dmax(std::uint32_t n, std::uint32_t d,
                                  const FieldSpec& f) {
  return std::max(n * n, probe_start(n, d, f) + 2);
}

inline NilpotencyResult nilpotency_degree(
    std::uint32_t n, std::uint32_t d, const FieldSpec& field,
    std::uint32_t dmax, BuildOptions opts,
    std::optional<std::pair<std::uint32_t, AnyRelSpace>> resumed = std::nullopt,
    const std::vector<std::pair<std::uint32_t, bool>>& prior = {}) {
  if (dmax < 1) throw std::invalid_argument("the degree cap must be at least 1");
  NilpotencyResult res;
  res.n = n;
  res.d = d;
  res.field = field;
  res.dmax = dmax;
  res.probes = prior;
  if (opts.header.command.empty()) opts.header.command = "nilpotency";
  opts.header.dmax = dmax;
  const BlockScheme scheme = scheme_for(field);

  std::optional<AnyRelSpace> last_pass;
  std::uint32_t last_pass_deg = 0;

  auto known = [&](std::uint32_t D) -> std::optional<bool> {
    for (const auto& [k, v] : res.probes)
      if (k == D) return v;
    return std::nullopt;
  };
  auto build_at = [&](std::uint32_t D) -> AnyRelSpace {
    if (resumed && resumed->first == D) {
      AnyRelSpace s = std::move(resumed->second);
      resumed.reset();
      return s;
    }
    opts.header.observations.clear();
    for (const auto& [k, v] : res.probes)
      opts.header.observations.emplace_back(k, v ? 1 : 0);
    AnyRelSpace s =
        make_relation_space(n, d, field, D, scheme, SeedMode::generators, opts);
    build(s);
    return s;
  };
  auto probe = [&](std::uint32_t D) -> bool {
    if (auto v = known(D)) return *v;
    AnyRelSpace s = build_at(D);
    const bool ok = degree_words_contained(s, D);
    res.probes.emplace_back(D, ok);
    if (ok) {
      last_pass = std::move(s);
      last_pass_deg = D;
    }
    return ok;
  };
  auto certify = [&](std::uint32_t C) {
    res.reached = true;
    res.degree = C;
    for (const auto& [k, v] : res.probes)
      if (k + 1 == C && !v) res.boundary_observed = true;
    if (!last_pass || last_pass_deg != C) {
      last_pass = build_at(C);
      last_pass_deg = C;
    }
    res.space = std::move(last_pass);
  };

  std::uint32_t D = std::min(std::max(probe_start(n, d, field), 1u), dmax);
  for (;;) {
    if (probe(D)) {
      // the ideal is empty below degree n, so a pass at n is already minimal
      if (D <= n) {
        certify(D);
        break;
      }
      if (auto below = known(D - 1); below && !*below) {
        certify(D);
        break;
      }
      --D;
    } else {
      if (auto above = known(D + 1); above && *above) {
        certify(D + 1);
        break;
      }
      if (D + 1 > dmax) break;  // not reached within the cap
      ++D;
    }
  }
  return res;
}

}  // namespace nilcrunch
