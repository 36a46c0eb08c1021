#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/errors.hpp"

namespace symdyn {

using Sym = std::uint8_t;
using Word = std::vector<Sym>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

struct Alphabet {
  int size = 2;
  bool valid_word(const Word& w) const;
};

// Inclusive coordinate interval [lo, hi].
struct WindowSpec {
  long long lo = 0;
  long long hi = 0;
  long long length() const { return hi - lo + 1; }
  bool contains(const WindowSpec& inner) const {
    return lo <= inner.lo && inner.hi <= hi;
  }
  WindowSpec shifted(long long t) const { return {lo + t, hi + t}; }
  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

// For the dyadic metric d(x,y) = 2^{-min{|i| : x_i != y_i}} and eps = 2^{-m}:
// d_n(x,y) > eps  iff  x,y differ somewhere on separation_window(n,m).
WindowSpec separation_window(long long n, long long m);
// d_l(x,x0) < 2^{-m}  iff  x agrees with x0 on ball_window(l,m).
WindowSpec ball_window(long long l, long long m);

// Two-sided sequence with finitely many "interesting" coordinates: a
// left-periodic tail, a center block, a right-periodic tail.  Construction
// canonicalizes (primitive periods, center absorbed into the tails), so
// structural equality is semantic equality.
class BiInfinitePoint {
 public:
  BiInfinitePoint(Word left_period, Word center, Word right_period, long long anchor);

  static BiInfinitePoint constant(Sym s) { return BiInfinitePoint({s}, {}, {s}, 0); }
  static BiInfinitePoint parse(const std::string& literal);
  std::string to_literal() const;

  Sym at(long long i) const;
  Word window(const WindowSpec& w) const;
  BiInfinitePoint shifted(long long t) const;  // result_i = this_{i+t}

  const Word& left_period() const { return left_; }
  const Word& center() const { return center_; }
  const Word& right_period() const { return right_; }
  long long anchor() const { return anchor_; }
  // First coordinate of the canonical right-periodic tail.
  long long right_start() const {
    return anchor_ + static_cast<long long>(center_.size());
  }
  // Greatest coordinate c such that the point is left-periodic on (-inf, c).
  long long left_end() const { return anchor_; }
  int max_symbol() const;

  friend bool operator==(const BiInfinitePoint& a, const BiInfinitePoint& b) {
    return a.anchor_ == b.anchor_ && a.left_ == b.left_ && a.center_ == b.center_ &&
           a.right_ == b.right_;
  }
  bool operator<(const BiInfinitePoint& o) const;  // arbitrary total order for sets

 private:
  void canonicalize();
  Word left_, center_, right_;
  long long anchor_ = 0;  // coordinate of first center symbol (or right tail start)
};

// Full shift or SFT given by finitely many forbidden words; an adjacency
// matrix view is available when all forbidden words have length 2.
class Subshift {
 public:
  Subshift() { finish_setup(); }  // full 2-shift
  static Subshift full(int alphabet_size);
  static Subshift forbid(int alphabet_size, std::vector<Word> forbidden,
                         bool one_sided = false);
  static Subshift from_matrix(const std::vector<std::vector<int>>& allow,
                              bool one_sided = false);

  int alphabet_size() const { return k_; }
  bool is_full() const { return forbidden_.empty(); }
  bool is_one_step() const { return one_step_; }
  bool one_sided() const { return one_sided_; }
  const std::vector<Word>& forbidden() const { return forbidden_; }
  std::size_t max_forbidden_length() const { return max_forbidden_len_; }

  bool transition_allowed(Sym a, Sym b) const;
  const std::vector<std::vector<int>>& matrix() const;

  bool word_admissible(const Word& w) const;
  bool point_admissible(const BiInfinitePoint& p) const;

  bool irreducible() const;
  // Smallest R with M^R > 0 entrywise, if one exists (primitivity / mixing).
  std::optional<int> mixing_gap(int cap = 64) const;
  bool mixing() const { return mixing_gap().has_value(); }

  // Unique allowed successor of a, if the transition row forces one.
  std::optional<Sym> forced_successor(Sym a) const;
  std::vector<Sym> successors(Sym a) const;
  std::vector<Sym> predecessors(Sym b) const;

  // Non-overlapping m-block recode (the power system T^m seen through the
  // time-0 partition): symbols are admissible m-words, w -> w' allowed iff
  // ww' is admissible.  Entropy scales by m.
  std::pair<Subshift, std::vector<Word>> reblock(int m) const;
  // Overlapping higher-block recode (a conjugacy): symbols are admissible
  // m-words overlapping in m-1 places.  Turns an SFT with forbidden words of
  // length <= m into a 1-step SFT with the same entropy.
  std::pair<Subshift, std::vector<Word>> higher_block(int m) const;

  std::string describe() const;

 private:
  void finish_setup();
  int k_ = 2;
  bool one_sided_ = false;
  std::vector<Word> forbidden_;
  std::size_t max_forbidden_len_ = 0;
  bool one_step_ = true;
  std::vector<std::vector<int>> allow_;  // k x k, valid iff one_step_
};

// shift_by(p, t)_i = p_{i+t}
BiInfinitePoint shift_by(const BiInfinitePoint& p, long long t);
Word window_of(const BiInfinitePoint& p, const WindowSpec& w);
bool is_admissible(const Subshift& s, const Word& w);
bool is_admissible(const Subshift& s, const BiInfinitePoint& p);

}  // namespace symdyn
