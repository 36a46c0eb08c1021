#pragma once

#include <vector>

#include "symdyn/bigint.hpp"
#include "symdyn/core.hpp"

namespace symdyn {

// Exact word counts for a full shift or 1-step SFT.  Full shifts use closed
// forms (k^j); SFTs use cached count vectors and binary matrix powers, all in
// BigUInt so counts at horizon tens of thousands stay exact.
class LanguageCount {
 public:
  explicit LanguageCount(const Subshift& s);

  const Subshift& shift() const { return s_; }
  int k() const { return s_.alphabet_size(); }

  // #admissible words u of length j with the transition state->u_1 allowed
  // (continuations "to the right of" state).  j = 0 gives 1.
  BigUInt continuations(Sym state, long long j) const;
  // #admissible words u of length j with u_j -> state allowed.
  BigUInt extensions_into(Sym state, long long j) const;
  // #admissible words of length j whose last symbol is `state` (j >= 1).
  BigUInt ending_at(Sym state, long long j) const;
  // #admissible words of length L (L >= 1); L = 0 gives 1.
  BigUInt words_total(long long L) const;
  // #paths from a to b using exactly e transitions ((M^e)_{a,b}).
  BigUInt path_count(Sym a, Sym b, long long e) const;

 private:
  void grow_cont(long long j) const;
  void grow_into(long long j) const;
  Subshift s_;
  bool full_;
  mutable std::vector<std::vector<BigUInt>> cont_;  // cont_[j][s]
  mutable std::vector<std::vector<BigUInt>> into_;  // into_[j][s]
  mutable std::vector<std::vector<BigUInt>> end_;   // end_[j][s]
  mutable std::vector<std::vector<std::vector<BigUInt>>> pow_;  // M^(2^i)
};

// Lexicographic enumeration of the admissible length-L fillings that may
// follow a fixed left-context symbol.  This is the backbone of the staged
// constructions: stages hold "the first N fillings" instead of N points.
class LexBlock {
 public:
  LexBlock(const Subshift& s, Sym left_context, long long length);

  long long length() const { return length_; }
  const BigUInt& universe() const { return universe_; }

  bool is_filling(const Word& w) const;
  BigUInt rank(const Word& w) const;
  Word unrank(BigUInt r) const;

  // Prefix statistics at a single cut v in [0, L]:
  //   below_prefixes = #viable v-prefixes lexicographically below w's v-prefix
  //   below_words    = #fillings whose v-prefix is below w's v-prefix
  struct PrefixCut {
    BigUInt below_prefixes;
    BigUInt below_words;
  };
  PrefixCut prefix_cut(const Word& w, long long v) const;

  // #fillings sharing w's v-prefix.
  BigUInt with_prefix(const Word& w, long long v) const;

 private:
  Subshift s_;
  LanguageCount counts_;
  Sym left_;
  long long length_;
  BigUInt universe_;
  bool full_;
};

}  // namespace symdyn
