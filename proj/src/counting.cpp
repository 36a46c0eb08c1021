#include "symdyn/counting.hpp"

#include <algorithm>

namespace symdyn {

LanguageCount::LanguageCount(const Subshift& s) : s_(s), full_(s.is_full()) {
  if (!full_ && !s.is_one_step())
    fail(ErrorKind::kNotOneStep, "exact counting needs a full shift or 1-step SFT");
}

void LanguageCount::grow_cont(long long j) const {
  int k = s_.alphabet_size();
  if (cont_.empty()) cont_.push_back(std::vector<BigUInt>(k, BigUInt(1)));
  while (static_cast<long long>(cont_.size()) <= j) {
    const auto& prev = cont_.back();
    std::vector<BigUInt> next(k);
    for (int a = 0; a < k; ++a) {
      BigUInt acc;
      for (int b = 0; b < k; ++b) {
        if (s_.matrix()[a][b]) acc += prev[b];
      }
      next[a] = std::move(acc);
    }
    cont_.push_back(std::move(next));
  }
}

void LanguageCount::grow_into(long long j) const {
  int k = s_.alphabet_size();
  if (into_.empty()) into_.push_back(std::vector<BigUInt>(k, BigUInt(1)));
  while (static_cast<long long>(into_.size()) <= j) {
    const auto& prev = into_.back();
    std::vector<BigUInt> next(k);
    for (int b = 0; b < k; ++b) {
      BigUInt acc;
      for (int c = 0; c < k; ++c) {
        if (s_.matrix()[c][b]) acc += prev[c];
      }
      next[b] = std::move(acc);
    }
    into_.push_back(std::move(next));
  }
}

BigUInt LanguageCount::continuations(Sym state, long long j) const {
  if (j < 0) fail(ErrorKind::kInternal, "negative continuation length");
  if (j == 0) return BigUInt(1);
  if (full_) return BigUInt::pow_small(static_cast<std::uint64_t>(k()), static_cast<std::uint64_t>(j));
  grow_cont(j);
  return cont_[static_cast<std::size_t>(j)][state];
}

BigUInt LanguageCount::extensions_into(Sym state, long long j) const {
  if (j < 0) fail(ErrorKind::kInternal, "negative extension length");
  if (j == 0) return BigUInt(1);
  if (full_) return BigUInt::pow_small(static_cast<std::uint64_t>(k()), static_cast<std::uint64_t>(j));
  grow_into(j);
  return into_[static_cast<std::size_t>(j)][state];
}

BigUInt LanguageCount::ending_at(Sym state, long long j) const {
  if (j < 1) fail(ErrorKind::kInternal, "ending_at needs length >= 1");
  if (full_) {
    return BigUInt::pow_small(static_cast<std::uint64_t>(k()),
                              static_cast<std::uint64_t>(j - 1));
  }
  int k = s_.alphabet_size();
  if (end_.empty()) {
    end_.push_back({});  // unused slot for j = 0
    end_.push_back(std::vector<BigUInt>(k, BigUInt(1)));
  }
  while (static_cast<long long>(end_.size()) <= j) {
    const auto& prev = end_.back();
    std::vector<BigUInt> next(k);
    for (int t = 0; t < k; ++t) {
      BigUInt acc;
      for (int s = 0; s < k; ++s) {
        if (s_.matrix()[s][t]) acc += prev[s];
      }
      next[t] = std::move(acc);
    }
    end_.push_back(std::move(next));
  }
  return end_[static_cast<std::size_t>(j)][state];
}

BigUInt LanguageCount::words_total(long long L) const {
  if (L <= 0) return BigUInt(1);
  if (full_) return BigUInt::pow_small(static_cast<std::uint64_t>(k()), static_cast<std::uint64_t>(L));
  grow_cont(L - 1);
  BigUInt acc;
  for (int a = 0; a < k(); ++a) acc += cont_[static_cast<std::size_t>(L - 1)][a];
  return acc;
}

BigUInt LanguageCount::path_count(Sym a, Sym b, long long e) const {
  if (e < 0) fail(ErrorKind::kInternal, "negative path length");
  if (e == 0) return BigUInt(a == b ? 1 : 0);
  if (full_) {
    return BigUInt::pow_small(static_cast<std::uint64_t>(k()),
                              static_cast<std::uint64_t>(e - 1));
  }
  int k = s_.alphabet_size();
  if (pow_.empty()) {
    std::vector<std::vector<BigUInt>> m(k, std::vector<BigUInt>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = BigUInt(s_.matrix()[i][j] ? 1 : 0);
    pow_.push_back(std::move(m));
  }
  auto matmul = [k](const auto& x, const auto& y) {
    std::vector<std::vector<BigUInt>> z(k, std::vector<BigUInt>(k));
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l) {
        if (x[i][l].is_zero()) continue;
        for (int j = 0; j < k; ++j) {
          if (!y[l][j].is_zero()) z[i][j] += BigUInt::mul(x[i][l], y[l][j]);
        }
      }
    return z;
  };
  long long bits = 0;
  for (long long t = e; t > 1; t >>= 1) ++bits;
  while (static_cast<long long>(pow_.size()) <= bits)
    pow_.push_back(matmul(pow_.back(), pow_.back()));
  // Multiply the needed powers into a row vector seeded at a.
  std::vector<BigUInt> row(k);
  row[a] = BigUInt(1);
  long long rem = e;
  int idx = 0;
  while (rem) {
    if (rem & 1) {
      const auto& m = pow_[static_cast<std::size_t>(idx)];
      std::vector<BigUInt> next(k);
      for (int i = 0; i < k; ++i) {
        if (row[i].is_zero()) continue;
        for (int j = 0; j < k; ++j) {
          if (!m[i][j].is_zero()) next[j] += BigUInt::mul(row[i], m[i][j]);
        }
      }
      row = std::move(next);
    }
    rem >>= 1;
    ++idx;
  }
  return row[b];
}

LexBlock::LexBlock(const Subshift& s, Sym left_context, long long length)
    : s_(s), counts_(s), left_(left_context), length_(length), full_(s.is_full()) {
  if (length_ < 0) fail(ErrorKind::kPrecondition, "filling length must be >= 0");
  universe_ = counts_.continuations(left_, length_);
}

bool LexBlock::is_filling(const Word& w) const {
  if (static_cast<long long>(w.size()) != length_) return false;
  Sym prev = left_;
  for (Sym c : w) {
    if (static_cast<int>(c) >= s_.alphabet_size()) return false;
    if (!full_ && !s_.transition_allowed(prev, c)) return false;
    prev = c;
  }
  return true;
}

BigUInt LexBlock::rank(const Word& w) const {
  if (!is_filling(w)) fail(ErrorKind::kInternal, "rank of a non-filling");
  BigUInt r;
  Sym prev = left_;
  for (long long v = 0; v < length_; ++v) {
    Sym c = w[static_cast<std::size_t>(v)];
    for (int b = 0; b < static_cast<int>(c); ++b) {
      if (full_ || s_.transition_allowed(prev, static_cast<Sym>(b)))
        r += counts_.continuations(static_cast<Sym>(b), length_ - v - 1);
    }
    prev = c;
  }
  return r;
}

Word LexBlock::unrank(BigUInt r) const {
  if (r >= universe_) fail(ErrorKind::kInternal, "unrank out of range");
  Word w;
  w.reserve(static_cast<std::size_t>(length_));
  Sym prev = left_;
  for (long long v = 0; v < length_; ++v) {
    for (int b = 0;; ++b) {
      if (b >= s_.alphabet_size()) fail(ErrorKind::kInternal, "unrank overflow");
      if (!full_ && !s_.transition_allowed(prev, static_cast<Sym>(b))) continue;
      BigUInt below = counts_.continuations(static_cast<Sym>(b), length_ - v - 1);
      if (r < below) {
        w.push_back(static_cast<Sym>(b));
        prev = static_cast<Sym>(b);
        break;
      }
      r -= below;
    }
  }
  return w;
}

LexBlock::PrefixCut LexBlock::prefix_cut(const Word& w, long long v) const {
  if (v < 0 || v > length_ || v > static_cast<long long>(w.size()))
    fail(ErrorKind::kInternal, "bad prefix cut");
  PrefixCut cut;
  if (v == 0) return cut;
  if (full_) {
    // Lex rank of the prefix as a base-k number.
    BigUInt val;
    for (long long i = 0; i < v; ++i) {
      val.mul_small(static_cast<std::uint64_t>(s_.alphabet_size()));
      val += BigUInt(w[static_cast<std::size_t>(i)]);
    }
    cut.below_words = BigUInt::mul(
        val, BigUInt::pow_small(static_cast<std::uint64_t>(s_.alphabet_size()),
                                static_cast<std::uint64_t>(length_ - v)));
    cut.below_prefixes = std::move(val);
    return cut;
  }
  int k = s_.alphabet_size();
  // rho[t] = #viable j-prefixes below w's j-prefix ending at symbol t.
  std::vector<BigUInt> rho(k);
  Sym prev = left_;
  for (long long j = 1; j <= v; ++j) {
    std::vector<BigUInt> next(k);
    for (int t = 0; t < k; ++t) {
      BigUInt acc;
      for (int s = 0; s < k; ++s) {
        if (!rho[s].is_zero() && s_.matrix()[s][t]) acc += rho[s];
      }
      next[t] = std::move(acc);
    }
    Sym wc = w[static_cast<std::size_t>(j - 1)];
    for (int t = 0; t < static_cast<int>(wc); ++t) {
      if (s_.matrix()[prev][t]) next[t] += BigUInt(1);
    }
    rho = std::move(next);
    prev = wc;
  }
  for (int t = 0; t < k; ++t) {
    if (rho[t].is_zero()) continue;
    cut.below_prefixes += rho[t];
    cut.below_words +=
        BigUInt::mul(rho[t], counts_.continuations(static_cast<Sym>(t), length_ - v));
  }
  return cut;
}

BigUInt LexBlock::with_prefix(const Word& w, long long v) const {
  if (v < 0 || v > length_) fail(ErrorKind::kInternal, "bad prefix length");
  if (v == 0) return universe_;
  Sym prev = left_;
  for (long long i = 0; i < v; ++i) {
    Sym c = w[static_cast<std::size_t>(i)];
    if (!full_ && !s_.transition_allowed(prev, c)) return BigUInt();
    prev = c;
  }
  return counts_.continuations(prev, length_ - v);
}

}  // namespace symdyn
