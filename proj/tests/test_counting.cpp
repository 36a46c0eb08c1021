#include <random>
#include <set>

#include "doctest.h"
#include "symdyn/counting.hpp"

using namespace symdyn;

namespace {

// Brute-force filling enumeration for small lengths.
std::vector<Word> brute_fillings(const Subshift& s, Sym left, long long L) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, Sym prev, long long d) -> void {
    if (d == L) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c < s.alphabet_size(); ++c) {
      if (!s.is_full() && !s.transition_allowed(prev, static_cast<Sym>(c))) continue;
      cur.push_back(static_cast<Sym>(c));
      self(self, static_cast<Sym>(c), d + 1);
      cur.pop_back();
    }
  };
  rec(rec, left, 0);
  return out;  // already lexicographic
}

}  // namespace

TEST_CASE("language counts by brute force") {
  Subshift gm = Subshift::forbid(2, {word_from_string("11")});
  LanguageCount lc(gm);
  // Fibonacci word counts: #admissible length-L words = F_{L+2}.
  std::vector<std::uint64_t> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233};
  for (long long L = 1; L <= 10; ++L)
    CHECK(lc.words_total(L) == BigUInt(fib[static_cast<std::size_t>(L + 1)]));
  for (long long L = 0; L <= 9; ++L) {
    CHECK(lc.continuations(0, L) == BigUInt(static_cast<std::uint64_t>(
                                        brute_fillings(gm, 0, L).size())));
    CHECK(lc.continuations(1, L) == BigUInt(static_cast<std::uint64_t>(
                                        brute_fillings(gm, 1, L).size())));
  }
  // path counts (M^e)_{ab} vs brute force
  for (long long e = 1; e <= 8; ++e) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        std::uint64_t brute = 0;
        for (const auto& w : brute_fillings(gm, static_cast<Sym>(a), e)) {
          if (w.back() == b) ++brute;
        }
        CHECK(lc.path_count(static_cast<Sym>(a), static_cast<Sym>(b), e) == BigUInt(brute));
      }
  }
  LanguageCount fc(Subshift::full(3));
  CHECK(fc.words_total(5) == BigUInt(243));
  CHECK(fc.continuations(2, 4) == BigUInt(81));
}

TEST_CASE("lex block rank/unrank round trip and order") {
  std::mt19937_64 rng(5);
  for (const Subshift& s :
       {Subshift::full(2), Subshift::full(3), Subshift::forbid(2, {word_from_string("11")}),
        Subshift::forbid(3, {word_from_string("20"), word_from_string("12")})}) {
    for (long long L = 1; L <= 7; ++L) {
      LexBlock blk(s, 0, L);
      auto all = brute_fillings(s, 0, L);
      REQUIRE(blk.universe() == BigUInt(static_cast<std::uint64_t>(all.size())));
      for (std::size_t r = 0; r < all.size(); ++r) {
        CHECK(blk.unrank(BigUInt(static_cast<std::uint64_t>(r))) == all[r]);
        CHECK(blk.rank(all[r]) == BigUInt(static_cast<std::uint64_t>(r)));
      }
    }
  }
  (void)rng;
}

TEST_CASE("prefix cuts against brute force") {
  for (const Subshift& s :
       {Subshift::full(2), Subshift::forbid(2, {word_from_string("11")}),
        Subshift::forbid(3, {word_from_string("20"), word_from_string("12")})}) {
    long long L = 6;
    LexBlock blk(s, 0, L);
    auto all = brute_fillings(s, 0, L);
    for (std::size_t r = 0; r < all.size(); r += 3) {
      const Word& w = all[r];
      for (long long v = 0; v <= L; ++v) {
        Word pref(w.begin(), w.begin() + static_cast<long>(v));
        std::set<Word> below_prefixes;
        std::uint64_t below_words = 0, with_pref = 0;
        for (const auto& u : all) {
          Word upref(u.begin(), u.begin() + static_cast<long>(v));
          if (upref < pref) {
            below_prefixes.insert(upref);
            ++below_words;
          }
          if (upref == pref) ++with_pref;
        }
        auto cut = blk.prefix_cut(w, v);
        CHECK(cut.below_prefixes ==
              BigUInt(static_cast<std::uint64_t>(below_prefixes.size())));
        CHECK(cut.below_words == BigUInt(below_words));
        CHECK(blk.with_prefix(w, v) == BigUInt(with_pref));
      }
    }
  }
}

TEST_CASE("ending_at and extensions_into by brute force") {
  Subshift s = Subshift::forbid(3, {word_from_string("20"), word_from_string("01")});
  LanguageCount lc(s);
  for (long long L = 1; L <= 7; ++L) {
    std::vector<std::uint64_t> end_count(3, 0), into_count(3, 0);
    Word cur;
    auto rec = [&](auto&& self, long long d) -> void {
      if (d == L) {
        ++end_count[cur.back()];
        for (int b = 0; b < 3; ++b)
          if (s.transition_allowed(cur.back(), static_cast<Sym>(b))) ++into_count[b];
        return;
      }
      for (int c = 0; c < 3; ++c) {
        cur.push_back(static_cast<Sym>(c));
        if (s.word_admissible(cur)) self(self, d + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    for (int t = 0; t < 3; ++t) {
      CHECK(lc.ending_at(static_cast<Sym>(t), L) == BigUInt(end_count[t]));
      CHECK(lc.extensions_into(static_cast<Sym>(t), L) == BigUInt(into_count[t]));
    }
  }
}
