#pragma once

// Brute-force oracles shared by the unit and acceptance suites.  These stay
// independent of the library's counting paths: everything here works from
// materialized symbol windows.

#include <random>
#include <set>
#include <vector>

#include "symdyn/core.hpp"

namespace symdyn::oracles {

// Largest pairwise (d_n > eps)-separated subset by exhaustive subset search.
inline std::size_t brute_max_separated(const std::vector<BiInfinitePoint>& pts, long long n,
                                       long long m) {
  WindowSpec w = separation_window(n, m);
  std::vector<Word> wins;
  for (const auto& p : pts) wins.push_back(p.window(w));
  std::size_t cnt = pts.size();
  if (cnt > 18) throw std::runtime_error("too many points for the exhaustive oracle");
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (1u << cnt); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < cnt && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < cnt && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        if (wins[i] == wins[j]) ok = false;  // d_n <= eps iff the windows agree
      }
    }
    if (ok)
      best = std::max<std::size_t>(best,
                                   static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
  return best;
}

// Minimum spanning cardinality.  A center covers exactly the points sharing
// its window, so candidate centers reduce to the window classes; all center
// sets one below the class count are exhausted (coverage is monotone), and
// off-class candidates are probed to cover nothing.
inline std::size_t brute_min_spanning(const std::vector<BiInfinitePoint>& pts, long long n,
                                      long long m, std::mt19937_64& rng, bool* ok) {
  WindowSpec w = separation_window(n, m);
  std::set<Word> classes;
  for (const auto& p : pts) classes.insert(p.window(w));
  std::vector<Word> cl(classes.begin(), classes.end());
  std::size_t c = cl.size();
  auto covers = [&](const std::vector<Word>& centers) {
    for (const auto& p : pts) {
      Word win = p.window(w);
      bool hit = false;
      for (const auto& cw : centers) hit = hit || (cw == win);
      if (!hit) return false;
    }
    return true;
  };
  *ok = covers(cl);
  for (std::size_t drop = 0; drop < c && *ok; ++drop) {
    std::vector<Word> sub;
    for (std::size_t i = 0; i < c; ++i) {
      if (i != drop) sub.push_back(cl[i]);
    }
    if (covers(sub)) *ok = false;
  }
  int alphabet = 2;
  for (const auto& p : pts) alphabet = std::max(alphabet, p.max_symbol() + 1);
  for (int probe = 0; probe < 20 && *ok; ++probe) {
    Word r(static_cast<std::size_t>(w.length()));
    for (auto& s : r) s = static_cast<Sym>(rng() % alphabet);
    if (classes.count(r)) continue;
    for (const auto& p : pts) {
      if (p.window(w) == r) *ok = false;
    }
  }
  return c;
}

inline std::vector<BiInfinitePoint> random_points(std::mt19937_64& rng, const Subshift& s,
                                                  std::size_t count) {
  std::vector<BiInfinitePoint> out;
  while (out.size() < count) {
    Word c;
    int len = static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) c.push_back(static_cast<Sym>(rng() % s.alphabet_size()));
    long long anchor = static_cast<long long>(rng() % 9) - 4;
    BiInfinitePoint p({0}, c, {0}, anchor);
    if (!s.point_admissible(p)) continue;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

}  // namespace symdyn::oracles
