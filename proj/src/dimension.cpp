#include "symdyn/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace symdyn {

std::optional<long long> n_value(const Subshift& s, const Word& w) {
  if (w.empty()) fail(ErrorKind::kPrecondition, "n_value needs a non-empty word");
  if (!s.word_admissible(w)) fail(ErrorKind::kInadmissibleWord, "n_value of an inadmissible word");
  if (s.alphabet_size() == 1) return std::nullopt;  // a single point tracks forever
  // Follow deterministically forced continuations.  The follower state is the
  // suffix of length (max forbidden length - 1), or the last symbol for 1-step.
  std::size_t ctx = std::max<std::size_t>(1, s.max_forbidden_length()) - 1;
  if (s.is_full()) return static_cast<long long>(w.size());
  Word suffix(w.end() - static_cast<long>(std::min(ctx, w.size())), w.end());
  long long extra = 0;
  std::set<Word> seen;
  while (true) {
    std::optional<Sym> forced;
    int options = 0;
    for (int c = 0; c < s.alphabet_size(); ++c) {
      Word probe = suffix;
      probe.push_back(static_cast<Sym>(c));
      if (s.word_admissible(probe)) {
        ++options;
        forced = static_cast<Sym>(c);
      }
    }
    if (options != 1) break;
    if (!seen.insert(suffix).second) return std::nullopt;  // forced cycle
    ++extra;
    suffix.push_back(*forced);
    if (suffix.size() > ctx) suffix.erase(suffix.begin());
    if (extra > 4096) return std::nullopt;
  }
  return static_cast<long long>(w.size()) + extra;
}

namespace {

double weight_of(double lambda, const std::optional<long long>& n) {
  if (!n) return lambda > 0 ? 0.0 : 1.0;
  return std::exp(-lambda * static_cast<double>(*n));
}

// Forced-run table per last symbol for 1-step ambients (nullopt = forced cycle).
std::vector<std::optional<long long>> forced_runs(const Subshift& s) {
  std::vector<std::optional<long long>> out(s.alphabet_size());
  for (int a = 0; a < s.alphabet_size(); ++a) {
    long long run = 0;
    Sym cur = static_cast<Sym>(a);
    std::set<Sym> seen{cur};
    bool infinite = false;
    while (true) {
      auto f = s.forced_successor(cur);
      if (!f) break;
      cur = *f;
      ++run;
      if (!seen.insert(cur).second) {
        infinite = true;
        break;
      }
    }
    out[a] = infinite ? std::optional<long long>() : std::optional<long long>(run);
  }
  return out;
}

struct TreeDp {
  const CylinderTree* t;
  double lambda;
  long long k;
  std::vector<std::optional<long long>> runs;  // 1-step forced runs (by last symbol)
  std::map<std::pair<long long, int>, double> memo;
  LanguageCount* lc = nullptr;

  std::optional<long long> node_n(long long depth, Sym last, const Word& word) const {
    if (t->ambient.is_full()) return depth;
    if (t->ambient.is_one_step()) {
      const auto& r = runs[last];
      if (!r) return std::nullopt;
      return depth + *r;
    }
    return n_value(t->ambient, word);
  }

  // Explicit-word DP over the sorted word range [lo, hi) sharing a prefix of
  // the given depth.
  double explicit_range(std::size_t lo, std::size_t hi, long long depth, const Word& prefix) {
    double take = std::numeric_limits<double>::infinity();
    if (depth > 0) {
      auto n = node_n(depth, prefix.back(), prefix);
      if (!n.has_value() || *n >= k) take = weight_of(lambda, n);
    }
    if (depth == t->depth) return take;
    double sum = 0.0;
    std::size_t i = lo;
    while (i < hi) {
      Sym c = t->words[i][static_cast<std::size_t>(depth)];
      std::size_t j = i;
      while (j < hi && t->words[j][static_cast<std::size_t>(depth)] == c) ++j;
      Word child = prefix;
      child.push_back(c);
      sum += explicit_range(i, j, depth + 1, child);
      i = j;
    }
    return std::min(take, sum);
  }

  double language_node(long long depth, Sym last) {
    auto key = std::make_pair(depth, static_cast<int>(last));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double take = std::numeric_limits<double>::infinity();
    auto n = node_n(depth, last, {});
    bool coverable = !n.has_value() || *n >= k;
    if (coverable) take = weight_of(lambda, n);
    double value;
    if (depth == t->depth) {
      value = take;
    } else {
      double sum = 0.0;
      for (int c = 0; c < t->language.alphabet_size(); ++c) {
        if (!t->language.transition_allowed(last, static_cast<Sym>(c))) continue;
        LanguageCount& counts = *lc;
        if (counts.continuations(static_cast<Sym>(c), t->depth - depth - 1).is_zero())
          continue;
        sum += language_node(depth + 1, static_cast<Sym>(c));
      }
      value = std::min(take, sum);
    }
    memo[key] = value;
    return value;
  }
};

}  // namespace

double m_value(const CylinderTree& K, double lambda, long long k) {
  if (k < 1) fail(ErrorKind::kPrecondition, "cover length floor must be >= 1");
  if (k > K.depth) fail(ErrorKind::kKExceedsDepth, "cover length floor exceeds tree depth");
  if (lambda < 0) fail(ErrorKind::kPrecondition, "lambda must be >= 0");
  TreeDp dp;
  dp.t = &K;
  dp.lambda = lambda;
  dp.k = k;
  if (K.ambient.is_one_step() && !K.ambient.is_full()) dp.runs = forced_runs(K.ambient);
  if (K.language_backed) {
    if (!K.language.is_one_step() && !K.language.is_full())
      fail(ErrorKind::kNotOneStep, "language-backed trees need a 1-step language");
    if (!K.ambient.is_one_step() && !K.ambient.is_full())
      fail(ErrorKind::kNotOneStep, "language-backed trees need a 1-step ambient");
    LanguageCount lc(K.language);
    dp.lc = &lc;
    double sum = 0.0;
    for (int c = 0; c < K.language.alphabet_size(); ++c) {
      if (lc.continuations(static_cast<Sym>(c), K.depth - 1).is_zero()) continue;
      sum += dp.language_node(1, static_cast<Sym>(c));
    }
    return sum;
  }
  if (K.words.empty()) return 0.0;
  return dp.explicit_range(0, K.words.size(), 0, {});
}

namespace {

// Crossing of the monotone predicate m_value(.,lambda,k) >= 1.
std::pair<double, double> crossing(const CylinderTree& K, long long k, double tol) {
  double lo = 0.0;
  if (m_value(K, 0.0, k) < 1.0) return {0.0, 0.0};
  double hi = std::log(static_cast<double>(std::max(2, K.ambient.alphabet_size()))) + 1.0;
  while (m_value(K, hi, k) >= 1.0) hi *= 2;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (m_value(K, mid, k) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace

DimEntropyResult hB_bisect(const CylinderTree& K, double tol) {
  if (tol <= 0) fail(ErrorKind::kPrecondition, "tolerance must be positive");
  DimEntropyResult r;
  r.depth = K.depth;
  r.k_floor = 1;
  std::vector<long long> schedule{1, (K.depth + 1) / 2, K.depth};
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::ostringstream trace;
  for (long long k : schedule) {
    auto [clo, chi] = crossing(K, k, tol / 2);
    lo = std::min(lo, clo);
    hi = std::max(hi, chi);
    trace << "k=" << k << ":[" << clo << "," << chi << "] ";
  }
  r.lambda_low = std::max(0.0, lo);
  r.lambda_high = hi;
  r.cut_trace = trace.str();
  return r;
}

SetDimResult hB_of_set(const CompactSet& K, long long depth, double tol) {
  SetDimResult out;
  if (K.get<FinitePointSet>() || K.get<StagedFamily>()) {
    out.countable = true;
    out.value = 0.0;
    // Finite-depth diagnostics: the outer-tree bracket shrinks like log W / D.
    auto T = outer_tree(K, depth, 0);
    out.bracket = hB_bisect(*T->get<CylinderTree>(), tol);
    out.bracket.lambda_low = 0.0;
    return out;
  }
  auto T = outer_tree(K, depth, 0);
  out.bracket = hB_bisect(*T->get<CylinderTree>(), tol);
  out.value = 0.5 * (out.bracket.lambda_low + out.bracket.lambda_high);
  return out;
}

BridgeReport bridge_check(const CylinderTree& K, long long n_max, double tol) {
  if (K.base != 0)
    fail(ErrorKind::kPrecondition, "bridge check expects a tree based at coordinate 0");
  BridgeReport rep;
  long long cap = std::min(n_max, K.depth);
  std::vector<double> slope(static_cast<std::size_t>(cap) + 1, 0.0);
  for (long long n = 1; n <= cap; ++n)
    slope[static_cast<std::size_t>(n)] =
        tree_level_count(K, n).log_natural() / static_cast<double>(n);
  std::vector<long long> schedule{1, (K.depth + 1) / 2, K.depth};
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  rep.chain_ok = true;
  for (long long k : schedule) {
    double cmin = std::numeric_limits<double>::infinity();
    for (long long n = std::min(k, cap); n <= cap; ++n)
      cmin = std::min(cmin, slope[static_cast<std::size_t>(n)]);
    auto [clo, chi] = crossing(K, k, tol);
    rep.per_k_cover_slope.push_back(cmin);
    rep.per_k_crossing_hi.push_back(chi);
    if (chi > cmin + tol + 1e-9) rep.chain_ok = false;
    if (clo > cmin + 1e-9) rep.chain_ok = false;
  }
  rep.lambda_high = *std::max_element(rep.per_k_crossing_hi.begin(),
                                      rep.per_k_crossing_hi.end());
  double cover_min = std::numeric_limits<double>::infinity();
  double sep_max = 0.0;
  for (long long n = 1; n <= cap; ++n) {
    cover_min = std::min(cover_min, slope[static_cast<std::size_t>(n)]);
    sep_max = std::max(sep_max, slope[static_cast<std::size_t>(n)]);
  }
  rep.cover_slope = cover_min;
  // At m = 1 the separated window is [0, n-1], so separated counts coincide
  // with the cover counts; the limsup proxy is the max slope.
  rep.growth_value = sep_max;
  if (cover_min > sep_max + 1e-12) rep.chain_ok = false;
  rep.note = "cover counts and separated counts share the m=1 window";
  return rep;
}

CylinderTree reblock_tree(const CylinderTree& t, int m) {
  if (m < 1 || t.depth % m != 0)
    fail(ErrorKind::kDepthMismatch, "re-block needs depth divisible by m");
  auto [blocked_ambient, blocks] = (t.language_backed ? t.language : t.ambient).reblock(m);
  CylinderTree out;
  out.ambient = blocked_ambient;
  out.base = 0;
  out.depth = t.depth / m;
  if (t.language_backed) {
    out.language_backed = true;
    out.language = blocked_ambient;
    return out;
  }
  std::map<Word, Sym> index;
  for (std::size_t i = 0; i < blocks.size(); ++i) index[blocks[i]] = static_cast<Sym>(i);
  std::set<Word> words;
  for (const auto& w : t.words) {
    Word bw;
    bool ok = true;
    for (long long i = 0; i < out.depth && ok; ++i) {
      Word chunk(w.begin() + static_cast<long>(i * m), w.begin() + static_cast<long>((i + 1) * m));
      auto it = index.find(chunk);
      if (it == index.end()) ok = false;
      else bw.push_back(it->second);
    }
    if (ok) words.insert(bw);
  }
  out.words.assign(words.begin(), words.end());
  return out;
}

LawsReport hB_laws_check(const std::vector<CylinderTree>& parts, int power_m, double tol) {
  if (parts.empty()) fail(ErrorKind::kPrecondition, "need at least one part");
  for (const auto& p : parts) {
    if (p.base != parts[0].base || p.depth != parts[0].depth)
      fail(ErrorKind::kDepthMismatch, "parts must share base and depth");
  }
  LawsReport rep;
  rep.tolerance = tol;
  rep.power_m = power_m;

  // Disjoint first symbols make the union's optimal cover split part-wise;
  // bisect the summed m-values.
  std::set<Sym> seen_first;
  for (const auto& p : parts) {
    std::set<Sym> firsts;
    if (p.language_backed) {
      LanguageCount lc(p.language);
      for (int c = 0; c < p.language.alphabet_size(); ++c) {
        if (!lc.continuations(static_cast<Sym>(c), p.depth - 1).is_zero())
          firsts.insert(static_cast<Sym>(c));
      }
    } else {
      for (const auto& w : p.words) firsts.insert(w[0]);
    }
    for (Sym c : firsts) {
      if (!seen_first.insert(c).second)
        fail(ErrorKind::kPrecondition, "parts must be first-symbol disjoint");
    }
  }
  auto union_m = [&](double lambda, long long k) {
    double sum = 0.0;
    for (const auto& p : parts) sum += m_value(p, lambda, k);
    return sum;
  };
  auto union_crossing = [&](long long k) {
    double lo = 0.0;
    if (union_m(0.0, k) < 1.0) return std::make_pair(0.0, 0.0);
    double hi = std::log(static_cast<double>(std::max(2, parts[0].ambient.alphabet_size()))) + 1.0;
    while (union_m(hi, k) >= 1.0) hi *= 2;
    while (hi - lo > tol / 2) {
      double mid = 0.5 * (lo + hi);
      (union_m(mid, k) >= 1.0 ? lo : hi) = mid;
    }
    return std::make_pair(lo, hi);
  };
  std::vector<long long> schedule{1, (parts[0].depth + 1) / 2, parts[0].depth};
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  double ulo = std::numeric_limits<double>::infinity(), uhi = 0.0;
  for (long long k : schedule) {
    auto [clo, chi] = union_crossing(k);
    ulo = std::min(ulo, clo);
    uhi = std::max(uhi, chi);
  }
  rep.union_lambda = 0.5 * (std::max(0.0, ulo) + uhi);
  double max_part = 0.0;
  for (const auto& p : parts) {
    DimEntropyResult r = hB_bisect(p, tol);
    max_part = std::max(max_part, 0.5 * (r.lambda_low + r.lambda_high));
  }
  rep.max_part_lambda = max_part;
  rep.union_ok = std::abs(rep.union_lambda - rep.max_part_lambda) <= 2 * tol;

  if (power_m >= 1 && parts.size() >= 1) {
    const CylinderTree& base = parts[0];
    DimEntropyResult rb = hB_bisect(base, tol);
    rep.base_lambda = 0.5 * (rb.lambda_low + rb.lambda_high);
    CylinderTree blocked = reblock_tree(base, power_m);
    DimEntropyResult rp = hB_bisect(blocked, tol);
    rep.power_lambda = 0.5 * (rp.lambda_low + rp.lambda_high);
    rep.power_ok =
        std::abs(rep.power_lambda - power_m * rep.base_lambda) <= power_m * 2 * tol;
  }
  return rep;
}

ProductMeasure ProductMeasure::bernoulli(std::vector<double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (x < 0) fail(ErrorKind::kSchema, "negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(ErrorKind::kSchema, "probabilities must sum to 1");
  ProductMeasure out;
  out.kind = Kind::kBernoulli;
  out.p = std::move(p);
  return out;
}

ProductMeasure ProductMeasure::markov(std::vector<std::vector<double>> rows,
                                      std::vector<double> pi) {
  std::size_t k = rows.size();
  if (pi.size() != k) fail(ErrorKind::kSchema, "stationary vector size mismatch");
  for (const auto& row : rows) {
    if (row.size() != k) fail(ErrorKind::kSchema, "transition matrix must be square");
    double s = 0.0;
    for (double x : row) s += x;
    if (std::abs(s - 1.0) > 1e-12) fail(ErrorKind::kSchema, "rows must sum to 1");
  }
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += pi[i] * rows[i][j];
    if (std::abs(s - pi[j]) > 1e-10) fail(ErrorKind::kSchema, "vector is not stationary");
  }
  ProductMeasure out;
  out.kind = Kind::kMarkov;
  out.rows = std::move(rows);
  out.pi = std::move(pi);
  return out;
}

double ProductMeasure::cylinder_mass(const Word& w) const {
  if (w.empty()) return 1.0;
  if (kind == Kind::kBernoulli) {
    double m = 1.0;
    for (Sym s : w) m *= p[s];
    return m;
  }
  double m = pi[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) m *= rows[w[i - 1]][w[i]];
  return m;
}

namespace {

std::vector<Word> tree_words(const CylinderTree& K, std::size_t limit = (1u << 21)) {
  if (!K.language_backed) return K.words;
  return enumerate_restrictions(*CompactSet::make(K), {K.base, K.base + K.depth - 1}, limit);
}

}  // namespace

MdpReport verify_uniform_mdp(const ProductMeasure& theta, const CylinderTree& K, double c,
                             double d) {
  if (c <= 0 || d <= 0) fail(ErrorKind::kPrecondition, "c and d must be positive");
  MdpReport rep;
  rep.bound = d;
  rep.c = c;
  auto words = tree_words(K);
  rep.hypothesis_ok = true;
  std::set<Word> prefixes;
  for (const auto& w : words) {
    for (long long n = 1; n <= K.depth; ++n) {
      Word pre(w.begin(), w.begin() + static_cast<long>(n));
      if (!prefixes.insert(pre).second) continue;
      if (theta.cylinder_mass(pre) < c * std::exp(-d * static_cast<double>(n)) * (1 - 1e-12)) {
        rep.hypothesis_ok = false;
        rep.witness = pre;
        rep.witness_length = n;
        rep.note = "hypothesis fails; nothing is asserted";
        return rep;
      }
    }
  }
  // Conclusion: N_n <= e^{n d} / c exactly (cell masses sum below 1).
  rep.conclusion_ok = true;
  double worst = 0.0;
  for (long long n = 1; n <= K.depth; ++n) {
    double log_nn = tree_level_count(K, n).log_natural();
    worst = std::max(worst, log_nn / static_cast<double>(n));
    if (log_nn > d * static_cast<double>(n) - std::log(c) + 1e-9) rep.conclusion_ok = false;
  }
  rep.growth_value = worst;
  rep.note = "cover growth bounded by d";
  return rep;
}

MdpReport verify_nonuniform_mdp(const ProductMeasure& theta, const CylinderTree& K, double d,
                                double tol) {
  if (d <= 0) fail(ErrorKind::kPrecondition, "d must be positive");
  MdpReport rep;
  rep.bound = d;
  auto words = tree_words(K);
  double mass = 0.0;
  double worst_c = 0.0;
  for (const auto& w : words) {
    mass += theta.cylinder_mass(w);
    for (long long n = 1; n <= K.depth; ++n) {
      Word pre(w.begin(), w.begin() + static_cast<long>(n));
      worst_c = std::max(worst_c,
                         theta.cylinder_mass(pre) * std::exp(d * static_cast<double>(n)));
    }
  }
  if (mass <= 0) fail(ErrorKind::kZeroMass, "tree carries no theta-mass");
  rep.c = worst_c;
  rep.hypothesis_ok = true;  // with the fitted constant the bound holds by construction
  rep.vacuous = worst_c > std::exp(d * static_cast<double>(K.depth) / 2.0);
  DimEntropyResult r = hB_bisect(K, tol);
  rep.lambda_low = r.lambda_low;
  rep.lambda_high = r.lambda_high;
  rep.conclusion_ok = r.lambda_high >= d - tol;
  rep.note = rep.vacuous ? "fitted constant too large; the bound says little"
                         : "depth-limited h^B sits at or above d";
  return rep;
}

CylinderTree typical_set_tree(double p, double eta, long long depth) {
  if (p <= 0 || p >= 1 || eta < 0) fail(ErrorKind::kPrecondition, "bad typical-set parameters");
  long long lo = static_cast<long long>(std::floor((p - eta) * static_cast<double>(depth)));
  long long hi = static_cast<long long>(std::ceil((p + eta) * static_cast<double>(depth)));
  lo = std::max<long long>(lo, 0);
  hi = std::min<long long>(hi, depth);
  CylinderTree t;
  t.ambient = Subshift::full(2);
  t.base = 0;
  t.depth = depth;
  Word cur;
  auto rec = [&](auto&& self, long long d, long long ones) -> void {
    if (d == depth) {
      if (ones >= lo && ones <= hi) t.words.push_back(cur);
      return;
    }
    if (ones + (depth - d) < lo || ones > hi) return;
    for (int c = 0; c < 2; ++c) {
      cur.push_back(static_cast<Sym>(c));
      self(self, d + 1, ones + c);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  return t;
}

double m_value_bruteforce(const CylinderTree& K, double lambda, long long k) {
  if (K.language_backed) fail(ErrorKind::kPrecondition, "brute force needs explicit words");
  // Collect all nodes (prefixes) with their n-values.
  std::vector<Word> nodes;
  std::set<Word> seen;
  for (const auto& w : K.words) {
    for (long long n = 1; n <= K.depth; ++n) {
      Word pre(w.begin(), w.begin() + static_cast<long>(n));
      if (seen.insert(pre).second) nodes.push_back(pre);
    }
  }
  if (nodes.size() > 18) fail(ErrorKind::kEnumerationTooLarge, "tree too large for brute force");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (1ull << nodes.size()); ++mask) {
    // Valid cover: every word has a selected prefix with n-value >= k.
    bool ok = true;
    for (const auto& w : K.words) {
      bool covered = false;
      for (std::size_t i = 0; i < nodes.size() && !covered; ++i) {
        if (!(mask >> i & 1)) continue;
        if (nodes[i].size() <= w.size() &&
            std::equal(nodes[i].begin(), nodes[i].end(), w.begin()))
          covered = true;
      }
      if (!covered) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double cost = 0.0;
    bool valid = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      auto n = n_value(K.ambient, nodes[i]);
      if (n.has_value() && *n < k) {
        valid = false;
        break;
      }
      cost += weight_of(lambda, n);
    }
    if (valid) best = std::min(best, cost);
  }
  return best;
}

double m_value_family_form(const CylinderTree& K, double lambda, long long n) {
  // Elements must meet K (tree nodes), be full n-value cylinders, and have
  // n-value >= n: identical feasible set, traversed bottom-up instead.
  if (K.language_backed) fail(ErrorKind::kPrecondition, "family form needs explicit words");
  struct Node {
    std::map<Sym, std::size_t> children;
    Word word;
  };
  std::vector<Node> trie(1);
  for (const auto& w : K.words) {
    std::size_t cur = 0;
    for (Sym c : w) {
      auto it = trie[cur].children.find(c);
      if (it == trie[cur].children.end()) {
        trie.push_back(Node{});
        trie[cur].children[c] = trie.size() - 1;
        Word next = trie[cur].word;
        next.push_back(c);
        trie.back().word = next;
        cur = trie.size() - 1;
      } else {
        cur = it->second;
      }
    }
  }
  // Bottom-up by decreasing depth.
  std::vector<double> val(trie.size(), 0.0);
  std::vector<std::size_t> order(trie.size());
  for (std::size_t i = 0; i < trie.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trie[a].word.size() > trie[b].word.size();
  });
  for (std::size_t idx : order) {
    const Node& nd = trie[idx];
    double sum = 0.0;
    for (const auto& [c, ch] : nd.children) sum += val[ch];
    if (nd.word.empty()) {
      val[idx] = sum;
      continue;
    }
    auto nv = n_value(K.ambient, nd.word);
    bool coverable = !nv.has_value() || *nv >= n;
    double take =
        coverable ? weight_of(lambda, nv) : std::numeric_limits<double>::infinity();
    val[idx] = nd.children.empty() ? take : std::min(take, sum);
  }
  return val[0];
}

}  // namespace symdyn
