#include "symdyn/sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace symdyn {

double Dyadic::value() const { return zero ? 0.0 : std::ldexp(1.0, static_cast<int>(-neg_exp)); }

bool CompactSet::empty() const {
  if (const auto* f = get<FinitePointSet>()) return f->points.empty();
  if (const auto* t = get<CylinderTree>()) return !t->language_backed && t->words.empty();
  if (const auto* fan = get<FanSet>())
    return !fan->apex && fan->balls.empty() && !fan->full_tail_from;
  return false;  // staged families contain x0; whole spaces and cylinders are non-empty
}

std::string CompactSet::kind_name() const {
  if (get<FinitePointSet>()) return "finite";
  if (get<CylinderTree>()) return "tree";
  if (get<StagedFamily>()) return "staged";
  if (get<WholeSpace>()) return "whole";
  if (get<LeftFreeCylinder>()) return "phi";
  return "fan";
}

// ---------------------------------------------------------------------------
// Stage helpers

Word stage_x0_fill(const StagedFamily& f, const LexStage& st) {
  return f.x0.window({st.payload_lo, st.payload_lo + st.payload_len - 1});
}

std::optional<Word> bridge_to_tail(const Subshift& s, Sym sym, const BiInfinitePoint& x0,
                                   long long from, int max_len) {
  if (s.is_full()) return Word{};
  for (int t = 0; t <= max_len; ++t) {
    // Lexicographically least admissible u of length t with
    // sym -> u_1 -> ... -> u_t -> x0[from + t].
    Word u;
    auto rec = [&](auto&& self, Sym prev, int depth) -> bool {
      if (depth == t) return s.transition_allowed(prev, x0.at(from + t));
      for (int c = 0; c < s.alphabet_size(); ++c) {
        if (!s.transition_allowed(prev, static_cast<Sym>(c))) continue;
        u.push_back(static_cast<Sym>(c));
        if (self(self, static_cast<Sym>(c), depth + 1)) return true;
        u.pop_back();
      }
      return false;
    };
    if (rec(rec, sym, 0)) return u;
  }
  return std::nullopt;
}

BiInfinitePoint splice_payload(const BiInfinitePoint& x0, const Subshift& ambient,
                               long long payload_lo, const Word& filling) {
  long long E = payload_lo + static_cast<long long>(filling.size()) - 1;
  Word bridge;
  if (!filling.empty()) {
    auto b = bridge_to_tail(ambient, filling.back(), x0, E + 1);
    if (!b) fail(ErrorKind::kSourceUnavailable, "no bridge back into the anchor tail");
    bridge = *b;
  }
  long long c_lo = std::min(x0.left_end(), payload_lo);
  long long c_hi = std::max<long long>(x0.right_start(),
                                       E + static_cast<long long>(bridge.size())) + 1;
  Word center = x0.window({c_lo, c_hi});
  for (std::size_t i = 0; i < filling.size(); ++i)
    center[static_cast<std::size_t>(payload_lo - c_lo + static_cast<long long>(i))] = filling[i];
  for (std::size_t i = 0; i < bridge.size(); ++i)
    center[static_cast<std::size_t>(E + 1 - c_lo + static_cast<long long>(i))] = bridge[i];
  long long ell = static_cast<long long>(x0.left_period().size());
  long long r = static_cast<long long>(x0.right_period().size());
  Word left(static_cast<std::size_t>(ell)), right(static_cast<std::size_t>(r));
  for (long long i = 0; i < ell; ++i)
    left[static_cast<std::size_t>(i)] = x0.at(c_lo - ell + i);
  for (long long i = 0; i < r; ++i)
    right[static_cast<std::size_t>(i)] = x0.at(c_hi + 1 + i);
  return BiInfinitePoint(std::move(left), std::move(center), std::move(right), c_lo);
}

namespace {

// Cached per-stage lexicographic state for census queries.
struct LexStageCache {
  std::unique_ptr<LexBlock> block;
  Word x0fill;
  BigUInt r0;
  BigUInt R;       // selected = universe ranks [0, R) minus x0fill when present
  bool x0_in_R = false;
  Word wlast;
  bool full = false;
  int k = 2;
  // Incremental base-k prefix-value cursors (full-shift fast path).
  long long vcur_last = 0, vcur_x0 = 0;
  BigUInt val_last, val_x0;
};

struct StagedCache {
  std::vector<std::unique_ptr<LexStageCache>> stages;
};

}  // namespace

struct StagedCacheAccess {
  static StagedCache& get(const CompactSet& K, const StagedFamily& f) {
    if (!K.cache_) {
      auto c = std::make_shared<StagedCache>();
      c->stages.resize(f.stages.size());
      K.cache_ = c;
    }
    return *std::static_pointer_cast<StagedCache>(K.cache_);
  }
};

namespace {

LexStageCache& stage_cache(const CompactSet& K, const StagedFamily& f, std::size_t idx) {
  StagedCache& sc = StagedCacheAccess::get(K, f);
  auto& slot = sc.stages[idx];
  if (!slot) {
    const auto& st = std::get<LexStage>(f.stages[idx]);
    auto c = std::make_unique<LexStageCache>();
    c->full = f.ambient.is_full();
    c->k = f.ambient.alphabet_size();
    c->block = std::make_unique<LexBlock>(f.ambient, f.x0.at(st.payload_lo - 1),
                                          st.payload_len);
    c->x0fill = stage_x0_fill(f, st);
    if (st.count + BigUInt(1) > c->block->universe())
      fail(ErrorKind::kPrecondition, "lex stage count exceeds its universe");
    c->r0 = c->block->rank(c->x0fill);
    c->x0_in_R = c->r0 < st.count;
    c->R = c->x0_in_R ? st.count + BigUInt(1) : st.count;
    c->wlast = c->block->unrank(c->R - BigUInt(1));
    slot = std::move(c);
  }
  return *slot;
}

// Base-k value of w's v-prefix, advanced incrementally.
const BigUInt& prefix_value(LexStageCache& c, const Word& w, long long* vcur, BigUInt* val,
                            long long v) {
  if (*vcur > v) {
    *vcur = 0;
    *val = BigUInt();
  }
  while (*vcur < v) {
    val->mul_small(static_cast<std::uint64_t>(c.k));
    *val += BigUInt(w[static_cast<std::size_t>(*vcur)]);
    ++*vcur;
  }
  return *val;
}

// Distinct selected classes this stage shows through a window cutting its
// payload at v symbols, not counting the class of x0 itself.
BigUInt lex_contribution(const CompactSet& K, const StagedFamily& f, std::size_t idx,
                         const WindowSpec& w) {
  const auto& st = std::get<LexStage>(f.stages[idx]);
  long long P = st.payload_lo;
  long long E = P + st.payload_len - 1;
  if (w.hi < P) return BigUInt();
  if (w.lo > P)
    fail(ErrorKind::kEnumerationTooLarge,
         "window cuts a lex stage payload from the left; materialize instead");
  long long v = std::min(w.hi, E) - P + 1;
  LexStageCache& c = stage_cache(K, f, idx);

  BigUInt below_prefixes, x0_below_words, x0_with_prefix;
  if (c.full) {
    below_prefixes = prefix_value(c, c.wlast, &c.vcur_last, &c.val_last, v);
    BigUInt tail = BigUInt::pow_small(static_cast<std::uint64_t>(c.k),
                                      static_cast<std::uint64_t>(st.payload_len - v));
    x0_below_words = BigUInt::mul(prefix_value(c, c.x0fill, &c.vcur_x0, &c.val_x0, v), tail);
    x0_with_prefix = tail;
  } else {
    below_prefixes = c.block->prefix_cut(c.wlast, v).below_prefixes;
    x0_below_words = c.block->prefix_cut(c.x0fill, v).below_words;
    x0_with_prefix = c.block->with_prefix(c.x0fill, v);
  }
  BigUInt g_raw = below_prefixes + BigUInt(1);
  // q = #universe ranks below R sharing x0's v-prefix.
  BigUInt q;
  if (c.R > x0_below_words) {
    q = c.R - x0_below_words;
    if (q > x0_with_prefix) q = x0_with_prefix;
  }
  bool x0_class_selected = c.x0_in_R ? q >= BigUInt(2) : q >= BigUInt(1);
  BigUInt distinct_selected = g_raw;
  if (c.x0_in_R && q == BigUInt(1)) distinct_selected -= BigUInt(1);
  if (x0_class_selected) distinct_selected -= BigUInt(1);
  return distinct_selected;
}

void collect_or_count(std::set<Word>* dedupe, const Word& w) { dedupe->insert(w); }

BigUInt finite_census(const FinitePointSet& fs, const WindowSpec& w,
                      std::vector<Word>* witnesses) {
  std::set<Word> seen;
  for (const auto& p : fs.points) collect_or_count(&seen, p.window(w));
  if (witnesses) witnesses->assign(seen.begin(), seen.end());
  return BigUInt(static_cast<std::uint64_t>(seen.size()));
}

std::vector<Word> language_words(const Subshift& lang, long long depth, std::size_t limit) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, long long d) -> void {
    if (d == depth) {
      out.push_back(cur);
      if (out.size() > limit)
        fail(ErrorKind::kEnumerationTooLarge, "language tree too large to materialize");
      return;
    }
    for (int c = 0; c < lang.alphabet_size(); ++c) {
      cur.push_back(static_cast<Sym>(c));
      if (lang.word_admissible(cur)) self(self, d + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

BigUInt tree_census(const CylinderTree& t, const WindowSpec& w, std::vector<Word>* witnesses,
                    std::size_t limit) {
  WindowSpec span{t.base, t.base + t.depth - 1};
  if (!span.contains(w))
    fail(ErrorKind::kWindowExceedsDepth, "census window outside the cylinder tree span");
  if (t.language_backed) {
    LanguageCount lc(t.language);
    if (w.lo == t.base && !witnesses) {
      long long d = w.length();
      if (d == t.depth) return lc.words_total(d);
      BigUInt acc;
      for (int s = 0; s < t.language.alphabet_size(); ++s) {
        if (!lc.continuations(static_cast<Sym>(s), t.depth - d).is_zero())
          acc += lc.ending_at(static_cast<Sym>(s), d);
      }
      return acc;
    }
    auto words = language_words(t.language, t.depth, limit);
    std::set<Word> seen;
    for (const auto& full : words) {
      seen.insert(Word(full.begin() + static_cast<long>(w.lo - t.base),
                       full.begin() + static_cast<long>(w.hi - t.base + 1)));
    }
    if (witnesses) witnesses->assign(seen.begin(), seen.end());
    return BigUInt(static_cast<std::uint64_t>(seen.size()));
  }
  std::set<Word> seen;
  for (const auto& full : t.words) {
    seen.insert(Word(full.begin() + static_cast<long>(w.lo - t.base),
                     full.begin() + static_cast<long>(w.hi - t.base + 1)));
  }
  if (witnesses) witnesses->assign(seen.begin(), seen.end());
  return BigUInt(static_cast<std::uint64_t>(seen.size()));
}

BigUInt whole_census(const WholeSpace& ws, const WindowSpec& w) {
  if (ws.shift.one_sided() && w.lo < 0)
    fail(ErrorKind::kPrecondition, "one-sided shift has no negative coordinates");
  long long L = w.length();
  if (ws.shift.is_full() || ws.shift.is_one_step()) {
    LanguageCount lc(ws.shift);
    return lc.words_total(L);
  }
  // Longer forbidden words: count through the overlapping higher-block
  // recode, where length-L words correspond to block paths of length L-m+1.
  long long m = static_cast<long long>(ws.shift.max_forbidden_length());
  if (L < m) {
    return BigUInt(static_cast<std::uint64_t>(
        language_words(ws.shift, L, 1u << 22).size()));
  }
  auto [blocked, blocks] = ws.shift.higher_block(static_cast<int>(m));
  LanguageCount lc(blocked);
  return lc.words_total(L - m + 1);
}

BigUInt leftfree_census(const LeftFreeCylinder& c, const WindowSpec& w) {
  if (w.lo >= c.fixed_from) return BigUInt(1);
  long long free_hi = std::min(w.hi, c.fixed_from - 1);
  long long L = free_hi - w.lo + 1;
  LanguageCount lc(c.ambient);
  if (c.ambient.is_full())
    return BigUInt::pow_small(static_cast<std::uint64_t>(c.ambient.alphabet_size()),
                              static_cast<std::uint64_t>(L));
  // Word counts below assume every admissible word extends to a point.
  for (int s = 0; s < c.ambient.alphabet_size(); ++s) {
    if (c.ambient.successors(static_cast<Sym>(s)).empty() ||
        c.ambient.predecessors(static_cast<Sym>(s)).empty())
      fail(ErrorKind::kPrecondition, "phi-set census needs an essential transition graph");
  }
  Sym tail_sym = c.anchor.at(c.fixed_from);
  if (w.hi >= c.fixed_from) {
    // Window reaches the pinned part: the free word must feed straight into it.
    return lc.extensions_into(tail_sym, L);
  }
  long long gap = c.fixed_from - 1 - w.hi;
  BigUInt acc;
  for (int s = 0; s < c.ambient.alphabet_size(); ++s) {
    if (lc.path_count(static_cast<Sym>(s), tail_sym, gap + 1).is_zero()) continue;
    acc += lc.ending_at(static_cast<Sym>(s), L);
  }
  return acc;
}

BigUInt staged_census(const CompactSet& K, const StagedFamily& f, const WindowSpec& w,
                      std::vector<Word>* witnesses, std::size_t limit);

}  // namespace

std::vector<BiInfinitePoint> materialize_stage(const StagedFamily& f, std::size_t idx,
                                               std::size_t limit) {
  std::vector<BiInfinitePoint> out;
  if (const auto* ex = std::get_if<ExplicitStage>(&f.stages[idx])) {
    return ex->points;
  }
  const auto& st = std::get<LexStage>(f.stages[idx]);
  if (!st.count.fits_u64() || st.count.to_u64() > limit)
    fail(ErrorKind::kEnumerationTooLarge, "lex stage too large to materialize");
  LexBlock block(f.ambient, f.x0.at(st.payload_lo - 1), st.payload_len);
  Word x0fill = stage_x0_fill(f, st);
  BigUInt r0 = block.rank(x0fill);
  std::uint64_t want = st.count.to_u64();
  BigUInt r(0);
  while (out.size() < want) {
    if (r != r0) {
      out.push_back(splice_payload(f.x0, f.ambient, st.payload_lo, block.unrank(r)));
    }
    r += BigUInt(1);
  }
  return out;
}

namespace {

// Lex-stage cursors mutate lazily under const; serialize the structured path
// so concurrent censuses on one set stay safe.
std::mutex g_staged_census_mutex;

BigUInt staged_census(const CompactSet& K, const StagedFamily& f, const WindowSpec& w,
                      std::vector<Word>* witnesses, std::size_t limit) {
  bool all_lex = true, any_lex = false, left_cut = false;
  for (const auto& st : f.stages) {
    if (std::holds_alternative<LexStage>(st)) {
      any_lex = true;
      if (w.lo > std::get<LexStage>(st).payload_lo &&
          w.hi >= std::get<LexStage>(st).payload_lo)
        left_cut = true;
    } else {
      all_lex = false;
    }
  }
  bool structured = all_lex && any_lex && !left_cut && !witnesses;
  if (!structured) {
    // Materialize everything (explicit families and witness requests).
    std::set<Word> seen;
    seen.insert(f.x0.window(w));
    for (std::size_t i = 0; i < f.stages.size(); ++i) {
      for (const auto& p : materialize_stage(f, i, limit)) seen.insert(p.window(w));
      if (seen.size() > limit)
        fail(ErrorKind::kEnumerationTooLarge, "staged census window too rich");
    }
    if (witnesses) witnesses->assign(seen.begin(), seen.end());
    return BigUInt(static_cast<std::uint64_t>(seen.size()));
  }
  std::lock_guard<std::mutex> lock(g_staged_census_mutex);
  BigUInt total(1);  // the class of x0
  for (std::size_t i = 0; i < f.stages.size(); ++i) total += lex_contribution(K, f, i, w);
  return total;
}

BigUInt census_count(const CompactSet& K, const WindowSpec& w, std::vector<Word>* witnesses,
                     std::size_t limit) {
  if (const auto* fs = K.get<FinitePointSet>()) return finite_census(*fs, w, witnesses);
  if (const auto* t = K.get<CylinderTree>()) return tree_census(*t, w, witnesses, limit);
  if (const auto* sf = K.get<StagedFamily>()) return staged_census(K, *sf, w, witnesses, limit);
  if (const auto* ws = K.get<WholeSpace>()) {
    BigUInt c = whole_census(*ws, w);
    if (witnesses) {
      if (!c.fits_u64() || c.to_u64() > limit)
        fail(ErrorKind::kEnumerationTooLarge, "whole-space window too rich to enumerate");
      std::vector<Word> all = language_words(ws->shift, w.length(), limit);
      *witnesses = std::move(all);
    }
    return c;
  }
  if (const auto* lf = K.get<LeftFreeCylinder>()) {
    BigUInt c = leftfree_census(*lf, w);
    if (witnesses) {
      if (!c.fits_u64() || c.to_u64() > limit)
        fail(ErrorKind::kEnumerationTooLarge, "phi-set window too rich to enumerate");
      std::vector<Word> out;
      Word fixed = lf->anchor.window(w);
      long long free_hi = std::min(w.hi, lf->fixed_from - 1);
      if (free_hi < w.lo) {
        out.push_back(fixed);
      } else {
        LanguageCount lc(lf->ambient);
        Sym tail_sym = lf->anchor.at(lf->fixed_from);
        long long gap = std::max<long long>(0, lf->fixed_from - 1 - w.hi);
        std::vector<Word> frees =
            language_words(lf->ambient, free_hi - w.lo + 1, limit * 4 + 16);
        for (const auto& u : frees) {
          Word cand = fixed;
          std::copy(u.begin(), u.end(), cand.begin());
          if (w.hi >= lf->fixed_from) {
            // The junction into the pinned part must itself be admissible.
            Word joined = cand;
            long long probe = w.hi + 1;
            for (std::size_t j = 0; j < lf->ambient.max_forbidden_length(); ++j)
              joined.push_back(lf->anchor.at(probe + static_cast<long long>(j)));
            if (!lf->ambient.word_admissible(joined)) continue;
          } else if (lc.path_count(u.back(), tail_sym, gap + 1).is_zero()) {
            continue;
          }
          out.push_back(cand);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
      }
      *witnesses = std::move(out);
    }
    return c;
  }
  fail(ErrorKind::kPrecondition, "census needs a coordinate-window representation (not a fan)");
}

}  // namespace

CensusResult census(const CompactSet& K, const WindowSpec& w, bool with_witnesses) {
  CensusResult r;
  r.window = w;
  if (K.empty()) {
    r.count = BigUInt(0);
    if (with_witnesses) r.witnesses.emplace();
    return r;
  }
  if (with_witnesses) {
    std::vector<Word> wit;
    r.count = census_count(K, w, &wit, 1u << 21);
    r.witnesses = std::move(wit);
  } else {
    r.count = census_count(K, w, nullptr, 1u << 21);
  }
  return r;
}

std::vector<Word> enumerate_restrictions(const CompactSet& K, const WindowSpec& w,
                                         std::size_t limit) {
  if (K.empty()) return {};
  std::vector<Word> wit;
  census_count(K, w, &wit, limit);
  return wit;
}

CompactSetPtr outer_tree(const CompactSet& K, long long depth, long long base) {
  if (depth < 1) fail(ErrorKind::kPrecondition, "outer tree depth must be >= 1");
  WindowSpec w{base, base + depth - 1};
  if (const auto* t = K.get<CylinderTree>()) {
    if (t->base == base && t->depth == depth) return CompactSet::make(*t);
  }
  if (const auto* ws = K.get<WholeSpace>()) {
    if (!ws->shift.one_sided() || base >= 0) {
      CylinderTree t;
      t.ambient = ws->shift;
      t.base = base;
      t.depth = depth;
      t.language_backed = true;
      t.language = ws->shift;
      return CompactSet::make(std::move(t));
    }
  }
  Subshift ambient = Subshift::full(2);
  if (const auto* fs = K.get<FinitePointSet>()) ambient = fs->ambient;
  if (const auto* t = K.get<CylinderTree>()) ambient = t->ambient;
  if (const auto* sf = K.get<StagedFamily>()) ambient = sf->ambient;
  if (const auto* lf = K.get<LeftFreeCylinder>()) ambient = lf->ambient;
  CylinderTree t;
  t.ambient = ambient;
  t.base = base;
  t.depth = depth;
  t.words = enumerate_restrictions(K, w);
  std::sort(t.words.begin(), t.words.end());
  t.words.erase(std::unique(t.words.begin(), t.words.end()), t.words.end());
  if (t.words.empty() && !K.empty())
    fail(ErrorKind::kInternal, "outer tree of a non-empty set came out empty");
  return CompactSet::make(std::move(t));
}

CompactSetPtr shift_set(const CompactSet& K, long long t) {
  if (const auto* fs = K.get<FinitePointSet>()) {
    FinitePointSet out{fs->ambient, {}};
    for (const auto& p : fs->points) out.points.push_back(p.shifted(t));
    std::sort(out.points.begin(), out.points.end());
    return CompactSet::make(std::move(out));
  }
  if (const auto* tr = K.get<CylinderTree>()) {
    CylinderTree out = *tr;
    out.base -= t;
    return CompactSet::make(std::move(out));
  }
  if (const auto* sf = K.get<StagedFamily>()) {
    StagedFamily out = *sf;
    out.x0 = sf->x0.shifted(t);
    for (auto& st : out.stages) {
      if (auto* lex = std::get_if<LexStage>(&st)) {
        lex->payload_lo -= t;
      } else {
        auto& ex = std::get<ExplicitStage>(st);
        for (auto& p : ex.points) p = p.shifted(t);
      }
    }
    return CompactSet::make(std::move(out));
  }
  if (const auto* ws = K.get<WholeSpace>()) return CompactSet::make(*ws);
  if (const auto* lf = K.get<LeftFreeCylinder>()) {
    LeftFreeCylinder out = *lf;
    out.anchor = lf->anchor.shifted(t);
    out.fixed_from -= t;
    return CompactSet::make(std::move(out));
  }
  const auto* fan = K.get<FanSet>();
  FanSet out = *fan;
  for (auto& [idx, content] : out.balls) content = shift_set(*content, t);
  return CompactSet::make(std::move(out));
}

std::optional<long long> first_difference(const BiInfinitePoint& x, const BiInfinitePoint& y) {
  if (x == y) return std::nullopt;
  long long span = std::max(std::llabs(x.left_end()), std::llabs(x.right_start())) +
                   std::max(std::llabs(y.left_end()), std::llabs(y.right_start()));
  long long lcm_r = static_cast<long long>(
      std::lcm(x.right_period().size(), y.right_period().size()));
  long long lcm_l = static_cast<long long>(
      std::lcm(x.left_period().size(), y.left_period().size()));
  long long bound = span + lcm_r + lcm_l + 4;
  for (long long a = 0; a <= bound; ++a) {
    if (x.at(a) != y.at(a)) return a;
    if (a > 0 && x.at(-a) != y.at(-a)) return -a;  // prefer smaller |i|; sign immaterial
  }
  fail(ErrorKind::kInternal, "distinct canonical points with no visible difference");
}

Dyadic fan_distance(const FanPoint& u, const FanPoint& v) {
  if (u.is_apex && v.is_apex) return {};
  if (u.is_apex || v.is_apex) {
    const FanPoint& b = u.is_apex ? v : u;
    return {false, b.ball};
  }
  if (u.ball != v.ball) return {false, std::min(u.ball, v.ball)};
  auto diff = first_difference(*u.x, *v.x);
  if (!diff) return {};
  return {false, u.ball + 1 + std::llabs(*diff)};
}

BigUInt tree_level_count(const CylinderTree& t, long long d) {
  if (d < 1 || d > t.depth) fail(ErrorKind::kPrecondition, "tree level out of range");
  if (t.language_backed) {
    LanguageCount lc(t.language);
    if (d == t.depth) return lc.words_total(d);
    BigUInt acc;
    for (int s = 0; s < t.language.alphabet_size(); ++s) {
      if (!lc.continuations(static_cast<Sym>(s), t.depth - d).is_zero())
        acc += lc.ending_at(static_cast<Sym>(s), d);
    }
    return acc;
  }
  std::uint64_t count = t.words.empty() ? 0 : 1;
  for (std::size_t i = 1; i < t.words.size(); ++i) {
    if (!std::equal(t.words[i].begin(), t.words[i].begin() + static_cast<long>(d),
                    t.words[i - 1].begin()))
      ++count;
  }
  return BigUInt(count);
}

long long tree_level_count_cap(const CylinderTree& t) { return t.depth; }

StagedDiagnostics validate_staged(const StagedFamily& f) {
  auto fail_with = [](const std::string& msg) {
    return StagedDiagnostics{false, msg};
  };
  if (f.resolution < 1) return fail_with("resolution m must be >= 1");
  if (!f.ambient.point_admissible(f.x0)) return fail_with("x0 is not admissible");
  long long prev_l = 0;
  std::vector<std::pair<BiInfinitePoint, long long>> cumulative;  // (point, birth stage idx)
  bool cumulative_ok = true;
  for (std::size_t i = 0; i < f.stages.size(); ++i) {
    long long l = std::visit([](const auto& s) { return s.length; }, f.stages[i]);
    if (l <= prev_l) return fail_with("stage lengths must be strictly increasing");
    if (const auto* lex = std::get_if<LexStage>(&f.stages[i])) {
      if (lex->count.is_zero()) return fail_with("lex stage with zero count");
      if (lex->payload_lo < prev_l + f.resolution)
        return fail_with("lex stage payload enters the certified ball window");
      if (lex->payload_lo + lex->payload_len - 1 > l + f.resolution - 2)
        return fail_with("lex stage payload leaks past its separation window");
      LexBlock block(f.ambient, f.x0.at(lex->payload_lo - 1), lex->payload_len);
      if (lex->count + BigUInt(1) > block.universe())
        return fail_with("lex stage count exceeds the admissible filling universe");
      if (f.ambient.mixing()) {
        for (int s = 0; s < f.ambient.alphabet_size(); ++s) {
          if (!bridge_to_tail(f.ambient, static_cast<Sym>(s), f.x0,
                              lex->payload_lo + lex->payload_len)
                   .has_value())
            return fail_with("stage filling cannot rejoin the anchor tail");
        }
      }
      if (!lex->count.fits_u64() || lex->count.to_u64() > (1u << 14)) cumulative_ok = false;
    } else {
      const auto& ex = std::get<ExplicitStage>(f.stages[i]);
      if (ex.points.empty()) return fail_with("explicit stage with no points");
      for (const auto& p : ex.points) {
        if (!f.ambient.point_admissible(p)) return fail_with("stage point not admissible");
        if (p == f.x0) return fail_with("x0 listed as a stage point");
        if (i > 0) {
          WindowSpec bw = ball_window(prev_l, f.resolution);
          if (p.window(bw) != f.x0.window(bw))
            return fail_with("stage point escapes the certified ball window");
        }
      }
    }
    if (cumulative_ok) {
      std::vector<BiInfinitePoint> pts;
      try {
        pts = materialize_stage(f, i, 1u << 14);
      } catch (const Error&) {
        cumulative_ok = false;
      }
      if (cumulative_ok) {
        for (const auto& p : pts) cumulative.emplace_back(p, static_cast<long long>(i));
        WindowSpec sw = separation_window(l, f.resolution);
        std::set<Word> seen;
        for (const auto& [p, born] : cumulative) {
          if (!seen.insert(p.window(sw)).second)
            return fail_with("cumulative stage set is not (l_i, 2^-m)-separated");
        }
      }
    }
    prev_l = l;
  }
  return {};
}

}  // namespace symdyn
