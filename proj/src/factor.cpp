#include "symdyn/factor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "symdyn/counting.hpp"

// GCC 11 invents an impossible memcmp bound when the vector<unsigned char>
// three-way comparison is inlined into map insertion; nothing here reads
// past a buffer.
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic ignored "-Wstringop-overread"
#endif

namespace symdyn {

SlidingBlockCode::SlidingBlockCode(Subshift source, Subshift target, int memory,
                                   int anticipation, std::map<Word, Sym> rule)
    : source_(std::move(source)),
      target_(std::move(target)),
      memory_(memory),
      anticipation_(anticipation),
      rule_(std::move(rule)) {
  if (memory_ < 0 || anticipation_ < 0)
    fail(ErrorKind::kSchema, "memory and anticipation must be >= 0");
  // The rule must be total on admissible windows and land in the target alphabet.
  Word cur;
  auto walk = [&](auto&& self, int depth) -> void {
    if (depth == window()) {
      auto it = rule_.find(cur);
      if (it == rule_.end())
        fail(ErrorKind::kSchema, "rule not total: missing window " + word_to_string(cur));
      if (static_cast<int>(it->second) >= target_.alphabet_size())
        fail(ErrorKind::kSchema, "rule image outside the target alphabet");
      return;
    }
    for (int c = 0; c < source_.alphabet_size(); ++c) {
      cur.push_back(static_cast<Sym>(c));
      if (source_.word_admissible(cur)) self(self, depth + 1);
      cur.pop_back();
    }
  };
  walk(walk, 0);
}

SlidingBlockCode SlidingBlockCode::symbol_map(const Subshift& source, const Subshift& target,
                                              const std::vector<Sym>& image_of) {
  std::map<Word, Sym> rule;
  for (int s = 0; s < source.alphabet_size(); ++s) {
    Word w(1, static_cast<Sym>(s));
    rule.emplace(std::move(w), image_of[static_cast<std::size_t>(s)]);
  }
  return SlidingBlockCode(source, target, 0, 0, std::move(rule));
}

SlidingBlockCode SlidingBlockCode::identity(const Subshift& s) {
  std::vector<Sym> id;
  for (int c = 0; c < s.alphabet_size(); ++c) id.push_back(static_cast<Sym>(c));
  return symbol_map(s, s, id);
}

SlidingBlockCode SlidingBlockCode::mod_map(int source_k, int target_k) {
  std::vector<Sym> img;
  for (int c = 0; c < source_k; ++c) img.push_back(static_cast<Sym>(c % target_k));
  return symbol_map(Subshift::full(source_k), Subshift::full(target_k), img);
}

Sym SlidingBlockCode::apply_window(const Word& w) const {
  auto it = rule_.find(w);
  if (it == rule_.end()) fail(ErrorKind::kInadmissibleInput, "window outside the rule domain");
  return it->second;
}

BiInfinitePoint SlidingBlockCode::apply(const BiInfinitePoint& x) const {
  if (!source_.point_admissible(x))
    fail(ErrorKind::kInadmissibleInput, "point not admissible in the source");
  long long lam = x.left_end(), rho = x.right_start();
  long long ell = static_cast<long long>(x.left_period().size());
  long long r = static_cast<long long>(x.right_period().size());
  auto y_at = [&](long long i) {
    return apply_window(x.window({i - memory_, i + anticipation_}));
  };
  Word left(static_cast<std::size_t>(ell)), right(static_cast<std::size_t>(r));
  long long y_anchor = lam - anticipation_;
  for (long long i = 0; i < ell; ++i)
    left[static_cast<std::size_t>(i)] = y_at(y_anchor - ell + i);
  long long y_rho = rho + memory_;
  Word center(static_cast<std::size_t>(y_rho - y_anchor));
  for (long long i = y_anchor; i < y_rho; ++i)
    center[static_cast<std::size_t>(i - y_anchor)] = y_at(i);
  for (long long i = 0; i < r; ++i)
    right[static_cast<std::size_t>(i)] = y_at(y_rho + i);
  return BiInfinitePoint(std::move(left), std::move(center), std::move(right), y_anchor);
}

Word SlidingBlockCode::apply_word(const Word& w) const {
  if (static_cast<int>(w.size()) < window())
    fail(ErrorKind::kPrecondition, "word shorter than the code window");
  Word out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(window()) <= w.size(); ++i) {
    Word win(w.begin() + static_cast<long>(i),
             w.begin() + static_cast<long>(i + static_cast<std::size_t>(window())));
    out.push_back(apply_window(win));
  }
  return out;
}

namespace {

// 1-block recoding of the code: symbols of the blocked source carry labels.
struct BlockedCode {
  Subshift blocked;
  std::vector<Sym> label;
};

BlockedCode block_code(const SlidingBlockCode& c) {
  BlockedCode out;
  if (c.window() == 1) {
    if (!c.source().is_full() && !c.source().is_one_step())
      fail(ErrorKind::kNotOneStep, "codes need a 1-step (or re-blocked) source");
    out.blocked = c.source();
    for (int s = 0; s < c.source().alphabet_size(); ++s)
      out.label.push_back(c.apply_window({static_cast<Sym>(s)}));
    return out;
  }
  auto [blocked, blocks] = c.source().higher_block(c.window());
  out.blocked = blocked;
  for (const auto& b : blocks) out.label.push_back(c.apply_window(b));
  return out;
}

// Does the image of the whole source equal the full target shift?  Proven
// structurally: from every reachable nonempty symbol-subset, every target
// letter keeps a live successor set.
bool image_is_full_target(const BlockedCode& bc, int target_k) {
  int n = bc.blocked.alphabet_size();
  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> queue;
  std::vector<char> start(n, 1);
  queue.push_back(start);
  seen.insert(start);
  while (!queue.empty()) {
    auto cur = queue.back();
    queue.pop_back();
    for (int t = 0; t < target_k; ++t) {
      std::vector<char> next(n, 0);
      bool live = false;
      for (int s = 0; s < n; ++s) {
        if (!cur[s]) continue;
        for (int b = 0; b < n; ++b) {
          if (bc.label[b] != t) continue;
          if (bc.blocked.is_full() || bc.blocked.matrix()[s][b]) {
            next[b] = 1;
            live = true;
          }
        }
      }
      if (!live) return false;
      if (seen.insert(next).second) {
        queue.push_back(next);
        if (seen.size() > 4096)
          fail(ErrorKind::kEnumerationTooLarge, "image automaton too large");
      }
    }
  }
  return true;
}

}  // namespace

CompactSetPtr apply_code(const SlidingBlockCode& c, const CompactSet& K) {
  int a = c.memory(), b = c.anticipation();
  if (const auto* fs = K.get<FinitePointSet>()) {
    FinitePointSet out{c.target(), {}};
    for (const auto& p : fs->points) out.points.push_back(c.apply(p));
    std::sort(out.points.begin(), out.points.end());
    out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
    return CompactSet::make(std::move(out));
  }
  if (const auto* t = K.get<CylinderTree>()) {
    if (t->depth <= a + b) fail(ErrorKind::kPrecondition, "tree shallower than the code window");
    std::vector<Word> words;
    for (const auto& w : (t->language_backed
                              ? enumerate_restrictions(K, {t->base, t->base + t->depth - 1})
                              : t->words)) {
      words.push_back(c.apply_word(w));
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    CylinderTree out;
    out.ambient = c.target();
    out.base = t->base + a;
    out.depth = t->depth - a - b;
    out.words = std::move(words);
    return CompactSet::make(std::move(out));
  }
  if (const auto* ws = K.get<WholeSpace>()) {
    (void)ws;
    BlockedCode bc = block_code(c);
    if (c.target().is_full() && image_is_full_target(bc, c.target().alphabet_size()))
      return CompactSet::make(WholeSpace{c.target()});
    fail(ErrorKind::kEnumerationTooLarge,
         "whole-space images are supported when they fill the target shift");
  }
  if (const auto* sf = K.get<StagedFamily>()) {
    // Pointwise image with the certificate windows shrunk by the code span.
    StagedFamily out;
    out.ambient = c.target();
    out.x0 = c.apply(sf->x0);
    out.resolution = std::max<long long>(1, sf->resolution - a);
    long long prev = 0;
    for (std::size_t i = 0; i < sf->stages.size(); ++i) {
      ExplicitStage st;
      long long l = std::visit([](const auto& s) { return s.length; }, sf->stages[i]);
      st.length = std::max(prev + 1, l - a - b);
      std::set<BiInfinitePoint> pts;
      for (const auto& p : materialize_stage(*sf, i)) {
        BiInfinitePoint img = c.apply(p);
        if (!(img == out.x0)) pts.insert(img);
      }
      if (pts.empty()) continue;
      st.points.assign(pts.begin(), pts.end());
      prev = st.length;
      out.stages.push_back(std::move(st));
    }
    auto diag = validate_staged(out);
    if (!diag.pass)
      fail(ErrorKind::kInternal, "image family lost its certificate: " + diag.first_violation);
    return CompactSet::make(std::move(out));
  }
  fail(ErrorKind::kPrecondition, "unsupported representation for apply_code");
}

EntropyEstimate fiber_entropy_sup(const SlidingBlockCode& c, long long n_max) {
  BlockedCode bc = block_code(c);
  int n_sym = bc.blocked.alphabet_size();
  int tk = c.target().alphabet_size();
  // Layered exploration of distinct preimage-count vectors.
  std::vector<std::vector<BigUInt>> layer;
  layer.push_back(std::vector<BigUInt>(n_sym, BigUInt(1)));
  std::vector<double> log_max(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (long long n = 1; n <= n_max; ++n) {
    std::set<std::vector<std::string>> seen;  // dedupe by decimal forms
    std::vector<std::vector<BigUInt>> next;
    BigUInt best;
    for (const auto& v : layer) {
      for (int t = 0; t < tk; ++t) {
        std::vector<BigUInt> w(n_sym);
        bool any = false;
        for (int s2 = 0; s2 < n_sym; ++s2) {
          if (bc.label[s2] != t) continue;
          BigUInt acc;
          for (int s1 = 0; s1 < n_sym; ++s1) {
            if (v[s1].is_zero()) continue;
            if (n == 1 || bc.blocked.is_full() || bc.blocked.matrix()[s1][s2]) acc += v[s1];
          }
          if (!acc.is_zero()) any = true;
          w[s2] = std::move(acc);
        }
        if (!any) continue;
        BigUInt total;
        for (const auto& x : w) total += x;
        if (total > best) best = total;
        std::vector<std::string> key;
        for (const auto& x : w) key.push_back(x.to_decimal());
        if (seen.insert(key).second) {
          next.push_back(std::move(w));
          if (next.size() > 2048)
            fail(ErrorKind::kEnumerationTooLarge, "fiber vector layer too wide");
        }
      }
    }
    layer = std::move(next);
    log_max[static_cast<std::size_t>(n)] = best.log_natural();
    if (layer.empty()) break;
  }
  EntropyEstimate e;
  e.resolution = 0;
  e.horizon = n_max;
  e.estimator = "fiber-word-counts/upper-bound-flavor";
  std::size_t last = static_cast<std::size_t>(n_max);
  std::size_t half = last / 2;
  double best_slope = 0.0;
  bool saturated = true;
  for (std::size_t i = half; i < last; ++i) {
    if (log_max[last] != log_max[i]) saturated = false;
    best_slope = std::max(best_slope, (log_max[last] - log_max[i]) /
                                          static_cast<double>(last - i));
  }
  e.value = saturated ? 0.0 : best_slope;
  e.saturated = saturated;
  e.lower = e.value;
  e.upper = std::numeric_limits<double>::infinity();
  return e;
}

SandwichReport sandwich_check(const SlidingBlockCode& c, const CompactSet& E, long long m,
                              long long n_max, double slack) {
  SandwichReport rep;
  rep.slack = slack;
  auto image = apply_code(c, E);
  long long span = c.memory() + c.anticipation();
  long long img_n_max = std::max<long long>(4 * m, n_max - span);
  if (E.get<WholeSpace>()) {
    rep.source_value = growth_estimate(E, m, n_max).value;
    rep.image_value = growth_estimate(*image, m, img_n_max).value;
  } else {
    // Endpoint window-normalized slopes: these satisfy the count-level chain
    // log s_src <= log s_img + (window) log(max preimages) at every horizon,
    // which tail differences do not.
    auto endpoint = [m](const CompactSet& K, long long n) {
      return separated_count(K, n, m).log_natural() /
             static_cast<double>(n + 2 * m - 2);
    };
    rep.source_value = endpoint(E, n_max);
    rep.image_value = endpoint(*image, img_n_max);
  }
  rep.fiber_value = fiber_entropy_sup(c, n_max).value;
  rep.counts_ok = true;
  for (long long n = 1; n + span <= n_max; ++n) {
    BigUInt img_count, src_count;
    try {
      img_count = separated_count(*image, n, m);
      src_count = separated_count(E, n + span, m);
    } catch (const Error&) {
      continue;  // window outside a tree span: skip the horizon
    }
    if (img_count > src_count) rep.counts_ok = false;
  }
  rep.chain_ok = rep.image_value <= rep.source_value + slack &&
                 rep.source_value <= rep.image_value + rep.fiber_value + slack;
  rep.note = "resolution pairing: source horizon padded by the code span";
  return rep;
}

NaturalExtensionReport natural_extension(const Subshift& one_sided, long long n_max) {
  if (!one_sided.one_sided())
    fail(ErrorKind::kPrecondition, "natural extension starts from a one-sided shift");
  if (!one_sided.is_full() && !one_sided.is_one_step())
    fail(ErrorKind::kNotOneStep, "re-block first");
  // Surjectivity: every symbol needs a predecessor (and liveness needs
  // successors); checked on the transition structure.
  for (int s = 0; s < one_sided.alphabet_size(); ++s) {
    if (one_sided.predecessors(static_cast<Sym>(s)).empty())
      fail(ErrorKind::kNotSurjective, "a symbol has no predecessor");
    if (one_sided.successors(static_cast<Sym>(s)).empty())
      fail(ErrorKind::kNotSurjective, "a symbol has no successor");
  }
  NaturalExtensionReport rep;
  rep.two_sided = Subshift::forbid(one_sided.alphabet_size(), one_sided.forbidden(), false);
  WholeSpace one{one_sided};
  WholeSpace two{rep.two_sided};
  auto one_set = CompactSet::make(one);
  auto two_set = CompactSet::make(two);
  rep.census_preserved = true;
  for (long long n = 1; n <= n_max; ++n) {
    BigUInt a = census(*one_set, {0, n - 1}).count;
    BigUInt b = census(*two_set, {0, n - 1}).count;
    rep.one_sided_counts.push_back(a);
    rep.two_sided_counts.push_back(b);
    if (a != b) rep.census_preserved = false;
  }
  // First-coordinate fibers are left-free cylinders; their separated counts
  // are bounded by left-extension counts, flat in the horizon.
  rep.fibers_flat = true;
  LanguageCount lc(rep.two_sided);
  // Ten sample fiber anchors: short admissible periodic points in
  // lexicographic order of their period words.
  std::vector<BiInfinitePoint> samples;
  for (int len = 1; len <= 4 && samples.size() < 10; ++len) {
    Word w;
    auto rec = [&](auto&& self, int depth) -> void {
      if (samples.size() >= 10) return;
      if (depth == len) {
        Word doubled = w;
        doubled.insert(doubled.end(), w.begin(), w.end());
        if (!rep.two_sided.word_admissible(doubled)) return;
        BiInfinitePoint p(w, {}, w, 0);
        if (rep.two_sided.point_admissible(p) &&
            std::find(samples.begin(), samples.end(), p) == samples.end())
          samples.push_back(p);
        return;
      }
      for (int c = 0; c < rep.two_sided.alphabet_size(); ++c) {
        w.push_back(static_cast<Sym>(c));
        self(self, depth + 1);
        w.pop_back();
      }
    };
    rec(rec, 0);
  }
  for (const auto& x : samples) {
    if (!rep.two_sided.point_admissible(x)) continue;
    LeftFreeCylinder fiber{rep.two_sided, x, 0};
    auto F = CompactSet::make(fiber);
    EntropyEstimate g = growth_estimate(*F, 3, std::max<long long>(12, n_max));
    rep.max_fiber_slope = std::max(rep.max_fiber_slope, g.value);
    if (g.value != 0.0) rep.fibers_flat = false;
    // census bounded by the count of left extensions
    for (long long n = 2; n <= n_max; n += 5) {
      BigUInt cnt = separated_count(*F, n, 3);
      BigUInt bound = lc.extensions_into(x.at(0), 2);
      if (cnt > bound) rep.fibers_flat = false;
    }
  }
  return rep;
}

BigUInt AugmentedSystem::separated(long long n, long long m) const {
  if (m < 2) fail(ErrorKind::kPrecondition, "augmented census needs m >= 2");
  if (n < 1) fail(ErrorKind::kPrecondition, "horizon must be >= 1");
  WholeSpace ws{base};
  auto W = CompactSet::make(ws);
  BigUInt total;
  // Transient levels 1..n+m-2 are mutually resolved; level a shows the base
  // at horizon max(1, n-a+1) and resolution m-1.
  for (long long a = 1; a <= n + m - 2; ++a) {
    long long eff = std::max<long long>(1, n - a + 1);
    total += separated_count(*W, eff, m - 1);
  }
  // The frozen copy and the deep transient tail separate through their
  // x-parts on the fixed window [2-m, m-2] only.
  LanguageCount lc(base);
  total += lc.words_total(2 * m - 3);
  return total;
}

EntropyEstimate AugmentedSystem::growth(long long m, long long n_max) const {
  if (n_max < 4 * m) fail(ErrorKind::kHorizonTooSmall, "need n_max >= 4m");
  std::vector<double> logs(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (long long n = 1; n <= n_max; ++n)
    logs[static_cast<std::size_t>(n)] = separated(n, m).log_natural();
  EntropyEstimate e;
  e.resolution = m;
  e.horizon = n_max;
  e.estimator = "augmented/tail-slope";
  std::size_t last = static_cast<std::size_t>(n_max), half = last / 2;
  double best = 0.0;
  bool saturated = true;
  for (std::size_t i = half; i < last; ++i) {
    if (logs[last] != logs[i]) saturated = false;
    best = std::max(best, (logs[last] - logs[i]) / static_cast<double>(last - i));
  }
  e.value = saturated ? 0.0 : best;
  e.saturated = saturated;
  e.lower = e.value;
  e.upper = std::numeric_limits<double>::infinity();
  return e;
}

AugmentationReport surjective_augmentation(const Subshift& base, long long m,
                                           long long n_max, double tol) {
  AugmentationReport rep;
  rep.tolerance = tol;
  WholeSpace ws{base};
  rep.base_value = growth_estimate(*CompactSet::make(ws), m, n_max).value;
  AugmentedSystem aug{base};
  rep.augmented_value = aug.growth(m + 1, n_max).value;
  rep.preserved = std::abs(rep.base_value - rep.augmented_value) <= tol;
  return rep;
}

}  // namespace symdyn
