#include "symdyn/lowering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symdyn/bigfloat.hpp"
#include "symdyn/counting.hpp"

namespace symdyn {

PointSource::PointSource(const Subshift& ambient, BiInfinitePoint x0, long long m)
    : ambient_(ambient), x0_(std::move(x0)), m_(m) {
  if (m < 1) fail(ErrorKind::kPrecondition, "resolution must be >= 1");
  if (!ambient_.is_full() && !ambient_.is_one_step())
    fail(ErrorKind::kNotOneStep, "sources need a full shift or 1-step SFT");
  if (!ambient_.mixing())
    fail(ErrorKind::kNotMixing, "sources need a mixing ambient shift");
  if (!ambient_.point_admissible(x0_))
    fail(ErrorKind::kInadmissibleInput, "anchor point not admissible");
  capacity_ = sft_entropy_exact(ambient_);
  if (capacity_ <= 1e-12)
    fail(ErrorKind::kZeroEntropyAmbient, "ambient shift has zero entropy");
}

BigUInt PointSource::available_classes(long long l_prev, long long l) const {
  if (l <= l_prev) fail(ErrorKind::kPrecondition, "stage horizon must exceed l_prev");
  long long v = l - l_prev - 1;
  LanguageCount lc(ambient_);
  if (v <= 0) return BigUInt(1);  // only the class of x0 fits
  Sym left = x0_.at(l_prev + m_ - 1);
  return lc.continuations(left, v);
}

BigUInt PointSource::stage_capacity(long long l_prev, long long l) const {
  BigUInt avail = available_classes(l_prev, l);
  if (avail.is_zero()) return avail;
  return avail - BigUInt(1);
}

PointSource::Emission PointSource::emit(long long l_prev, long long l,
                                        const BigUInt& want) const {
  BigUInt cap = stage_capacity(l_prev, l);
  Emission e;
  e.stage.length = l;
  e.stage.payload_lo = l_prev + m_;
  e.stage.payload_len = l - l_prev - 1;
  e.stage.count = want;
  if (want > cap) {
    e.stage.count = cap;
    e.exhausted = true;
  }
  return e;
}

PointSource entropy_point_family(const Subshift& s, const BiInfinitePoint& x0, long long m) {
  return PointSource(s, x0, m);
}

namespace {

// Minimal l > l_prev admitting floor(e^{l h}) - S_prev + 2 separated
// candidates.  The scan runs on a rigorous 192-bit enclosure of e^{l h};
// undecided points (enclosure straddles the threshold) fall back to the
// exact floor.
long long minimal_stage_horizon(const PointSource& src, double h, long long l_prev,
                                const BigUInt& s_prev) {
  ExpScanner scan(h, 192);
  scan.reset(static_cast<std::uint64_t>(l_prev + 1));
  for (long long l = l_prev + 1;; ++l, scan.step()) {
    BigUInt avail = src.available_classes(l_prev, l);
    // condition: avail + s_prev >= floor(e^{l h}) + 2
    BigUInt lhs = avail + s_prev;
    BigUInt f_hi = scan.value().hi.floor() + BigUInt(2);
    if (lhs >= f_hi) return l;  // floor(e^{lh}) <= floor(hi)
    BigUInt f_lo = scan.value().lo.floor() + BigUInt(2);
    if (lhs < f_lo) continue;  // floor(e^{lh}) >= floor(lo)
    BigUInt f = floor_exp_nh(static_cast<std::uint64_t>(l), h) + BigUInt(2);
    if (lhs >= f) return l;
  }
}

BigUInt staged_count(const StagedFamily& f, long long l) {
  return separated_count(*CompactSet::make(f), l, f.resolution);
}

}  // namespace

std::pair<StagedFamily, LoweringCertificate> staged_lower(const PointSource& src,
                                                              double h, int stages,
                                                              long long start_offset) {
  if (stages < 1) fail(ErrorKind::kPrecondition, "need at least one stage");
  if (!(h > 0)) fail(ErrorKind::kPrecondition, "target entropy must be positive");
  if (h >= src.capacity() - 1e-9)
    fail(ErrorKind::kSourceCapacityExceeded,
         "target must sit strictly below the source capacity");
  StagedFamily fam;
  fam.ambient = src.ambient();
  fam.x0 = src.x0();
  fam.resolution = src.resolution();
  LoweringCertificate cert;
  cert.target = h;
  cert.resolution = src.resolution();

  long long l_prev = start_offset;
  BigUInt s_prev(0);
  for (int i = 1; i <= stages; ++i) {
    long long l = minimal_stage_horizon(src, h, l_prev, s_prev);
    BigUInt s_i = floor_exp_nh(static_cast<std::uint64_t>(l), h);
    BigUInt want = s_i - s_prev + BigUInt(1);
    auto emission = src.emit(l_prev, l, want);
    if (emission.exhausted)
      fail(ErrorKind::kNonConvergence, "source exhausted below the certified count");
    fam.stages.push_back(emission.stage);
    StageRecord rec;
    rec.l = l;
    rec.floor_elh = s_i;
    rec.new_count = want;
    rec.cumulative = s_i + BigUInt(static_cast<std::uint64_t>(i));
    cert.stages.push_back(std::move(rec));
    l_prev = l;
    s_prev = s_i;
  }

  // Certificate arithmetic: cumulative counts match floor(e^{l_i h}) + i.
  cert.counts_ok = true;
  BigUInt running(0);
  for (std::size_t i = 0; i < cert.stages.size(); ++i) {
    running += cert.stages[i].new_count;
    if (running != cert.stages[i].cumulative) cert.counts_ok = false;
  }

  // Two-sided separated-count bounds at sampled horizons of every window
  // [l_n, l_{n+1}): floor(e^{l_n h}) + n <= s_l <= floor(e^{l h}) + n + 1.
  cert.bounds_ok = true;
  for (std::size_t n = 1; n <= cert.stages.size(); ++n) {
    long long lo = cert.stages[n - 1].l;
    long long hi = (n < cert.stages.size()) ? cert.stages[n].l - 1 : lo + lo / 8 + 2;
    std::vector<long long> samples{lo, lo + 1, (lo + hi) / 2, hi};
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    for (long long l : samples) {
      if (l < lo || (n < cert.stages.size() && l >= cert.stages[n].l)) continue;
      BoundLine line;
      line.horizon = l;
      line.lower = cert.stages[n - 1].floor_elh + BigUInt(static_cast<std::uint64_t>(n));
      line.count = staged_count(fam, l);
      line.upper = floor_exp_nh(static_cast<std::uint64_t>(l), h) +
                   BigUInt(static_cast<std::uint64_t>(n + 1));
      line.ok = line.lower <= line.count && line.count <= line.upper;
      if (!line.ok) cert.bounds_ok = false;
      cert.bound_lines.push_back(std::move(line));
    }
  }
  return {std::move(fam), std::move(cert)};
}

StagedFamily zero_entropy_infinite(const PointSource& src, double h_init, int levels,
                                   long long spread) {
  if (!(h_init > 0) || h_init >= src.capacity() - 1e-9)
    fail(ErrorKind::kSourceCapacityExceeded, "h_init must sit inside (0, capacity)");
  StagedFamily out;
  out.ambient = src.ambient();
  out.x0 = src.x0();
  out.resolution = src.resolution();
  long long prev_payload_end = 0;
  for (int n = 1; n <= levels; ++n) {
    double target = h_init / static_cast<double>(n + 1);
    long long mn = src.resolution() + n - 1;
    PointSource level_src(src.ambient(), src.x0(), mn);
    long long offset = std::max<long long>(n * spread, prev_payload_end + 2);
    auto [fam, cert] = staged_lower(level_src, target, 1, offset);
    const auto& st = std::get<LexStage>(fam.stages[0]);
    // One representative per level: the lexicographically first stage point.
    LexBlock block(fam.ambient, fam.x0.at(st.payload_lo - 1), st.payload_len);
    BigUInt first_rank =
        block.rank(stage_x0_fill(fam, st)).is_zero() ? BigUInt(1) : BigUInt(0);
    ExplicitStage stage;
    stage.points.push_back(
        splice_payload(fam.x0, fam.ambient, st.payload_lo, block.unrank(first_rank)));
    long long payload_end = st.payload_lo + st.payload_len - 1;
    stage.length = payload_end - out.resolution + 2;
    if (!out.stages.empty()) {
      long long last = std::visit([](const auto& s) { return s.length; }, out.stages.back());
      stage.length = std::max(stage.length, last + 1);
    }
    out.stages.push_back(std::move(stage));
    prev_payload_end = payload_end;
  }
  return out;
}

namespace {

std::optional<BiInfinitePoint> periodic_point_of(const Subshift& s) {
  if (s.is_full()) return BiInfinitePoint::constant(0);
  // Shortest cycle through the transition graph, preferring low symbols.
  for (int a = 0; a < s.alphabet_size(); ++a) {
    if (s.transition_allowed(static_cast<Sym>(a), static_cast<Sym>(a))) {
      BiInfinitePoint p = BiInfinitePoint::constant(static_cast<Sym>(a));
      if (s.point_admissible(p)) return p;
    }
  }
  // BFS over paths up to length k for a short cycle.
  for (int start = 0; start < s.alphabet_size(); ++start) {
    std::vector<Word> frontier{Word{static_cast<Sym>(start)}};
    for (int len = 1; len <= s.alphabet_size(); ++len) {
      std::vector<Word> next;
      for (const auto& w : frontier) {
        for (int c = 0; c < s.alphabet_size(); ++c) {
          if (!s.transition_allowed(w.back(), static_cast<Sym>(c))) continue;
          if (c == start) {
            BiInfinitePoint p(w, {}, w, 0);
            if (s.point_admissible(p)) return p;
          }
          Word w2 = w;
          w2.push_back(static_cast<Sym>(c));
          next.push_back(std::move(w2));
        }
      }
      frontier = std::move(next);
    }
  }
  return std::nullopt;
}

// Stage skeleton for the full-capacity family: super-geometric horizons so
// the payload fraction of each window tends to one.
std::vector<long long> capacity_horizons(long long m, long long n_max) {
  long long l1 = std::max<long long>(16, 4 * m);
  l1 = std::min(l1, std::max<long long>(8, n_max));
  return {l1, l1 * 16, l1 * 16 * 16};
}

CompactSetPtr full_capacity_family(const Subshift& core, const BiInfinitePoint& x0,
                                   long long m, long long n_max) {
  PointSource src(core, x0, m);
  StagedFamily fam;
  fam.ambient = core;
  fam.x0 = x0;
  fam.resolution = m;
  long long l_prev = 0;
  for (long long l : capacity_horizons(m, n_max)) {
    auto emission = src.emit(l_prev, l, src.stage_capacity(l_prev, l));
    if (emission.stage.count.is_zero()) continue;
    fam.stages.push_back(emission.stage);
    l_prev = l;
  }
  return CompactSet::make(std::move(fam));
}

// The mixing core of a representation, when one is visible structurally.
std::optional<Subshift> mixing_core(const CompactSet& E) {
  if (const auto* ws = E.get<WholeSpace>()) {
    if ((ws->shift.is_full() || ws->shift.is_one_step()) && ws->shift.mixing())
      return ws->shift;
    return std::nullopt;
  }
  if (const auto* t = E.get<CylinderTree>()) {
    if (t->language_backed && t->language.mixing() &&
        (t->language.is_full() || t->language.is_one_step()))
      return t->language;
  }
  return std::nullopt;
}

}  // namespace

CompactSetPtr uniform_lower(const CompactSet& E, double h, long long m, long long n_max) {
  if (E.empty()) fail(ErrorKind::kPrecondition, "cannot lower the empty set");
  if (h < -1e-12) fail(ErrorKind::kTargetOutOfRange, "target entropy must be >= 0");
  auto core = mixing_core(E);
  if (h <= 1e-12) {
    // A singleton, drawn from E.
    if (core) {
      auto p = periodic_point_of(*core);
      if (p) {
        FinitePointSet fs{*core, {*p}};
        return CompactSet::make(std::move(fs));
      }
    }
    if (const auto* fs = E.get<FinitePointSet>()) {
      FinitePointSet one{fs->ambient, {fs->points.front()}};
      return CompactSet::make(std::move(one));
    }
    if (const auto* sf = E.get<StagedFamily>()) {
      FinitePointSet one{sf->ambient, {sf->x0}};
      return CompactSet::make(std::move(one));
    }
    fail(ErrorKind::kSourceUnavailable, "no structural point available in E");
  }
  if (!core)
    fail(ErrorKind::kSourceUnavailable,
         "E exposes no mixing SFT core; the non-constructive branch is out of reach");
  double cap = sft_entropy_exact(*core);
  if (h > cap + 1e-9) fail(ErrorKind::kTargetOutOfRange, "target exceeds the entropy of E");
  auto x0 = periodic_point_of(*core);
  if (!x0) fail(ErrorKind::kSourceUnavailable, "no periodic anchor point in E");
  if (h >= cap - 1e-6) {
    return full_capacity_family(*core, *x0, m, n_max);
  }
  PointSource src(*core, *x0, m);
  auto [fam, cert] = staged_lower(src, h, 5);
  if (!cert.counts_ok || !cert.bounds_ok)
    fail(ErrorKind::kInternal, "lowering certificate failed to verify");
  return CompactSet::make(std::move(fam));
}

CompactSetPtr fan_lower(const FanSet& K, double h, long long n_max) {
  if (h < -1e-12) fail(ErrorKind::kTargetOutOfRange, "target entropy must be >= 0");
  FanSet out;
  out.apex = true;
  if (h <= 1e-12) return CompactSet::make(std::move(out));  // just the apex
  const double kLog2 = std::log(2.0);
  if (h > kLog2 + 1e-9) fail(ErrorKind::kTargetOutOfRange, "fan entropy tops out at log 2");
  // Materialize a few balls; each lowered ball already realizes the target,
  // so a finite selection reaches the supremum.
  std::vector<std::pair<long long, CompactSetPtr>> contents;
  if (K.full_tail_from) {
    for (long long b = *K.full_tail_from; b < *K.full_tail_from + 3; ++b) {
      if (!K.balls.count(b))
        contents.emplace_back(b, CompactSet::make(WholeSpace{Subshift::full(2)}));
    }
  }
  for (const auto& [b, content] : K.balls) {
    if (contents.size() >= 5) break;
    contents.emplace_back(b, content);
  }
  for (const auto& [b, content] : contents) {
    if (content->empty()) continue;
    double ball_h = growth_estimate(*content, 2, n_max).value;
    double target = std::min(h, ball_h);
    if (h >= ball_h - 1e-9) {
      out.balls[b] = content;  // the ball itself already has the right entropy
    } else {
      out.balls[b] = uniform_lower(*content, target, 2, n_max);
    }
  }
  return CompactSet::make(std::move(out));
}

CounterexampleReport counterexample_partition(const PointSource& src, double a,
                                              long long depth,
                                              const std::vector<long long>& resolutions) {
  if (!(a > 0) || a > src.capacity() + 1e-9)
    fail(ErrorKind::kPrecondition, "union target must sit in (0, capacity]");
  CounterexampleReport rep;
  rep.target = a;
  long long m = src.resolution();
  // Full-capacity family whose first stage spans the requested depth.
  StagedFamily fam;
  fam.ambient = src.ambient();
  fam.x0 = src.x0();
  fam.resolution = m;
  long long l_prev = 0;
  for (long long l : {depth, depth * 16, depth * 16 * 16}) {
    auto emission = src.emit(l_prev, l, src.stage_capacity(l_prev, l));
    if (emission.stage.count.is_zero()) continue;
    fam.stages.push_back(emission.stage);
    l_prev = l;
  }
  auto F = CompactSet::make(fam);
  for (long long res : resolutions) {
    rep.union_slopes.push_back(growth_estimate(*F, res, depth).value);
  }
  // The certified claim binds at the source's own resolution; coarser rows
  // are informational (their windows clip the payload a step earlier).
  rep.union_ok = !rep.union_slopes.empty() && rep.union_slopes.front() >= a - 0.05;

  // Greedy thinning: accept a candidate while the selected family's counts
  // stay below l+1 on a fixed horizon grid; skip the rest of a stage after
  // its first rejection (a valid greedy choice, the skipped run joins the
  // current block).
  std::vector<long long> grid{5, 10, 20, 40, 80, 160, 320, 400};
  std::vector<BiInfinitePoint> selected{src.x0()};
  std::vector<BigUInt> accepted;  // 1-based global candidate indices
  BigUInt global(0);
  auto fits = [&](const BiInfinitePoint& cand) {
    FinitePointSet probe{src.ambient(), selected};
    probe.points.push_back(cand);
    auto P = CompactSet::make(std::move(probe));
    for (long long res : resolutions) {
      for (long long l : grid) {
        if (separated_count(*P, l, res) > BigUInt(static_cast<std::uint64_t>(l + 1)))
          return false;
      }
    }
    return true;
  };
  const std::size_t accept_budget = 48;  // materialized head of the subsequence
  for (std::size_t si = 0; si < fam.stages.size(); ++si) {
    const auto& st = std::get<LexStage>(fam.stages[si]);
    LexBlock block(fam.ambient, fam.x0.at(st.payload_lo - 1), st.payload_len);
    Word x0fill = stage_x0_fill(fam, st);
    BigUInt r0 = block.rank(x0fill);
    BigUInt r(0);
    BigUInt processed(0);
    bool stage_open = accepted.size() < accept_budget;
    while (processed < st.count && stage_open) {
      if (r == r0) {
        r += BigUInt(1);
        continue;
      }
      global += BigUInt(1);
      processed += BigUInt(1);
      BiInfinitePoint cand = splice_payload(fam.x0, fam.ambient, st.payload_lo,
                                            block.unrank(r));
      if (fits(cand)) {
        selected.push_back(cand);
        accepted.push_back(global);
        if (accepted.size() >= accept_budget) stage_open = false;
      } else {
        stage_open = false;
      }
      r += BigUInt(1);
    }
    if (processed < st.count) global += st.count - processed;  // skipped run
  }

  // Blocks B_j run from one accepted index to just before the next; the tail
  // past the last acceptance forms the final block.  Every block is finite,
  // which is the whole point: each carries entropy 0 while the union keeps
  // the full slope.
  BigUInt prev(1);
  for (std::size_t j = 1; j < accepted.size(); ++j) {
    rep.block_sizes.push_back(accepted[j] - prev);
    prev = accepted[j];
  }
  if (global >= prev) rep.block_sizes.push_back(global - prev + BigUInt(1));
  rep.blocks = static_cast<long long>(rep.block_sizes.size());
  rep.blocks_finite = true;
  for (const auto& sz : rep.block_sizes) {
    if (sz.bit_length() <= 20)
      rep.block_saturation_slopes.push_back(sz.log_natural() / 400.0);
  }
  FinitePointSet thin{src.ambient(), selected};
  rep.thinned_slope = growth_estimate(*CompactSet::make(thin), m, 400).value;
  rep.thinned_ok = rep.thinned_slope <= 0.05;
  rep.note = "finite-horizon evidence only; the limit statement is not machine-checkable";
  return rep;
}

}  // namespace symdyn
