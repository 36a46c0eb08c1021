// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "symdyn/dimension.hpp"
#include "symdyn/factor.hpp"
#include "symdyn/lowering.hpp"
#include "symdyn/specio.hpp"

using namespace symdyn;

namespace {

const double kLog2 = std::log(2.0);
const double kLog4 = std::log(4.0);
const double kGolden = 0.4812118250596035;  // log((1+sqrt 5)/2)

int failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("criterion %02d %s  %s\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CylinderTree language_tree(const Subshift& ambient, const Subshift& language,
                           long long depth) {
  CylinderTree t;
  t.ambient = ambient;
  t.base = 0;
  t.depth = depth;
  t.language_backed = true;
  t.language = language;
  return t;
}

CylinderTree random_tree(std::mt19937_64& rng, long long depth, double keep) {
  CylinderTree t;
  t.ambient = Subshift::full(2);
  t.base = 0;
  t.depth = depth;
  Word cur;
  auto rec = [&](auto&& self, long long d) -> void {
    if (d == depth) {
      t.words.push_back(cur);
      return;
    }
    bool kept = false;
    for (int c = 0; c < 2; ++c) {
      bool keep_child = (rng() % 1000) < keep * 1000 || (d == 0);
      if (!keep_child) continue;
      kept = true;
      cur.push_back(static_cast<Sym>(c));
      self(self, d + 1);
      cur.pop_back();
    }
    if (!kept) {
      cur.push_back(static_cast<Sym>(rng() % 2));
      self(self, d + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(t.words.begin(), t.words.end());
  t.words.erase(std::unique(t.words.begin(), t.words.end()), t.words.end());
  return t;
}

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  double e2 = sft_entropy_exact(Subshift::full(2), 1e-12);
  bool ok = std::abs(e2 - kLog2) <= 1e-9;
  auto whole2 = CompactSet::make(WholeSpace{Subshift::full(2)});
  double g2 = growth_estimate(*whole2, 2, 20).value;
  ok = ok && std::abs(g2 - kLog2) <= 1e-3;
  Subshift gm = Subshift::forbid(2, {word_from_string("11")});
  double egm = sft_entropy_exact(gm, 1e-12);
  ok = ok && std::abs(egm - kGolden) <= 1e-9;
  double ggm = growth_estimate(*CompactSet::make(WholeSpace{gm}), 2, 24).value;
  ok = ok && std::abs(ggm - kGolden) <= 0.01;
  double secs = seconds_since(t0);
  ok = ok && secs < 5.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "log2 dev %.1e (growth %.1e), golden dev %.1e (growth %.1e), %.2fs",
                std::abs(e2 - kLog2), std::abs(g2 - kLog2), std::abs(egm - kGolden),
                std::abs(ggm - kGolden), secs);
  report(1, ok, buf);
}

void criterion_2() {
  std::mt19937_64 rng(20260808);
  Subshift full = Subshift::full(2);
  bool ok = true;
  int sets = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto pts = oracles::random_points(rng, full, 3 + rng() % 10);
    FinitePointSet fs{full, pts};
    auto K = CompactSet::make(fs);
    ++sets;
    for (long long n = 1; n <= 8 && ok; ++n) {
      for (long long m = 1; m <= 3 && ok; ++m) {
        BigUInt s = separated_count(*K, n, m);
        std::size_t max_sep = oracles::brute_max_separated(pts, n, m);
        bool span_ok = true;
        std::size_t min_span = oracles::brute_min_spanning(pts, n, m, rng, &span_ok);
        ok = span_ok && s == BigUInt(static_cast<std::uint64_t>(max_sep)) &&
             s == BigUInt(static_cast<std::uint64_t>(min_span));
      }
    }
    if (!ok) break;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "%d random sets, n<=8, m<=3, exhaustive oracle", sets);
  report(2, ok, buf);
}

void criterion_3() {
  bool ok = true;
  std::string detail;
  PointSource src = entropy_point_family(Subshift::full(2), BiInfinitePoint::constant(0), 2);
  for (double h : {0.2, 0.34657, 0.6}) {
    auto t0 = std::chrono::steady_clock::now();
    auto [fam, cert] = staged_lower(src, h, 5);
    bool counts = cert.counts_ok;
    bool bounds = cert.bounds_ok;
    for (const auto& line : cert.bound_lines) bounds = bounds && line.ok;
    double slope = growth_estimate(*CompactSet::make(fam), 2, cert.stages.back().l).value;
    double secs = seconds_since(t0);
    bool this_ok = counts && bounds && std::abs(slope - h) <= 0.05 && secs < 60.0 &&
                   validate_staged(fam).pass;
    ok = ok && this_ok;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "h=%.5f: l5=%lld slope=%.5f %.1fs%s ", h,
                  cert.stages.back().l, slope, secs, this_ok ? "" : " FAIL");
    detail += buf;
  }
  report(3, ok, detail);
}

void criterion_4() {
  PointSource src = entropy_point_family(Subshift::full(2), BiInfinitePoint::constant(0), 2);
  StagedFamily fam = zero_entropy_infinite(src, 0.6, 5);
  bool ok = validate_staged(fam).pass;
  auto K = CompactSet::make(fam);
  std::string detail = "slopes ";
  for (long long m = 2; m <= 5; ++m) {
    double slope = growth_estimate(*K, m, 20).value;
    ok = ok && slope < 0.05;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "m%lld=%.4f ", m, slope);
    detail += buf;
  }
  report(4, ok, detail);
}

void criterion_5() {
  std::mt19937_64 rng(5);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    CylinderTree t = random_tree(rng, 6 + static_cast<long long>(rng() % 9), 0.75);
    BridgeReport rep = bridge_check(t, 14, 1e-9);
    ok = ok && rep.chain_ok;
  }
  CylinderTree full = language_tree(Subshift::full(2), Subshift::full(2), 14);
  BridgeReport rep = bridge_check(full, 14, 1e-7);
  DimEntropyResult hb = hB_bisect(full, 1e-7);
  bool equal = std::abs(0.5 * (hb.lambda_low + hb.lambda_high) - kLog2) <= 1e-6 &&
               std::abs(rep.cover_slope - kLog2) <= 1e-6 &&
               std::abs(rep.growth_value - kLog2) <= 1e-6;
  ok = ok && rep.chain_ok && equal;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "50 random trees chained; full tree: %.9f = %.9f = %.9f",
                0.5 * (hb.lambda_low + hb.lambda_high), rep.cover_slope, rep.growth_value);
  report(5, ok, buf);
}

void criterion_6() {
  // Disjoint pairs over split alphabets; parts share base and depth.
  Subshift amb3 = Subshift::forbid(
      3, {word_from_string("02"), word_from_string("12"), word_from_string("20"),
          word_from_string("21")});
  CylinderTree bin16 = language_tree(
      amb3, Subshift::forbid(3, {word_from_string("02"), word_from_string("12"),
                                 word_from_string("20"), word_from_string("21"),
                                 word_from_string("2")}),
      16);
  CylinderTree br16 = bin16;
  br16.language = Subshift::forbid(3, {word_from_string("0"), word_from_string("1")});
  LawsReport a = hB_laws_check({bin16, br16}, 2, 5e-7);

  Subshift amb_gm = Subshift::forbid(
      3, {word_from_string("02"), word_from_string("12"), word_from_string("20"),
          word_from_string("21"), word_from_string("11")});
  CylinderTree gm24 = language_tree(
      amb_gm, Subshift::forbid(3, {word_from_string("02"), word_from_string("12"),
                                   word_from_string("20"), word_from_string("21"),
                                   word_from_string("11"), word_from_string("2")}),
      24);
  CylinderTree br24 = gm24;
  br24.language = Subshift::forbid(3, {word_from_string("0"), word_from_string("1")});
  LawsReport b = hB_laws_check({gm24, br24}, 2, 5e-7);

  // Power law for m = 3 on a depth-15 full binary tree.
  CylinderTree bin15 = language_tree(Subshift::full(2), Subshift::full(2), 15);
  LawsReport c = hB_laws_check({bin15}, 3, 5e-7);

  bool union_ok = a.union_ok && std::abs(a.union_lambda - a.max_part_lambda) <= 2e-6 &&
                  b.union_ok && std::abs(b.union_lambda - b.max_part_lambda) <= 2e-6;
  bool power_ok = a.power_ok && std::abs(a.power_lambda - 2 * a.base_lambda) <= 3e-6 &&
                  c.power_ok && std::abs(c.power_lambda - 3 * c.base_lambda) <= 3e-6;
  // countable and finite representations carry the exact zero
  FinitePointSet fs{Subshift::full(2),
                    {BiInfinitePoint::constant(0), BiInfinitePoint::parse("0.101.0@0")}};
  SetDimResult z = hB_of_set(*CompactSet::make(fs), 16, 1e-7);
  CylinderTree single;
  single.ambient = Subshift::full(2);
  single.base = 0;
  single.depth = 16;
  single.words.push_back(Word(16, 0));
  DimEntropyResult sb = hB_bisect(single, 1e-7);
  bool zero_ok = z.countable && z.value == 0.0 && sb.lambda_high <= 1e-6;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "union dev %.1e / %.1e; power dev %.1e (m=2) %.1e (m=3); countable zero %s",
                std::abs(a.union_lambda - a.max_part_lambda),
                std::abs(b.union_lambda - b.max_part_lambda),
                std::abs(a.power_lambda - 2 * a.base_lambda),
                std::abs(c.power_lambda - 3 * c.base_lambda), zero_ok ? "exact" : "BROKEN");
  report(6, union_ok && power_ok && zero_ok, buf);
}

void criterion_7() {
  std::mt19937_64 rng(7);
  ProductMeasure half = ProductMeasure::bernoulli({0.5, 0.5});
  bool uniform_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    CylinderTree t = random_tree(rng, 8 + static_cast<long long>(rng() % 5), 0.8);
    MdpReport rep = verify_uniform_mdp(half, t, 1.0, kLog2);
    uniform_ok = uniform_ok && rep.hypothesis_ok && rep.conclusion_ok;
  }
  CylinderTree typical = typical_set_tree(0.3, 0.05, 16);
  ProductMeasure skew = ProductMeasure::bernoulli({0.7, 0.3});
  MdpReport nu = verify_nonuniform_mdp(skew, typical, 0.55, 1e-6);
  double href = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
  bool nonuniform_ok =
      nu.hypothesis_ok && nu.conclusion_ok && !nu.vacuous && nu.lambda_low >= 0.55;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "uniform on 20 trees; typical tree bracket [%.4f, %.4f], H(0.3)=%.4f",
                nu.lambda_low, nu.lambda_high, href);
  report(7, uniform_ok && nonuniform_ok, buf);
}

void criterion_8() {
  SlidingBlockCode mod2 = SlidingBlockCode::mod_map(4, 2);
  EntropyEstimate fiber = fiber_entropy_sup(mod2, 24);
  bool fiber_ok = std::abs(fiber.value - kLog2) <= 1e-9;
  std::mt19937_64 rng(8);
  bool chain_ok = true;
  double max_defect = 0.0;
  int sampled = 0;
  for (int trial = 0; trial < 18; ++trial) {
    CylinderTree t = random_tree(rng, 10, 0.8);
    t.ambient = Subshift::full(4);
    for (auto& w : t.words) {
      for (auto& s : w) s = static_cast<Sym>(rng() % 4);
    }
    std::sort(t.words.begin(), t.words.end());
    t.words.erase(std::unique(t.words.begin(), t.words.end()), t.words.end());
    SandwichReport rep = sandwich_check(mod2, *CompactSet::make(t), 1, 10, 0.05);
    chain_ok = chain_ok && rep.chain_ok && rep.counts_ok;
    max_defect = std::max(max_defect, rep.source_value - rep.image_value);
    ++sampled;
  }
  for (int trial = 0; trial < 2; ++trial) {
    FinitePointSet fs{Subshift::full(4), oracles::random_points(rng, Subshift::full(4), 5)};
    SandwichReport rep = sandwich_check(mod2, *CompactSet::make(fs), 2, 20, 0.05);
    chain_ok = chain_ok && rep.chain_ok && rep.counts_ok;
    ++sampled;
  }
  auto whole4 = CompactSet::make(WholeSpace{Subshift::full(4)});
  SandwichReport eq = sandwich_check(mod2, *whole4, 2, 24, 1e-6);
  bool eq_ok = eq.chain_ok && eq.counts_ok &&
               std::abs(eq.source_value - kLog4) <= 1e-6 &&
               std::abs(eq.source_value - eq.image_value - eq.fiber_value) <= 1e-6;
  bool defect_ok = max_defect <= fiber.value + 0.05;
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "fiber dev %.1e; %d sampled sets, max defect %.4f <= fiber; "
                "log4 = log2+log2 dev %.1e",
                std::abs(fiber.value - kLog2), sampled, max_defect,
                std::abs(eq.source_value - eq.image_value - eq.fiber_value));
  report(8, fiber_ok && chain_ok && eq_ok && defect_ok, buf);
}

void criterion_9() {
  auto rows = h_star_profile_fan({1, 2, 3, 4, 5, 6}, 24);
  bool hstar_ok = true;
  for (const auto& r : rows) hstar_ok = hstar_ok && r.estimate.value >= kLog2 - 0.01;
  // Apex-converging staged picks stay flat.
  bool flat_ok = true;
  std::vector<FanPoint> reps;
  for (long long b = 1; b <= 6; ++b)
    reps.push_back(FanPoint{false, b, BiInfinitePoint::parse("0.1.0@" + std::to_string(b))});
  std::vector<CompactSetPtr> balls;
  for (int i = 0; i < 6; ++i) balls.push_back(CompactSet::make(WholeSpace{Subshift::full(2)}));
  UnionCheckReport uc = union_check(balls, reps, 5, 24, 0.02);
  flat_ok = uc.hypothesis_ok && uc.equality_ok && uc.reps_value <= 0.05;
  // Per-ball lowered fans hit the prescribed values.
  auto WF = whole_fan();
  const FanSet& whole = *WF->get<FanSet>();
  bool lower_ok = true;
  std::string detail = "fan_lower ";
  for (double h : {0.0, 0.3, 0.5, kLog2}) {
    auto lowered = fan_lower(whole, h);
    long long nmax = 24;
    for (const auto& [b, content] : lowered->get<FanSet>()->balls) {
      if (const auto* sf = content->get<StagedFamily>()) {
        for (const auto& st : sf->stages)
          nmax = std::max(nmax, std::visit([](const auto& s) { return s.length; }, st) + 6);
      }
    }
    double val = h == 0.0 ? growth_estimate(*lowered, 4, 24).value
                          : growth_estimate(*lowered, 4, nmax).value;
    lower_ok = lower_ok && std::abs(val - h) <= 0.05;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f->%.3f ", h, val);
    detail += buf;
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "; h* min %.5f; reps slope %.4f",
                rows.front().estimate.value, uc.reps_value);
  report(9, hstar_ok && flat_ok && lower_ok, detail + buf);
}

void criterion_10() {
  Subshift one2 = Subshift::forbid(2, {}, true);
  NaturalExtensionReport a = natural_extension(one2, 20);
  Subshift onegm = Subshift::forbid(2, {word_from_string("11")}, true);
  NaturalExtensionReport b = natural_extension(onegm, 20);
  AugmentationReport aug2 = surjective_augmentation(Subshift::full(2), 2, 40, 1e-3);
  Subshift gm = Subshift::forbid(2, {word_from_string("11")});
  AugmentationReport auggm = surjective_augmentation(gm, 2, 40, 1e-3);
  bool ok = a.census_preserved && a.fibers_flat && b.census_preserved && b.fibers_flat &&
            aug2.preserved && auggm.preserved;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "census equal n<=20 (full2, golden); augmentation devs %.1e, %.1e",
                std::abs(aug2.base_value - aug2.augmented_value),
                std::abs(auggm.base_value - auggm.augmented_value));
  report(10, ok, buf);
}

void criterion_11() {
  RunConfig cfg;
  cfg.seed = 7;
  PointSource src = entropy_point_family(Subshift::full(2), BiInfinitePoint::constant(0), 2);
  auto [fam1, cert1] = staged_lower(src, 0.34657, 5);
  auto [fam2, cert2] = staged_lower(src, 0.34657, 5);
  std::string a = canonical_dump(staged_artifact_json(fam1, cert1, cfg));
  std::string b = canonical_dump(staged_artifact_json(fam2, cert2, cfg));
  bool repro = a == b;
  ArtifactCheck chk = verify_staged_artifact(Json::parse(a));
  bool ok = repro && chk.valid;
  report(11, ok, repro ? "artifacts byte-identical; verify reproduces the certificate"
                       : "artifact bytes differ");
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("acceptance: %s (%d failures, %.1fs total)\n",
              failures == 0 ? "ALL PASS" : "FAILURES", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
