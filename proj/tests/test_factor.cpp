#include <cmath>
#include <random>

#include "doctest.h"
#include "symdyn/factor.hpp"
#include "symdyn/lowering.hpp"

using namespace symdyn;

namespace {
const double kLog2 = std::log(2.0);
const double kLog4 = std::log(4.0);
const double kGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
}  // namespace

TEST_CASE("apply_code on points commutes with the shift") {
  SlidingBlockCode mod2 = SlidingBlockCode::mod_map(4, 2);
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    Word c;
    for (int i = 0; i < static_cast<int>(rng() % 5); ++i)
      c.push_back(static_cast<Sym>(rng() % 4));
    BiInfinitePoint x({static_cast<Sym>(rng() % 4)}, c, {static_cast<Sym>(rng() % 4)},
                      static_cast<long long>(rng() % 7) - 3);
    long long t = static_cast<long long>(rng() % 9) - 4;
    CHECK(mod2.apply(x.shifted(t)) == mod2.apply(x).shifted(t));
    for (long long i = -8; i <= 8; ++i)
      CHECK(mod2.apply(x).at(i) == static_cast<Sym>(x.at(i) % 2));
  }
  // identity code maps a set to itself
  SlidingBlockCode id = SlidingBlockCode::identity(Subshift::full(2));
  FinitePointSet fs{Subshift::full(2),
                    {BiInfinitePoint::parse("0.110.0@0"), BiInfinitePoint::constant(0)}};
  std::sort(fs.points.begin(), fs.points.end());
  auto img = apply_code(id, *CompactSet::make(fs));
  CHECK(img->get<FinitePointSet>()->points == fs.points);
}

TEST_CASE("apply_code images: whole spaces and trees") {
  SlidingBlockCode mod2 = SlidingBlockCode::mod_map(4, 2);
  auto whole4 = CompactSet::make(WholeSpace{Subshift::full(4)});
  auto img = apply_code(mod2, *whole4);
  REQUIRE(img->get<WholeSpace>() != nullptr);
  CHECK(img->get<WholeSpace>()->shift.is_full());
  CHECK(img->get<WholeSpace>()->shift.alphabet_size() == 2);
  // memory-1 code: y_i = x_{i-1} XOR x_i on the full 2-shift
  std::map<Word, Sym> rule;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rule[{static_cast<Sym>(a), static_cast<Sym>(b)}] = a ^ b;
  SlidingBlockCode xorc(Subshift::full(2), Subshift::full(2), 1, 0, rule);
  CylinderTree t;
  t.ambient = Subshift::full(2);
  t.base = 0;
  t.depth = 6;
  t.language_backed = true;
  t.language = t.ambient;
  auto timg = apply_code(xorc, *CompactSet::make(t));
  const auto* it = timg->get<CylinderTree>();
  REQUIRE(it != nullptr);
  CHECK(it->depth == 5);
  CHECK(it->base == 1);
  CHECK(it->words.size() == 32);  // xor is onto
  // image census never exceeds the source census on matching windows
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    CylinderTree rt;
    rt.ambient = Subshift::full(2);
    rt.base = 0;
    rt.depth = 7;
    for (int w = 0; w < 40; ++w) {
      Word word;
      for (int i = 0; i < 7; ++i) word.push_back(static_cast<Sym>(rng() % 2));
      rt.words.push_back(word);
    }
    std::sort(rt.words.begin(), rt.words.end());
    rt.words.erase(std::unique(rt.words.begin(), rt.words.end()), rt.words.end());
    auto rimg = apply_code(xorc, *CompactSet::make(rt));
    for (long long d = 1; d <= 6; ++d) {
      CHECK(census(*rimg, {1, d}).count <= census(*CompactSet::make(rt), {0, d}).count);
    }
  }
}

TEST_CASE("fiber entropy") {
  SlidingBlockCode mod2 = SlidingBlockCode::mod_map(4, 2);
  EntropyEstimate f = fiber_entropy_sup(mod2, 24);
  CHECK(std::abs(f.value - kLog2) < 1e-9);
  SlidingBlockCode id = SlidingBlockCode::identity(Subshift::full(3));
  CHECK(fiber_entropy_sup(id, 20).value == 0.0);
  // collapse the golden mean to a single point: the unique fiber carries
  // the whole entropy
  Subshift gm = Subshift::forbid(2, {word_from_string("11")});
  SlidingBlockCode collapse = SlidingBlockCode::symbol_map(gm, Subshift::full(1), {0, 0});
  EntropyEstimate g = fiber_entropy_sup(collapse, 26);
  CHECK(std::abs(g.value - kGolden) < 1e-3);
}

TEST_CASE("sandwich theorem checks") {
  SlidingBlockCode mod2 = SlidingBlockCode::mod_map(4, 2);
  auto whole4 = CompactSet::make(WholeSpace{Subshift::full(4)});
  SandwichReport rep = sandwich_check(mod2, *whole4, 2, 24, 1e-6);
  CHECK(rep.chain_ok);
  CHECK(rep.counts_ok);
  CHECK(std::abs(rep.source_value - kLog4) < 1e-9);
  CHECK(std::abs(rep.image_value - kLog2) < 1e-9);
  CHECK(std::abs(rep.fiber_value - kLog2) < 1e-9);
  CHECK(std::abs(rep.source_value - rep.image_value - rep.fiber_value) < 1e-6);
  // singleton: 0 <= 0 <= log 2
  FinitePointSet fs{Subshift::full(4), {BiInfinitePoint::constant(0)}};
  SandwichReport s0 = sandwich_check(mod2, *CompactSet::make(fs), 2, 20, 1e-9);
  CHECK(s0.chain_ok);
  CHECK(s0.counts_ok);
  CHECK(s0.source_value == 0.0);
  CHECK(s0.image_value == 0.0);
  // graph-join: source words pair a free stream with its mirrored copy;
  // the image forgets the second coordinate, the defect is the fiber entropy.
  // alphabet 4 = (u, v) with u, v in {0,1}; code keeps u.
  std::vector<Sym> keep_u{0, 0, 1, 1};  // symbol = 2u + v
  SlidingBlockCode proj =
      SlidingBlockCode::symbol_map(Subshift::full(4), Subshift::full(2), keep_u);
  auto w4 = CompactSet::make(WholeSpace{Subshift::full(4)});
  SandwichReport rp = sandwich_check(proj, *w4, 2, 24, 1e-6);
  CHECK(rp.chain_ok);
  double defect = rp.source_value - rp.image_value;
  CHECK(std::abs(defect - rp.fiber_value) < 1e-6);
}

TEST_CASE("natural extension") {
  Subshift one2 = Subshift::forbid(2, {}, true);
  NaturalExtensionReport rep = natural_extension(one2, 20);
  CHECK(rep.census_preserved);
  CHECK(rep.fibers_flat);
  CHECK(rep.max_fiber_slope == 0.0);
  CHECK(rep.two_sided.one_sided() == false);
  CHECK(rep.one_sided_counts[4] == BigUInt(32));
  Subshift onegm = Subshift::forbid(2, {word_from_string("11")}, true);
  NaturalExtensionReport g = natural_extension(onegm, 20);
  CHECK(g.census_preserved);
  CHECK(g.fibers_flat);
  // slope agreement both sides
  auto two = CompactSet::make(WholeSpace{g.two_sided});
  CHECK(std::abs(growth_estimate(*two, 2, 24).value - kGolden) < 0.01);
  // a symbol with no predecessor: not surjective
  Subshift bad = Subshift::forbid(2, {word_from_string("00"), word_from_string("10")}, true);
  CHECK_THROWS_AS((void)natural_extension(bad, 8), Error);
}

TEST_CASE("surjective augmentation") {
  AugmentationReport rep = surjective_augmentation(Subshift::full(2), 2, 40);
  CHECK(rep.preserved);
  CHECK(std::abs(rep.augmented_value - kLog2) <= 1e-3);
  // singleton base: everything stays at zero slope
  AugmentationReport s = surjective_augmentation(Subshift::full(1), 2, 48, 0.06);
  CHECK(s.base_value == 0.0);
  CHECK(s.augmented_value <= 0.06);
  CHECK(s.preserved);
  // lowering delegates through the augmentation: the level-1 copy is the
  // base system, whose lowering certificate must verify as usual.
  auto lowered = uniform_lower(*CompactSet::make(WholeSpace{Subshift::full(2)}), 0.25);
  CHECK(validate_staged(*lowered->get<StagedFamily>()).pass);
}
