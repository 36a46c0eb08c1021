#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symdyn/bigint.hpp"
#include "symdyn/counting.hpp"
#include "symdyn/core.hpp"

namespace symdyn {

class CompactSet;
using CompactSetPtr = std::shared_ptr<const CompactSet>;

struct CensusResult {
  WindowSpec window;
  BigUInt count;
  std::optional<std::vector<Word>> witnesses;
};

// ---------------------------------------------------------------------------
// Representations

struct FinitePointSet {
  Subshift ambient;
  std::vector<BiInfinitePoint> points;  // sorted, pairwise distinct
};

// Depth-D outer approximation: all ambient points whose restriction to
// [base, base+depth-1] lies in the word set.  The word set is either explicit
// or "every admissible depth-word of `language`" (usable at depths where
// explicit enumeration is hopeless).
struct CylinderTree {
  Subshift ambient;
  long long base = 0;
  long long depth = 1;
  bool language_backed = false;
  std::vector<Word> words;  // explicit mode: sorted, all of size depth
  Subshift language;        // language mode
};

// One stage of a staged family: either explicit new points, or the first
// `count` admissible payload fillings in lexicographic order (excluding the
// filling that would reproduce x0).
struct ExplicitStage {
  long long length = 1;  // l_i
  std::vector<BiInfinitePoint> points;
};
struct LexStage {
  long long length = 1;       // l_i
  long long payload_lo = 0;   // P_i
  long long payload_len = 1;  // v*_i
  BigUInt count;              // N_i
};
using Stage = std::variant<ExplicitStage, LexStage>;

// Countable compact set {x0} plus stage points converging to x0.
struct StagedFamily {
  Subshift ambient;
  BiInfinitePoint x0 = BiInfinitePoint::constant(0);
  long long resolution = 2;  // m
  std::vector<Stage> stages;
};

struct WholeSpace {
  Subshift shift;
};

// {y : y_j = x_j for all j >= fixed_from} — the forward tracking sets.
struct LeftFreeCylinder {
  Subshift ambient;
  BiInfinitePoint anchor;
  long long fixed_from = 0;
};

// The fan: countable full-shift copies in shrinking balls accumulating at an
// apex fixed point.  Ball n has scale 2^{-n}; within-ball distances are
// 2^{-n-1} * d_shift.
struct FanSet {
  bool apex = true;
  std::map<long long, CompactSetPtr> balls;          // index >= 1
  std::optional<long long> full_tail_from;           // balls >= this are whole 2-shifts
};

struct FanPoint {
  bool is_apex = true;
  long long ball = 1;
  std::optional<BiInfinitePoint> x;
};

// Exact dyadic value 2^{-e}, or zero.
struct Dyadic {
  bool zero = true;
  long long neg_exp = 0;
  double value() const;
  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

class CompactSet {
 public:
  using Rep = std::variant<FinitePointSet, CylinderTree, StagedFamily, WholeSpace,
                           LeftFreeCylinder, FanSet>;
  explicit CompactSet(Rep rep) : rep_(std::move(rep)) {}

  template <typename T>
  const T* get() const {
    return std::get_if<T>(&rep_);
  }
  const Rep& rep() const { return rep_; }
  bool is_fan() const { return get<FanSet>() != nullptr; }
  bool empty() const;
  std::string kind_name() const;

  static CompactSetPtr make(Rep rep) {
    return std::make_shared<CompactSet>(std::move(rep));
  }

 private:
  friend struct StagedCacheAccess;
  Rep rep_;
  // Lazily built census helpers (lex-stage cursors); logically const.
  mutable std::shared_ptr<void> cache_;
};

// ---------------------------------------------------------------------------
// Operations

// Exact number of distinct restrictions of members of K to w.  Fan sets have
// no coordinate windows; census on them is a precondition error.
CensusResult census(const CompactSet& K, const WindowSpec& w, bool with_witnesses = false);

// Materialized plain list of restrictions (census witnesses), guarded by limit.
std::vector<Word> enumerate_restrictions(const CompactSet& K, const WindowSpec& w,
                                         std::size_t limit = (1u << 21));

CompactSetPtr outer_tree(const CompactSet& K, long long depth, long long base);

// result = T^t "reading frame" shift: member sequences q with q_i = p_{i+t}.
CompactSetPtr shift_set(const CompactSet& K, long long t);

Dyadic fan_distance(const FanPoint& u, const FanPoint& v);
// Smallest |i| with x_i != y_i (nullopt when x == y).
std::optional<long long> first_difference(const BiInfinitePoint& x, const BiInfinitePoint& y);

struct StagedDiagnostics {
  bool pass = true;
  std::string first_violation;
};
StagedDiagnostics validate_staged(const StagedFamily& f);

// Points of one stage, bridging payload fillings back into x0's tail.
std::vector<BiInfinitePoint> materialize_stage(const StagedFamily& f, std::size_t idx,
                                               std::size_t limit = (1u << 21));

// Helpers shared by builders.
Word stage_x0_fill(const StagedFamily& f, const LexStage& st);
// x0 with `filling` written at [payload_lo, payload_lo+|filling|-1], bridged
// back into x0's tail.
BiInfinitePoint splice_payload(const BiInfinitePoint& x0, const Subshift& ambient,
                               long long payload_lo, const Word& filling);
// Bridge word u (possibly empty) so that sym, u, x0[from], x0[from+1], ... is
// admissible; canonical = shortest, lexicographically least.
std::optional<Word> bridge_to_tail(const Subshift& s, Sym sym, const BiInfinitePoint& x0,
                                   long long from, int max_len = 64);

long long tree_level_count_cap(const CylinderTree& t);
// #distinct d-prefixes of the tree's words (d <= depth), as exact count.
BigUInt tree_level_count(const CylinderTree& t, long long d);

}  // namespace symdyn
