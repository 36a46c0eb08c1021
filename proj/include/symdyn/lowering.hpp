#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symdyn/entropy.hpp"
#include "symdyn/sets.hpp"

namespace symdyn {

// Generator of points converging to an anchor x0 in a mixing ambient shift.
// Stage payloads are lexicographic filling blocks; capacity is certified by
// exact counting of the admissible fillings, never assumed.
class PointSource {
 public:
  PointSource(const Subshift& ambient, BiInfinitePoint x0, long long m);

  const Subshift& ambient() const { return ambient_; }
  const BiInfinitePoint& x0() const { return x0_; }
  long long resolution() const { return m_; }
  double capacity() const { return capacity_; }

  // Number of pairwise (l, 2^-m)-separated candidate classes available to a
  // stage constrained to agree with x0 on ball_window(l_prev, m); the class
  // of x0 itself is included.
  BigUInt available_classes(long long l_prev, long long l) const;
  // Most non-x0 points a stage at (l_prev, l) can hold.
  BigUInt stage_capacity(long long l_prev, long long l) const;

  struct Emission {
    LexStage stage;
    bool exhausted = false;  // fewer points than requested
  };
  Emission emit(long long l_prev, long long l, const BigUInt& want) const;

 private:
  Subshift ambient_;
  BiInfinitePoint x0_;
  long long m_;
  double capacity_;
};

PointSource entropy_point_family(const Subshift& s, const BiInfinitePoint& x0, long long m);

struct StageRecord {
  long long l = 0;
  BigUInt floor_elh;   // floor(e^{l h})
  BigUInt new_count;   // stage cardinality
  BigUInt cumulative;  // floor(e^{l h}) + stage index
};

struct BoundLine {
  long long horizon = 0;
  BigUInt lower;  // floor(e^{l_n h}) + n
  BigUInt count;  // s_l of the family
  BigUInt upper;  // floor(e^{l h}) + n + 1
  bool ok = false;
};

struct LoweringCertificate {
  double target = 0.0;
  long long resolution = 2;
  std::vector<StageRecord> stages;
  bool counts_ok = false;      // |A_i| = floor(e^{l_i h}) + i, exactly
  bool bounds_ok = false;      // two-sided bounds at all sampled horizons
  std::vector<BoundLine> bound_lines;
};

// The inductive construction: minimal stage horizons, exact stage counts
// floor(e^{l_i h}) + i, verified two-sided separated-count bounds.
std::pair<StagedFamily, LoweringCertificate> staged_lower(const PointSource& src,
                                                              double h, int stages,
                                                              long long start_offset = 0);

// Countable infinite compact subset with zero entropy: one representative per
// level, levels built at shrinking targets h/(n+1) and finer resolutions
// m+n-1, spread rightward so counts stay flat at every fixed horizon.
StagedFamily zero_entropy_infinite(const PointSource& src, double h_init, int levels,
                                   long long spread = 25);

// Uniform lowering dispatcher for subshift-representable sets.
CompactSetPtr uniform_lower(const CompactSet& E, double h, long long m = 2,
                        long long n_max = 24);

// Hereditary lowering inside the fan: per-ball targets min(h, ball entropy).
CompactSetPtr fan_lower(const FanSet& K, double h, long long n_max = 24);

struct CounterexampleReport {
  double target = 0.0;
  std::vector<double> union_slopes;           // per tested resolution
  double thinned_slope = 0.0;
  std::vector<BigUInt> block_sizes;
  std::vector<double> block_saturation_slopes;
  long long blocks = 0;
  bool union_ok = false;    // union slope >= a - tol at each tested resolution
  bool thinned_ok = false;  // thinned slope <= 0.05
  bool blocks_finite = true;
  std::string note;  // finite-horizon evidence only
};

CounterexampleReport counterexample_partition(const PointSource& src, double a,
                                              long long depth = 20,
                                              const std::vector<long long>& resolutions = {2,
                                                                                          3});

}  // namespace symdyn
