#pragma once

#include <map>
#include <string>
#include <vector>

#include "symdyn/entropy.hpp"
#include "symdyn/sets.hpp"

namespace symdyn {

// Sliding block code with memory a and anticipation b: y_i is a function of
// x_{i-a..i+b}.  The rule must be total on admissible windows.
class SlidingBlockCode {
 public:
  SlidingBlockCode(Subshift source, Subshift target, int memory, int anticipation,
                   std::map<Word, Sym> rule);

  static SlidingBlockCode symbol_map(const Subshift& source, const Subshift& target,
                                     const std::vector<Sym>& image_of);
  static SlidingBlockCode identity(const Subshift& s);
  static SlidingBlockCode mod_map(int source_k, int target_k);  // s mod k

  const Subshift& source() const { return source_; }
  const Subshift& target() const { return target_; }
  int memory() const { return memory_; }
  int anticipation() const { return anticipation_; }
  int window() const { return memory_ + anticipation_ + 1; }
  Sym apply_window(const Word& w) const;

  BiInfinitePoint apply(const BiInfinitePoint& x) const;
  Word apply_word(const Word& w) const;  // |w| >= window; output |w| - a - b

 private:
  Subshift source_, target_;
  int memory_, anticipation_;
  std::map<Word, Sym> rule_;
};

CompactSetPtr apply_code(const SlidingBlockCode& c, const CompactSet& K);

// sup over target n-words of (1/n) log(#source n-words mapping onto it),
// maximized over the top half of horizons ("upper-bound flavor": the sup of
// per-point fiber entropies is dominated by this word-count slope).
EntropyEstimate fiber_entropy_sup(const SlidingBlockCode& c, long long n_max);

struct SandwichReport {
  double image_value = 0.0;   // h(S, pi E)
  double source_value = 0.0;  // h(T, E)
  double fiber_value = 0.0;   // h_top(T, X | pi)
  bool chain_ok = false;      // image <= source <= image + fiber, with slack
  bool counts_ok = false;     // census(piE) <= census(E) at every tested horizon
  double slack = 0.0;
  std::string note;
};
SandwichReport sandwich_check(const SlidingBlockCode& c, const CompactSet& E, long long m,
                              long long n_max, double slack = 0.02);

struct NaturalExtensionReport {
  Subshift two_sided;
  bool census_preserved = false;       // one-sided vs two-sided counts, n <= n_max
  bool fibers_flat = false;            // first-coordinate fibers have slope 0
  std::vector<BigUInt> one_sided_counts;
  std::vector<BigUInt> two_sided_counts;
  double max_fiber_slope = 0.0;
};
NaturalExtensionReport natural_extension(const Subshift& one_sided, long long n_max);

// X' = X x {0} u X x {1/n}: level 1 carries the dynamics, levels 1/n feed
// into it, level 0 is frozen.  Census at dyadic resolutions; the added levels
// contribute zero slope.
struct AugmentedSystem {
  Subshift base;
  BigUInt separated(long long n, long long m) const;
  EntropyEstimate growth(long long m, long long n_max) const;
};
struct AugmentationReport {
  double base_value = 0.0;
  double augmented_value = 0.0;
  bool preserved = false;
  double tolerance = 0.0;
};
AugmentationReport surjective_augmentation(const Subshift& base, long long m,
                                           long long n_max, double tol = 1e-3);

}  // namespace symdyn
