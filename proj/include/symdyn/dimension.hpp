#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symdyn/entropy.hpp"
#include "symdyn/sets.hpp"

namespace symdyn {

// n_{T,alpha}([w]) for the time-0 one-symbol partition: how many initial
// iterates keep the cylinder inside a single partition cell.  The word length
// extends by deterministically forced symbols; a forced cycle gives +infinity
// (nullopt).
std::optional<long long> n_value(const Subshift& s, const Word& w);

struct CylinderCoverElement {
  Word word;
  long long base = 0;
  std::optional<long long> n_value;
};

struct DimEntropyResult {
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  long long depth = 1;
  long long k_floor = 1;
  std::string cut_trace;
};

// Exact infimum over covers of the depth-D tree by node cylinders whose
// n-value is at least k, of sum exp(-lambda * n_value).  Infinite n-values
// weigh 0 for lambda > 0.
double m_value(const CylinderTree& K, double lambda, long long k);

DimEntropyResult hB_bisect(const CylinderTree& K, double tol = 1e-6);

// h^B for a general representation at a chosen outer depth.  Countable
// representations (finite point sets, staged families) carry h^B = 0
// structurally; everything else goes through the depth-D outer tree.
struct SetDimResult {
  DimEntropyResult bracket;
  bool countable = false;  // value pinned to 0 by countability
  double value = 0.0;
};
SetDimResult hB_of_set(const CompactSet& K, long long depth, double tol = 1e-6);

struct BridgeReport {
  double lambda_high = 0.0;          // from the bisect bracket
  double cover_slope = 0.0;          // min over tested n of (1/n) log N_n
  double growth_value = 0.0;         // separated-count growth estimate
  bool chain_ok = false;
  std::vector<double> per_k_cover_slope;  // min over n >= k, aligned with the k schedule
  std::vector<double> per_k_crossing_hi;
  std::string note;
};
BridgeReport bridge_check(const CylinderTree& K, long long n_max, double tol = 1e-6);

CylinderTree reblock_tree(const CylinderTree& t, int m);

struct LawsReport {
  double union_lambda = 0.0;
  double max_part_lambda = 0.0;
  bool union_ok = false;
  double power_lambda = 0.0;
  double base_lambda = 0.0;
  int power_m = 1;
  bool power_ok = false;
  double tolerance = 0.0;
};
// parts must share base and depth and be pairwise first-symbol-disjoint.
LawsReport hB_laws_check(const std::vector<CylinderTree>& parts, int power_m,
                         double tol = 1e-6);

struct ProductMeasure {
  enum class Kind { kBernoulli, kMarkov };
  Kind kind = Kind::kBernoulli;
  std::vector<double> p;                   // Bernoulli weights
  std::vector<std::vector<double>> rows;   // Markov transition rows
  std::vector<double> pi;                  // Markov stationary vector

  static ProductMeasure bernoulli(std::vector<double> p);
  static ProductMeasure markov(std::vector<std::vector<double>> rows, std::vector<double> pi);
  double cylinder_mass(const Word& w) const;
};

struct MdpReport {
  bool hypothesis_ok = false;
  std::optional<Word> witness;        // violating prefix when hypothesis fails
  long long witness_length = 0;
  bool conclusion_ok = false;
  double bound = 0.0;                 // d
  double c = 0.0;                     // constant (given or fitted)
  bool vacuous = false;               // fitted c too large to mean anything
  double lambda_low = 0.0, lambda_high = 0.0;
  double growth_value = 0.0;
  std::string note;
};

// theta(prefix) >= c e^{-n d} on every node  ==>  cover growth <= d.
MdpReport verify_uniform_mdp(const ProductMeasure& theta, const CylinderTree& K, double c,
                             double d);
// theta(prefix) <= c e^{-n d} along every leaf (c fitted and reported)
// ==>  the depth-D h^B bracket sits at or above d.
MdpReport verify_nonuniform_mdp(const ProductMeasure& theta, const CylinderTree& K, double d,
                                double tol = 1e-6);

// Binary words of length `depth` whose number of ones lies in the outward-
// rounded band [floor((p-eta)D), ceil((p+eta)D)].
CylinderTree typical_set_tree(double p, double eta, long long depth);

// Independent oracle: exhaustive antichain enumeration (tiny trees only).
double m_value_bruteforce(const CylinderTree& K, double lambda, long long k);
// The family-of-cylinders formulation of the same infimum (elements must
// meet K and be full n-value cylinders); equals m_value on trees.
double m_value_family_form(const CylinderTree& K, double lambda, long long n);

}  // namespace symdyn
