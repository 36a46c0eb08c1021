#pragma once

#include <cstdint>
#include <utility>

#include "symdyn/bigint.hpp"

namespace symdyn {

enum class Round { kDown, kUp };

// Nonnegative arbitrary-precision binary float: value = mant * 2^exp2.
// All operations take an explicit precision and rounding direction, so
// interval bounds stay honest end to end.
class BigFloat {
 public:
  BigFloat() : exp2_(0) {}
  explicit BigFloat(BigUInt mant, long long exp2 = 0)
      : mant_(std::move(mant)), exp2_(exp2) {}

  static BigFloat from_u64(std::uint64_t v) { return BigFloat(BigUInt(v), 0); }

  bool is_zero() const { return mant_.is_zero(); }
  const BigUInt& mantissa() const { return mant_; }
  long long exp2() const { return exp2_; }
  // Position of the leading bit: value in [2^(e-1), 2^e).
  long long mag_exp2() const {
    return static_cast<long long>(mant_.bit_length()) + exp2_;
  }

  BigFloat rounded(std::size_t prec, Round dir) const;
  BigUInt floor() const;
  double to_double_log() const;  // natural log of the value

  static int cmp(const BigFloat& a, const BigFloat& b);
  static BigFloat mul(const BigFloat& a, const BigFloat& b, std::size_t prec, Round dir);
  static BigFloat add(const BigFloat& a, const BigFloat& b, std::size_t prec, Round dir);
  static BigFloat div_small(const BigFloat& a, std::uint64_t d, std::size_t prec, Round dir);

 private:
  BigUInt mant_;
  long long exp2_;
};

struct FloatInterval {
  BigFloat lo, hi;
};

// Rigorous enclosure of e^x for dyadic x = x_mant * 2^x_exp2 >= 0.
FloatInterval exp_interval(const BigUInt& x_mant, long long x_exp2, std::size_t prec);

// Exact floor of e^{n*h} for integer n >= 0 and double h > 0.  The argument
// n*h is treated as the exact dyadic rational it is; precision is raised
// until the floor is pinned (e^{dyadic} is never an integer for n*h != 0).
BigUInt floor_exp_nh(std::uint64_t n, double h);

// Cheap incremental enclosure of e^{n*h} for scanning consecutive n.
class ExpScanner {
 public:
  ExpScanner(double h, std::size_t prec = 128);
  // Advances to n+1 (must be called with increasing n starting at start_n).
  void step();
  std::uint64_t n() const { return n_; }
  const FloatInterval& value() const { return cur_; }
  void reset(std::uint64_t n);

 private:
  double h_;
  std::size_t prec_;
  FloatInterval e_h_;   // enclosure of e^h
  FloatInterval cur_;   // enclosure of e^{n h}
  std::uint64_t n_ = 0;
};

}  // namespace symdyn
