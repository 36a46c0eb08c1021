#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symdyn {

// Arbitrary-precision unsigned integer, little-endian 64-bit limbs.
// Counting sets of words in this toolkit routinely overflows 64 bits
// (stage cardinalities behave like e^{l h} with l in the tens of
// thousands), so everything combinatorial runs through this type.
class BigUInt {
 public:
  BigUInt() = default;
  BigUInt(std::uint64_t v);  // NOLINT: implicit on purpose

  static BigUInt from_decimal(const std::string& s);
  std::string to_decimal() const;

  bool is_zero() const { return limbs_.empty(); }
  std::size_t bit_length() const;
  bool bit(std::size_t i) const;

  // -1, 0, +1
  static int cmp(const BigUInt& a, const BigUInt& b);

  BigUInt& operator+=(const BigUInt& rhs);
  BigUInt& operator-=(const BigUInt& rhs);  // requires *this >= rhs
  BigUInt& operator<<=(std::size_t bits);
  BigUInt& operator>>=(std::size_t bits);

  friend BigUInt operator+(BigUInt a, const BigUInt& b) { return a += b; }
  friend BigUInt operator-(BigUInt a, const BigUInt& b) { return a -= b; }
  friend BigUInt operator<<(BigUInt a, std::size_t s) { return a <<= s; }
  friend BigUInt operator>>(BigUInt a, std::size_t s) { return a >>= s; }
  friend BigUInt operator*(const BigUInt& a, const BigUInt& b) { return mul(a, b); }

  friend bool operator==(const BigUInt& a, const BigUInt& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const BigUInt& a, const BigUInt& b) { return cmp(a, b) != 0; }
  friend bool operator<(const BigUInt& a, const BigUInt& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const BigUInt& a, const BigUInt& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const BigUInt& a, const BigUInt& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const BigUInt& a, const BigUInt& b) { return cmp(a, b) >= 0; }

  static BigUInt mul(const BigUInt& a, const BigUInt& b);
  BigUInt& mul_small(std::uint64_t m);
  // Divides in place, returns remainder. d != 0.
  std::uint64_t divmod_small(std::uint64_t d);

  static BigUInt pow_small(std::uint64_t base, std::uint64_t e);

  bool fits_u64() const { return limbs_.size() <= 1; }
  std::uint64_t to_u64() const { return limbs_.empty() ? 0 : limbs_[0]; }

  // value ~= mantissa * 2^exp2 with mantissa in [0.5, 1); zero -> (0, 0).
  void to_double_exp(double* mantissa, long long* exp2) const;
  // Natural log; log(0) = -inf.
  double log_natural() const;
  double to_double() const;  // +inf if too large

  const std::vector<std::uint64_t>& limbs() const { return limbs_; }

 private:
  void trim();
  std::vector<std::uint64_t> limbs_;
};

}  // namespace symdyn
