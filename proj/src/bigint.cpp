#include "symdyn/bigint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace symdyn {

BigUInt::BigUInt(std::uint64_t v) {
  if (v != 0) limbs_.push_back(v);
}

void BigUInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::size_t BigUInt::bit_length() const {
  if (limbs_.empty()) return 0;
  std::uint64_t top = limbs_.back();
  std::size_t b = 0;
  while (top) {
    ++b;
    top >>= 1;
  }
  return (limbs_.size() - 1) * 64 + b;
}

bool BigUInt::bit(std::size_t i) const {
  std::size_t limb = i / 64, off = i % 64;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> off) & 1u;
}

int BigUInt::cmp(const BigUInt& a, const BigUInt& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

BigUInt& BigUInt::operator+=(const BigUInt& rhs) {
  if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 s = carry + limbs_[i];
    if (i < rhs.limbs_.size()) s += rhs.limbs_[i];
    limbs_[i] = static_cast<std::uint64_t>(s);
    carry = s >> 64;
    if (carry == 0 && i >= rhs.limbs_.size()) break;
  }
  if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
  return *this;
}

BigUInt& BigUInt::operator-=(const BigUInt& rhs) {
  if (cmp(*this, rhs) < 0) throw std::underflow_error("BigUInt subtraction underflow");
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 sub = borrow;
    if (i < rhs.limbs_.size()) sub += rhs.limbs_[i];
    if (sub > limbs_[i]) {
      limbs_[i] = static_cast<std::uint64_t>(((unsigned __int128)1 << 64) + limbs_[i] - sub);
      borrow = 1;
    } else {
      limbs_[i] -= static_cast<std::uint64_t>(sub);
      borrow = 0;
    }
    if (borrow == 0 && i >= rhs.limbs_.size()) break;
  }
  trim();
  return *this;
}

BigUInt& BigUInt::operator<<=(std::size_t bits) {
  if (limbs_.empty() || bits == 0) return *this;
  std::size_t limb_shift = bits / 64, off = bits % 64;
  std::size_t old = limbs_.size();
  limbs_.resize(old + limb_shift + 1, 0);
  for (std::size_t i = old; i-- > 0;) {
    std::uint64_t lo = limbs_[i] << off;
    std::uint64_t hi = off ? (limbs_[i] >> (64 - off)) : 0;
    limbs_[i + limb_shift] = lo;
    if (hi) limbs_[i + limb_shift + 1] |= hi;
  }
  for (std::size_t i = 0; i < limb_shift; ++i) limbs_[i] = 0;
  trim();
  return *this;
}

BigUInt& BigUInt::operator>>=(std::size_t bits) {
  if (limbs_.empty() || bits == 0) return *this;
  std::size_t limb_shift = bits / 64, off = bits % 64;
  if (limb_shift >= limbs_.size()) {
    limbs_.clear();
    return *this;
  }
  for (std::size_t i = 0; i + limb_shift < limbs_.size(); ++i) {
    std::uint64_t lo = limbs_[i + limb_shift] >> off;
    std::uint64_t hi = 0;
    if (off && i + limb_shift + 1 < limbs_.size())
      hi = limbs_[i + limb_shift + 1] << (64 - off);
    limbs_[i] = lo | hi;
  }
  limbs_.resize(limbs_.size() - limb_shift);
  trim();
  return *this;
}

BigUInt BigUInt::mul(const BigUInt& a, const BigUInt& b) {
  if (a.is_zero() || b.is_zero()) return BigUInt();
  BigUInt out;
  out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    unsigned __int128 carry = 0;
    std::uint64_t ai = a.limbs_[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      unsigned __int128 cur =
          (unsigned __int128)ai * b.limbs_[j] + out.limbs_[i + j] + carry;
      out.limbs_[i + j] = static_cast<std::uint64_t>(cur);
      carry = cur >> 64;
    }
    std::size_t k = i + b.limbs_.size();
    while (carry) {
      unsigned __int128 cur = carry + out.limbs_[k];
      out.limbs_[k] = static_cast<std::uint64_t>(cur);
      carry = cur >> 64;
      ++k;
    }
  }
  out.trim();
  return out;
}

BigUInt& BigUInt::mul_small(std::uint64_t m) {
  if (m == 0 || limbs_.empty()) {
    limbs_.clear();
    return *this;
  }
  unsigned __int128 carry = 0;
  for (auto& l : limbs_) {
    unsigned __int128 cur = (unsigned __int128)l * m + carry;
    l = static_cast<std::uint64_t>(cur);
    carry = cur >> 64;
  }
  if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
  return *this;
}

std::uint64_t BigUInt::divmod_small(std::uint64_t d) {
  if (d == 0) throw std::domain_error("BigUInt division by zero");
  unsigned __int128 rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    unsigned __int128 cur = (rem << 64) | limbs_[i];
    limbs_[i] = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  trim();
  return static_cast<std::uint64_t>(rem);
}

BigUInt BigUInt::pow_small(std::uint64_t base, std::uint64_t e) {
  BigUInt result(1);
  BigUInt b(base);
  while (e) {
    if (e & 1) result = mul(result, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return result;
}

BigUInt BigUInt::from_decimal(const std::string& s) {
  BigUInt out;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
    out.mul_small(10);
    out += BigUInt(static_cast<std::uint64_t>(c - '0'));
  }
  return out;
}

std::string BigUInt::to_decimal() const {
  if (is_zero()) return "0";
  BigUInt tmp = *this;
  std::string out;
  while (!tmp.is_zero()) {
    std::uint64_t r = tmp.divmod_small(10000000000000000000ull);  // 10^19
    std::string chunk = std::to_string(r);
    if (!tmp.is_zero()) chunk = std::string(19 - chunk.size(), '0') + chunk;
    out = chunk + out;
  }
  return out;
}

void BigUInt::to_double_exp(double* mantissa, long long* exp2) const {
  if (is_zero()) {
    *mantissa = 0.0;
    *exp2 = 0;
    return;
  }
  std::size_t bl = bit_length();
  // Assemble the top <= 64 bits.
  std::uint64_t top = 0;
  std::size_t take = bl >= 64 ? 64 : bl;
  for (std::size_t i = 0; i < take; ++i) {
    if (bit(bl - 1 - i)) top |= (1ull << (take - 1 - i));
  }
  *mantissa = std::ldexp(static_cast<double>(top), -static_cast<int>(take));
  *exp2 = static_cast<long long>(bl);
}

double BigUInt::log_natural() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  double m;
  long long e;
  to_double_exp(&m, &e);
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

double BigUInt::to_double() const {
  double m;
  long long e;
  to_double_exp(&m, &e);
  if (e > 1020) return std::numeric_limits<double>::infinity();
  return std::ldexp(m, static_cast<int>(e));
}

}  // namespace symdyn
