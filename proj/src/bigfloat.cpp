#include "symdyn/bigfloat.hpp"

#include <cmath>
#include <stdexcept>

namespace symdyn {

BigFloat BigFloat::rounded(std::size_t prec, Round dir) const {
  std::size_t bl = mant_.bit_length();
  if (bl <= prec) return *this;
  std::size_t drop = bl - prec;
  BigUInt m = mant_;
  BigUInt shifted = m >> drop;
  bool lost = false;
  if (dir == Round::kUp) {
    BigUInt back = shifted << drop;
    lost = (back != m);
  }
  if (lost) shifted += BigUInt(1);
  return BigFloat(shifted, exp2_ + static_cast<long long>(drop));
}

BigUInt BigFloat::floor() const {
  if (mant_.is_zero()) return BigUInt();
  if (exp2_ >= 0) return mant_ << static_cast<std::size_t>(exp2_);
  std::size_t s = static_cast<std::size_t>(-exp2_);
  if (s >= mant_.bit_length()) return BigUInt();
  return mant_ >> s;
}

double BigFloat::to_double_log() const {
  if (mant_.is_zero()) return -std::numeric_limits<double>::infinity();
  return mant_.log_natural() + static_cast<double>(exp2_) * std::log(2.0);
}

int BigFloat::cmp(const BigFloat& a, const BigFloat& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return 0;
    return a.is_zero() ? -1 : 1;
  }
  long long ma = a.mag_exp2(), mb = b.mag_exp2();
  if (ma != mb) return ma < mb ? -1 : 1;
  // Align to a common exponent without losing bits.
  long long e = std::min(a.exp2_, b.exp2_);
  BigUInt am = a.mant_ << static_cast<std::size_t>(a.exp2_ - e);
  BigUInt bm = b.mant_ << static_cast<std::size_t>(b.exp2_ - e);
  return BigUInt::cmp(am, bm);
}

BigFloat BigFloat::mul(const BigFloat& a, const BigFloat& b, std::size_t prec, Round dir) {
  if (a.is_zero() || b.is_zero()) return BigFloat();
  BigFloat exact(BigUInt::mul(a.mant_, b.mant_), a.exp2_ + b.exp2_);
  return exact.rounded(prec, dir);
}

BigFloat BigFloat::add(const BigFloat& a, const BigFloat& b, std::size_t prec, Round dir) {
  if (a.is_zero()) return b.rounded(prec, dir);
  if (b.is_zero()) return a.rounded(prec, dir);
  const BigFloat* big = &a;
  const BigFloat* small = &b;
  if (big->mag_exp2() < small->mag_exp2()) std::swap(big, small);
  long long gap = big->mag_exp2() - small->mag_exp2();
  if (gap > static_cast<long long>(prec) + 64) {
    // The small addend is far below one ulp of the result.
    BigFloat r = big->rounded(prec, dir);
    if (dir == Round::kUp) {
      BigUInt m = r.mant_;
      m += BigUInt(1);
      r = BigFloat(m, r.exp2_);
    }
    return r;
  }
  long long e = std::min(big->exp2_, small->exp2_);
  BigUInt am = big->mant_ << static_cast<std::size_t>(big->exp2_ - e);
  am += small->mant_ << static_cast<std::size_t>(small->exp2_ - e);
  return BigFloat(std::move(am), e).rounded(prec, dir);
}

BigFloat BigFloat::div_small(const BigFloat& a, std::uint64_t d, std::size_t prec, Round dir) {
  if (a.is_zero()) return BigFloat();
  // Pre-scale so the truncated quotient still carries prec significant bits.
  std::size_t scale = prec + 64;
  BigUInt m = a.mant_ << scale;
  std::uint64_t rem = m.divmod_small(d);
  if (dir == Round::kUp && rem != 0) m += BigUInt(1);
  return BigFloat(std::move(m), a.exp2_ - static_cast<long long>(scale)).rounded(prec, dir);
}

FloatInterval exp_interval(const BigUInt& x_mant, long long x_exp2, std::size_t prec) {
  if (x_mant.is_zero()) {
    BigFloat one = BigFloat::from_u64(1);
    return {one, one};
  }
  long long xmag = static_cast<long long>(x_mant.bit_length()) + x_exp2;  // x < 2^xmag
  // Reduce to y = x / 2^s with y <= 2^-32, so the series gains >= 32 bits/term.
  long long s = xmag + 32;
  if (s < 0) s = 0;
  std::size_t wp = prec + static_cast<std::size_t>(s) + 96;

  BigFloat y(x_mant, x_exp2 - s);
  BigFloat term_lo = BigFloat::from_u64(1), term_hi = term_lo;
  BigFloat sum_lo = term_lo, sum_hi = term_hi;
  for (std::uint64_t j = 1;; ++j) {
    term_lo = BigFloat::div_small(BigFloat::mul(term_lo, y, wp, Round::kDown), j, wp, Round::kDown);
    term_hi = BigFloat::div_small(BigFloat::mul(term_hi, y, wp, Round::kUp), j, wp, Round::kUp);
    sum_lo = BigFloat::add(sum_lo, term_lo, wp, Round::kDown);
    sum_hi = BigFloat::add(sum_hi, term_hi, wp, Round::kUp);
    if (term_hi.is_zero()) break;
    if (term_hi.mag_exp2() < sum_hi.mag_exp2() - static_cast<long long>(wp) - 2) {
      // Tail bound: remaining terms form a series dominated by a geometric
      // one with ratio y <= 1/2, so tail <= 2 * next term <= 2 * term_hi.
      BigFloat tail = BigFloat(term_hi.mantissa(), term_hi.exp2() + 1);
      sum_hi = BigFloat::add(sum_hi, tail, wp, Round::kUp);
      break;
    }
  }
  for (long long i = 0; i < s; ++i) {
    sum_lo = BigFloat::mul(sum_lo, sum_lo, wp, Round::kDown);
    sum_hi = BigFloat::mul(sum_hi, sum_hi, wp, Round::kUp);
  }
  return {sum_lo.rounded(prec, Round::kDown), sum_hi.rounded(prec, Round::kUp)};
}

namespace {

// n*h as an exact dyadic rational (doubles are dyadic).
void dyadic_nh(std::uint64_t n, double h, BigUInt* mant, long long* exp2) {
  if (n == 0 || h == 0.0) {
    *mant = BigUInt();
    *exp2 = 0;
    return;
  }
  if (h < 0 || !std::isfinite(h)) throw std::domain_error("h must be positive finite");
  int e;
  double frac = std::frexp(h, &e);                      // h = frac * 2^e, frac in [0.5,1)
  double scaled = std::ldexp(frac, 53);                 // integer-valued
  auto hm = static_cast<std::uint64_t>(scaled);
  BigUInt m(n);
  m.mul_small(hm);
  *mant = m;
  *exp2 = e - 53;
}

}  // namespace

BigUInt floor_exp_nh(std::uint64_t n, double h) {
  BigUInt xm;
  long long xe;
  dyadic_nh(n, h, &xm, &xe);
  if (xm.is_zero()) return BigUInt(1);
  // e^x has about x/ln2 integer bits; the double product is only a size hint.
  double x = static_cast<double>(n) * h;
  std::size_t prec = static_cast<std::size_t>(std::max(0.0, x / std::log(2.0))) + 128;
  for (int attempt = 0; attempt < 24; ++attempt) {
    FloatInterval iv = exp_interval(xm, xe, prec);
    BigUInt flo = iv.lo.floor();
    BigUInt fhi = iv.hi.floor();
    if (flo == fhi) return flo;
    prec += prec / 2 + 64;
  }
  throw std::runtime_error("floor_exp_nh: could not pin floor(e^{n h})");
}

ExpScanner::ExpScanner(double h, std::size_t prec) : h_(h), prec_(prec) {
  BigUInt hm;
  long long he;
  dyadic_nh(1, h, &hm, &he);
  e_h_ = exp_interval(hm, he, prec_);
  reset(0);
}

void ExpScanner::reset(std::uint64_t n) {
  n_ = n;
  BigUInt xm;
  long long xe;
  dyadic_nh(n, h_, &xm, &xe);
  cur_ = xm.is_zero() ? FloatInterval{BigFloat::from_u64(1), BigFloat::from_u64(1)}
                      : exp_interval(xm, xe, prec_);
}

void ExpScanner::step() {
  cur_.lo = BigFloat::mul(cur_.lo, e_h_.lo, prec_, Round::kDown);
  cur_.hi = BigFloat::mul(cur_.hi, e_h_.hi, prec_, Round::kUp);
  ++n_;
}

}  // namespace symdyn
