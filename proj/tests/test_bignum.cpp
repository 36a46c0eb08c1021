#include <cmath>
#include <random>

#include "doctest.h"
#include "symdyn/bigfloat.hpp"
#include "symdyn/bigint.hpp"

using namespace symdyn;

TEST_CASE("bigint arithmetic against 128-bit reference") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    std::uint64_t a = rng() >> (rng() % 40);
    std::uint64_t b = rng() >> (rng() % 40);
    BigUInt A(a), B(b);
    unsigned __int128 sum = (unsigned __int128)a + b;
    BigUInt S = A + B;
    BigUInt sum_ref = BigUInt((std::uint64_t)(sum >> 64));
    sum_ref <<= 64;
    sum_ref += BigUInt((std::uint64_t)sum);
    CHECK(S == sum_ref);
    unsigned __int128 prod = (unsigned __int128)a * b;
    BigUInt P = BigUInt::mul(A, B);
    BigUInt ref;
    ref = BigUInt((std::uint64_t)(prod >> 64));
    ref <<= 64;
    ref += BigUInt((std::uint64_t)prod);
    CHECK(P == ref);
    if (a >= b) {
      BigUInt D = A - B;
      CHECK(D == BigUInt(a - b));
    }
  }
}

TEST_CASE("bigint decimal round-trip and shifts") {
  BigUInt x = BigUInt::from_decimal("123456789012345678901234567890123456789");
  CHECK(x.to_decimal() == "123456789012345678901234567890123456789");
  BigUInt y = x << 130;
  CHECK((y >> 130) == x);
  CHECK(BigUInt::pow_small(2, 100).to_decimal() == "1267650600228229401496703205376");
  BigUInt z = BigUInt::pow_small(3, 50);
  CHECK(z.to_decimal() == "717897987691852588770249");
  std::uint64_t r = z.divmod_small(7);  // 3^50 = 2 (mod 7)
  CHECK(r == 2);
}

TEST_CASE("bigint small division") {
  BigUInt z = BigUInt::from_decimal("1000000000000000000000000000057");
  std::uint64_t r = z.divmod_small(10);
  CHECK(r == 7);
  CHECK(z.to_decimal() == "100000000000000000000000000005");
}

TEST_CASE("log and double conversion") {
  BigUInt x = BigUInt::pow_small(2, 200);
  CHECK(std::abs(x.log_natural() - 200 * std::log(2.0)) < 1e-9);
  CHECK(BigUInt(12345).to_double() == doctest::Approx(12345.0));
}

TEST_CASE("floor_exp_nh matches longdouble at small arguments") {
  // e^{4.8} = 121.510...; e^{1} = 2.718...
  CHECK(floor_exp_nh(8, 0.6).to_decimal() == "121");
  CHECK(floor_exp_nh(1, 1.0).to_decimal() == "2");
  CHECK(floor_exp_nh(0, 0.37).to_decimal() == "1");
  for (int n = 1; n <= 40; ++n) {
    long double ref = std::floor(std::exp((long double)n * 0.34657L));
    CHECK(floor_exp_nh(n, 0.34657).to_decimal() ==
          std::to_string((unsigned long long)ref));
  }
}

TEST_CASE("floor_exp_nh functional consistency at large arguments") {
  // floor(e^{a h}) * floor(e^{b h}) <= e^{(a+b) h} and the bit lengths agree
  // with (a+b) h / ln 2 within a bit.
  double h = 0.6;
  BigUInt big = floor_exp_nh(2000, h);
  double expected_bits = 2000 * h / std::log(2.0);
  CHECK(std::abs((double)big.bit_length() - expected_bits) <= 2.0);
  BigUInt p1 = floor_exp_nh(1200, h);
  BigUInt p2 = floor_exp_nh(800, h);
  BigUInt prod = BigUInt::mul(p1, p2);
  CHECK(prod <= big);
  // (e^{1200h} - 1)(e^{800h} - 1) >= e^{2000h} - e^{1200h} - e^{800h}
  BigUInt slack = prod + p1 + p2 + BigUInt(1);
  CHECK(slack >= big);
}

TEST_CASE("exp scanner brackets the exact floor") {
  double h = 0.481211825;
  ExpScanner sc(h);
  sc.reset(5);
  for (int n = 5; n < 60; ++n) {
    BigUInt exact = floor_exp_nh(n, h);
    CHECK(sc.value().lo.floor() <= exact);
    CHECK(exact <= sc.value().hi.floor());
    sc.step();
  }
}
