#include <doctest.h>

#include <numeric>

#include "eaforge/finite_field.hpp"
#include "oracles.hpp"

using namespace eaforge;

TEST_CASE("multiplication basics in GF(2^6) mod 0x5B") {
  const FieldSpec f(6, 0x5B);
  const auto a = ff_alpha(f);
  CHECK(a == 2);
  CHECK(ff_mul(1, 0x2A, f) == 0x2A);
  CHECK(ff_mul(a, ff_pow(a, 5, f), f) == 0x1B);
  for (unsigned j = 0; j < 63; ++j)
    for (unsigned k = 0; k < 63; ++k)
      CHECK(ff_mul(ff_pow(a, j, f), ff_pow(a, k, f), f) == ff_pow(a, (j + k) % 63, f));
}

TEST_CASE("powers") {
  const FieldSpec f(6, 0x5B);
  for (std::uint32_t x = 0; x < 64; ++x) {
    CHECK(ff_pow(x, 0, f) == 1);
    CHECK(ff_pow(x, 1, f) == x);
    CHECK(ff_pow(x, 37, f) == oracle::gf_pow(x, 37, 6, 0x5B));
  }
  CHECK(ff_pow(ff_alpha(f), 63, f) == 1);
}

TEST_CASE("field axioms and agreement with the oracle for n <= 8") {
  for (unsigned n = 1; n <= 8; ++n) {
    const auto f = FieldSpec::default_for(n);
    const std::uint32_t q = f.order();
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const auto ab = ff_mul(a, b, f);
        REQUIRE(ab == oracle::gf_mul(a, b, n, f.modulus()));
        REQUIRE(ab == ff_mul(b, a, f));
      }
    const std::uint32_t step = n > 6 ? 7 : 1;
    for (std::uint32_t a = 0; a < q; a += step)
      for (std::uint32_t b = 0; b < q; b += step)
        for (std::uint32_t c = 0; c < q; c += step) {
          REQUIRE(ff_mul(ff_mul(a, b, f), c, f) == ff_mul(a, ff_mul(b, c, f), f));
          REQUIRE(ff_mul(a, b ^ c, f) == (ff_mul(a, b, f) ^ ff_mul(a, c, f)));
        }
  }
}

TEST_CASE("irreducibility is enforced") {
  CHECK_NOTHROW(FieldSpec(6, 0x5B));
  CHECK_NOTHROW(FieldSpec(8, 0x11B));
  CHECK_THROWS_AS(FieldSpec(6, 0x41), FieldError);  // x^6 + 1
  CHECK_THROWS_AS(FieldSpec(4, 0x14), FieldError);  // constant term missing
  CHECK_THROWS_AS(FieldSpec(6, 0x1B), FieldError);  // wrong degree
  CHECK_THROWS_AS(FieldSpec(17, 0x20009), FieldError);
  CHECK(is_irreducible(0x13));
  CHECK_FALSE(is_irreducible(0x15));  // (x^2+x+1)^2
}

TEST_CASE("default modulus is the smallest irreducible of its degree") {
  for (unsigned n = 1; n <= 12; ++n) {
    const auto f = FieldSpec::default_for(n);
    CHECK(f.degree() == n);
    for (std::uint32_t p = 1u << n; p < f.modulus(); ++p) CHECK_FALSE((is_irreducible(p) && (p & 1u)));
  }
}

TEST_CASE("univariate evaluation") {
  const FieldSpec f(6, 0x5B);
  const auto x3 = vbf_from_univariate(UnivariateSpec(f, {{1, 3}}));
  CHECK(degree(x3) == 2);
  for (std::uint32_t x = 0; x < 64; ++x) CHECK(x3(x) == oracle::gf_pow(x, 3, 6, 0x5B));
  const auto c = vbf_from_univariate(UnivariateSpec(f, {{5, 0}}));
  for (std::uint32_t x = 0; x < 64; ++x) CHECK(c(x) == 5);
  const auto kim = vbf_from_univariate(UnivariateSpec(f, {{1, 3}, {1, 10}, {ff_alpha(f), 24}}));
  CHECK(degree(kim) == 2);
  CHECK(is_apn(kim));
  CHECK_THROWS_AS(UnivariateSpec(f, {{1, 3}, {2, 3}}), FieldError);
  CHECK_THROWS_AS(UnivariateSpec(f, {{1, 64}}), FieldError);
  CHECK_THROWS_AS(UnivariateSpec(f, {{64, 1}}), FieldError);
}

TEST_CASE("Frobenius powers are linear and Gold exponents are APN") {
  for (unsigned n = 3; n <= 9; ++n) {
    const auto f = FieldSpec::default_for(n);
    for (unsigned k = 0; k < n; ++k)
      CHECK(degree(vbf_from_univariate(UnivariateSpec(f, {{1, std::uint64_t{1} << k}}))) <= 1);
    for (unsigned i = 1; i < n; ++i) {
      const auto g = vbf_from_univariate(UnivariateSpec(f, {{1, (std::uint64_t{1} << i) + 1}}));
      if (std::gcd(i, n) == 1) CHECK(is_apn(g));
    }
  }
}

TEST_CASE("coefficient syntax") {
  const FieldSpec f(6, 0x5B);
  CHECK(parse_coefficient("1", f) == 1);
  CHECK(parse_coefficient("0", f) == 0);
  CHECK(parse_coefficient("0x1b", f) == 0x1B);
  CHECK(parse_coefficient("2A", f) == 0x2A);
  CHECK(parse_coefficient("a^0", f) == 1);
  CHECK(parse_coefficient("a^6", f) == 0x1B);
  CHECK(parse_coefficient("a^63", f) == 1);
  CHECK_THROWS(parse_coefficient("0x40", f));
  CHECK_THROWS(parse_coefficient("b^2", f));
  CHECK_THROWS(parse_coefficient("", f));
}
