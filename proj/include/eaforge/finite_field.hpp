#pragma once

// GF(2^n) arithmetic in polynomial basis, n <= 16. An element is the
// integer whose bit i is the coefficient of alpha^i, where alpha is the
// residue class of X; this matches the BitVector coordinate encoding.

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "eaforge/vbf.hpp"

namespace eaforge {

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FieldSpec {
 public:
  // Throws FieldError unless `modulus` is an irreducible polynomial of
  // degree n (bit n and bit 0 set), 1 <= n <= 16.
  FieldSpec(unsigned n, std::uint32_t modulus);

  // Smallest irreducible polynomial of degree n by integer value.
  static FieldSpec default_for(unsigned n);

  unsigned degree() const { return n_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return std::uint32_t{1} << n_; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  unsigned n_;
  std::uint32_t modulus_;
};

bool is_irreducible(std::uint32_t poly);

// The residue class of X.
std::uint32_t ff_alpha(const FieldSpec& f);
std::uint32_t ff_mul(std::uint32_t a, std::uint32_t b, const FieldSpec& f);
std::uint32_t ff_pow(std::uint32_t a, std::uint64_t k, const FieldSpec& f);

struct UnivariateTerm {
  std::uint32_t coefficient;
  std::uint64_t exponent;
};

class UnivariateSpec {
 public:
  // Throws FieldError on repeated exponents, exponents >= 2^n or
  // coefficients outside the field.
  UnivariateSpec(FieldSpec field, std::vector<UnivariateTerm> terms);

  const FieldSpec& field() const { return field_; }
  const std::vector<UnivariateTerm>& terms() const { return terms_; }

 private:
  FieldSpec field_;
  std::vector<UnivariateTerm> terms_;
};

Vbf vbf_from_univariate(const UnivariateSpec& spec);

// Coefficient syntax: "a^k" (power of alpha), or a hexadecimal literal with
// optional 0x prefix ("1", "0", "0x1b").
std::uint32_t parse_coefficient(std::string_view token, const FieldSpec& f);

}  // namespace eaforge
