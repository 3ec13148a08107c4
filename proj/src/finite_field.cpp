#include "eaforge/finite_field.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <set>
#include <string>

namespace eaforge {

namespace {

unsigned poly_degree(std::uint32_t p) { return 31u - static_cast<unsigned>(std::countl_zero(p)); }

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
  const unsigned dm = poly_degree(m);
  while (a && poly_degree(a) >= dm) a ^= m << (poly_degree(a) - dm);
  return a;
}

}  // namespace

bool is_irreducible(std::uint32_t poly) {
  if (poly < 2) return false;
  const unsigned d = poly_degree(poly);
  // Trial division by every polynomial of degree 1..d/2.
  for (std::uint32_t q = 2; poly_degree(q) <= d / 2; ++q)
    if (poly_mod(poly, q) == 0) return false;
  return true;
}

FieldSpec::FieldSpec(unsigned n, std::uint32_t modulus) : n_(n), modulus_(modulus) {
  if (n < 1 || n > 16) throw FieldError("field degree must be in 1..16, got " + std::to_string(n));
  if (modulus >> n != 1 || !(modulus & 1u))
    throw FieldError("modulus must have degree " + std::to_string(n) + " and nonzero constant term");
  if (!is_irreducible(modulus)) throw FieldError("modulus is not irreducible");
}

FieldSpec FieldSpec::default_for(unsigned n) {
  if (n < 1 || n > 16) throw FieldError("field degree must be in 1..16");
  for (std::uint32_t p = (std::uint32_t{1} << n) | 1u; p < (std::uint32_t{2} << n); p += 2)
    if (is_irreducible(p)) return FieldSpec(n, p);
  throw FieldError("no irreducible polynomial found");  // unreachable
}

std::uint32_t ff_alpha(const FieldSpec& f) { return f.degree() == 1 ? 1u : 2u; }

std::uint32_t ff_mul(std::uint32_t a, std::uint32_t b, const FieldSpec& f) {
  const std::uint32_t top = f.order();
  std::uint32_t acc = 0;
  while (b) {
    if (b & 1u) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= f.modulus();
  }
  return acc;
}

std::uint32_t ff_pow(std::uint32_t a, std::uint64_t k, const FieldSpec& f) {
  std::uint32_t result = 1;
  while (k) {
    if (k & 1u) result = ff_mul(result, a, f);
    a = ff_mul(a, a, f);
    k >>= 1;
  }
  return result;
}

UnivariateSpec::UnivariateSpec(FieldSpec field, std::vector<UnivariateTerm> terms)
    : field_(field), terms_(std::move(terms)) {
  std::set<std::uint64_t> seen;
  for (const auto& t : terms_) {
    if (t.exponent >= field_.order())
      throw FieldError("exponent " + std::to_string(t.exponent) + " out of range");
    if (t.coefficient >= field_.order())
      throw FieldError("coefficient outside GF(2^" + std::to_string(field_.degree()) + ")");
    if (!seen.insert(t.exponent).second)
      throw FieldError("repeated exponent " + std::to_string(t.exponent));
  }
}

Vbf vbf_from_univariate(const UnivariateSpec& spec) {
  const auto& f = spec.field();
  const unsigned n = f.degree();
  std::vector<std::uint32_t> table(f.order(), 0);
  for (std::uint32_t x = 0; x < f.order(); ++x) {
    std::uint32_t y = 0;
    for (const auto& t : spec.terms())
      if (t.coefficient) y ^= ff_mul(t.coefficient, ff_pow(x, t.exponent, f), f);
    table[x] = y;
  }
  return Vbf(n, n, std::move(table));
}

std::uint32_t parse_coefficient(std::string_view token, const FieldSpec& f) {
  if (token.empty()) throw FieldError("empty coefficient");
  if (token.size() >= 2 && (token[0] == 'a' || token[0] == 'w') && token[1] == '^') {
    std::uint64_t k = 0;
    const auto body = token.substr(2);
    const auto res = std::from_chars(body.data(), body.data() + body.size(), k);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size())
      throw FieldError("bad power coefficient '" + std::string(token) + "'");
    return ff_pow(ff_alpha(f), k, f);
  }
  if (token == "a" || token == "w") return ff_alpha(f);
  auto body = token;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) body = body.substr(2);
  std::uint32_t v = 0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), v, 16);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size())
    throw FieldError("bad coefficient '" + std::string(token) + "'");
  if (v >= f.order()) throw FieldError("coefficient '" + std::string(token) + "' outside the field");
  return v;
}

}  // namespace eaforge
