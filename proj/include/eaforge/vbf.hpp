#pragma once

// Vectorial Boolean functions F: F2^n -> F2^m stored as truth tables, and
// the classical statistics on them.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eaforge/bitmatrix.hpp"

namespace eaforge {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr unsigned kMaxInputBits = 24;
inline constexpr unsigned kMaxOutputBits = 32;

class Vbf {
 public:
  Vbf() = default;
  // Throws DimensionMismatch if table.size() != 2^n or an entry has more
  // than m bits.
  Vbf(unsigned n, unsigned m, std::vector<std::uint32_t> table);

  unsigned n() const { return n_; }
  unsigned m() const { return m_; }
  std::uint32_t domain_size() const { return std::uint32_t{1} << n_; }
  std::uint32_t operator()(std::uint32_t x) const { return table_[x]; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  friend bool operator==(const Vbf&, const Vbf&) = default;

 private:
  unsigned n_ = 0;
  unsigned m_ = 0;
  std::vector<std::uint32_t> table_;
};

// Coefficient u is the m-bit word of coefficients of the monomial
// prod_{i : u_i = 1} x_i, one bit per coordinate function.
class Anf {
 public:
  Anf(unsigned n, unsigned m, std::vector<std::uint32_t> coefficients);
  unsigned n() const { return n_; }
  unsigned m() const { return m_; }
  const std::vector<std::uint32_t>& coefficients() const { return coefficients_; }
  friend bool operator==(const Anf&, const Anf&) = default;

 private:
  unsigned n_;
  unsigned m_;
  std::vector<std::uint32_t> coefficients_;
};

Anf anf(const Vbf& f);
Vbf anf_inverse(const Anf& a);
unsigned degree(const Vbf& f);

// Multiset of integers, serialized as "{v:m,v:m,...}" with ascending values.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::map<std::int64_t, std::uint64_t> counts);

  template <class Range>
  static Spectrum of(const Range& values) {
    std::map<std::int64_t, std::uint64_t> counts;
    for (auto v : values) ++counts[static_cast<std::int64_t>(v)];
    return Spectrum(std::move(counts));
  }

  const std::vector<std::pair<std::int64_t, std::uint64_t>>& entries() const { return entries_; }
  std::uint64_t multiplicity(std::int64_t value) const;
  std::uint64_t total() const;
  std::int64_t max_value() const;

  std::string to_string() const;
  // Inverse of to_string; throws std::invalid_argument on malformed text.
  static Spectrum parse(std::string_view text);

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
  friend auto operator<=>(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<std::pair<std::int64_t, std::uint64_t>> entries_;
};

// Flat table indexed [a * 2^m + b].
struct DdtTable {
  unsigned n, m;
  std::vector<std::uint32_t> counts;
  std::uint32_t at(std::uint32_t a, std::uint32_t b) const { return counts[(std::size_t{a} << m) | b]; }
};

// Flat table indexed [b * 2^n + a]: one row per component b.F.
struct WalshTable {
  unsigned n, m;
  std::vector<std::int64_t> values;
  std::int64_t at(std::uint32_t a, std::uint32_t b) const { return values[(std::size_t{b} << n) | a]; }
};

DdtTable ddt(const Vbf& f);
// Multiset of delta(a, b) over a != 0 and all b.
Spectrum differential_spectrum(const Vbf& f);
std::uint32_t differential_uniformity(const Vbf& f);

// In-place fast Walsh-Hadamard transform of a length-2^k sequence.
void walsh_hadamard(std::span<std::int64_t> values);

WalshTable walsh_table(const Vbf& f);
// Walsh coefficients of the single component b.F.
std::vector<std::int64_t> component_walsh(const Vbf& f, std::uint32_t b);
// Multiset of |W(a, b)| over all a and b != 0.
Spectrum extended_walsh_spectrum(const Vbf& f);
std::int64_t linearity(const Vbf& f);

// Throws DimensionMismatch when m < n.
bool is_apn(const Vbf& f);
bool is_permutation(const Vbf& f);

// G(x) = A0 * F(B0 x) + C0 x + a.
struct EaTuple {
  BitMatrix a0;  // m x m, nonsingular
  BitMatrix b0;  // n x n, nonsingular
  BitMatrix c0;  // m x n
  BitVector a;   // m bits

  static EaTuple identity(unsigned n, unsigned m);
  friend bool operator==(const EaTuple&, const EaTuple&) = default;
};

Vbf compose_ea(const Vbf& f, const EaTuple& t);

// Tuple t' with compose_ea(compose_ea(F, t), t') == F.
EaTuple inverse_ea(const EaTuple& t);

// Uniform quadratic ANF (all monomials of degree <= 2). Deterministic for
// a given seed; only raw engine output is used so results agree across
// standard libraries.
Vbf random_quadratic(unsigned n, unsigned m, std::uint64_t seed);
Vbf random_quadratic(unsigned n, unsigned m, std::mt19937_64& rng);
BitMatrix random_nonsingular(unsigned n, std::mt19937_64& rng);
EaTuple random_ea_tuple(unsigned n, unsigned m, std::uint64_t seed);
EaTuple random_ea_tuple(unsigned n, unsigned m, std::mt19937_64& rng);

}  // namespace eaforge
