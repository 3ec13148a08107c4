#pragma once

// Walsh zeroes, the dimension-n subspaces they contain, thickness spectra
// and the EA-class representatives those subspaces induce.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eaforge/vbf.hpp"

namespace eaforge {

// Element (a, b) of F2^n x F2^m is packed as a | (b << n).
struct WalshZeroes {
  unsigned n = 0, m = 0;
  std::vector<std::uint64_t> bits;  // 2^(n+m) membership bits

  bool contains(std::uint64_t v) const { return (bits[v >> 6] >> (v & 63)) & 1u; }
  std::size_t size() const;
};

// Always contains (0, 0).
WalshZeroes walsh_zeroes(const Vbf& f);

struct SubspaceBasis {
  unsigned dim = 0;
  // RREF: pivots are lowest set bits, ascending, cleared in all other vectors.
  std::vector<std::uint64_t> basis;
  friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;
  friend auto operator<=>(const SubspaceBasis&, const SubspaceBasis&) = default;
};

// Every `dim`-dimensional linear subspace inside Z, each once, sorted.
std::vector<SubspaceBasis> subspaces_in(const WalshZeroes& z, unsigned dim, unsigned jobs = 1);
inline std::vector<SubspaceBasis> dim_n_spaces(const WalshZeroes& z, unsigned jobs = 1) {
  return subspaces_in(z, z.n, jobs);
}

// Dimension of the projection onto the b-coordinates.
unsigned thickness(const SubspaceBasis& space, unsigned n);

struct ThicknessSpectrum {
  std::vector<std::uint64_t> counts;  // counts[j] for j = 0..m
  Spectrum as_spectrum() const;      // nonzero entries only
  std::string to_string() const { return as_spectrum().to_string(); }
  friend bool operator==(const ThicknessSpectrum&, const ThicknessSpectrum&) = default;
  friend auto operator<=>(const ThicknessSpectrum&, const ThicknessSpectrum&) = default;
};

ThicknessSpectrum thickness_spectrum(const std::vector<SubspaceBasis>& spaces, unsigned n, unsigned m);
ThicknessSpectrum thickness_spectrum(const Vbf& f, unsigned jobs = 1);

class NotAGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// G with graph L(graph F), where L^T has the space basis as its first n
// columns, completed by unit vectors in ascending order. Requires n = m.
Vbf ea_representative(const Vbf& f, const SubspaceBasis& space);

struct EaClassEntry {
  ThicknessSpectrum thickness;
  unsigned degree;
  std::size_t count;  // spaces producing this (thickness, degree)
};

struct EaClassBounds {
  std::size_t lower = 0;  // distinct thickness spectra among representatives
  std::size_t upper = 0;  // number of spaces
  std::vector<EaClassEntry> report;  // sorted by (thickness, degree)
};

EaClassBounds ea_class_bounds(const Vbf& f, unsigned jobs = 1);

}  // namespace eaforge
