#pragma once

// EA/CCZ invariants and bucketing of function lists by invariant labels.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eaforge/vbf.hpp"

namespace eaforge {

class NotQuadratic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotApn : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class KTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeCap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InapplicableInvariant : public std::invalid_argument {
 public:
  InapplicableInvariant(std::size_t index, std::string name, const std::string& why);
  std::size_t index() const { return index_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t index_;
  std::string name_;
};

struct OrthoDerivative {
  Vbf pi;
  bool quadratic_apn_source = true;
};

// Requires n = m, degree 2 and APN; throws NotQuadratic or NotApn.
OrthoDerivative ortho_derivative(const Vbf& f);

struct InvariantLabel {
  Spectrum ortho_diff;
  Spectrum ortho_walsh;

  std::string serialize() const;  // "D{...}|W{...}"
  static InvariantLabel parse(std::string_view text);
  friend bool operator==(const InvariantLabel&, const InvariantLabel&) = default;
};

InvariantLabel ortho_label(const Vbf& f);

// Selector names, listed in the order their labels are concatenated.
const std::vector<std::string>& invariant_names();

// Canonical text of one invariant; throws std::invalid_argument when it
// does not apply to f and for unknown names.
std::string invariant_text(const Vbf& f, std::string_view name);

struct PartitionBucket {
  std::string label;
  std::vector<std::size_t> members;  // ascending input indices
};

struct Partition {
  // Ordered by smallest member.
  std::vector<PartitionBucket> buckets;
};

// Throws InapplicableInvariant naming the first offending function.
Partition partition(const std::vector<Vbf>& fns, const std::vector<std::string>& selectors, unsigned jobs = 1);

// Multiset of the multiplicities of the values sum F(x_i) over all k-subsets
// of distinct inputs with zero sum; values that never occur are left out.
// Requires even k > 2 (KTooSmall otherwise).
Spectrum sigma_multiplicities(const Vbf& f, unsigned k);
// Direct enumeration; same contract, small n only.
Spectrum sigma_multiplicities_bruteforce(const Vbf& f, unsigned k);

inline constexpr unsigned kDevelopmentRankMaxN = 7;

// F2-rank of the 2^2n x 2^2n matrix [u + v in S] for S the graph of F
// (gamma) or the DDT support {(a, b) : a != 0, delta(a, b) > 0} (delta).
// Require n = m; SizeCap when n exceeds kDevelopmentRankMaxN unless forced.
std::size_t gamma_rank(const Vbf& f, bool force = false);
std::size_t delta_rank(const Vbf& f, bool force = false);
// Rank of [u + v in S] for S given as indicator over F2^bits.
std::size_t development_rank(const std::vector<bool>& indicator, unsigned bits);

unsigned degree_invariant(const Vbf& f);

}  // namespace eaforge
