#pragma once

// Recovery of an EA tuple (A0, B0, C0, a) with G(x) = A0 F(B0 x) + C0 x + a
// for quadratic F and G, by guessing pairs v -> w = B0 v from matching
// rank-table buckets and solving the linear system the Jacobians impose.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "eaforge/jacobian.hpp"
#include "eaforge/vbf.hpp"

namespace eaforge {

class NoUsableRank : public std::invalid_argument {
 public:
  NoUsableRank() : std::invalid_argument("every Jacobian evaluation has rank 0 (affine function)") {}
};

struct RecoveryConfig {
  std::optional<unsigned> s;  // unset: 2 for APN distributions with n = m, else 3
  unsigned threshold = 10;
  bool exhaustive = false;
  unsigned jobs = 1;
};

struct RecoveryDiagnostics {
  std::uint64_t guesses = 0;             // guess systems solved
  std::uint64_t inconsistent = 0;        // systems with no solution
  std::uint64_t threshold_exceeded = 0;  // systems left unexplored
  std::uint64_t candidates = 0;          // (X, Y) solutions examined
  friend bool operator==(const RecoveryDiagnostics&, const RecoveryDiagnostics&) = default;
};

struct Equivalent {
  EaTuple tuple;
  RecoveryDiagnostics diagnostics;
};
struct NotEquivalent {};
struct NoEquivalenceFound {
  RecoveryDiagnostics diagnostics;
};
using RecoveryVerdict = std::variant<Equivalent, NotEquivalent, NoEquivalenceFound>;

struct GuessSystem {
  BitMatrix matrix;  // s(mn + n) rows over m^2 + n^2 unknowns: X row-major, then Y row-major
  BitVector rhs;
};

// Pairs are (v, w) with v an input of G and w the matching input of F.
GuessSystem build_guess_system(const LinearJacobian& jf, const LinearJacobian& jg,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& guesses);

// Upper bound r(m+n-r) + (n-r) on the rank of a single-guess system whose
// Jacobians have rank r.
unsigned single_guess_rank_bound(unsigned n, unsigned m, unsigned r);

struct ReferencePlan {
  // Linearly independent inputs of F; the first `s` are the primary guesses,
  // the rest only serve exhaustive refinement.
  std::vector<std::uint32_t> references;
  std::vector<unsigned> ranks;  // rank of J_F at each reference
  unsigned s = 0;
  bool hybrid = false;  // references span more than one bucket
};

// Greedy plan: independent vectors in ascending order from the rarest
// nonzero-rank bucket, then the next rarest. Throws NoUsableRank when
// every nonzero bucket is empty.
ReferencePlan choose_references(const RankTable& tf, unsigned s);

// Same buckets and rank pattern as the greedy plan, but the primary
// references are the lexicographically first independent choice whose
// correct guess system has dimension <= threshold. That dimension equals
// the one of the system pairing each w with itself against F, so it is
// known before any guess is made. Falls back to the smallest dimension
// seen within `budget` choices.
ReferencePlan choose_references(const LinearJacobian& jf, const RankTable& tf, unsigned s, unsigned threshold,
                                std::size_t budget = 4096);

RecoveryVerdict recover(const Vbf& f, const Vbf& g, const RecoveryConfig& cfg = {});

// C0 and a for a candidate linear pair, or nullopt when G + A0 F(B0 x) is
// not affine.
std::optional<std::pair<BitMatrix, BitVector>> finish(const Vbf& f, const Vbf& g, const BitMatrix& a0,
                                                      const BitMatrix& b0);

bool verify(const Vbf& f, const Vbf& g, const EaTuple& t);

}  // namespace eaforge
