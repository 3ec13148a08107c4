#pragma once

// The linear part J_F of the Jacobian of a quadratic function, its
// evaluations, and rank tables.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eaforge/bitmatrix.hpp"
#include "eaforge/vbf.hpp"

namespace eaforge {

class DegreeTooHigh : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LinearJacobian {
 public:
  // Throws DegreeTooHigh when degree(f) > 2.
  explicit LinearJacobian(const Vbf& f);

  unsigned n() const { return n_; }
  unsigned m() const { return m_; }

  // n-bit mask of the linear form in row i, column j.
  std::uint32_t form(unsigned i, unsigned j) const;

  // Column j of J(e_k) as an m-bit word: F(e_j+e_k)+F(e_j)+F(e_k)+F(0).
  std::uint32_t cube(unsigned j, unsigned k) const { return cube_[j * n_ + k]; }

  // The n columns of J(x) as m-bit words.
  void eval_columns(std::uint32_t x, std::uint32_t* columns) const;
  std::vector<std::uint32_t> eval_columns(std::uint32_t x) const;

  BitMatrix eval(std::uint32_t x) const;
  BitMatrix eval(const BitVector& x) const { return eval(static_cast<std::uint32_t>(x.to_uint())); }

  unsigned rank_at(std::uint32_t x) const;

 private:
  unsigned n_;
  unsigned m_;
  std::vector<std::uint32_t> cube_;
};

inline LinearJacobian linear_jacobian(const Vbf& f) { return LinearJacobian(f); }
inline BitMatrix eval_jacobian(const LinearJacobian& j, const BitVector& x) { return j.eval(x); }

struct RankTable {
  // buckets[r] lists, ascending, every x with rank J(x) = r.
  std::vector<std::vector<std::uint32_t>> buckets;
  // rank_of[x] for every x.
  std::vector<std::uint8_t> rank_of;
};

struct RankDistribution {
  std::vector<std::uint64_t> counts;  // min(m, n) + 1 entries
  friend bool operator==(const RankDistribution&, const RankDistribution&) = default;
  std::string to_string() const;  // "[c0,c1,...]"
};

RankTable rank_table(const LinearJacobian& j);
RankDistribution rank_distribution(const RankTable& t);

// Checks counts[r] == 2^-r * #{(a, b) : delta(a, b) = 2^(n-r)} for every r,
// with a = 0 included. Throws DegreeTooHigh.
bool ddt_rank_crosscheck(const Vbf& f);

}  // namespace eaforge
