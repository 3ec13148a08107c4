#include "eaforge/jacobian.hpp"

#include <algorithm>
#include <bit>

namespace eaforge {

LinearJacobian::LinearJacobian(const Vbf& f) : n_(f.n()), m_(f.m()), cube_(std::size_t{f.n()} * f.n()) {
  if (degree(f) > 2) throw DegreeTooHigh("function has algebraic degree above 2");
  const std::uint32_t f0 = f(0);
  for (unsigned j = 0; j < n_; ++j)
    for (unsigned k = 0; k < n_; ++k) {
      const std::uint32_t ej = std::uint32_t{1} << j, ek = std::uint32_t{1} << k;
      cube_[j * n_ + k] = j == k ? 0 : f(ej ^ ek) ^ f(ej) ^ f(ek) ^ f0;
    }
}

std::uint32_t LinearJacobian::form(unsigned i, unsigned j) const {
  std::uint32_t mask = 0;
  for (unsigned k = 0; k < n_; ++k)
    if ((cube(j, k) >> i) & 1u) mask |= std::uint32_t{1} << k;
  return mask;
}

void LinearJacobian::eval_columns(std::uint32_t x, std::uint32_t* columns) const {
  for (unsigned j = 0; j < n_; ++j) {
    std::uint32_t c = 0;
    for (std::uint32_t y = x; y; y &= y - 1) c ^= cube_[j * n_ + static_cast<unsigned>(std::countr_zero(y))];
    columns[j] = c;
  }
}

std::vector<std::uint32_t> LinearJacobian::eval_columns(std::uint32_t x) const {
  std::vector<std::uint32_t> cols(n_);
  eval_columns(x, cols.data());
  return cols;
}

BitMatrix LinearJacobian::eval(std::uint32_t x) const {
  const auto cols = eval_columns(x);
  std::vector<std::uint64_t> words(cols.begin(), cols.end());
  return BitMatrix::from_column_words(words, m_);
}

unsigned LinearJacobian::rank_at(std::uint32_t x) const {
  std::uint64_t cols[32];
  std::uint32_t tmp[32];
  eval_columns(x, tmp);
  std::copy(tmp, tmp + n_, cols);
  return static_cast<unsigned>(rank_of_words(std::span<std::uint64_t>(cols, n_)));
}

std::string RankDistribution::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(counts[i]);
  }
  return s + "]";
}

RankTable rank_table(const LinearJacobian& j) {
  const unsigned n = j.n();
  const std::uint32_t size = std::uint32_t{1} << n;
  RankTable t;
  t.buckets.resize(std::min(j.m(), n) + 1);
  t.rank_of.resize(size);
  // Walk x in Gray-code order, updating the columns one basis vector at a time.
  std::vector<std::uint32_t> cols(n, 0);
  std::uint64_t work[32];
  std::uint32_t x = 0;
  for (std::uint32_t i = 0; i < size; ++i) {
    if (i) {
      const unsigned k = static_cast<unsigned>(std::countr_zero(i));
      x ^= std::uint32_t{1} << k;
      for (unsigned c = 0; c < n; ++c) cols[c] ^= j.cube(c, k);
    }
    std::copy(cols.begin(), cols.end(), work);
    t.rank_of[x] = static_cast<std::uint8_t>(rank_of_words(std::span<std::uint64_t>(work, n)));
  }
  for (std::uint32_t y = 0; y < size; ++y) t.buckets[t.rank_of[y]].push_back(y);
  return t;
}

RankDistribution rank_distribution(const RankTable& t) {
  RankDistribution d;
  for (const auto& b : t.buckets) d.counts.push_back(b.size());
  return d;
}

bool ddt_rank_crosscheck(const Vbf& f) {
  const auto dist = rank_distribution(rank_table(LinearJacobian(f)));
  const auto table = ddt(f);
  std::vector<std::uint64_t> by_value(std::size_t{f.domain_size()} + 1, 0);
  for (auto c : table.counts) ++by_value[c];
  for (std::size_t r = 0; r < dist.counts.size(); ++r) {
    if (r > f.n()) return false;
    const std::uint64_t pairs = by_value[std::size_t{1} << (f.n() - r)];
    if (pairs % (std::uint64_t{1} << r) || pairs >> r != dist.counts[r]) return false;
  }
  return true;
}

}  // namespace eaforge
