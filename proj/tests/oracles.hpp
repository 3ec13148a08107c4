#pragma once

// Slow, obviously-correct reference computations used to cross-check the
// library. Nothing here calls into eaforge beyond the Vbf container.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "eaforge/vbf.hpp"

namespace oracle {

inline int parity(std::uint64_t x) { return __builtin_popcountll(x) & 1; }

// Row reduction on vectors of bools.
inline std::size_t rank(std::vector<std::vector<bool>> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c])
        for (std::size_t k = c; k < cols; ++k) rows[i][k] = rows[i][k] != rows[r][k];
    ++r;
  }
  return r;
}

inline std::size_t rank_of_words(const std::vector<std::uint64_t>& words, unsigned cols) {
  std::vector<std::vector<bool>> rows;
  for (auto w : words) {
    std::vector<bool> row(cols);
    for (unsigned c = 0; c < cols; ++c) row[c] = (w >> c) & 1u;
    rows.push_back(row);
  }
  return rank(rows);
}

// Carry-less product reduced bit by bit.
inline std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, unsigned n, std::uint32_t modulus) {
  std::uint64_t prod = 0;
  for (unsigned i = 0; i < n; ++i)
    if ((b >> i) & 1u) prod ^= std::uint64_t{a} << i;
  for (int d = 2 * static_cast<int>(n) - 2; d >= static_cast<int>(n); --d)
    if ((prod >> d) & 1u) prod ^= std::uint64_t{modulus} << (d - static_cast<int>(n));
  return static_cast<std::uint32_t>(prod);
}

inline std::uint32_t gf_pow(std::uint32_t a, std::uint64_t k, unsigned n, std::uint32_t modulus) {
  std::uint32_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = gf_mul(r, a, n, modulus);
  return r;
}

inline std::int64_t walsh(const eaforge::Vbf& f, std::uint32_t a, std::uint32_t b) {
  std::int64_t s = 0;
  for (std::uint32_t x = 0; x < f.domain_size(); ++x) s += parity((a & x) ^ (b & f(x))) ? -1 : 1;
  return s;
}

inline std::vector<std::vector<std::uint32_t>> ddt(const eaforge::Vbf& f) {
  std::vector<std::vector<std::uint32_t>> t(f.domain_size(), std::vector<std::uint32_t>(std::size_t{1} << f.m()));
  for (std::uint32_t a = 0; a < f.domain_size(); ++a)
    for (std::uint32_t x = 0; x < f.domain_size(); ++x) ++t[a][f(x ^ a) ^ f(x)];
  return t;
}

// Coefficient of monomial u: XOR of F over the subsets of u.
inline std::vector<std::uint32_t> anf(const eaforge::Vbf& f) {
  std::vector<std::uint32_t> c(f.domain_size());
  for (std::uint32_t u = 0; u < f.domain_size(); ++u) {
    std::uint32_t acc = 0;
    for (std::uint32_t x = u;; x = (x - 1) & u) {
      acc ^= f(x);
      if (x == 0) break;
    }
    c[u] = acc;
  }
  return c;
}

inline unsigned degree(const eaforge::Vbf& f) {
  unsigned d = 0;
  const auto c = oracle::anf(f);
  for (std::uint32_t u = 0; u < c.size(); ++u)
    if (c[u]) d = std::max(d, static_cast<unsigned>(__builtin_popcount(u)));
  return d;
}

// Column j of J(x), straight from the definition.
inline std::uint32_t jacobian_column(const eaforge::Vbf& f, std::uint32_t x, unsigned j) {
  const std::uint32_t ej = 1u << j;
  return f(x ^ ej) ^ f(x) ^ f(ej) ^ f(0);
}

inline unsigned jacobian_rank(const eaforge::Vbf& f, std::uint32_t x) {
  std::vector<std::uint64_t> cols;
  for (unsigned j = 0; j < f.n(); ++j) cols.push_back(jacobian_column(f, x, j));
  return static_cast<unsigned>(rank_of_words(cols, f.m()));
}

// J(x) a as an m-bit word.
inline std::uint32_t jacobian_apply(const eaforge::Vbf& f, std::uint32_t x, std::uint32_t a) {
  std::uint32_t y = 0;
  for (unsigned j = 0; j < f.n(); ++j)
    if ((a >> j) & 1u) y ^= jacobian_column(f, x, j);
  return y;
}

// All nonzero u with u . (J(a) x) = 0 for every x.
inline std::vector<std::uint32_t> left_kernel_of_jacobian(const eaforge::Vbf& f, std::uint32_t a) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 1; u < (1u << f.m()); ++u) {
    bool ok = true;
    for (unsigned j = 0; j < f.n() && ok; ++j) ok = !parity(u & jacobian_column(f, a, j));
    if (ok) out.push_back(u);
  }
  return out;
}

// Rank of the full 2^bits x 2^bits matrix [u + v in S].
inline std::size_t development_rank(const std::vector<bool>& indicator, unsigned bits) {
  const std::size_t size = std::size_t{1} << bits;
  std::vector<std::vector<bool>> rows(size, std::vector<bool>(size));
  for (std::size_t u = 0; u < size; ++u)
    for (std::size_t v = 0; v < size; ++v) rows[u][v] = indicator[u ^ v];
  return rank(rows);
}

// Every dim-d linear subspace contained in the set (as sorted element
// lists), by closing spans of ascending vector choices and deduplicating.
inline std::set<std::vector<std::uint64_t>> subspaces(const std::vector<bool>& member, unsigned bits, unsigned d) {
  std::set<std::vector<std::uint64_t>> found;
  const std::uint64_t size = std::uint64_t{1} << bits;
  std::vector<std::uint64_t> span{0};
  auto rec = [&](auto&& self, std::uint64_t from, unsigned depth) -> void {
    if (depth == d) {
      auto s = span;
      std::sort(s.begin(), s.end());
      found.insert(s);
      return;
    }
    for (std::uint64_t v = from; v < size; ++v) {
      if (!member[v]) continue;
      if (std::find(span.begin(), span.end(), v) != span.end()) continue;
      bool inside = true;
      for (auto s : span) inside = inside && member[s ^ v];
      if (!inside) continue;
      const std::size_t old = span.size();
      for (std::size_t i = 0; i < old; ++i) span.push_back(span[i] ^ v);
      self(self, v + 1, depth + 1);
      span.resize(old);
    }
  };
  rec(rec, 1, 0);
  return found;
}

// Multiset of multiplicities of sum F(x_i) over 4-subsets with zero sum.
inline std::map<std::uint64_t, std::uint64_t> sigma4(const eaforge::Vbf& f) {
  std::map<std::uint32_t, std::uint64_t> hits;
  const std::uint32_t size = f.domain_size();
  for (std::uint32_t a = 0; a < size; ++a)
    for (std::uint32_t b = a + 1; b < size; ++b)
      for (std::uint32_t c = b + 1; c < size; ++c) {
        const std::uint32_t d = a ^ b ^ c;
        if (d > c) ++hits[f(a) ^ f(b) ^ f(c) ^ f(d)];
      }
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& [value, count] : hits) ++out[count];
  return out;
}

// Quadratic function with uniformly random ANF up to degree 2.
inline eaforge::Vbf random_quadratic_anf(unsigned n, unsigned m, std::mt19937_64& rng) {
  std::vector<std::uint32_t> coef(std::size_t{1} << n, 0);
  const std::uint32_t mask = m == 32 ? ~0u : (1u << m) - 1;
  for (std::uint32_t u = 0; u < (1u << n); ++u)
    if (__builtin_popcount(u) <= 2) coef[u] = static_cast<std::uint32_t>(rng()) & mask;
  std::vector<std::uint32_t> table(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    std::uint32_t y = 0;
    for (std::uint32_t u = 0; u < (1u << n); ++u)
      if ((u & x) == u) y ^= coef[u];
    table[x] = y;
  }
  return eaforge::Vbf(n, m, table);
}

}  // namespace oracle
