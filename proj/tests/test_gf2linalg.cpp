#include <doctest.h>

#include <random>
#include <set>

#include "eaforge/bitmatrix.hpp"
#include "eaforge/finite_field.hpp"
#include "eaforge/jacobian.hpp"
#include "eaforge/vbf.hpp"
#include "oracles.hpp"

using namespace eaforge;

namespace {

BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng() & 1u) m.set(r, c);
  return m;
}

std::vector<std::vector<bool>> as_bools(const BitMatrix& m) {
  std::vector<std::vector<bool>> rows(m.rows(), std::vector<bool>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m.get(r, c);
  return rows;
}

// Random matrix of exactly the given rank: product of random full-rank factors.
BitMatrix matrix_of_rank(std::size_t n, std::size_t r, std::mt19937_64& rng) {
  BitMatrix left(n, r), right(r, n);
  do left = random_matrix(n, r, rng); while (rank(left) != r);
  do right = random_matrix(r, n, rng); while (rank(right) != r);
  return left * right;
}

}  // namespace

TEST_CASE("rank of identity and zero") {
  CHECK(rank(BitMatrix::identity(6)) == 6);
  CHECK(rank(BitMatrix(6, 6)) == 0);
  CHECK(rank(BitMatrix(0, 0)) == 0);
}

TEST_CASE("rank agrees with the boolean oracle and with the transpose") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t rows = 1 + rng() % 90, cols = 1 + rng() % 90;
    const auto m = random_matrix(rows, cols, rng);
    const auto r = rank(m);
    CHECK(r == oracle::rank(as_bools(m)));
    CHECK(r == rank(m.transpose()));
    CHECK(left_kernel(m).size() == rows - r);
    CHECK(right_kernel(m).size() == cols - r);
  }
}

TEST_CASE("rank_of_words matches rank") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint64_t> rows(1 + rng() % 20);
    for (auto& w : rows) w = rng() & 0xFFFFF;
    CHECK(rank_of_words(rows) == oracle::rank_of_words(rows, 20));
  }
}

TEST_CASE("Kim Jacobian has rank 5 at every nonzero point") {
  const auto kim = vbf_from_univariate(UnivariateSpec(FieldSpec(6, 0x5B), {{1, 3}, {1, 10}, {2, 24}}));
  const LinearJacobian j(kim);
  for (std::uint32_t x = 1; x < 64; ++x) CHECK(rank(j.eval(x)) == 5);
}

TEST_CASE("left kernel") {
  CHECK(left_kernel(BitMatrix::identity(5)).empty());
  CHECK(left_kernel(BitMatrix(3, 3)).size() == 3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const auto m = random_matrix(1 + rng() % 12, 1 + rng() % 12, rng);
    const auto k = left_kernel(m);
    CHECK(k == rref_basis(k));
    for (const auto& u : k) {
      CHECK(!u.is_zero());
      for (std::size_t c = 0; c < m.cols(); ++c) CHECK(!dot(u, m.column(c)));
    }
  }
}

TEST_CASE("left kernel of a quadratic APN Jacobian is one-dimensional") {
  const auto x3 = vbf_from_univariate(UnivariateSpec(FieldSpec(6, 0x5B), {{1, 3}}));
  const LinearJacobian j(x3);
  for (std::uint32_t a = 1; a < 64; ++a) {
    const auto k = left_kernel(j.eval(a));
    REQUIRE(k.size() == 1);
    CHECK(k[0].to_uint() == oracle::left_kernel_of_jacobian(x3, a).at(0));
  }
}

TEST_CASE("solve_affine basics") {
  const auto v = BitVector::from_uint(0b101101, 6);
  const auto s = solve_affine(BitMatrix::identity(6), v);
  REQUIRE(s);
  CHECK(s->particular == v);
  CHECK(s->dim() == 0);
  CHECK_FALSE(solve_affine(BitMatrix(4, 4), BitVector::from_uint(1, 4)));
  CHECK_THROWS(solve_affine(BitMatrix(4, 4), BitVector(3)));
}

TEST_CASE("72x72 system of rank 69 has a 3-dimensional solution space") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto m = matrix_of_rank(72, 69, rng);
    BitVector x0(72);
    for (std::size_t i = 0; i < 72; ++i) x0.set(i, rng() & 1u);
    const auto rhs = m.apply(x0);
    const auto s = solve_affine(m, rhs);
    REQUIRE(s);
    CHECK(s->dim() == 3);
    const auto all = enumerate(*s);
    CHECK(all.size() == 8);
    std::set<std::string> distinct;
    bool has_x0 = false;
    for (const auto& v : all) {
      CHECK(m.apply(v) == rhs);
      distinct.insert(v.to_string());
      has_x0 = has_x0 || v == x0;
    }
    CHECK(distinct.size() == 8);
    CHECK(has_x0);
  }
}

TEST_CASE("inconsistency is detected exactly when the augmented rank grows") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t rows = 2 + rng() % 20, cols = 2 + rng() % 20;
    const auto m = random_matrix(rows, cols, rng);
    BitVector rhs(rows);
    for (std::size_t i = 0; i < rows; ++i) rhs.set(i, rng() & 1u);
    auto aug = as_bools(m);
    for (std::size_t r = 0; r < rows; ++r) aug[r].push_back(rhs.get(r));
    const bool consistent = oracle::rank(aug) == rank(m);
    const auto s = solve_affine(m, rhs);
    CHECK(s.has_value() == consistent);
    if (s) {
      CHECK(s->dim() == cols - rank(m));
      CHECK(m.apply(s->particular) == rhs);
    }
  }
}

TEST_CASE("invert") {
  CHECK(*invert(BitMatrix::identity(7)) == BitMatrix::identity(7));
  std::mt19937_64 rng(6);
  std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5, 6, 7};
  std::shuffle(perm.begin(), perm.end(), rng);
  BitMatrix p(8, 8);
  for (std::size_t i = 0; i < 8; ++i) p.set(i, perm[i]);
  CHECK(*invert(p) == p.transpose());
  for (int t = 0; t < 20; ++t) {
    const auto m = random_nonsingular(8, rng);
    const auto inv = invert(m);
    REQUIRE(inv);
    CHECK(m * *inv == BitMatrix::identity(8));
    CHECK(*inv * m == BitMatrix::identity(8));
  }
  CHECK_FALSE(invert(matrix_of_rank(8, 7, rng)));
  CHECK_THROWS(invert(BitMatrix(3, 4)));
}

TEST_CASE("enumerate sizes and cap") {
  SolutionSpace s{BitVector::from_uint(3, 12), {}};
  auto all = enumerate(s);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == s.particular);
  for (std::size_t i = 0; i < 10; ++i) s.kernel_basis.push_back(BitVector::unit(i + 2, 12));
  s.kernel_basis = rref_basis(s.kernel_basis);
  all = enumerate(s);
  CHECK(all.size() == 1024);
  std::set<std::uint64_t> distinct;
  for (const auto& v : all) distinct.insert(v.to_uint());
  CHECK(distinct.size() == 1024);
  CHECK_THROWS_AS(enumerate(s, 9), EnumerationCapExceeded);
  std::size_t visited = 0;
  for_each_solution(s, [&](const BitVector&) { return ++visited < 5; });
  CHECK(visited == 5);
}

TEST_CASE("complete_to_basis") {
  CHECK(complete_to_basis(std::vector{BitVector::unit(0, 2)}, 2) == BitMatrix::identity(2));
  const auto m = complete_to_basis(std::vector{BitVector::unit(1, 2)}, 2);
  CHECK(rank(m) == 2);
  CHECK(m.column(0) == BitVector::unit(1, 2));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto basis = random_nonsingular(12, rng);
    std::vector<BitVector> vs;
    for (std::size_t c = 0; c < 6; ++c) vs.push_back(basis.column(c));
    const auto full = complete_to_basis(vs, 12);
    CHECK(rank(full) == 12);
    for (std::size_t c = 0; c < 6; ++c) CHECK(full.column(c) == vs[c]);
  }
  CHECK_THROWS_AS(complete_to_basis(std::vector{BitVector::unit(0, 3), BitVector::unit(0, 3)}, 3), DependentInput);
}

TEST_CASE("rref_basis is canonical") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::uint64_t> a(5);
    for (auto& w : a) w = rng() & 0xFFF;
    // A different generating set of the same span.
    std::vector<std::uint64_t> b = a;
    for (std::size_t i = 1; i < b.size(); ++i) b[i] ^= b[i - 1];
    std::reverse(b.begin(), b.end());
    CHECK(rref_basis(a) == rref_basis(b));
  }
}
