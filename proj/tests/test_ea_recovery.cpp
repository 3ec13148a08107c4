#include <doctest.h>

#include <random>

#include "eaforge/catalog.hpp"
#include "eaforge/ea_recovery.hpp"
#include "eaforge/jacobian.hpp"
#include "oracles.hpp"

using namespace eaforge;

namespace {

std::size_t rows_rank(const GuessSystem& s, std::size_t first, std::size_t count) {
  BitMatrix m(count, s.matrix.cols());
  for (std::size_t r = 0; r < count; ++r) m.set_row(r, s.matrix.row(first + r));
  return rank(m);
}

const EaTuple* tuple_of(const RecoveryVerdict& v) {
  const auto* e = std::get_if<Equivalent>(&v);
  return e ? &e->tuple : nullptr;
}

}  // namespace

TEST_CASE("guess system shape and the single-guess rank bound") {
  CHECK(single_guess_rank_bound(6, 6, 4) == 34);
  CHECK(single_guess_rank_bound(6, 6, 3) == 30);
  std::mt19937_64 rng(31);
  const auto f = random_quadratic(6, 6, rng);
  const LinearJacobian jf(f);
  const auto t = rank_table(jf);
  REQUIRE(!t.buckets[4].empty());
  const auto w = t.buckets[4][0];
  const auto sys = build_guess_system(jf, jf, {{w, w}});
  CHECK(sys.matrix.rows() == 42);
  CHECK(sys.matrix.cols() == 72);
  CHECK(rank(sys.matrix) <= 34);
  const auto zero = build_guess_system(jf, jf, {{0, 0}});
  for (std::size_t r = 36; r < 42; ++r) {
    CHECK(zero.matrix.row(r).is_zero());
    CHECK_FALSE(zero.rhs.get(r));
  }
  CHECK_THROWS_AS(build_guess_system(jf, LinearJacobian(random_quadratic(6, 5, rng)), {{1, 1}}), DimensionMismatch);
}

TEST_CASE("true single guesses reach the bound exactly") {
  // Homogeneous part r(m+n-r), with the Yv = w rows r(m+n-r) + (n-r).
  std::mt19937_64 rng(32);
  for (auto [n, m] : {std::pair{6u, 6u}, {8u, 6u}, {6u, 8u}}) {
    for (int k = 0; k < 10; ++k) {
      const auto f = random_quadratic(n, m, rng);
      const auto tup = random_ea_tuple(n, m, rng);
      const auto g = compose_ea(f, tup);
      const LinearJacobian jf(f), jg(g);
      const auto tg = rank_table(jg);
      for (unsigned r : {3u, 4u}) {
        if (tg.buckets[r].empty()) continue;
        const auto v = tg.buckets[r][0];
        const auto w = static_cast<std::uint32_t>(tup.b0.apply(std::uint64_t{v}));
        const auto sys = build_guess_system(jf, jg, {{v, w}});
        CHECK(rows_rank(sys, 0, std::size_t{m} * n) == r * (m + n - r));
        CHECK(rank(sys.matrix) == single_guess_rank_bound(n, m, r));
        CHECK(solve_affine(sys.matrix, sys.rhs).has_value());
      }
    }
  }
}

TEST_CASE("any single guess of matching rank obeys the bound") {
  std::mt19937_64 rng(33);
  const auto f = random_quadratic(6, 6, rng), g = random_quadratic(6, 6, rng);
  const LinearJacobian jf(f), jg(g);
  for (std::uint32_t v = 1; v < 64; v += 3)
    for (std::uint32_t w = 1; w < 64; w += 5) {
      const unsigned r = jf.rank_at(w);
      if (jg.rank_at(v) != r) continue;
      CHECK(rank(build_guess_system(jf, jg, {{v, w}}).matrix) <= single_guess_rank_bound(6, 6, r));
    }
}

TEST_CASE("reference selection") {
  const auto kim_t = rank_table(LinearJacobian(kim_mapping()));
  auto plan = choose_references(kim_t, 2);
  CHECK(plan.s == 2);
  CHECK(plan.references[0] == 1);
  CHECK(plan.references[1] == 2);
  CHECK(plan.ranks[0] == 5);
  CHECK_FALSE(plan.hybrid);
  CHECK(plan.references.size() == 6);

  // Distribution [1,0,0,2,12,49,0]: both rank-3 points are fixed, the third
  // reference comes from the rank-4 bucket.
  const auto f = random_quadratic(6, 6, std::uint64_t{4});
  const LinearJacobian jf(f);
  const auto tf = rank_table(jf);
  REQUIRE(rank_distribution(tf).to_string() == "[1,0,0,2,12,49,0]");
  plan = choose_references(tf, 3);
  CHECK(plan.hybrid);
  CHECK(plan.ranks[0] == 3);
  CHECK(plan.ranks[1] == 3);
  CHECK(plan.ranks[2] == 4);
  CHECK(plan.references[0] == tf.buckets[3][0]);
  CHECK(plan.references[1] == tf.buckets[3][1]);
  const auto tuned = choose_references(jf, tf, 3, 10);
  CHECK(tuned.ranks == std::vector<unsigned>(plan.ranks.begin(), plan.ranks.end()));
  CHECK(tuned.hybrid);
  std::vector<std::uint64_t> refs(tuned.references.begin(), tuned.references.end());
  CHECK(rank_of_words(refs) == 6);

  // At most 2 orders of the two rank-3 points times 12 rank-4 choices.
  const auto g = compose_ea(f, random_ea_tuple(6, 6, std::uint64_t{40}));
  const auto v = recover(f, g);
  REQUIRE(tuple_of(v));
  CHECK(std::get<Equivalent>(v).diagnostics.guesses <= 2 * (1 + 12) + 2);

  std::vector<std::uint32_t> lin(64);
  for (std::uint32_t x = 0; x < 64; ++x) lin[x] = x ^ (x >> 1);
  CHECK_THROWS_AS(choose_references(rank_table(LinearJacobian(Vbf(6, 6, lin))), 3), NoUsableRank);
}

TEST_CASE("the tuned plan's primary dimension matches the true guess") {
  std::mt19937_64 rng(34);
  for (int k = 0; k < 10; ++k) {
    const auto f = random_quadratic(6, 8, rng);
    const auto tup = random_ea_tuple(6, 8, rng);
    const auto g = compose_ea(f, tup);
    const LinearJacobian jf(f), jg(g);
    const auto plan = choose_references(jf, rank_table(jf), 3, 10);
    const auto binv = *invert(tup.b0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> self, truth;
    for (unsigned i = 0; i < plan.s; ++i) {
      const auto w = plan.references[i];
      self.emplace_back(w, w);
      truth.emplace_back(static_cast<std::uint32_t>(binv.apply(std::uint64_t{w})), w);
    }
    const auto a = build_guess_system(jf, jf, self);
    const auto b = build_guess_system(jf, jg, truth);
    CHECK(rank(a.matrix) == rank(b.matrix));
  }
}

TEST_CASE("reflexive and EA-image recovery") {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 10; ++k) {
    const auto f = random_quadratic(6, 6, rng);
    const auto v = recover(f, f);
    REQUIRE(tuple_of(v));
    CHECK(verify(f, f, *tuple_of(v)));
    const auto g = compose_ea(f, random_ea_tuple(6, 6, rng));
    const auto w = recover(f, g);
    REQUIRE(tuple_of(w));
    CHECK(verify(f, g, *tuple_of(w)));
  }
}

TEST_CASE("affine inputs bypass the guess loop") {
  std::mt19937_64 rng(36);
  const auto zero = Vbf(5, 5, std::vector<std::uint32_t>(32, 0));
  const auto g = compose_ea(zero, random_ea_tuple(5, 5, rng));
  const auto v = recover(zero, g);
  REQUIRE(tuple_of(v));
  CHECK(verify(zero, g, *tuple_of(v)));
}

TEST_CASE("verdicts") {
  std::mt19937_64 rng(37);
  const auto gold = gold_function(5, 1);
  const auto kim = kim_mapping();
  const auto other = random_quadratic(6, 6, rng);
  CHECK(std::holds_alternative<NotEquivalent>(recover(kim, other)));
  // x^3 and x^5 over GF(2^5) share the APN rank distribution but are
  // inequivalent Gold functions.
  const auto v = recover(gold, gold_function(5, 2));
  REQUIRE(std::holds_alternative<NoEquivalenceFound>(v));
  CHECK(std::get<NoEquivalenceFound>(v).diagnostics.guesses > 0);
  CHECK_THROWS_AS(recover(kim, random_quadratic(6, 5, rng)), DimensionMismatch);
  CHECK_THROWS_AS(recover(Vbf(3, 1, {0, 0, 0, 0, 0, 0, 0, 1}), Vbf(3, 1, {0, 0, 0, 0, 0, 0, 0, 1})), DegreeTooHigh);
}

TEST_CASE("exhaustive refinement recovers with a zero threshold") {
  std::mt19937_64 rng(38);
  for (int k = 0; k < 5; ++k) {
    const auto f = random_quadratic(6, 6, rng);
    const auto g = compose_ea(f, random_ea_tuple(6, 6, rng));
    RecoveryConfig cfg;
    cfg.threshold = 0;
    cfg.s = 1;
    cfg.exhaustive = true;
    const auto v = recover(f, g, cfg);
    REQUIRE(tuple_of(v));
    CHECK(verify(f, g, *tuple_of(v)));
  }
}

TEST_CASE("parallel recovery returns the sequential answer") {
  std::mt19937_64 rng(39);
  for (auto [n, m] : {std::pair{6u, 6u}, {6u, 8u}, {7u, 7u}}) {
    const auto f = random_quadratic(n, m, rng);
    const auto g = compose_ea(f, random_ea_tuple(n, m, rng));
    RecoveryConfig one, many;
    many.jobs = 4;
    const auto a = recover(f, g, one), b = recover(f, g, many);
    REQUIRE(tuple_of(a));
    REQUIRE(tuple_of(b));
    CHECK(*tuple_of(a) == *tuple_of(b));
    CHECK(std::get<Equivalent>(a).diagnostics == std::get<Equivalent>(b).diagnostics);
  }
  const auto a = recover(gold_function(5, 1), gold_function(5, 2));
  RecoveryConfig many;
  many.jobs = 3;
  const auto b = recover(gold_function(5, 1), gold_function(5, 2), many);
  CHECK(std::get<NoEquivalenceFound>(a).diagnostics == std::get<NoEquivalenceFound>(b).diagnostics);
}

TEST_CASE("finish") {
  std::mt19937_64 rng(40);
  const auto f = random_quadratic(6, 7, rng);
  const auto t = random_ea_tuple(6, 7, rng);
  const auto g = compose_ea(f, t);
  const auto rest = finish(f, g, t.a0, t.b0);
  REQUIRE(rest);
  CHECK(rest->first == t.c0);
  CHECK(rest->second == t.a);
  const auto self = finish(f, f, BitMatrix::identity(7), BitMatrix::identity(6));
  REQUIRE(self);
  CHECK(self->first.is_zero());
  CHECK(self->second.is_zero());
  int rejected = 0;
  for (int k = 0; k < 100; ++k) rejected += !finish(f, g, random_nonsingular(7, rng), random_nonsingular(6, rng));
  CHECK(rejected >= 95);
}

TEST_CASE("verify") {
  std::mt19937_64 rng(41);
  const auto f = random_quadratic(6, 6, rng);
  const auto t = random_ea_tuple(6, 6, rng);
  const auto g = compose_ea(f, t);
  CHECK(verify(f, g, t));
  CHECK_FALSE(verify(f, g, EaTuple::identity(6, 6)));
  auto bad = t;
  bad.a.flip(0);
  CHECK_FALSE(verify(f, g, bad));
}
