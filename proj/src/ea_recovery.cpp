#include "eaforge/ea_recovery.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <numeric>

#include "eaforge/parallel.hpp"

namespace eaforge {

namespace {

std::uint64_t parity_apply(const std::vector<std::uint64_t>& columns, std::uint64_t x) {
  std::uint64_t y = 0;
  for (; x; x &= x - 1) y ^= columns[static_cast<std::size_t>(std::countr_zero(x))];
  return y;
}

std::uint64_t bits_at(std::span<const std::uint64_t> words, std::size_t offset, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i)
    if ((words[(offset + i) >> 6] >> ((offset + i) & 63)) & 1u) v |= std::uint64_t{1} << i;
  return v;
}

// Semi-reduced row echelon form built one equation at a time. Every stored
// row is reduced against the earlier ones, so reducing a new row against
// the stored rows in insertion order is exact. Bit `unknowns` holds the rhs.
class Echelon {
 public:
  explicit Echelon(std::size_t unknowns) : unknowns_(unknowns), words_((unknowns + 64) / 64) {}

  std::size_t unknowns() const { return unknowns_; }
  std::size_t words() const { return words_; }
  std::size_t rank() const { return pivots_.size(); }

  // Returns false when the row makes the system inconsistent.
  bool add(std::vector<std::uint64_t> row) {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if ((row[p >> 6] >> (p & 63)) & 1u) {
        const std::uint64_t* src = rows_.data() + i * words_;
        for (std::size_t w = 0; w < words_; ++w) row[w] ^= src[w];
      }
    }
    std::size_t pivot = unknowns_;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = row[w];
      if (w == unknowns_ >> 6) bits &= (std::uint64_t{1} << (unknowns_ & 63)) - 1;
      if (w > unknowns_ >> 6) bits = 0;
      if (bits) {
        pivot = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        break;
      }
    }
    if (pivot == unknowns_) return !((row[unknowns_ >> 6] >> (unknowns_ & 63)) & 1u);
    pivots_.push_back(pivot);
    rows_.insert(rows_.end(), row.begin(), row.end());
    return true;
  }

  SolutionSpace solution() const {
    std::vector<bool> is_pivot(unknowns_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    SolutionSpace space;
    space.particular = back_substitute(BitVector(unknowns_), true);
    for (std::size_t f = 0; f < unknowns_; ++f) {
      if (is_pivot[f]) continue;
      space.kernel_basis.push_back(back_substitute(BitVector::unit(f, unknowns_), false));
    }
    return space;
  }

 private:
  BitVector back_substitute(BitVector x, bool with_rhs) const {
    auto xw = x.words();
    for (std::size_t i = pivots_.size(); i-- > 0;) {
      const std::uint64_t* row = rows_.data() + i * words_;
      unsigned acc = 0;
      for (std::size_t w = 0; w < xw.size(); ++w) acc ^= static_cast<unsigned>(std::popcount(row[w] & xw[w]));
      if (with_rhs) acc ^= static_cast<unsigned>((row[unknowns_ >> 6] >> (unknowns_ & 63)) & 1u);
      // x at the pivot is still zero, so acc is the value it must take.
      if (acc & 1u) x.set(pivots_[i]);
    }
    return x;
  }

  std::size_t unknowns_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::size_t> pivots_;
};

// Rows for one guess (v, w), in the layout documented for GuessSystem.
void guess_rows(const LinearJacobian& jf, const LinearJacobian& jg, std::uint32_t v, std::uint32_t w,
                std::size_t words, const std::function<void(std::vector<std::uint64_t>&&)>& emit) {
  const unsigned n = jf.n(), m = jf.m();
  const std::size_t ybase = std::size_t{m} * m;
  const std::size_t unknowns = ybase + std::size_t{n} * n;
  std::uint32_t cg[32], cf[32];
  jg.eval_columns(v, cg);
  jf.eval_columns(w, cf);
  auto set = [](std::vector<std::uint64_t>& row, std::size_t i) { row[i >> 6] |= std::uint64_t{1} << (i & 63); };
  for (unsigned r = 0; r < m; ++r)
    for (unsigned c = 0; c < n; ++c) {
      std::vector<std::uint64_t> row(words, 0);
      for (unsigned k = 0; k < m; ++k)
        if ((cg[c] >> k) & 1u) set(row, std::size_t{r} * m + k);
      for (unsigned k = 0; k < n; ++k)
        if ((cf[k] >> r) & 1u) set(row, ybase + std::size_t{k} * n + c);
      emit(std::move(row));
    }
  for (unsigned r = 0; r < n; ++r) {
    std::vector<std::uint64_t> row(words, 0);
    for (unsigned c = 0; c < n; ++c)
      if ((v >> c) & 1u) set(row, ybase + std::size_t{r} * n + c);
    if ((w >> r) & 1u) set(row, unknowns);
    emit(std::move(row));
  }
}

bool is_apn_distribution(const RankDistribution& d, unsigned n, unsigned m) {
  if (n != m || n < 2) return false;
  for (std::size_t r = 0; r < d.counts.size(); ++r) {
    const std::uint64_t want = r == 0 ? 1 : r == n - 1 ? (std::uint64_t{1} << n) - 1 : 0;
    if (d.counts[r] != want) return false;
  }
  return true;
}

class GuessSearch {
 public:
  GuessSearch(const Vbf& f, const Vbf& g, const LinearJacobian& jf, const LinearJacobian& jg,
              const RankTable& tg, const ReferencePlan& plan, const RecoveryConfig& cfg)
      : f_(f), g_(g), jf_(jf), jg_(jg), tg_(tg), plan_(plan), cfg_(cfg),
        unknowns_(std::size_t{f.m()} * f.m() + std::size_t{f.n()} * f.n()) {}

  struct Outcome {
    std::optional<EaTuple> tuple;
    RecoveryDiagnostics diagnostics;
    bool aborted = false;
  };

  // Explores every guess tuple whose first vector is the `index`-th entry of
  // its bucket. `stop` reports whether a canonically earlier task succeeded.
  Outcome run_subtree(std::size_t index, const std::function<bool()>& stop) {
    Outcome out;
    stop_ = &stop;
    diag_ = RecoveryDiagnostics{};
    found_.reset();
    aborted_ = false;
    const auto& bucket = tg_.buckets[plan_.ranks[0]];
    Echelon e(unknowns_);
    std::vector<std::uint64_t> span;
    descend_with(0, bucket[index], e, span);
    out.tuple = std::move(found_);
    out.diagnostics = diag_;
    out.aborted = aborted_;
    return out;
  }

  std::size_t top_level_size() const { return tg_.buckets[plan_.ranks[0]].size(); }

 private:
  // True when the search should unwind.
  bool done() {
    if (found_) return true;
    if (!aborted_ && (*stop_)()) aborted_ = true;
    return aborted_;
  }

  void descend_with(std::size_t depth, std::uint32_t v, const Echelon& parent, std::vector<std::uint64_t> span) {
    // span holds the chosen v's in echelon form for independence tests.
    std::uint64_t rv = v;
    for (auto b : span)
      if (rv & (b & (~b + 1))) rv ^= b;
    if (!rv) return;
    span.push_back(rv);
    // keep span semi-reduced: later vectors reduced against earlier ones
    Echelon e = parent;
    bool consistent = true;
    guess_rows(jf_, jg_, v, plan_.references[depth], e.words(),
               [&](std::vector<std::uint64_t>&& row) {
                 if (consistent) consistent = e.add(std::move(row));
               });
    const std::size_t guesses = depth + 1;
    if (!consistent) {
      ++diag_.guesses;
      ++diag_.inconsistent;
      return;
    }
    check_rank_bound(e, guesses);
    if (guesses < plan_.s) {
      extend(depth + 1, e, span);
      return;
    }
    ++diag_.guesses;
    const std::size_t dim = unknowns_ - e.rank();
    const bool can_refine = cfg_.exhaustive && guesses < plan_.references.size();
    if (dim <= cfg_.threshold) {
      try_solutions(e, kDefaultEnumerationCap);
    } else if (can_refine) {
      extend(depth + 1, e, span);
    } else if (cfg_.exhaustive && dim <= kDefaultEnumerationCap) {
      // No references left to refine with: enumerate up to the hard cap.
      try_solutions(e, kDefaultEnumerationCap);
    } else {
      ++diag_.threshold_exceeded;
    }
  }

  void extend(std::size_t depth, const Echelon& e, const std::vector<std::uint64_t>& span) {
    for (std::uint32_t v : tg_.buckets[plan_.ranks[depth]]) {
      if (done()) return;
      descend_with(depth, v, e, span);
    }
  }

  void check_rank_bound(const Echelon& e, std::size_t guesses) const {
    unsigned bound = 0;
    for (std::size_t i = 0; i < guesses; ++i) bound += single_guess_rank_bound(f_.n(), f_.m(), plan_.ranks[i]);
    if (e.rank() > bound) throw std::logic_error("guess system rank exceeds the single-guess bound");
  }

  void try_solutions(const Echelon& e, std::size_t cap) {
    const unsigned n = f_.n(), m = f_.m();
    const auto space = e.solution();
    const std::size_t ybase = std::size_t{m} * m;
    std::vector<std::uint64_t> xrows(m), yrows(n), work;
    for_each_solution(
        space,
        [&](const BitVector& sol) {
          ++diag_.candidates;
          const auto words = sol.words();
          for (unsigned r = 0; r < n; ++r) yrows[r] = bits_at(words, ybase + std::size_t{r} * n, n);
          work = yrows;
          if (rank_of_words(work) != n) return true;
          for (unsigned r = 0; r < m; ++r) xrows[r] = bits_at(words, std::size_t{r} * m, m);
          work = xrows;
          if (rank_of_words(work) != m) return true;
          const auto a0 = invert(BitMatrix::from_row_words(xrows, m));
          const BitMatrix b0 = BitMatrix::from_row_words(yrows, n);
          auto rest = finish(f_, g_, *a0, b0);
          if (!rest) return true;
          EaTuple t{*a0, b0, std::move(rest->first), std::move(rest->second)};
          if (!verify(f_, g_, t)) return true;
          found_ = std::move(t);
          return false;
        },
        cap);
  }

  const Vbf& f_;
  const Vbf& g_;
  const LinearJacobian& jf_;
  const LinearJacobian& jg_;
  const RankTable& tg_;
  const ReferencePlan& plan_;
  const RecoveryConfig& cfg_;
  std::size_t unknowns_;
  const std::function<bool()>* stop_ = nullptr;
  RecoveryDiagnostics diag_;
  std::optional<EaTuple> found_;
  bool aborted_ = false;
};

void accumulate(RecoveryDiagnostics& into, const RecoveryDiagnostics& d) {
  into.guesses += d.guesses;
  into.inconsistent += d.inconsistent;
  into.threshold_exceeded += d.threshold_exceeded;
  into.candidates += d.candidates;
}

}  // namespace

GuessSystem build_guess_system(const LinearJacobian& jf, const LinearJacobian& jg,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& guesses) {
  if (jf.n() != jg.n() || jf.m() != jg.m()) throw DimensionMismatch("Jacobian dimensions differ");
  const unsigned n = jf.n(), m = jf.m();
  for (const auto& [v, w] : guesses)
    if ((v >> n) || (w >> n)) throw DimensionMismatch("guess vector exceeds n bits");
  const std::size_t unknowns = std::size_t{m} * m + std::size_t{n} * n;
  const std::size_t words = (unknowns + 64) / 64;
  const std::size_t rows = guesses.size() * (std::size_t{m} * n + n);
  GuessSystem sys{BitMatrix(rows, unknowns), BitVector(rows)};
  std::size_t r = 0;
  for (const auto& [v, w] : guesses)
    guess_rows(jf, jg, v, w, words, [&](std::vector<std::uint64_t>&& row) {
      for (std::size_t c = 0; c < unknowns; ++c)
        if ((row[c >> 6] >> (c & 63)) & 1u) sys.matrix.set(r, c);
      if ((row[unknowns >> 6] >> (unknowns & 63)) & 1u) sys.rhs.set(r);
      ++r;
    });
  return sys;
}

unsigned single_guess_rank_bound(unsigned n, unsigned m, unsigned r) { return r * (m + n - r) + (n - r); }

ReferencePlan choose_references(const RankTable& tf, unsigned s) {
  std::vector<unsigned> order;
  for (unsigned r = 1; r < tf.buckets.size(); ++r)
    if (!tf.buckets[r].empty()) order.push_back(r);
  if (order.empty()) throw NoUsableRank();
  std::stable_sort(order.begin(), order.end(),
                   [&](unsigned a, unsigned b) { return tf.buckets[a].size() < tf.buckets[b].size(); });
  ReferencePlan plan;
  std::vector<std::uint64_t> span;
  for (unsigned r : order)
    for (std::uint32_t x : tf.buckets[r]) {
      std::uint64_t rx = x;
      for (auto b : span)
        if (rx & (b & (~b + 1))) rx ^= b;
      if (!rx) continue;
      span.push_back(rx);
      plan.references.push_back(x);
      plan.ranks.push_back(r);
    }
  plan.s = std::min<unsigned>(std::max(s, 1u), static_cast<unsigned>(plan.references.size()));
  for (unsigned i = 1; i < plan.s; ++i)
    if (plan.ranks[i] != plan.ranks[0]) plan.hybrid = true;
  return plan;
}

ReferencePlan choose_references(const LinearJacobian& jf, const RankTable& tf, unsigned s, unsigned threshold,
                                std::size_t budget) {
  const ReferencePlan greedy = choose_references(tf, s);
  const unsigned k = greedy.s;
  const std::size_t unknowns = std::size_t{jf.m()} * jf.m() + std::size_t{jf.n()} * jf.n();
  std::vector<std::uint32_t> chosen(k), best;
  std::size_t best_dim = std::numeric_limits<std::size_t>::max(), examined = 0;
  bool done = false;
  // Choices per bucket are taken in ascending order (guess order does not
  // change the dimension), independent of the earlier picks.
  auto rec = [&](auto&& self, unsigned i, const Echelon& sys, const std::vector<std::uint64_t>& span) -> void {
    if (done) return;
    if (i == k) {
      ++examined;
      const std::size_t dim = unknowns - sys.rank();
      if (dim < best_dim) {
        best_dim = dim;
        best = chosen;
      }
      if (dim <= threshold || examined >= budget) done = true;
      return;
    }
    const auto& bucket = tf.buckets[greedy.ranks[i]];
    const bool same = i > 0 && greedy.ranks[i] == greedy.ranks[i - 1];
    for (std::uint32_t w : bucket) {
      if (done) return;
      if (same && w <= chosen[i - 1]) continue;
      std::uint64_t rw = w;
      for (auto b : span)
        if (rw & (b & (~b + 1))) rw ^= b;
      if (!rw) continue;
      Echelon next = sys;
      bool consistent = true;
      guess_rows(jf, jf, w, w, next.words(), [&](std::vector<std::uint64_t>&& row) {
        if (consistent) consistent = next.add(std::move(row));
      });
      if (!consistent) continue;  // cannot happen: the identity pair solves it
      auto span2 = span;
      span2.push_back(rw);
      chosen[i] = w;
      self(self, i + 1, next, span2);
    }
  };
  rec(rec, 0, Echelon(unknowns), {});
  if (best.empty()) return greedy;

  ReferencePlan plan;
  plan.s = k;
  plan.hybrid = greedy.hybrid;
  std::vector<std::uint64_t> span;
  auto take = [&](std::uint32_t x, unsigned r) {
    std::uint64_t rx = x;
    for (auto b : span)
      if (rx & (b & (~b + 1))) rx ^= b;
    if (!rx) return;
    span.push_back(rx);
    plan.references.push_back(x);
    plan.ranks.push_back(r);
  };
  for (unsigned i = 0; i < k; ++i) take(best[i], greedy.ranks[i]);
  // Refinement references: the greedy order over all buckets.
  for (std::size_t i = 0; i < greedy.references.size(); ++i) take(greedy.references[i], greedy.ranks[i]);
  std::vector<unsigned> order;
  for (unsigned r = 1; r < tf.buckets.size(); ++r)
    if (!tf.buckets[r].empty()) order.push_back(r);
  std::stable_sort(order.begin(), order.end(),
                   [&](unsigned a, unsigned b) { return tf.buckets[a].size() < tf.buckets[b].size(); });
  for (unsigned r : order)
    for (std::uint32_t x : tf.buckets[r]) take(x, r);
  return plan;
}

std::optional<std::pair<BitMatrix, BitVector>> finish(const Vbf& f, const Vbf& g, const BitMatrix& a0,
                                                      const BitMatrix& b0) {
  const unsigned n = f.n(), m = f.m();
  std::vector<std::uint64_t> acols(m), bcols(n);
  for (unsigned c = 0; c < m; ++c) acols[c] = a0.column_word(c);
  for (unsigned c = 0; c < n; ++c) bcols[c] = b0.column_word(c);
  auto g1 = [&](std::uint32_t bx) { return parity_apply(acols, f(static_cast<std::uint32_t>(bx))); };
  const std::uint64_t a = g(0) ^ g1(0);
  std::vector<std::uint64_t> ccols(n);
  for (unsigned j = 0; j < n; ++j) {
    const std::uint32_t ej = std::uint32_t{1} << j;
    ccols[j] = g(ej) ^ g1(static_cast<std::uint32_t>(bcols[j])) ^ a;
  }
  // D(x) = G(x) + A0 F(B0 x) + a must equal C0 x everywhere.
  std::uint64_t x = 0, bx = 0, cx = 0;
  for (std::uint64_t i = 1; i < f.domain_size(); ++i) {
    const unsigned k = static_cast<unsigned>(std::countr_zero(i));
    x ^= std::uint64_t{1} << k;
    bx ^= bcols[k];
    cx ^= ccols[k];
    if ((g(static_cast<std::uint32_t>(x)) ^ g1(static_cast<std::uint32_t>(bx)) ^ a) != cx) return std::nullopt;
  }
  return std::make_pair(BitMatrix::from_column_words(ccols, m), BitVector::from_uint(a, m));
}

bool verify(const Vbf& f, const Vbf& g, const EaTuple& t) {
  if (f.n() != g.n() || f.m() != g.m()) return false;
  try {
    return compose_ea(f, t) == g;
  } catch (const DimensionMismatch&) {
    return false;
  }
}

RecoveryVerdict recover(const Vbf& f, const Vbf& g, const RecoveryConfig& cfg) {
  if (f.n() != g.n() || f.m() != g.m()) throw DimensionMismatch("F and G have different dimensions");
  const LinearJacobian jf(f), jg(g);
  const RankTable tf = rank_table(jf), tg = rank_table(jg);
  const auto df = rank_distribution(tf);
  if (df != rank_distribution(tg)) return NotEquivalent{};

  const unsigned s = cfg.s.value_or(is_apn_distribution(df, f.n(), f.m()) ? 2u : 3u);
  ReferencePlan plan;
  try {
    plan = choose_references(jf, tf, s, cfg.threshold);
  } catch (const NoUsableRank&) {
    // Both functions are affine; the identity linear parts always work.
    auto rest = finish(f, g, BitMatrix::identity(f.m()), BitMatrix::identity(f.n()));
    EaTuple t{BitMatrix::identity(f.m()), BitMatrix::identity(f.n()), std::move(rest->first),
              std::move(rest->second)};
    if (verify(f, g, t)) return Equivalent{std::move(t), {}};
    return NoEquivalenceFound{};
  }

  GuessSearch probe(f, g, jf, jg, tg, plan, cfg);
  const std::size_t tasks = probe.top_level_size();
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  auto outcomes = parallel_map(tasks, std::max(1u, cfg.jobs), [&](std::size_t i) {
    GuessSearch::Outcome out;
    if (i > best.load()) {
      out.aborted = true;
      return out;
    }
    GuessSearch search(f, g, jf, jg, tg, plan, cfg);
    const std::function<bool()> stop = [&] { return best.load(std::memory_order_relaxed) < i; };
    out = search.run_subtree(i, stop);
    if (out.tuple) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
    return out;
  });

  RecoveryDiagnostics total;
  for (std::size_t i = 0; i < tasks; ++i) {
    accumulate(total, outcomes[i].diagnostics);
    if (outcomes[i].tuple) return Equivalent{std::move(*outcomes[i].tuple), total};
  }
  return NoEquivalenceFound{total};
}

}  // namespace eaforge
