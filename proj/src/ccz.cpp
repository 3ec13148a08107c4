#include "eaforge/ccz.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "eaforge/bitmatrix.hpp"
#include "eaforge/parallel.hpp"

namespace eaforge {

std::size_t WalshZeroes::size() const {
  std::size_t c = 0;
  for (auto w : bits) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

WalshZeroes walsh_zeroes(const Vbf& f) {
  const unsigned n = f.n(), m = f.m();
  WalshZeroes z{n, m, std::vector<std::uint64_t>(((std::size_t{1} << (n + m)) + 63) / 64, 0)};
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << m); ++b) {
    const auto w = component_walsh(f, b);
    for (std::uint32_t a = 0; a < w.size(); ++a)
      if (w[a] == 0 || (a == 0 && b == 0)) {
        const std::uint64_t v = a | (std::uint64_t{b} << n);
        z.bits[v >> 6] |= std::uint64_t{1} << (v & 63);
      }
  }
  return z;
}

namespace {

// Depth-first search over RREF bases. At each node, `cands` holds every
// c != 0 whose bits up to the current top pivot are zero and for which
// c + span(basis) lies inside Z, sorted by (lowest set bit, value). A basis
// extends by z in cands exactly when z's pivot is free in the existing
// vectors.
class SpaceSearch {
 public:
  SpaceSearch(const WalshZeroes& z, unsigned dim)
      : z_(z), dim_(dim), bits_(z.n + z.m), marks_(dim + 1, std::vector<std::uint64_t>(z.bits.size())),
        levels_(dim + 1) {}

  void run_from(const std::vector<std::uint32_t>& root, std::uint32_t first, std::vector<SubspaceBasis>& out) {
    out_ = &out;
    basis_.assign(1, first);
    // The root candidate set is Z \ {0}, whose membership bitset is Z itself.
    if (filter(root, first, z_.bits, levels_[1])) descend(1);
  }

 private:
  static bool has(const std::vector<std::uint64_t>& bits, std::uint64_t v) { return (bits[v >> 6] >> (v & 63)) & 1u; }

  // Fills `next` with {c in cands : lowbit(c) > lowbit(z), c + z in member}
  // and reports whether it can still hold the rest of a basis: r more
  // vectors need pivots q_1 < ... < q_r with 2^(r-i) candidates at q_i.
  bool filter(const std::vector<std::uint32_t>& cands, std::uint32_t z, const std::vector<std::uint64_t>& member,
              std::vector<std::uint32_t>& next) const {
    const unsigned p = static_cast<unsigned>(std::countr_zero(z));
    const unsigned remaining = dim_ - static_cast<unsigned>(basis_.size());
    next.clear();
    unsigned per_pivot[64] = {};
    auto it = std::partition_point(cands.begin(), cands.end(),
                                   [&](std::uint32_t c) { return static_cast<unsigned>(std::countr_zero(c)) <= p; });
    if (static_cast<std::size_t>(cands.end() - it) + 1 < (std::size_t{1} << remaining)) return false;
    for (; it != cands.end(); ++it)
      if (has(member, *it ^ z)) {
        next.push_back(*it);
        ++per_pivot[std::countr_zero(*it)];
      }
    if (next.size() + 1 < (std::size_t{1} << remaining)) return false;
    unsigned need = remaining, q = p + 1;
    while (need > 0) {
      while (q < bits_ && per_pivot[q] < (1u << (need - 1))) ++q;
      if (q >= bits_) return false;
      --need;
      ++q;
    }
    return true;
  }

  void descend(unsigned depth) {
    if (depth == dim_) {
      std::vector<std::uint64_t> b(basis_.begin(), basis_.end());
      out_->push_back(SubspaceBasis{dim_, std::move(b)});
      return;
    }
    const auto& cands = levels_[depth];
    auto& mark = marks_[depth];
    for (auto c : cands) mark[c >> 6] |= std::uint64_t{1} << (c & 63);
    std::uint32_t used = 0;
    for (auto b : basis_) used |= b;
    for (auto z : cands) {
      if (used & (z & (~z + 1))) continue;
      basis_.push_back(z);  // filter() sizes its requirement from basis_
      if (filter(cands, z, mark, levels_[depth + 1])) descend(depth + 1);
      basis_.pop_back();
    }
    for (auto c : cands) mark[c >> 6] &= ~(std::uint64_t{1} << (c & 63));
  }

  const WalshZeroes& z_;
  unsigned dim_;
  unsigned bits_;
  std::vector<std::vector<std::uint64_t>> marks_;
  std::vector<std::vector<std::uint32_t>> levels_;
  std::vector<std::uint32_t> basis_;
  std::vector<SubspaceBasis>* out_ = nullptr;
};

}  // namespace

std::vector<SubspaceBasis> subspaces_in(const WalshZeroes& z, unsigned dim, unsigned jobs) {
  const unsigned bits = z.n + z.m;
  if (bits > 31) throw DimensionMismatch("ambient space too large for subspace search");
  if (dim == 0) return {SubspaceBasis{0, {}}};
  std::vector<std::uint32_t> root;
  for (std::uint32_t v = 1; v < (std::uint32_t{1} << bits); ++v)
    if (z.contains(v)) root.push_back(v);
  std::stable_sort(root.begin(), root.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::countr_zero(a) < std::countr_zero(b); });
  if (root.size() + 1 < (std::size_t{1} << dim)) return {};
  auto parts = parallel_map(root.size(), jobs, [&](std::size_t i) {
    std::vector<SubspaceBasis> found;
    SpaceSearch search(z, dim);
    search.run_from(root, root[i], found);
    return found;
  });
  std::vector<SubspaceBasis> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  return all;
}

unsigned thickness(const SubspaceBasis& space, unsigned n) {
  std::vector<std::uint64_t> proj;
  for (auto v : space.basis) proj.push_back(v >> n);
  return static_cast<unsigned>(rank_of_words(proj));
}

Spectrum ThicknessSpectrum::as_spectrum() const {
  std::map<std::int64_t, std::uint64_t> m;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (counts[j]) m[static_cast<std::int64_t>(j)] = counts[j];
  return Spectrum(std::move(m));
}

ThicknessSpectrum thickness_spectrum(const std::vector<SubspaceBasis>& spaces, unsigned n, unsigned m) {
  ThicknessSpectrum t{std::vector<std::uint64_t>(m + 1, 0)};
  for (const auto& s : spaces) ++t.counts[thickness(s, n)];
  return t;
}

ThicknessSpectrum thickness_spectrum(const Vbf& f, unsigned jobs) {
  return thickness_spectrum(dim_n_spaces(walsh_zeroes(f), jobs), f.n(), f.m());
}

Vbf ea_representative(const Vbf& f, const SubspaceBasis& space) {
  const unsigned n = f.n();
  if (f.m() != n) throw DimensionMismatch("representatives need n = m");
  if (space.dim != n || space.basis.size() != n) throw DimensionMismatch("space must have dimension n");
  std::vector<BitVector> cols;
  for (auto v : space.basis) cols.push_back(BitVector::from_uint(v, 2 * n));
  const BitMatrix lt = complete_to_basis(cols, 2 * n);
  const BitMatrix l = lt.transpose();
  const std::uint64_t low = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint32_t> table(f.domain_size(), 0);
  std::vector<bool> seen(f.domain_size(), false);
  for (std::uint32_t x = 0; x < f.domain_size(); ++x) {
    const std::uint64_t u = l.apply(x | (std::uint64_t{f(x)} << n));
    const auto y = static_cast<std::uint32_t>(u & low);
    if (seen[y]) throw NotAGraph("image of the graph is not the graph of a function");
    seen[y] = true;
    table[y] = static_cast<std::uint32_t>(u >> n);
  }
  return Vbf(n, n, std::move(table));
}

EaClassBounds ea_class_bounds(const Vbf& f, unsigned jobs) {
  const auto spaces = dim_n_spaces(walsh_zeroes(f), jobs);
  struct Rep {
    ThicknessSpectrum t;
    unsigned degree;
  };
  auto reps = parallel_map(spaces.size(), jobs, [&](std::size_t i) {
    const Vbf g = ea_representative(f, spaces[i]);
    return Rep{thickness_spectrum(g, 1), degree(g)};
  });
  std::map<std::pair<ThicknessSpectrum, unsigned>, std::size_t> tally;
  std::map<ThicknessSpectrum, bool> distinct;
  for (const auto& r : reps) {
    ++tally[{r.t, r.degree}];
    distinct[r.t] = true;
  }
  EaClassBounds b;
  b.upper = spaces.size();
  b.lower = distinct.size();
  for (const auto& [key, count] : tally) b.report.push_back(EaClassEntry{key.first, key.second, count});
  return b;
}

}  // namespace eaforge
