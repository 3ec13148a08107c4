#include "eaforge/invariants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include "eaforge/ccz.hpp"
#include "eaforge/jacobian.hpp"
#include "eaforge/parallel.hpp"

namespace eaforge {

InapplicableInvariant::InapplicableInvariant(std::size_t index, std::string name, const std::string& why)
    : std::invalid_argument("function " + std::to_string(index) + ": invariant '" + name + "' not applicable: " + why),
      index_(index),
      name_(std::move(name)) {}

// ---------------------------------------------------------------- ortho-derivative

OrthoDerivative ortho_derivative(const Vbf& f) {
  if (f.n() != f.m()) throw NotApn("ortho-derivative needs n = m");
  if (degree(f) != 2) throw NotQuadratic("ortho-derivative needs a quadratic function");
  const unsigned n = f.n();
  const LinearJacobian j(f);
  std::vector<std::uint32_t> table(f.domain_size(), 0);
  std::uint32_t cols[32];
  for (std::uint32_t a = 1; a < f.domain_size(); ++a) {
    j.eval_columns(a, cols);
    // u with u . col = 0 for every column: the right kernel of the matrix
    // whose rows are the columns of J(a).
    std::uint32_t basis[32];
    unsigned rank = 0;
    for (unsigned c = 0; c < n; ++c) {
      std::uint32_t v = cols[c];
      for (unsigned i = 0; i < rank; ++i)
        if (v & (basis[i] & (~basis[i] + 1))) v ^= basis[i];
      if (!v) continue;
      const std::uint32_t low = v & (~v + 1);
      for (unsigned i = 0; i < rank; ++i)
        if (basis[i] & low) basis[i] ^= v;
      basis[rank++] = v;
    }
    if (rank != n - 1) throw NotApn("Jacobian rank " + std::to_string(rank) + " at a nonzero point");
    std::uint32_t pivots = 0;
    for (unsigned i = 0; i < rank; ++i) pivots |= basis[i] & (~basis[i] + 1);
    const std::uint32_t full = n >= 32 ? ~0u : (std::uint32_t{1} << n) - 1;
    const std::uint32_t free_bit = full & ~pivots;
    std::uint32_t u = free_bit;
    for (unsigned i = 0; i < rank; ++i)
      if (basis[i] & free_bit) u |= basis[i] & (~basis[i] + 1);
    table[a] = u;
  }
  return OrthoDerivative{Vbf(n, n, std::move(table)), true};
}

std::string InvariantLabel::serialize() const { return "D" + ortho_diff.to_string() + "|W" + ortho_walsh.to_string(); }

InvariantLabel InvariantLabel::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (text.size() < 2 || text[0] != 'D' || bar == std::string_view::npos || bar + 1 >= text.size() ||
      text[bar + 1] != 'W')
    throw std::invalid_argument("malformed invariant label");
  return InvariantLabel{Spectrum::parse(text.substr(1, bar - 1)), Spectrum::parse(text.substr(bar + 2))};
}

InvariantLabel ortho_label(const Vbf& f) {
  const auto pi = ortho_derivative(f).pi;
  return InvariantLabel{differential_spectrum(pi), extended_walsh_spectrum(pi)};
}

// ---------------------------------------------------------------- partition

const std::vector<std::string>& invariant_names() {
  static const std::vector<std::string> names = {"diff",  "walsh", "degree", "ortho_diff", "ortho_walsh",
                                                 "sigma4", "gamma", "delta",  "thickness"};
  return names;
}

std::string invariant_text(const Vbf& f, std::string_view name) {
  if (name == "diff") return "diff" + differential_spectrum(f).to_string();
  if (name == "walsh") return "walsh" + extended_walsh_spectrum(f).to_string();
  if (name == "degree") return "degree=" + std::to_string(degree(f));
  if (name == "ortho_diff") return "D" + differential_spectrum(ortho_derivative(f).pi).to_string();
  if (name == "ortho_walsh") return "W" + extended_walsh_spectrum(ortho_derivative(f).pi).to_string();
  if (name == "sigma4") return "sigma4" + sigma_multiplicities(f, 4).to_string();
  if (name == "gamma") return "gamma=" + std::to_string(gamma_rank(f));
  if (name == "delta") return "delta=" + std::to_string(delta_rank(f));
  if (name == "thickness") return "thickness" + thickness_spectrum(f).to_string();
  throw std::invalid_argument("unknown invariant '" + std::string(name) + "'");
}

Partition partition(const std::vector<Vbf>& fns, const std::vector<std::string>& selectors, unsigned jobs) {
  std::vector<std::string> order;
  for (const auto& name : invariant_names())
    if (std::find(selectors.begin(), selectors.end(), name) != selectors.end()) order.push_back(name);
  for (const auto& s : selectors)
    if (std::find(order.begin(), order.end(), s) == order.end())
      throw std::invalid_argument("unknown invariant '" + s + "'");
  if (order.empty()) throw std::invalid_argument("no invariant selected");

  struct Result {
    std::string label;
    std::string failed;  // selector name on failure
    std::string why;
  };
  const bool both_ortho = std::find(order.begin(), order.end(), "ortho_diff") != order.end() &&
                          std::find(order.begin(), order.end(), "ortho_walsh") != order.end();
  auto results = parallel_map(fns.size(), jobs, [&](std::size_t i) {
    Result r;
    std::string current;
    try {
      std::optional<Vbf> pi;
      for (const auto& name : order) {
        current = name;
        if (!r.label.empty()) r.label += '|';
        if (both_ortho && (name == "ortho_diff" || name == "ortho_walsh")) {
          if (!pi) pi = ortho_derivative(fns[i]).pi;
          r.label += name == "ortho_diff" ? "D" + differential_spectrum(*pi).to_string()
                                          : "W" + extended_walsh_spectrum(*pi).to_string();
        } else {
          r.label += invariant_text(fns[i], name);
        }
      }
    } catch (const std::invalid_argument& e) {
      r.failed = current;
      r.why = e.what();
    }
    return r;
  });

  Partition p;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].failed.empty()) throw InapplicableInvariant(i, results[i].failed, results[i].why);
    auto [it, inserted] = slot.emplace(results[i].label, p.buckets.size());
    if (inserted) p.buckets.push_back(PartitionBucket{results[i].label, {}});
    p.buckets[it->second].members.push_back(i);
  }
  return p;
}

// ---------------------------------------------------------------- sigma-k

namespace {

void check_k(unsigned k) {
  if (k <= 2 || k % 2) throw KTooSmall("k must be even and greater than 2, got " + std::to_string(k));
}

Spectrum multiplicities_of(const std::vector<std::uint64_t>& counts) {
  std::map<std::int64_t, std::uint64_t> m;
  for (auto c : counts)
    if (c) ++m[static_cast<std::int64_t>(c)];
  return Spectrum(std::move(m));
}

using i128 = __int128;

}  // namespace

Spectrum sigma_multiplicities_bruteforce(const Vbf& f, unsigned k) {
  check_k(k);
  const std::uint32_t size = f.domain_size();
  std::vector<std::uint64_t> counts(std::size_t{1} << f.m(), 0);
  // Choose x_0 < ... < x_{k-2}; the last element is forced by the zero sum
  // and must exceed the others to count each subset once.
  std::vector<std::uint32_t> xs(k - 1);
  auto rec = [&](auto&& self, unsigned depth, std::uint32_t start, std::uint32_t sx, std::uint32_t sf) -> void {
    if (depth == k - 1) {
      if (sx > xs[k - 2]) ++counts[sf ^ f(sx)];
      return;
    }
    for (std::uint32_t x = start; x < size; ++x) {
      xs[depth] = x;
      self(self, depth + 1, x + 1, sx ^ x, sf ^ f(x));
    }
  };
  rec(rec, 0, 0, 0, 0);
  return multiplicities_of(counts);
}

Spectrum sigma_multiplicities(const Vbf& f, unsigned k) {
  check_k(k);
  const unsigned n = f.n(), m = f.m();
  const std::int64_t size = std::int64_t{1} << n;
  // Exactness guard: |e_k| <= C(2^n, k) summed over 2^(n+m) characters.
  const double log2_binom = (std::lgamma(double(size) + 1) - std::lgamma(double(k) + 1) -
                             std::lgamma(double(size - k) + 1)) / std::log(2.0);
  if (log2_binom + n + m > 120) throw std::invalid_argument("sigma multiplicities: k too large for exact arithmetic");
  if (std::int64_t(k) > size) return Spectrum{};

  // binom[p][i] for p <= 2^n, i <= k.
  std::vector<std::vector<i128>> binom(static_cast<std::size_t>(size) + 1, std::vector<i128>(k + 1, 0));
  for (std::int64_t p = 0; p <= size; ++p) {
    binom[p][0] = 1;
    for (unsigned i = 1; i <= k && i <= p; ++i) binom[p][i] = binom[p - 1][i - 1] + (i <= p - 1 ? binom[p - 1][i] : 0);
  }
  // For a character with p values +1 and q values -1, the k-th elementary
  // symmetric polynomial is sum_j C(p, k-j) C(q, j) (-1)^j.
  std::vector<i128> ek(static_cast<std::size_t>(size) + 1, 0);  // indexed by q
  for (std::int64_t q = 0; q <= size; ++q) {
    const std::int64_t p = size - q;
    i128 acc = 0;
    for (unsigned j = 0; j <= k; ++j) {
      if (j > q || k - j > p) continue;
      const i128 term = binom[p][k - j] * binom[q][j];
      acc += (j % 2) ? -term : term;
    }
    ek[q] = acc;
  }
  const std::size_t comps = std::size_t{1} << m;
  std::vector<i128> e(comps, 0);
  for (std::uint32_t b = 0; b < comps; ++b)
    for (auto w : component_walsh(f, b)) e[b] += ek[static_cast<std::size_t>((size - w) / 2)];
  // Transform over b, then divide by the number of characters.
  for (std::size_t step = 1; step < comps; step <<= 1)
    for (std::size_t i = 0; i < comps; i += 2 * step)
      for (std::size_t j = i; j < i + step; ++j) {
        const i128 u = e[j], v = e[j + step];
        e[j] = u + v;
        e[j + step] = u - v;
      }
  const i128 denom = i128{1} << (n + m);
  std::vector<std::uint64_t> counts(comps);
  for (std::size_t t = 0; t < comps; ++t) {
    if (e[t] % denom != 0 || e[t] < 0) throw std::logic_error("sigma multiplicities: inexact character sum");
    counts[t] = static_cast<std::uint64_t>(e[t] / denom);
  }
  return multiplicities_of(counts);
}

// ---------------------------------------------------------------- development ranks

std::size_t development_rank(const std::vector<bool>& indicator, unsigned bits) {
  const std::size_t size = std::size_t{1} << bits;
  if (indicator.size() != size) throw DimensionMismatch("indicator length must be 2^bits");
  const std::size_t words = (size + 63) / 64;
  std::vector<std::uint64_t> support;
  for (std::uint64_t s = 0; s < size; ++s)
    if (indicator[s]) support.push_back(s);

  // Pivot rows keyed by their lowest set column; a stored row has no bits
  // below its pivot, so reduction only ever moves upward.
  std::vector<std::vector<std::uint64_t>> pivot_row(size);
  std::size_t rank = 0;
  std::vector<std::uint64_t> row(words);
  for (std::uint64_t u = 0; u < size; ++u) {
    std::fill(row.begin(), row.end(), 0);
    for (auto s : support) {
      const std::uint64_t c = u ^ s;
      row[c >> 6] |= std::uint64_t{1} << (c & 63);
    }
    std::size_t w = 0;
    for (;;) {
      while (w < words && !row[w]) ++w;
      if (w == words) break;
      const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
      auto& p = pivot_row[c];
      if (p.empty()) {
        p = row;
        ++rank;
        break;
      }
      for (std::size_t i = w; i < words; ++i) row[i] ^= p[i];
    }
    if (rank == size) break;
  }
  return rank;
}

namespace {

void check_development(const Vbf& f, bool force) {
  if (f.n() != f.m()) throw DimensionMismatch("development ranks need n = m");
  if (f.n() > kDevelopmentRankMaxN && !force)
    throw SizeCap("development rank for n = " + std::to_string(f.n()) + " exceeds the size cap");
}

}  // namespace

std::size_t gamma_rank(const Vbf& f, bool force) {
  check_development(f, force);
  const unsigned n = f.n();
  std::vector<bool> s(std::size_t{1} << (2 * n), false);
  for (std::uint32_t x = 0; x < f.domain_size(); ++x) s[x | (std::size_t{f(x)} << n)] = true;
  return development_rank(s, 2 * n);
}

std::size_t delta_rank(const Vbf& f, bool force) {
  check_development(f, force);
  const unsigned n = f.n();
  const auto t = ddt(f);
  std::vector<bool> s(std::size_t{1} << (2 * n), false);
  for (std::uint32_t a = 1; a < f.domain_size(); ++a)
    for (std::uint32_t b = 0; b < f.domain_size(); ++b)
      if (t.at(a, b)) s[a | (std::size_t{b} << n)] = true;
  return development_rank(s, 2 * n);
}

unsigned degree_invariant(const Vbf& f) { return degree(f); }

}  // namespace eaforge
