#include "eaforge/vbf.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>

namespace eaforge {

namespace {

std::uint32_t output_mask(unsigned m) {
  return m >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1;
}

void check_dims(unsigned n, unsigned m, std::size_t size) {
  if (n > kMaxInputBits) throw DimensionMismatch("input dimension too large");
  if (m > kMaxOutputBits) throw DimensionMismatch("output dimension too large");
  if (size != (std::size_t{1} << n))
    throw DimensionMismatch("table length " + std::to_string(size) + " != 2^" + std::to_string(n));
}

// Binary Moebius transform, coordinate-wise on packed words (an involution).
void moebius(std::vector<std::uint32_t>& v) {
  for (std::size_t step = 1; step < v.size(); step <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * step)
      for (std::size_t j = i; j < i + step; ++j) v[j + step] ^= v[j];
}

std::uint64_t parity_matvec(const std::vector<std::uint64_t>& columns, std::uint64_t x) {
  std::uint64_t y = 0;
  while (x) {
    y ^= columns[static_cast<std::size_t>(std::countr_zero(x))];
    x &= x - 1;
  }
  return y;
}

std::vector<std::uint64_t> column_words(const BitMatrix& m) {
  std::vector<std::uint64_t> cols(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) cols[c] = m.column_word(c);
  return cols;
}

}  // namespace

Vbf::Vbf(unsigned n, unsigned m, std::vector<std::uint32_t> table)
    : n_(n), m_(m), table_(std::move(table)) {
  check_dims(n, m, table_.size());
  const std::uint32_t mask = output_mask(m);
  for (auto y : table_)
    if (y & ~mask) throw DimensionMismatch("table entry exceeds " + std::to_string(m) + " bits");
}

Anf::Anf(unsigned n, unsigned m, std::vector<std::uint32_t> coefficients)
    : n_(n), m_(m), coefficients_(std::move(coefficients)) {
  check_dims(n, m, coefficients_.size());
}

Anf anf(const Vbf& f) {
  auto coeffs = f.table();
  moebius(coeffs);
  return Anf(f.n(), f.m(), std::move(coeffs));
}

Vbf anf_inverse(const Anf& a) {
  auto table = a.coefficients();
  moebius(table);
  return Vbf(a.n(), a.m(), std::move(table));
}

unsigned degree(const Vbf& f) {
  const auto a = anf(f);
  unsigned d = 0;
  for (std::uint32_t u = 0; u < a.coefficients().size(); ++u)
    if (a.coefficients()[u]) d = std::max(d, static_cast<unsigned>(std::popcount(u)));
  return d;
}

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(std::map<std::int64_t, std::uint64_t> counts) {
  for (auto [v, c] : counts)
    if (c) entries_.emplace_back(v, c);
}

std::uint64_t Spectrum::multiplicity(std::int64_t value) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                             [](const auto& e, std::int64_t v) { return e.first < v; });
  return it != entries_.end() && it->first == value ? it->second : 0;
}

std::uint64_t Spectrum::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

std::int64_t Spectrum::max_value() const { return entries_.empty() ? 0 : entries_.back().first; }

std::string Spectrum::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(entries_[i].first);
    s += ':';
    s += std::to_string(entries_[i].second);
  }
  s += '}';
  return s;
}

Spectrum Spectrum::parse(std::string_view text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw std::invalid_argument("spectrum must be enclosed in braces");
  text = text.substr(1, text.size() - 2);
  std::map<std::int64_t, std::uint64_t> counts;
  std::int64_t last = 0;
  bool first = true;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("spectrum item lacks ':'");
    std::int64_t v = 0;
    std::uint64_t c = 0;
    auto r1 = std::from_chars(item.data(), item.data() + colon, v);
    auto r2 = std::from_chars(item.data() + colon + 1, item.data() + item.size(), c);
    if (r1.ec != std::errc() || r1.ptr != item.data() + colon || r2.ec != std::errc() ||
        r2.ptr != item.data() + item.size() || c == 0)
      throw std::invalid_argument("malformed spectrum item '" + std::string(item) + "'");
    if (!first && v <= last) throw std::invalid_argument("spectrum values must be strictly increasing");
    counts[v] = c;
    last = v;
    first = false;
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
    if (text.empty()) throw std::invalid_argument("trailing comma in spectrum");
  }
  return Spectrum(std::move(counts));
}

// ---------------------------------------------------------------- differential

DdtTable ddt(const Vbf& f) {
  const std::size_t rows = f.domain_size();
  const std::size_t cols = std::size_t{1} << f.m();
  DdtTable t{f.n(), f.m(), std::vector<std::uint32_t>(rows * cols, 0)};
  const auto& tab = f.table();
  for (std::uint32_t a = 0; a < rows; ++a) {
    std::uint32_t* row = t.counts.data() + a * cols;
    for (std::uint32_t x = 0; x < rows; ++x) ++row[tab[x] ^ tab[x ^ a]];
  }
  return t;
}

Spectrum differential_spectrum(const Vbf& f) {
  const auto t = ddt(f);
  std::map<std::int64_t, std::uint64_t> counts;
  const std::size_t cols = std::size_t{1} << f.m();
  for (std::size_t i = cols; i < t.counts.size(); ++i) ++counts[t.counts[i]];
  return Spectrum(std::move(counts));
}

std::uint32_t differential_uniformity(const Vbf& f) {
  const std::size_t n = f.domain_size();
  const std::size_t cols = std::size_t{1} << f.m();
  std::vector<std::uint32_t> row(cols);
  const auto& tab = f.table();
  std::uint32_t best = 0;
  for (std::uint32_t a = 1; a < n; ++a) {
    std::fill(row.begin(), row.end(), 0);
    for (std::uint32_t x = 0; x < n; ++x) best = std::max(best, ++row[tab[x] ^ tab[x ^ a]]);
  }
  return best;
}

// ---------------------------------------------------------------- Walsh

void walsh_hadamard(std::span<std::int64_t> v) {
  for (std::size_t step = 1; step < v.size(); step <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * step)
      for (std::size_t j = i; j < i + step; ++j) {
        const std::int64_t u = v[j];
        const std::int64_t w = v[j + step];
        v[j] = u + w;
        v[j + step] = u - w;
      }
}

std::vector<std::int64_t> component_walsh(const Vbf& f, std::uint32_t b) {
  std::vector<std::int64_t> v(f.domain_size());
  const auto& tab = f.table();
  for (std::uint32_t x = 0; x < v.size(); ++x) v[x] = (std::popcount(tab[x] & b) & 1) ? -1 : 1;
  walsh_hadamard(v);
  return v;
}

WalshTable walsh_table(const Vbf& f) {
  const std::size_t size = f.domain_size();
  const std::size_t comps = std::size_t{1} << f.m();
  WalshTable t{f.n(), f.m(), std::vector<std::int64_t>(size * comps)};
  for (std::uint32_t b = 0; b < comps; ++b) {
    auto row = component_walsh(f, b);
    std::copy(row.begin(), row.end(), t.values.begin() + static_cast<std::ptrdiff_t>(b * size));
  }
  return t;
}

Spectrum extended_walsh_spectrum(const Vbf& f) {
  std::map<std::int64_t, std::uint64_t> counts;
  const std::size_t comps = std::size_t{1} << f.m();
  for (std::uint32_t b = 1; b < comps; ++b)
    for (auto w : component_walsh(f, b)) ++counts[std::llabs(w)];
  return Spectrum(std::move(counts));
}

std::int64_t linearity(const Vbf& f) { return extended_walsh_spectrum(f).max_value(); }

bool is_apn(const Vbf& f) {
  if (f.m() < f.n()) throw DimensionMismatch("APN test requires m >= n");
  return differential_uniformity(f) == 2;
}

bool is_permutation(const Vbf& f) {
  if (f.n() != f.m()) return false;
  std::vector<bool> seen(f.domain_size(), false);
  for (auto y : f.table()) {
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

// ---------------------------------------------------------------- EA moves

EaTuple EaTuple::identity(unsigned n, unsigned m) {
  return EaTuple{BitMatrix::identity(m), BitMatrix::identity(n), BitMatrix(m, n), BitVector(m)};
}

Vbf compose_ea(const Vbf& f, const EaTuple& t) {
  const unsigned n = f.n(), m = f.m();
  if (t.a0.rows() != m || t.a0.cols() != m || t.b0.rows() != n || t.b0.cols() != n ||
      t.c0.rows() != m || t.c0.cols() != n || t.a.size() != m)
    throw DimensionMismatch("EA tuple dimensions do not match the function");
  const auto a_cols = column_words(t.a0);
  const auto b_cols = column_words(t.b0);
  const auto c_cols = column_words(t.c0);
  const std::uint64_t a = t.a.to_uint();
  std::vector<std::uint32_t> out(f.domain_size());
  for (std::uint32_t x = 0; x < out.size(); ++x) {
    const auto bx = static_cast<std::uint32_t>(parity_matvec(b_cols, x));
    out[x] = static_cast<std::uint32_t>(parity_matvec(a_cols, f(bx)) ^ parity_matvec(c_cols, x) ^ a);
  }
  return Vbf(n, m, std::move(out));
}

EaTuple inverse_ea(const EaTuple& t) {
  auto a_inv = invert(t.a0);
  auto b_inv = invert(t.b0);
  if (!a_inv || !b_inv) throw std::invalid_argument("inverse_ea: singular linear part");
  BitMatrix c = *a_inv * t.c0 * *b_inv;
  BitVector a = a_inv->apply(t.a);
  return EaTuple{*a_inv, *b_inv, std::move(c), std::move(a)};
}

// ---------------------------------------------------------------- sampling

Vbf random_quadratic(unsigned n, unsigned m, std::mt19937_64& rng) {
  const std::uint32_t mask = output_mask(m);
  std::vector<std::uint32_t> coeffs(std::size_t{1} << n, 0);
  for (std::uint32_t u = 0; u < coeffs.size(); ++u)
    if (std::popcount(u) <= 2) coeffs[u] = static_cast<std::uint32_t>(rng()) & mask;
  return anf_inverse(Anf(n, m, std::move(coeffs)));
}

Vbf random_quadratic(unsigned n, unsigned m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_quadratic(n, m, rng);
}

BitMatrix random_nonsingular(unsigned n, std::mt19937_64& rng) {
  const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> rows(n);
  for (;;) {
    for (auto& r : rows) r = rng() & mask;
    auto work = rows;
    if (rank_of_words(work) == n) return BitMatrix::from_row_words(rows, n);
  }
}

EaTuple random_ea_tuple(unsigned n, unsigned m, std::mt19937_64& rng) {
  EaTuple t;
  t.a0 = random_nonsingular(m, rng);
  t.b0 = random_nonsingular(n, rng);
  std::vector<std::uint64_t> crows(m);
  const std::uint64_t nmask = (std::uint64_t{1} << n) - 1;
  for (auto& r : crows) r = rng() & nmask;
  t.c0 = BitMatrix::from_row_words(crows, n);
  t.a = BitVector::from_uint(rng(), m);
  return t;
}

EaTuple random_ea_tuple(unsigned n, unsigned m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_ea_tuple(n, m, rng);
}

}  // namespace eaforge
