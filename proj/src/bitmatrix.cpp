#include "eaforge/bitmatrix.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace eaforge {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

std::uint64_t tail_mask(std::size_t bits) {
  const std::size_t r = bits & 63;
  return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

BitVector BitVector::from_uint(std::uint64_t value, std::size_t len) {
  BitVector v(len);
  if (len == 0) return v;
  if (len < 64) value &= (std::uint64_t{1} << len) - 1;
  v.words_[0] = value;
  return v;
}

BitVector BitVector::unit(std::size_t index, std::size_t len) {
  BitVector v(len);
  v.set(index);
  return v;
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value)
    words_[i >> 6] |= bit;
  else
    words_[i >> 6] &= ~bit;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::popcount() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitVector::lowest_set() const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
  return len_;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.len_ != len_) throw std::invalid_argument("BitVector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

bool dot(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) acc ^= a.words()[i] & b.words()[i];
  return std::popcount(acc) & 1;
}

// ---------------------------------------------------------------- BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_row_words(std::span<const std::uint64_t> rows, std::size_t cols) {
  if (cols > 64) throw std::invalid_argument("from_row_words: cols > 64");
  BitMatrix m(rows.size(), cols);
  const std::uint64_t mask = cols == 0 ? 0 : tail_mask(cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (cols) m.data_[r] = rows[r] & mask;
  return m;
}

BitMatrix BitMatrix::from_column_words(std::span<const std::uint64_t> columns, std::size_t rows) {
  if (rows > 64) throw std::invalid_argument("from_column_words: rows > 64");
  BitMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r)
      if ((columns[c] >> r) & 1u) m.set(r, c);
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols) {
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows) {
  BitMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("from_columns: length mismatch");
    for (std::size_t r = 0; r < rows; ++r)
      if (columns[c].get(r)) m.set(r, c);
  }
  return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (c & 63);
  auto& w = data_[r * stride_ + (c >> 6)];
  if (value)
    w |= bit;
  else
    w &= ~bit;
}

std::uint64_t BitMatrix::column_word(std::size_t c) const {
  std::uint64_t w = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    if (get(r, c)) w |= std::uint64_t{1} << r;
  return w;
}

BitVector BitMatrix::row(std::size_t r) const {
  BitVector v(cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, v.words().begin());
  return v;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    if (get(r, c)) v.set(r);
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
  std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
  const std::uint64_t* s = data_.data() + src * stride_;
  std::uint64_t* d = data_.data() + dst * stride_;
  for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::uint64_t* row = data_.data() + r * stride_;
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        t.set(c, r);
      }
    }
  }
  return t;
}

BitVector BitMatrix::apply(const BitVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  BitVector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    const std::uint64_t* row = data_.data() + r * stride_;
    for (std::size_t w = 0; w < stride_; ++w) acc ^= row[w] & x.words()[w];
    if (std::popcount(acc) & 1) y.set(r);
  }
  return y;
}

std::uint64_t BitMatrix::apply(std::uint64_t x) const {
  std::uint64_t y = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    y |= static_cast<std::uint64_t>(std::popcount(data_[r * stride_] & x) & 1) << r;
  return y;
}

bool BitMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  BitMatrix c(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    std::uint64_t* out = c.data_.data() + r * c.stride_;
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (!a.get(r, k)) continue;
      const std::uint64_t* in = b.data_.data() + k * b.stride_;
      for (std::size_t w = 0; w < c.stride_; ++w) out[w] ^= in[w];
    }
  }
  return c;
}

BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix sum: dimension mismatch");
  BitMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] ^= b.data_[i];
  return c;
}

// ---------------------------------------------------------------- algorithms

EnumerationCapExceeded::EnumerationCapExceeded(std::size_t dim, std::size_t cap)
    : std::runtime_error("solution space of dimension " + std::to_string(dim) +
                         " exceeds enumeration cap " + std::to_string(cap)) {}

std::vector<std::size_t> reduce_rows(BitMatrix& m, std::size_t col_limit) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.rows();
  const std::size_t stride = m.words_per_row();
  std::size_t next = 0;
  for (std::size_t c = 0; c < col_limit && next < rows; ++c) {
    const std::size_t w = c >> 6;
    const std::uint64_t bit = std::uint64_t{1} << (c & 63);
    std::size_t p = next;
    while (p < rows && !(m.row_words(p)[w] & bit)) ++p;
    if (p == rows) continue;
    m.swap_rows(p, next);
    const std::uint64_t* prow = m.row_words(next).data();
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == next) continue;
      std::uint64_t* row = m.row_words(r).data();
      if (row[w] & bit)
        for (std::size_t i = w; i < stride; ++i) row[i] ^= prow[i];
    }
    pivots.push_back(c);
    ++next;
  }
  return pivots;
}

std::size_t rank(const BitMatrix& m) {
  // Forward elimination only; no back substitution needed for the rank.
  BitMatrix work = m;
  const std::size_t rows = work.rows();
  const std::size_t stride = work.words_per_row();
  std::size_t r = 0;
  for (std::size_t c = 0; c < work.cols() && r < rows; ++c) {
    const std::size_t w = c >> 6;
    const std::uint64_t bit = std::uint64_t{1} << (c & 63);
    std::size_t p = r;
    while (p < rows && !(work.row_words(p)[w] & bit)) ++p;
    if (p == rows) continue;
    work.swap_rows(p, r);
    const std::uint64_t* prow = work.row_words(r).data();
    for (std::size_t q = r + 1; q < rows; ++q) {
      std::uint64_t* row = work.row_words(q).data();
      if (row[w] & bit)
        for (std::size_t i = w; i < stride; ++i) row[i] ^= prow[i];
    }
    ++r;
  }
  return r;
}

std::size_t rank_of_words(std::span<std::uint64_t> rows) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::uint64_t v = rows[i];
    if (!v) continue;
    const std::uint64_t low = v & (~v + 1);
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= v;
    ++r;
  }
  return r;
}

std::vector<BitVector> right_kernel(const BitMatrix& m) {
  BitMatrix work = m;
  const auto pivots = reduce_rows(work, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector v(m.cols());
    v.set(f);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (work.get(i, f)) v.set(pivots[i]);
    basis.push_back(std::move(v));
  }
  return rref_basis(basis);
}

std::vector<BitVector> left_kernel(const BitMatrix& m) { return right_kernel(m.transpose()); }

std::vector<BitVector> rref_basis(std::span<const BitVector> vectors) {
  if (vectors.empty()) return {};
  BitMatrix work = BitMatrix::from_rows(vectors, vectors.front().size());
  const auto pivots = reduce_rows(work, work.cols());
  std::vector<BitVector> out;
  out.reserve(pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i) out.push_back(work.row(i));
  return out;
}

std::vector<std::uint64_t> rref_basis(std::span<const std::uint64_t> vectors) {
  std::vector<std::uint64_t> basis;
  for (std::uint64_t v : vectors) {
    for (std::uint64_t b : basis)
      if (v & (b & (~b + 1))) v ^= b;
    if (!v) continue;
    const std::uint64_t low = v & (~v + 1);
    for (auto& b : basis)
      if (b & low) b ^= v;
    basis.push_back(v);
  }
  std::sort(basis.begin(), basis.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::countr_zero(a) < std::countr_zero(b);
  });
  return basis;
}

std::optional<SolutionSpace> solve_affine(const BitMatrix& m, const BitVector& rhs) {
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve_affine: rhs length mismatch");
  const std::size_t n = m.cols();
  BitMatrix aug(m.rows(), n + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto dst = aug.row_words(r);
    auto src = m.row_words(r);
    std::copy(src.begin(), src.end(), dst.begin());
    if (rhs.get(r)) aug.set(r, n);
  }
  const auto pivots = reduce_rows(aug, n);
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r)
    if (aug.get(r, n)) return std::nullopt;

  SolutionSpace space;
  space.particular = BitVector(n);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    is_pivot[pivots[i]] = true;
    if (aug.get(i, n)) space.particular.set(pivots[i]);
  }
  // Free columns in ascending order give a kernel basis that is already in
  // RREF under the lowest-coordinate pivot convention only after reduction.
  std::vector<BitVector> kernel;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    BitVector v(n);
    v.set(f);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (aug.get(i, f)) v.set(pivots[i]);
    kernel.push_back(std::move(v));
  }
  space.kernel_basis = rref_basis(kernel);
  return space;
}

std::optional<BitMatrix> invert(const BitMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("invert: matrix not square");
  const std::size_t n = m.rows();
  BitMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c)
      if (m.get(r, c)) aug.set(r, c);
    aug.set(r, n + r);
  }
  const auto pivots = reduce_rows(aug, n);
  if (pivots.size() < n) return std::nullopt;
  BitMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (aug.get(r, n + c)) inv.set(r, c);
  return inv;
}

void for_each_solution(const SolutionSpace& space,
                       const std::function<bool(const BitVector&)>& visit, std::size_t cap_dim) {
  const std::size_t dim = space.dim();
  if (dim > cap_dim) throw EnumerationCapExceeded(dim, cap_dim);
  BitVector current = space.particular;
  if (!visit(current)) return;
  const std::uint64_t total = std::uint64_t{1} << dim;
  for (std::uint64_t i = 1; i < total; ++i) {
    current ^= space.kernel_basis[static_cast<std::size_t>(std::countr_zero(i))];
    if (!visit(current)) return;
  }
}

std::vector<BitVector> enumerate(const SolutionSpace& space, std::size_t cap_dim) {
  std::vector<BitVector> out;
  if (space.dim() <= cap_dim) out.reserve(std::size_t{1} << space.dim());
  for_each_solution(
      space,
      [&](const BitVector& v) {
        out.push_back(v);
        return true;
      },
      cap_dim);
  return out;
}

BitMatrix complete_to_basis(std::span<const BitVector> vectors, std::size_t ambient_dim) {
  std::vector<BitVector> columns(vectors.begin(), vectors.end());
  for (const auto& v : columns)
    if (v.size() != ambient_dim) throw std::invalid_argument("complete_to_basis: length mismatch");
  if (rank(BitMatrix::from_rows(columns, ambient_dim)) != columns.size())
    throw DependentInput("complete_to_basis: input vectors are linearly dependent");

  // Incremental echelon of the accepted vectors for membership tests.
  std::vector<BitVector> echelon;
  auto reduce = [&](BitVector v) {
    for (const auto& b : echelon)
      if (v.get(b.lowest_set())) v ^= b;
    return v;
  };
  for (const auto& v : columns) echelon.push_back(reduce(v));
  for (std::size_t i = 0; i < ambient_dim && columns.size() < ambient_dim; ++i) {
    BitVector u = BitVector::unit(i, ambient_dim);
    BitVector r = reduce(u);
    if (r.is_zero()) continue;
    echelon.push_back(std::move(r));
    columns.push_back(std::move(u));
  }
  return BitMatrix::from_columns(columns, ambient_dim);
}

}  // namespace eaforge
