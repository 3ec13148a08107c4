#pragma once

// Dense linear algebra over F2 on bit-packed rows.
//
// Coordinate encoding shared by the whole library: the vector
// (x_1, ..., x_n) is the integer sum x_i * 2^(i-1), i.e. bit i-1 of word 0
// holds x_i. A matrix row stores its entries the same way, so the product
// M * x has bit r equal to parity(row_r & x).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eaforge {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len);

  static BitVector from_uint(std::uint64_t value, std::size_t len);
  static BitVector unit(std::size_t index, std::size_t len);

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  // Only valid when size() <= 64.
  std::uint64_t to_uint() const { return words_.empty() ? 0 : words_[0]; }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool is_zero() const;
  std::size_t popcount() const;
  // Index of the lowest set bit, or size() when zero.
  std::size_t lowest_set() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::string to_string() const;  // "0110..." with x_1 first

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

// Inner product over F2.
bool dot(const BitVector& a, const BitVector& b);

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  // Rows given as integers; requires cols <= 64.
  static BitMatrix from_row_words(std::span<const std::uint64_t> rows, std::size_t cols);
  // Columns given as integers; requires rows <= 64.
  static BitMatrix from_column_words(std::span<const std::uint64_t> columns, std::size_t rows);
  static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);
  static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool value = true);
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
  }

  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<std::uint64_t> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
  // Only valid when cols() <= 64.
  std::uint64_t row_word(std::size_t r) const { return stride_ ? data_[r * stride_] : 0; }
  // Only valid when rows() <= 64.
  std::uint64_t column_word(std::size_t c) const;

  BitVector row(std::size_t r) const;
  BitVector column(std::size_t c) const;
  void set_row(std::size_t r, const BitVector& v);
  void xor_row_into(std::size_t src, std::size_t dst);
  void swap_rows(std::size_t a, std::size_t b);

  BitMatrix transpose() const;
  BitVector apply(const BitVector& x) const;
  // Matrix-vector product for cols() <= 64 and rows() <= 64.
  std::uint64_t apply(std::uint64_t x) const;

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b);
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

struct SolutionSpace {
  BitVector particular;
  std::vector<BitVector> kernel_basis;  // RREF
  std::size_t dim() const { return kernel_basis.size(); }
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(std::size_t dim, std::size_t cap);
};

class DependentInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultEnumerationCap = 20;

// Reduces `m` in place to reduced row echelon form considering only the
// first `col_limit` columns. Returns the pivot column of each leading row;
// rows past the returned size are zero on those columns.
std::vector<std::size_t> reduce_rows(BitMatrix& m, std::size_t col_limit);

std::size_t rank(const BitMatrix& m);
// Rank of a matrix whose rows fit in one word each; rows are clobbered.
std::size_t rank_of_words(std::span<std::uint64_t> rows);

std::vector<BitVector> left_kernel(const BitMatrix& m);
std::vector<BitVector> right_kernel(const BitMatrix& m);

// Canonical RREF basis of span(vectors): pivots are lowest set coordinates,
// pivot coordinates are zero in every other basis vector, ordered by pivot.
std::vector<BitVector> rref_basis(std::span<const BitVector> vectors);
std::vector<std::uint64_t> rref_basis(std::span<const std::uint64_t> vectors);

// Returns std::nullopt when the system is inconsistent.
std::optional<SolutionSpace> solve_affine(const BitMatrix& m, const BitVector& rhs);

// Returns std::nullopt when `m` is singular. Throws on non-square input.
std::optional<BitMatrix> invert(const BitMatrix& m);

// Visits every element of the affine space (Gray-code order) until the
// visitor returns false. Throws EnumerationCapExceeded when dim > cap_dim.
void for_each_solution(const SolutionSpace& space,
                       const std::function<bool(const BitVector&)>& visit,
                       std::size_t cap_dim = kDefaultEnumerationCap);
std::vector<BitVector> enumerate(const SolutionSpace& space,
                                 std::size_t cap_dim = kDefaultEnumerationCap);

// Square nonsingular matrix whose first columns are `vectors`, completed
// greedily with unit vectors in ascending order.
BitMatrix complete_to_basis(std::span<const BitVector> vectors, std::size_t ambient_dim);

}  // namespace eaforge
