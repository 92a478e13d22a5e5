#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stacky/integer.hpp"

namespace stacky {

/// One stored entry of a sparse column.
struct SparseEntry {
  std::uint32_t index;
  Integer value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse integer vector: entries sorted by index, all values nonzero.
using SparseVector = std::vector<SparseEntry>;

/// Dense integer vector, used for cochains and coordinates.
using IntVector = std::vector<Integer>;

SparseVector to_sparse(std::span<const Integer> dense);
IntVector to_dense(const SparseVector& v, std::size_t dim);

/// x*a + y*b for sorted sparse vectors, dropping cancellations.
SparseVector combine(const Integer& x, const SparseVector& a, const Integer& y,
                     const SparseVector& b);

/// A sparse integer matrix stored by columns.
///
/// Stored entries are nonzero and in bounds; columns are sorted by row.
class IntegerMatrix {
public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  /// Dense row-major literal, mostly for tests.
  static IntegerMatrix from_rows(std::initializer_list<std::initializer_list<Integer>> rows);
  static IntegerMatrix from_dense(std::size_t rows, std::size_t cols,
                                  const std::vector<Integer>& row_major);
  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix diagonal(std::size_t rows, std::size_t cols,
                                const std::vector<Integer>& diag);

  /// Builds from (row, col, value) triplets; duplicates are summed.
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Integer value;
  };
  static IntegerMatrix from_triplets(std::size_t rows, std::size_t cols,
                                     std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  std::size_t nonzeros() const noexcept;

  Integer at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, const Integer& value);

  const SparseVector& column(std::size_t col) const { return columns_.at(col); }
  void set_column(std::size_t col, SparseVector v);
  void append_column(SparseVector v);

  IntegerMatrix transpose() const;
  IntVector apply(std::span<const Integer> x) const;
  bool is_zero() const noexcept;
  bool is_diagonal() const noexcept;

  /// Horizontal concatenation [this | other].
  IntegerMatrix hcat(const IntegerMatrix& other) const;

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

  std::string to_string() const;

private:
  void check_column(const SparseVector& v) const;

  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

} // namespace stacky
