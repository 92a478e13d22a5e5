#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stacky/integer.hpp"
#include "stacky/integer_matrix.hpp"

namespace stacky {

/// Resource budget shared by every sized computation.
struct Limits {
  /// Maximum number of stored matrix entries (and maximum ambient cochain
  /// dimension) any single computation may reach.
  std::size_t max_entries = 5'000'000;
};

/// An elementary unimodular operation on two coordinates, or a transvection
/// x_k -= f_k * x_pivot over a sparse set of k.
struct ElementaryOp {
  enum class Kind : std::uint8_t { Combine, Transvection, AddMultiple, Negate };
  Kind kind;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  // Combine: (x_a, x_b) <- (s x_a + t x_b, u x_a + v x_b). AddMultiple uses s.
  Integer s{}, t{}, u{}, v{};
  SparseVector factors{}; // Transvection only
};

/// Left (row) side of a decomposition: the operator U as a replayable log.
class RowTransform {
public:
  explicit RowTransform(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ops_.size(); }
  void push(ElementaryOp op) { ops_.push_back(std::move(op)); }

  void apply(IntVector& x) const;
  void apply_inverse(IntVector& x) const;

private:
  std::size_t dim_;
  std::vector<ElementaryOp> ops_;
};

/// Right (column) side: V = C_1 C_2 ... C_t, stored as the sequence of C_i.
class ColumnTransform {
public:
  explicit ColumnTransform(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  void push(ElementaryOp op) { ops_.push_back(std::move(op)); }

  /// x <- V x.
  void apply(IntVector& x) const;

private:
  std::size_t dim_;
  std::vector<ElementaryOp> ops_;
};

struct SmithOptions {
  bool track_rows = true;
  bool track_columns = false;
  Limits limits;
};

/// U * M * V = S with S diagonal, d_1 | d_2 | ... | d_rank, all positive.
///
/// U and V are kept as operation logs; u_matrix()/v_matrix() materialize
/// them for small inputs.
class SmithDecomposition {
public:
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return diagonal_.size(); }
  const std::vector<Integer>& diagonal() const noexcept { return diagonal_; }
  bool tracks_rows() const noexcept { return tracks_rows_; }
  bool tracks_columns() const noexcept { return tracks_columns_; }

  /// U y.
  IntVector apply_u(const IntVector& y) const;
  /// U^{-1} z.
  IntVector apply_u_inverse(const IntVector& z) const;
  /// V e_k.
  IntVector v_column(std::size_t k) const;

  IntegerMatrix s_matrix() const;
  IntegerMatrix u_matrix() const;
  IntegerMatrix v_matrix() const;

private:
  friend SmithDecomposition smith_decompose(const IntegerMatrix&, const SmithOptions&);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> diagonal_;
  bool tracks_rows_ = false;
  bool tracks_columns_ = false;
  RowTransform row_ops_;
  ColumnTransform col_ops_;
  std::vector<std::uint32_t> row_perm_; // final position -> working row
  std::vector<std::uint32_t> col_perm_; // final position -> working column
};

/// Sparse fraction-free Smith elimination. Pivots prefer unit entries with
/// the smallest Markowitz cost; otherwise the entry of least magnitude.
/// Throws Error(ResourceCap) once stored entries exceed limits.max_entries.
SmithDecomposition smith_decompose(const IntegerMatrix& m, const SmithOptions& options = {});

struct SmithResult {
  IntegerMatrix s, u, v;
};

/// Explicit (S, U, V) with S = U*M*V.
SmithResult smith_normal_form(const IntegerMatrix& m, const Limits& limits = {});

/// Rank over Q.
std::size_t integer_rank(const IntegerMatrix& m, const Limits& limits = {});

} // namespace stacky
