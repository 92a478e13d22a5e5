#include "stacky/integer_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "stacky/error.hpp"

namespace stacky {

SparseVector to_sparse(std::span<const Integer> dense) {
  SparseVector out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!dense[i].is_zero()) out.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return out;
}

IntVector to_dense(const SparseVector& v, std::size_t dim) {
  IntVector out(dim);
  for (const auto& e : v) out.at(e.index) = e.value;
  return out;
}

SparseVector combine(const Integer& x, const SparseVector& a, const Integer& y,
                     const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      if (!x.is_zero()) out.push_back({a[i].index, x * a[i].value});
      ++i;
    } else if (i == a.size() || b[j].index < a[i].index) {
      if (!y.is_zero()) out.push_back({b[j].index, y * b[j].value});
      ++j;
    } else {
      Integer v = x * a[i].value;
      v += y * b[j].value;
      if (!v.is_zero()) out.push_back({a[i].index, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

IntegerMatrix IntegerMatrix::from_rows(
    std::initializer_list<std::initializer_list<Integer>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Integer> flat;
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::Validation, "ragged matrix literal");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_dense(r, c, flat);
}

IntegerMatrix IntegerMatrix::from_dense(std::size_t rows, std::size_t cols,
                                        const std::vector<Integer>& row_major) {
  if (row_major.size() != rows * cols) fail(ErrorCode::Validation, "dense size mismatch");
  IntegerMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      const Integer& v = row_major[i * cols + j];
      if (!v.is_zero()) m.columns_[j].push_back({static_cast<std::uint32_t>(i), v});
    }
  }
  return m;
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].push_back({static_cast<std::uint32_t>(i), 1});
  return m;
}

IntegerMatrix IntegerMatrix::diagonal(std::size_t rows, std::size_t cols,
                                      const std::vector<Integer>& diag) {
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) {
    if (!diag[i].is_zero()) m.columns_[i].push_back({static_cast<std::uint32_t>(i), diag[i]});
  }
  return m;
}

IntegerMatrix IntegerMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                           std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  IntegerMatrix m(rows, cols);
  for (std::size_t k = 0; k < triplets.size();) {
    const auto row = triplets[k].row;
    const auto col = triplets[k].col;
    if (row >= rows || col >= cols) fail(ErrorCode::Validation, "triplet out of bounds");
    Integer sum;
    for (; k < triplets.size() && triplets[k].row == row && triplets[k].col == col; ++k) {
      sum += triplets[k].value;
    }
    if (!sum.is_zero()) m.columns_[col].push_back({row, std::move(sum)});
  }
  return m;
}

std::size_t IntegerMatrix::nonzeros() const noexcept {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

Integer IntegerMatrix::at(std::size_t row, std::size_t col) const {
  const auto& c = columns_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row,
                             [](const SparseEntry& e, std::size_t r) { return e.index < r; });
  if (it != c.end() && it->index == row) return it->value;
  return Integer(0);
}

void IntegerMatrix::set(std::size_t row, std::size_t col, const Integer& value) {
  if (row >= rows_) fail(ErrorCode::Validation, "row index out of bounds");
  auto& c = columns_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row,
                             [](const SparseEntry& e, std::size_t r) { return e.index < r; });
  bool present = it != c.end() && it->index == row;
  if (value.is_zero()) {
    if (present) c.erase(it);
  } else if (present) {
    it->value = value;
  } else {
    c.insert(it, {static_cast<std::uint32_t>(row), value});
  }
}

void IntegerMatrix::check_column(const SparseVector& v) const {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].index >= rows_ || v[k].value.is_zero() || (k > 0 && v[k - 1].index >= v[k].index)) {
      fail(ErrorCode::Validation, "malformed sparse column");
    }
  }
}

void IntegerMatrix::set_column(std::size_t col, SparseVector v) {
  check_column(v);
  columns_.at(col) = std::move(v);
}

void IntegerMatrix::append_column(SparseVector v) {
  check_column(v);
  columns_.push_back(std::move(v));
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols(), rows_);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const auto& e : columns_[j]) {
      t.columns_[e.index].push_back({static_cast<std::uint32_t>(j), e.value});
    }
  }
  return t;
}

IntVector IntegerMatrix::apply(std::span<const Integer> x) const {
  if (x.size() != cols()) fail(ErrorCode::Validation, "dimension mismatch in matrix-vector product");
  IntVector y(rows_);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (x[j].is_zero()) continue;
    for (const auto& e : columns_[j]) y[e.index] += e.value * x[j];
  }
  return y;
}

bool IntegerMatrix::is_zero() const noexcept {
  return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) { return c.empty(); });
}

bool IntegerMatrix::is_diagonal() const noexcept {
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const auto& e : columns_[j]) {
      if (e.index != j) return false;
    }
  }
  return true;
}

IntegerMatrix IntegerMatrix::hcat(const IntegerMatrix& other) const {
  if (other.rows_ != rows_) fail(ErrorCode::Validation, "row mismatch in hcat");
  IntegerMatrix m = *this;
  m.columns_.insert(m.columns_.end(), other.columns_.begin(), other.columns_.end());
  return m;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::Validation, "dimension mismatch in matrix product");
  IntegerMatrix out(a.rows(), b.cols());
  std::vector<Integer> acc(a.rows());
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(a.rows(), 0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    touched.clear();
    for (const auto& eb : b.columns_[j]) {
      for (const auto& ea : a.columns_[eb.index]) {
        if (!mark[ea.index]) {
          mark[ea.index] = 1;
          touched.push_back(ea.index);
        }
        acc[ea.index] += ea.value * eb.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto r : touched) {
      if (!acc[r].is_zero()) out.columns_[j].push_back({r, acc[r]});
      acc[r] = Integer(0);
      mark[r] = 0;
    }
  }
  return out;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << '[';
    for (std::size_t j = 0; j < cols(); ++j) os << (j ? " " : "") << at(i, j);
    os << "]\n";
  }
  return os.str();
}

} // namespace stacky
