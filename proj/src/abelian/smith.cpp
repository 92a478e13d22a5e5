#include "stacky/smith.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "stacky/error.hpp"

namespace stacky {

void RowTransform::apply(IntVector& x) const {
  if (x.size() != dim_) fail(ErrorCode::Validation, "row transform dimension mismatch");
  for (const auto& op : ops_) {
    switch (op.kind) {
    case ElementaryOp::Kind::Combine: {
      Integer xa = x[op.a], xb = x[op.b];
      if (xa.is_zero() && xb.is_zero()) break;
      x[op.a] = op.s * xa + op.t * xb;
      x[op.b] = op.u * xa + op.v * xb;
      break;
    }
    case ElementaryOp::Kind::Transvection: {
      if (x[op.a].is_zero()) break;
      const Integer pivot = x[op.a];
      for (const auto& f : op.factors) x[f.index].submul(f.value, pivot);
      break;
    }
    case ElementaryOp::Kind::Negate:
      x[op.a] = -x[op.a];
      break;
    case ElementaryOp::Kind::AddMultiple:
      x[op.a].submul(op.s, x[op.b]);
      break;
    }
  }
}

void RowTransform::apply_inverse(IntVector& x) const {
  if (x.size() != dim_) fail(ErrorCode::Validation, "row transform dimension mismatch");
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const auto& op = *it;
    switch (op.kind) {
    case ElementaryOp::Kind::Combine: {
      Integer xa = x[op.a], xb = x[op.b];
      if (xa.is_zero() && xb.is_zero()) break;
      Integer det = op.s * op.v - op.t * op.u;
      x[op.a] = det * (op.v * xa - op.t * xb);
      x[op.b] = det * (op.s * xb - op.u * xa);
      break;
    }
    case ElementaryOp::Kind::Transvection: {
      if (x[op.a].is_zero()) break;
      const Integer pivot = -x[op.a];
      for (const auto& f : op.factors) x[f.index].submul(f.value, pivot);
      break;
    }
    case ElementaryOp::Kind::Negate:
      x[op.a] = -x[op.a];
      break;
    case ElementaryOp::Kind::AddMultiple:
      x[op.a] += op.s * x[op.b];
      break;
    }
  }
}

void ColumnTransform::apply(IntVector& x) const {
  if (x.size() != dim_) fail(ErrorCode::Validation, "column transform dimension mismatch");
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const auto& op = *it;
    switch (op.kind) {
    case ElementaryOp::Kind::Combine: {
      Integer xa = x[op.a], xb = x[op.b];
      if (xa.is_zero() && xb.is_zero()) break;
      x[op.a] = op.s * xa + op.u * xb;
      x[op.b] = op.t * xa + op.v * xb;
      break;
    }
    case ElementaryOp::Kind::AddMultiple:
      // col_a -= s * col_b
      x[op.b].submul(op.s, x[op.a]);
      break;
    case ElementaryOp::Kind::Negate:
      x[op.a] = -x[op.a];
      break;
    case ElementaryOp::Kind::Transvection:
      fail(ErrorCode::Invariant, "transvection recorded as a column operation");
    }
  }
}

namespace {

struct Pivot {
  std::uint32_t row;
  std::uint32_t col;
  Integer value;
};

class Eliminator {
public:
  Eliminator(const IntegerMatrix& m, const SmithOptions& options, RowTransform* rows,
             ColumnTransform* cols)
      : n_cols_(m.cols()), limit_(options.limits.max_entries),
        row_log_(rows), col_log_(cols), cols_(m.cols()), row_cols_(m.rows()),
        row_count_(m.rows(), 0), col_done_(m.cols(), 0), col_stamp_(m.cols(), 0) {
    for (std::size_t j = 0; j < n_cols_; ++j) {
      cols_[j] = m.column(j);
      for (const auto& e : cols_[j]) {
        row_cols_[e.index].push_back(static_cast<std::uint32_t>(j));
        ++row_count_[e.index];
      }
      nnz_ += cols_[j].size();
    }
    check_budget();
  }

  void run() {
    while (true) {
      if (unit_round()) continue;
      std::uint32_t best_row = 0, best_col = 0;
      bool found = false;
      Integer best_abs;
      std::size_t best_cost = 0;
      for (std::uint32_t c = 0; c < n_cols_; ++c) {
        if (col_done_[c]) continue;
        for (const auto& e : cols_[c]) {
          std::size_t cost = std::size_t(row_count_[e.index] - 1) * (cols_[c].size() - 1);
          Integer av = e.value.abs();
          if (!found || av < best_abs || (av == best_abs && cost < best_cost)) {
            found = true;
            best_abs = std::move(av);
            best_row = e.index;
            best_col = c;
            best_cost = cost;
          }
        }
      }
      if (!found) break;
      eliminate(best_row, best_col);
    }
  }

  std::vector<Pivot> pivots;

private:
  void check_budget() const {
    if (nnz_ > limit_) {
      fail(ErrorCode::ResourceCap, "matrix elimination exceeded the entry budget of " +
                                       std::to_string(limit_) + " stored entries");
    }
  }

  const Integer* find(std::uint32_t c, std::uint32_t r) const {
    const auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const SparseEntry& e, std::uint32_t x) { return e.index < x; });
    return (it != col.end() && it->index == r) ? &it->value : nullptr;
  }

  Integer entry(std::uint32_t c, std::uint32_t r) const {
    const Integer* p = find(c, r);
    return p ? *p : Integer(0);
  }

  void set_entry(std::uint32_t c, std::uint32_t r, Integer value) {
    auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const SparseEntry& e, std::uint32_t x) { return e.index < x; });
    bool present = it != col.end() && it->index == r;
    if (value.is_zero()) {
      if (present) {
        col.erase(it);
        --row_count_[r];
        --nnz_;
      }
    } else if (present) {
      it->value = std::move(value);
    } else {
      col.insert(it, {r, std::move(value)});
      ++row_count_[r];
      row_cols_[r].push_back(c);
      ++nnz_;
      check_budget();
    }
  }

  void replace_column(std::uint32_t c, SparseVector next) {
    const auto& prev = cols_[c];
    std::size_t i = 0, j = 0;
    while (i < prev.size() || j < next.size()) {
      if (j == next.size() || (i < prev.size() && prev[i].index < next[j].index)) {
        --row_count_[prev[i].index];
        ++i;
      } else if (i == prev.size() || next[j].index < prev[i].index) {
        ++row_count_[next[j].index];
        row_cols_[next[j].index].push_back(c);
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    nnz_ = nnz_ + next.size() - prev.size();
    cols_[c] = std::move(next);
    check_budget();
  }

  std::vector<std::uint32_t> unique_columns(std::initializer_list<std::uint32_t> rows) {
    ++stamp_;
    std::vector<std::uint32_t> out;
    for (auto r : rows) {
      for (auto c : row_cols_[r]) {
        if (col_done_[c] || col_stamp_[c] == stamp_) continue;
        col_stamp_[c] = stamp_;
        out.push_back(c);
      }
    }
    return out;
  }

  // Column operations until row i is zero outside column j.
  void clear_row(std::uint32_t i, std::uint32_t j) {
    for (auto c : unique_columns({i})) {
      if (c == j) continue;
      const Integer* ap = find(c, i);
      if (!ap) continue;
      Integer a = *ap;
      Integer p = entry(j, i);
      if (divides(p, a)) {
        Integer q = divexact(a, p);
        replace_column(c, combine(Integer(1), cols_[c], -q, cols_[j]));
        if (col_log_) {
          ElementaryOp op{ElementaryOp::Kind::AddMultiple, c, j};
          op.s = q;
          col_log_->push(std::move(op));
        }
      } else {
        Bezout bz = extended_gcd(p, a);
        Integer x = divexact(a, bz.g), y = divexact(p, bz.g);
        SparseVector nj = combine(bz.s, cols_[j], bz.t, cols_[c]);
        SparseVector nc = combine(-x, cols_[j], y, cols_[c]);
        replace_column(j, std::move(nj));
        replace_column(c, std::move(nc));
        if (col_log_) {
          ElementaryOp op{ElementaryOp::Kind::Combine, j, c};
          op.s = bz.s;
          op.t = bz.t;
          op.u = -x;
          op.v = y;
          col_log_->push(std::move(op));
        }
      }
    }
    row_cols_[i].assign(1, j);
  }

  // Row operations until column j is zero outside row i; false if the pivot
  // had to shrink, in which case row i must be cleared again.
  bool clear_column(std::uint32_t i, std::uint32_t j) {
    Integer p = entry(j, i);
    for (const auto& e : cols_[j]) {
      if (e.index != i && !divides(p, e.value)) {
        combine_rows(i, e.index, p, e.value);
        return false;
      }
    }
    ElementaryOp op{ElementaryOp::Kind::Transvection, i};
    for (const auto& e : cols_[j]) {
      --row_count_[e.index];
      if (e.index == i) continue;
      if (row_log_) op.factors.push_back({e.index, divexact(e.value, p)});
    }
    if (row_log_ && !op.factors.empty()) row_log_->push(std::move(op));
    nnz_ -= cols_[j].size();
    cols_[j].clear();
    cols_[j].shrink_to_fit();
    col_done_[j] = 1;
    row_cols_[i].clear();
    row_cols_[i].shrink_to_fit();
    pivots.push_back({i, j, std::move(p)});
    return true;
  }

  void combine_rows(std::uint32_t i, std::uint32_t k, const Integer& p, const Integer& vk) {
    Bezout bz = extended_gcd(p, vk);
    Integer u = -divexact(vk, bz.g), v = divexact(p, bz.g);
    if (row_log_) {
      ElementaryOp op{ElementaryOp::Kind::Combine, i, k};
      op.s = bz.s;
      op.t = bz.t;
      op.u = u;
      op.v = v;
      row_log_->push(std::move(op));
    }
    for (auto c : unique_columns({i, k})) {
      Integer xi = entry(c, i), xk = entry(c, k);
      if (xi.is_zero() && xk.is_zero()) continue;
      Integer ni = bz.s * xi + bz.t * xk;
      Integer nk = u * xi + v * xk;
      set_entry(c, i, std::move(ni));
      set_entry(c, k, std::move(nk));
    }
  }

  void eliminate(std::uint32_t i, std::uint32_t j) {
    do {
      clear_row(i, j);
    } while (!clear_column(i, j));
  }

  // Unit pivots in minimum-degree order: the shortest live column first,
  // pivoting on its unit entry in the sparsest row. Column sizes change as
  // elimination proceeds, so heap keys are refreshed lazily.
  bool unit_round() {
    using Key = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    for (std::uint32_t c = 0; c < n_cols_; ++c) {
      if (!col_done_[c] && !cols_[c].empty()) heap.push({cols_[c].size(), c});
    }
    bool progress = false;
    while (!heap.empty()) {
      auto [size, c] = heap.top();
      heap.pop();
      if (col_done_[c] || cols_[c].empty()) continue;
      if (cols_[c].size() != size) {
        heap.push({cols_[c].size(), c});
        continue;
      }
      std::uint32_t best_row = 0;
      std::uint32_t best_count = UINT32_MAX;
      for (const auto& e : cols_[c]) {
        if (e.value.is_unit() && row_count_[e.index] < best_count) {
          best_count = row_count_[e.index];
          best_row = e.index;
        }
      }
      if (best_count == UINT32_MAX) continue;
      eliminate(best_row, c);
      progress = true;
    }
    return progress;
  }

  std::size_t n_cols_;
  std::size_t limit_;
  RowTransform* row_log_;
  ColumnTransform* col_log_;
  std::vector<SparseVector> cols_;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::vector<std::uint32_t> row_count_;
  std::vector<char> col_done_;
  std::vector<std::uint32_t> col_stamp_;
  std::uint32_t stamp_ = 0;
  std::size_t nnz_ = 0;
};

} // namespace

SmithDecomposition smith_decompose(const IntegerMatrix& m, const SmithOptions& options) {
  SmithDecomposition d;
  d.rows_ = m.rows();
  d.cols_ = m.cols();
  d.tracks_rows_ = options.track_rows;
  d.tracks_columns_ = options.track_columns;
  d.row_ops_ = RowTransform(m.rows());
  d.col_ops_ = ColumnTransform(m.cols());

  Eliminator elim(m, options, options.track_rows ? &d.row_ops_ : nullptr,
                  options.track_columns ? &d.col_ops_ : nullptr);
  elim.run();
  auto& pivots = elim.pivots;

  for (auto& pv : pivots) {
    if (pv.value.sign() > 0) continue;
    if (options.track_rows) {
      d.row_ops_.push({ElementaryOp::Kind::Negate, pv.row});
    } else if (options.track_columns) {
      d.col_ops_.push({ElementaryOp::Kind::Negate, pv.col});
    }
    pv.value = -pv.value;
  }

  // Units first, then rebalance the rest into a divisibility chain with
  // diag(a, b) -> diag(gcd, lcm) steps.
  std::stable_partition(pivots.begin(), pivots.end(),
                        [](const Pivot& p) { return p.value.is_one(); });
  std::size_t first = 0;
  while (first < pivots.size() && pivots[first].value.is_one()) ++first;
  for (std::size_t a = first; a < pivots.size(); ++a) {
    for (std::size_t b = a + 1; b < pivots.size(); ++b) {
      const Integer da = pivots[a].value, db = pivots[b].value;
      if (divides(da, db)) continue;
      Bezout bz = extended_gcd(da, db);
      Integer ag = divexact(da, bz.g), bg = divexact(db, bz.g);
      if (options.track_rows) {
        ElementaryOp op{ElementaryOp::Kind::Combine, pivots[a].row, pivots[b].row};
        op.s = bz.s;
        op.t = bz.t;
        op.u = -bg;
        op.v = ag;
        d.row_ops_.push(std::move(op));
      }
      if (options.track_columns) {
        ElementaryOp op{ElementaryOp::Kind::Combine, pivots[a].col, pivots[b].col};
        op.s = Integer(1);
        op.t = Integer(1);
        op.u = -(bz.t * bg);
        op.v = bz.s * ag;
        d.col_ops_.push(std::move(op));
      }
      pivots[a].value = bz.g;
      pivots[b].value = ag * db;
    }
  }

  std::vector<char> row_used(m.rows(), 0), col_used(m.cols(), 0);
  for (const auto& pv : pivots) {
    d.diagonal_.push_back(pv.value);
    d.row_perm_.push_back(pv.row);
    d.col_perm_.push_back(pv.col);
    row_used[pv.row] = 1;
    col_used[pv.col] = 1;
  }
  for (std::uint32_t r = 0; r < m.rows(); ++r) {
    if (!row_used[r]) d.row_perm_.push_back(r);
  }
  for (std::uint32_t c = 0; c < m.cols(); ++c) {
    if (!col_used[c]) d.col_perm_.push_back(c);
  }
  return d;
}

IntVector SmithDecomposition::apply_u(const IntVector& y) const {
  if (!tracks_rows_) fail(ErrorCode::Invariant, "row operations were not tracked");
  IntVector z = y;
  row_ops_.apply(z);
  IntVector out(rows_);
  for (std::size_t k = 0; k < rows_; ++k) out[k] = std::move(z[row_perm_[k]]);
  return out;
}

IntVector SmithDecomposition::apply_u_inverse(const IntVector& w) const {
  if (!tracks_rows_) fail(ErrorCode::Invariant, "row operations were not tracked");
  if (w.size() != rows_) fail(ErrorCode::Validation, "dimension mismatch");
  IntVector z(rows_);
  for (std::size_t k = 0; k < rows_; ++k) z[row_perm_[k]] = w[k];
  row_ops_.apply_inverse(z);
  return z;
}

IntVector SmithDecomposition::v_column(std::size_t k) const {
  if (!tracks_columns_) fail(ErrorCode::Invariant, "column operations were not tracked");
  IntVector x(cols_);
  x.at(col_perm_.at(k)) = Integer(1);
  col_ops_.apply(x);
  return x;
}

IntegerMatrix SmithDecomposition::s_matrix() const {
  return IntegerMatrix::diagonal(rows_, cols_, diagonal_);
}

IntegerMatrix SmithDecomposition::u_matrix() const {
  IntegerMatrix u(rows_, rows_);
  for (std::size_t j = 0; j < rows_; ++j) {
    IntVector e(rows_);
    e[j] = Integer(1);
    u.set_column(j, to_sparse(apply_u(e)));
  }
  return u;
}

IntegerMatrix SmithDecomposition::v_matrix() const {
  IntegerMatrix v(cols_, cols_);
  for (std::size_t k = 0; k < cols_; ++k) v.set_column(k, to_sparse(v_column(k)));
  return v;
}

SmithResult smith_normal_form(const IntegerMatrix& m, const Limits& limits) {
  SmithOptions opts;
  opts.track_rows = true;
  opts.track_columns = true;
  opts.limits = limits;
  SmithDecomposition d = smith_decompose(m, opts);
  return {d.s_matrix(), d.u_matrix(), d.v_matrix()};
}

std::size_t integer_rank(const IntegerMatrix& m, const Limits& limits) {
  SmithOptions opts;
  opts.track_rows = false;
  opts.limits = limits;
  return smith_decompose(m, opts).rank();
}

} // namespace stacky
