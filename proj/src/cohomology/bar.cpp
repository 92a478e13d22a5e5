#include <algorithm>

#include "stacky/cohomology.hpp"
#include "stacky/error.hpp"

namespace stacky {

std::size_t cochain_dim(const FiniteGroup& g, std::size_t n, const Limits& limits) {
  const std::size_t b = g.order() - 1;
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (b != 0 && dim > limits.max_entries / b) {
      fail(ErrorCode::ResourceCap, "cochain space of degree " + std::to_string(n) + " for a group of order " +
                                       std::to_string(g.order()) + " exceeds the entry budget");
    }
    dim *= b;
  }
  if (dim > limits.max_entries) {
    fail(ErrorCode::ResourceCap, "cochain space exceeds the entry budget");
  }
  return dim;
}

std::size_t cochain_index(const FiniteGroup& g, const std::vector<Element>& tuple) {
  const std::size_t b = g.order() - 1;
  std::size_t index = 0;
  for (Element x : tuple) {
    if (x == 0 || x >= g.order()) fail(ErrorCode::Validation, "cochain tuple entry is not a non-identity element");
    index = index * b + (x - 1);
  }
  return index;
}

std::vector<Element> cochain_tuple(const FiniteGroup& g, std::size_t n, std::size_t index) {
  const std::size_t b = g.order() - 1;
  std::vector<Element> tuple(n);
  for (std::size_t i = n; i-- > 0;) {
    tuple[i] = static_cast<Element>(index % b + 1);
    index /= b;
  }
  return tuple;
}

namespace {

// Visits every (n+1)-tuple in index order with the list of its faces as
// (column, sign) pairs. Faces through the identity are omitted.
template <class Visit>
void for_each_face(const FiniteGroup& g, std::size_t n, std::size_t rows, Visit&& visit) {
  const std::size_t b = g.order() - 1;
  std::vector<Element> t(n + 1, 1);
  std::vector<std::size_t> pow(n + 2, 1);
  for (std::size_t i = 1; i < pow.size(); ++i) pow[i] = pow[i - 1] * b;
  std::vector<std::pair<std::size_t, int>> faces;
  for (std::size_t row = 0; row < rows; ++row) {
    faces.clear();
    // f(g2, ..., g_{n+1})
    faces.push_back({row % pow[n], 1});
    // (-1)^i f(..., g_i g_{i+1}, ...)
    for (std::size_t i = 0; i < n; ++i) {
      Element prod = g.mul(t[i], t[i + 1]);
      if (prod == 0) continue;
      std::size_t col = 0;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == i + 1) continue;
        Element x = j == i ? prod : t[j];
        col = col * b + (x - 1);
      }
      faces.push_back({col, (i + 1) % 2 == 0 ? 1 : -1});
    }
    // (-1)^{n+1} f(g1, ..., gn)
    faces.push_back({row / b, (n + 1) % 2 == 0 ? 1 : -1});
    visit(row, faces);
    for (std::size_t j = n + 1; j-- > 0;) {
      if (t[j] < b) {
        ++t[j];
        break;
      }
      t[j] = 1;
    }
  }
}

} // namespace

IntegerMatrix bar_differential(const FiniteGroup& g, std::size_t n, const Limits& limits) {
  const std::size_t cols = cochain_dim(g, n, limits);
  const std::size_t rows = cochain_dim(g, n + 1, limits);
  if (g.order() == 1) return IntegerMatrix(rows, cols);
  if (n == 0) return IntegerMatrix(rows, cols); // f() - f()
  if (rows * (n + 2) > 4 * limits.max_entries) {
    fail(ErrorCode::ResourceCap, "bar differential exceeds the entry budget");
  }
  std::vector<SparseVector> columns(cols);
  for_each_face(g, n, rows, [&](std::size_t row, const auto& faces) {
    for (const auto& [col, sign] : faces) {
      auto& c = columns[col];
      if (!c.empty() && c.back().index == row) {
        c.back().value += Integer(sign);
        if (c.back().value.is_zero()) c.pop_back();
      } else {
        c.push_back({static_cast<std::uint32_t>(row), Integer(sign)});
      }
    }
  });
  IntegerMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) m.set_column(j, std::move(columns[j]));
  return m;
}

IntVector apply_coboundary(const FiniteGroup& g, std::size_t n, const IntVector& f,
                           const Limits& limits) {
  const std::size_t cols = cochain_dim(g, n, limits);
  const std::size_t rows = cochain_dim(g, n + 1, limits);
  if (f.size() != cols) fail(ErrorCode::Validation, "cochain has the wrong dimension");
  IntVector out(rows);
  if (g.order() == 1 || n == 0) return out;
  // Evaluate the alternating sum on each tuple directly from its entries.
  for (std::size_t row = 0; row < rows; ++row) {
    auto t = cochain_tuple(g, n + 1, row);
    auto value_at = [&](const std::vector<Element>& args) -> Integer {
      for (Element x : args) {
        if (x == 0) return Integer(0);
      }
      return f[cochain_index(g, args)];
    };
    Integer sum = value_at(std::vector<Element>(t.begin() + 1, t.end()));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Element> face;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == i) face.push_back(g.mul(t[i], t[i + 1]));
        else if (j != i + 1) face.push_back(t[j]);
      }
      Integer v = value_at(face);
      if ((i + 1) % 2 == 0) sum += v;
      else sum -= v;
    }
    Integer last = value_at(std::vector<Element>(t.begin(), t.end() - 1));
    if ((n + 1) % 2 == 0) sum += last;
    else sum -= last;
    out[row] = std::move(sum);
  }
  return out;
}

IntVector pullback(const GroupHom& phi, std::size_t n, const IntVector& f) {
  const FiniteGroup& src = phi.source();
  const FiniteGroup& dst = phi.target();
  Limits unlimited{static_cast<std::size_t>(-1)};
  const std::size_t dim = cochain_dim(src, n, unlimited);
  if (f.size() != cochain_dim(dst, n, unlimited)) {
    fail(ErrorCode::Validation, "cochain has the wrong dimension for pullback");
  }
  IntVector out(dim);
  if (src.order() == 1) return out;
  const std::size_t bs = src.order() - 1, bd = dst.order() - 1;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rest = idx, target = 0, scale = 1;
    bool hits_identity = false;
    for (std::size_t i = 0; i < n; ++i) {
      Element x = static_cast<Element>(rest % bs + 1);
      rest /= bs;
      Element y = phi(x);
      if (y == 0) {
        hits_identity = true;
        break;
      }
      target += (y - 1) * scale;
      scale *= bd;
    }
    if (!hits_identity) out[idx] = f[target];
  }
  return out;
}

IntVector to_cochain(const Cocycle2& c) {
  const FiniteGroup& g = c.base();
  const std::size_t b = g.order() - 1;
  IntVector out(b * b);
  for (Element x = 1; x < g.order(); ++x)
    for (Element y = 1; y < g.order(); ++y) out[(x - 1) * b + (y - 1)] = Integer(static_cast<long long>(c(x, y)));
  return out;
}

Cocycle2 to_cocycle2(const FiniteGroup& g, std::int64_t modulus, const IntVector& cochain) {
  const std::size_t n = g.order(), b = n - 1;
  if (cochain.size() != b * b) fail(ErrorCode::Validation, "2-cochain has the wrong dimension");
  std::vector<std::int64_t> values(n * n, 0);
  for (Element x = 1; x < n; ++x)
    for (Element y = 1; y < n; ++y) {
      values[x * n + y] = mod(cochain[(x - 1) * b + (y - 1)], Integer(static_cast<long long>(modulus))).to_int64();
    }
  return Cocycle2(g, modulus, std::move(values));
}

} // namespace stacky
