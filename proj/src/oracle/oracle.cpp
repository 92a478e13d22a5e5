#include "stacky/oracle.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "stacky/error.hpp"

namespace stacky::oracle {

std::string method_name(Method m) {
  switch (m) {
  case Method::FullBar: return "full-bar";
  case Method::PeriodicCyclic: return "periodic-cyclic";
  case Method::BruteCocycle: return "brute-cocycle";
  case Method::Presentation: return "presentation";
  }
  return "?";
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap, const char* what) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) fail(ErrorCode::ResourceCap, std::string(what) + " exceeds the oracle budget");
    v *= base;
  }
  return v;
}

// Un-normalized differential C^n -> C^{n+1} on all tuples, little-endian
// indexing (first entry least significant).
IntegerMatrix full_differential(const FiniteGroup& g, std::size_t n) {
  const std::size_t q = g.order();
  std::size_t rows = 1;
  for (std::size_t i = 0; i <= n; ++i) rows *= q;
  std::size_t cols = rows / q;
  std::vector<IntegerMatrix::Triplet> trip;
  std::vector<Element> t(n + 1);
  for (std::size_t row = 0; row < rows; ++row) {
    std::size_t r = row;
    for (auto& x : t) {
      x = static_cast<Element>(r % q);
      r /= q;
    }
    auto index = [&](const std::vector<Element>& face) {
      std::size_t idx = 0;
      for (std::size_t j = face.size(); j-- > 0;) idx = idx * q + face[j];
      return idx;
    };
    std::vector<Element> face(t.begin() + 1, t.end());
    trip.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(index(face)), Integer(1)});
    for (std::size_t i = 0; i < n; ++i) {
      face.clear();
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == i) face.push_back(g.mul(t[i], t[i + 1]));
        else if (j != i + 1) face.push_back(t[j]);
      }
      trip.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(index(face)),
                      Integer(i % 2 == 0 ? -1 : 1)});
    }
    face.assign(t.begin(), t.end() - 1);
    trip.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(index(face)),
                    Integer(n % 2 == 0 ? -1 : 1)});
  }
  return IntegerMatrix::from_triplets(rows, cols, std::move(trip));
}

} // namespace

OracleResult full_bar_cohomology(const FiniteGroup& g, std::size_t n, const Coefficients& coeff,
                                 std::size_t cap) {
  std::size_t k = n;
  if (coeff.kind == Coefficients::Kind::Units) {
    if (n == 0) fail(ErrorCode::Validation, "units cohomology needs degree >= 1");
    k = n + 1;
  }
  checked_pow(g.order(), k + 1, cap, "full bar complex");
  const std::string desc = "H^" + std::to_string(n) + "(G, " + coeff.to_string() + ") via full bar complex";
  IntegerMatrix d_out = full_differential(g, k);
  IntegerMatrix d_in = k == 0 ? IntegerMatrix(1, 0) : full_differential(g, k - 1);
  Limits limits{cap * 64};
  Integer modulus = coeff.kind == Coefficients::Kind::Cyclic ? coeff.modulus : Integer(0);
  return {desc, homology_at(d_out, d_in, modulus, limits).group(), Method::FullBar};
}

OracleResult cyclic_closed_form(std::uint64_t order, std::size_t degree, const Coefficients& coeff) {
  if (order == 0) fail(ErrorCode::Validation, "cyclic group order must be positive");
  const Integer n(order);
  const std::string desc = "H^" + std::to_string(degree) + "(Z/" + std::to_string(order) + ", " +
                           coeff.to_string() + ") via periodic resolution";
  FinAbGroup v;
  switch (coeff.kind) {
  case Coefficients::Kind::Integers:
    if (degree == 0) v = FinAbGroup::free(1);
    else if (degree % 2 == 0) v = FinAbGroup::cyclic(n);
    break;
  case Coefficients::Kind::Cyclic:
    v = FinAbGroup::cyclic(degree == 0 ? coeff.modulus : gcd(n, coeff.modulus));
    break;
  case Coefficients::Kind::Units:
    if (degree == 0) fail(ErrorCode::Validation, "units cohomology needs degree >= 1");
    if (degree % 2 == 1) v = FinAbGroup::cyclic(n);
    break;
  }
  return {desc, v, Method::PeriodicCyclic};
}

// ---------------------------------------------------------------------------

namespace {

using Mat = std::vector<std::vector<std::uint64_t>>; // column-major, entries mod q

struct LocalRing {
  std::uint64_t p, e, q;

  std::uint64_t val(std::uint64_t x) const {
    if (x % q == 0) return e;
    std::uint64_t v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
  }
  std::uint64_t inv(std::uint64_t u) const {
    // u is a unit mod q; extended Euclid on signed values.
    std::int64_t r0 = static_cast<std::int64_t>(q), r1 = static_cast<std::int64_t>(u % q), s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::int64_t t = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
    }
    return static_cast<std::uint64_t>((s0 % static_cast<std::int64_t>(q) + static_cast<std::int64_t>(q)) %
                                      static_cast<std::int64_t>(q));
  }
  std::uint64_t pow_p(std::uint64_t k) const {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < k; ++i) v *= p;
    return v;
  }
};

// Column elimination with full min-valuation pivoting. `columns` has `rows`
// leading entries that are eliminated; any trailing entries ride along.
// Returns the pivot valuations; columns not chosen as pivots end up zero on
// the leading rows.
struct Elimination {
  std::vector<std::size_t> pivot_cols;
  std::vector<std::uint64_t> pivot_vals;
};

Elimination eliminate(Mat& columns, std::size_t rows, const LocalRing& R) {
  Elimination out;
  std::vector<bool> row_done(rows, false), col_done(columns.size(), false);
  while (true) {
    std::uint64_t best = R.e;
    std::size_t bi = 0, bj = 0;
    for (std::size_t j = 0; j < columns.size() && best > 0; ++j) {
      if (col_done[j]) continue;
      for (std::size_t i = 0; i < rows; ++i) {
        if (row_done[i] || columns[j][i] == 0) continue;
        std::uint64_t v = R.val(columns[j][i]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == R.e) break;
    const auto& piv = columns[bj];
    std::uint64_t unit_inv = R.inv(piv[bi] / R.pow_p(best));
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j == bj || columns[j][bi] == 0) continue;
      // a = p^best * c with c determined mod q / p^best.
      std::uint64_t f = R.mul(columns[j][bi] / R.pow_p(best), unit_inv);
      auto& col = columns[j];
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (piv[i] == 0) continue;
        col[i] = (col[i] + R.q - R.mul(f, piv[i])) % R.q;
      }
    }
    row_done[bi] = true;
    col_done[bj] = true;
    out.pivot_cols.push_back(bj);
    out.pivot_vals.push_back(best);
  }
  return out;
}

// log_p of the order of the submodule spanned by the given vectors.
std::uint64_t span_log_order(Mat vectors, std::size_t dim, const LocalRing& R) {
  auto el = eliminate(vectors, dim, R);
  std::uint64_t total = 0;
  for (auto v : el.pivot_vals) total += R.e - v;
  return total;
}

// Kernel generators of the map Z/q^cols -> Z/q^rows.
Mat kernel_generators(const Mat& a, std::size_t rows, const LocalRing& R) {
  const std::size_t cols = a.size();
  Mat aug(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    aug[j] = a[j];
    aug[j].resize(rows + cols, 0);
    aug[j][rows + j] = 1;
  }
  auto el = eliminate(aug, rows, R);
  std::vector<std::uint64_t> scale(cols, 1);
  for (std::size_t k = 0; k < el.pivot_cols.size(); ++k) scale[el.pivot_cols[k]] = R.pow_p(R.e - el.pivot_vals[k]);
  Mat out;
  for (std::size_t j = 0; j < cols; ++j) {
    if (scale[j] == R.q) continue;
    std::vector<std::uint64_t> v(aug[j].begin() + static_cast<std::ptrdiff_t>(rows), aug[j].end());
    for (auto& x : v) x = R.mul(x, scale[j]);
    out.push_back(std::move(v));
  }
  return out;
}

// Normalized coboundary matrix over Z/m from the defining formula, applied
// to the indicator of each non-degenerate tuple.
struct NormalizedComplex {
  const FiniteGroup& g;

  std::vector<std::vector<Element>> tuples(std::size_t n) const {
    std::vector<std::vector<Element>> out{{}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<Element>> next;
      for (const auto& t : out)
        for (Element x = 1; x < g.order(); ++x) {
          auto u = t;
          u.push_back(x);
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  }

  // (df)(t) for a cochain given as a lookup on n-tuples.
  template <class F>
  std::int64_t coboundary_at(const std::vector<Element>& t, F&& f) const {
    const std::size_t n = t.size() - 1;
    std::int64_t sum = f(std::vector<Element>(t.begin() + 1, t.end()));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Element> face;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == i) face.push_back(g.mul(t[i], t[i + 1]));
        else if (j != i + 1) face.push_back(t[j]);
      }
      sum += (i % 2 == 0 ? -1 : 1) * f(face);
    }
    sum += (n % 2 == 0 ? -1 : 1) * f(std::vector<Element>(t.begin(), t.end() - 1));
    return sum;
  }

  Mat differential(std::size_t n, std::uint64_t q) const {
    auto src = tuples(n), dst = tuples(n + 1);
    Mat out(src.size(), std::vector<std::uint64_t>(dst.size(), 0));
    for (std::size_t j = 0; j < src.size(); ++j) {
      auto indicator = [&](const std::vector<Element>& args) -> std::int64_t {
        return args == src[j] ? 1 : 0;
      };
      for (std::size_t i = 0; i < dst.size(); ++i) {
        std::int64_t v = coboundary_at(dst[i], indicator) % static_cast<std::int64_t>(q);
        out[j][i] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(q) : v);
      }
    }
    return out;
  }
};

std::vector<std::pair<std::uint64_t, std::uint64_t>> prime_powers(std::uint64_t m) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    std::uint64_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (m > 1) out.push_back({m, 1});
  return out;
}

// Exhaustive |Z^n| / |B^n| over Z/m, or nullopt if the space is too large.
std::optional<std::uint64_t> exhaustive_quotient_order(const NormalizedComplex& cx, std::size_t n,
                                                       std::uint64_t m) {
  constexpr double kMax = 1 << 20;
  auto cur = cx.tuples(n), prev = cx.tuples(n - 1), next = cx.tuples(n + 1);
  if (std::pow(static_cast<double>(m), static_cast<double>(cur.size())) > kMax ||
      std::pow(static_cast<double>(m), static_cast<double>(prev.size())) > kMax) {
    return std::nullopt;
  }
  auto enumerate = [&](const std::vector<std::vector<Element>>& dom, auto&& visit) {
    std::map<std::vector<Element>, std::size_t> pos;
    for (std::size_t i = 0; i < dom.size(); ++i) pos[dom[i]] = i;
    std::vector<std::int64_t> values(dom.size(), 0);
    auto f = [&](const std::vector<Element>& args) -> std::int64_t {
      for (Element x : args) {
        if (x == 0) return 0;
      }
      return values[pos.at(args)];
    };
    while (true) {
      visit(f);
      std::size_t i = 0;
      for (; i < values.size(); ++i) {
        if (++values[i] < static_cast<std::int64_t>(m)) break;
        values[i] = 0;
      }
      if (i == values.size()) break;
    }
  };
  auto residue = [&](std::int64_t v) {
    v %= static_cast<std::int64_t>(m);
    return static_cast<std::uint32_t>(v < 0 ? v + static_cast<std::int64_t>(m) : v);
  };
  std::uint64_t cocycles = 0;
  enumerate(cur, [&](auto& f) {
    for (const auto& t : next) {
      if (residue(cx.coboundary_at(t, f)) != 0) return;
    }
    ++cocycles;
  });
  std::set<std::vector<std::uint32_t>> boundaries;
  enumerate(prev, [&](auto& f) {
    std::vector<std::uint32_t> image;
    image.reserve(cur.size());
    for (const auto& t : cur) image.push_back(n == 0 ? 0 : residue(cx.coboundary_at(t, f)));
    boundaries.insert(std::move(image));
  });
  if (cocycles % boundaries.size() != 0) fail(ErrorCode::Invariant, "coboundaries do not divide cocycles");
  return cocycles / boundaries.size();
}

} // namespace

OracleResult brute_cocycles(const FiniteGroup& g, std::size_t n, std::uint64_t m) {
  if (m == 0 || m > (1ULL << 31)) fail(ErrorCode::Validation, "brute-force modulus must be in [1, 2^31]");
  if (n > 2) fail(ErrorCode::Validation, "brute-force cocycle counting supports degree <= 2");
  if (g.order() > 16) fail(ErrorCode::ResourceCap, "brute-force cocycle counting supports |G| <= 16");
  const std::string desc = "H^" + std::to_string(n) + "(G, Z/" + std::to_string(m) + ") via cocycle counts";
  if (n == 0 || g.order() == 1) {
    return {desc, n == 0 ? FinAbGroup::cyclic(Integer(m)) : FinAbGroup(), Method::BruteCocycle};
  }
  NormalizedComplex cx{g};
  const std::size_t dim_n = cx.tuples(n).size();
  std::vector<Integer> orders;
  for (auto [p, e] : prime_powers(m)) {
    LocalRing R{p, e, 1};
    for (std::uint64_t i = 0; i < e; ++i) R.q *= p;
    Mat d_out = cx.differential(n, R.q);
    Mat d_in = cx.differential(n - 1, R.q);
    Mat cycles = kernel_generators(d_out, cx.tuples(n + 1).size(), R);
    // L_j = log_p |p^j H| = log_p |p^j Z + B| - log_p |B|.
    const std::uint64_t log_b = span_log_order(d_in, dim_n, R);
    std::vector<std::uint64_t> L;
    for (std::uint64_t j = 0; j <= e + 1; ++j) {
      Mat gens = d_in;
      const std::uint64_t s = j >= e ? 0 : R.pow_p(j);
      for (const auto& z : cycles) {
        auto v = z;
        for (auto& x : v) x = R.mul(x, s);
        gens.push_back(std::move(v));
      }
      L.push_back(span_log_order(std::move(gens), dim_n, R) - log_b);
    }
    for (std::uint64_t j = 0; j + 1 <= e; ++j) {
      const std::uint64_t at_least = L[j] - L[j + 1];
      const std::uint64_t next = L[j + 1] - L[j + 2];
      for (std::uint64_t c = 0; c < at_least - next; ++c) orders.push_back(Integer(R.pow_p(j + 1)));
    }
  }
  FinAbGroup value = FinAbGroup::from_cyclic_orders(orders);
  if (auto exact = exhaustive_quotient_order(cx, n, m)) {
    if (Integer(*exact) != value.order()) {
      fail(ErrorCode::Invariant, "exhaustive cocycle count disagrees with the elimination count");
    }
  }
  return {desc, value, Method::BruteCocycle};
}

// ---------------------------------------------------------------------------

FinAbGroup group_from_element_orders(const std::vector<std::uint64_t>& orders) {
  const std::uint64_t total = orders.size();
  if (total == 0) fail(ErrorCode::Validation, "a group has at least one element");
  std::vector<Integer> factors;
  for (auto [p, e] : prime_powers(total)) {
    // log_p |A[p^j]| for j = 0..e.
    std::vector<std::uint64_t> logs;
    std::uint64_t pj = 1;
    for (std::uint64_t j = 0; j <= e; ++j) {
      std::uint64_t count = 0;
      for (auto o : orders) count += pj % o == 0;
      std::uint64_t l = 0, c = count;
      while (c % p == 0) {
        c /= p;
        ++l;
      }
      if (c != 1) fail(ErrorCode::Invariant, "element order counts are not those of an abelian group");
      logs.push_back(l);
      pj *= p;
    }
    // Factors of order >= p^j number logs[j] - logs[j-1].
    for (std::uint64_t j = 1; j <= e; ++j) {
      const std::uint64_t at_least = logs[j] - logs[j - 1];
      const std::uint64_t beyond = j < e ? logs[j + 1] - logs[j] : 0;
      Integer order(1);
      for (std::uint64_t i = 0; i < j; ++i) order *= Integer(p);
      for (std::uint64_t c = 0; c < at_least - beyond; ++c) factors.push_back(order);
    }
  }
  FinAbGroup g = FinAbGroup::from_cyclic_orders(factors);
  if (g.order() != Integer(total)) fail(ErrorCode::Invariant, "element order counts are inconsistent");
  return g;
}

OracleResult orbifold_h1(std::size_t genus, const std::vector<std::uint64_t>& orders, std::uint64_t r) {
  if (r == 0) fail(ErrorCode::Validation, "modulus must be positive");
  std::size_t space = checked_pow(r, orders.size(), 1 << 20, "orbifold enumeration");
  std::vector<std::uint64_t> element_orders;
  std::vector<std::uint64_t> c(orders.size(), 0);
  for (std::size_t idx = 0; idx < space; ++idx) {
    std::size_t rest = idx;
    std::uint64_t sum = 0, ord = 1;
    bool ok = true;
    for (std::size_t j = 0; j < orders.size(); ++j) {
      c[j] = rest % r;
      rest /= r;
      if (orders[j] * c[j] % r != 0) ok = false;
      sum += c[j];
      ord = std::lcm(ord, r / std::gcd(c[j], r));
    }
    if (ok && sum % r == 0) element_orders.push_back(ord);
  }
  FinAbGroup s = group_from_element_orders(element_orders);
  std::vector<FinAbGroup> parts(2 * genus, FinAbGroup::cyclic(Integer(r)));
  parts.push_back(s);
  std::string desc = "Hom(pi_1^orb, Z/" + std::to_string(r) + ") by enumeration";
  return {desc, direct_sum(parts), Method::Presentation};
}

} // namespace stacky::oracle
