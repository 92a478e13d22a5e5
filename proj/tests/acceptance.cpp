#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "stacky/curve.hpp"
#include "stacky/error.hpp"
#include "stacky/oracle.hpp"

using namespace stacky;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      lines.push_back(what);
      pass = false;
    }
  }
  void note(const std::string& what) { lines.push_back(what); }

  std::string text() const {
    std::string s;
    for (const auto& l : lines) s += (s.empty() ? "" : "; ") + l;
    return s;
  }
};

FiniteGroup product(std::size_t a, std::size_t b) { return direct_product(cyclic(a), cyclic(b)).group; }

// Cyclic groups, products of two cyclics and the two nonabelian groups of
// order 8.
std::vector<std::pair<std::string, FiniteGroup>> family() {
  std::vector<std::pair<std::string, FiniteGroup>> f;
  for (std::size_t n = 1; n <= 8; ++n) f.emplace_back("Z/" + std::to_string(n), cyclic(n));
  for (auto [a, b] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}}) {
    f.emplace_back("Z/" + std::to_string(a) + "xZ/" + std::to_string(b), product(a, b));
  }
  f.emplace_back("D8", semidirect_cyclic_by_z2(4, 3));
  f.emplace_back("Q8", quaternion8());
  return f;
}

FinAbGroup elementary(std::uint64_t p, std::size_t rank) {
  return FinAbGroup::from_cyclic_orders(std::vector<Integer>(rank, Integer(static_cast<long long>(p))));
}

// Carry cocycle of Z/n cupped with itself generates H^4(Z/n, Z); returns the
// order of its pullback along q in H^4(E, Z). Inflation on H^3(-, k^x) is
// injective iff this order is n.
std::size_t cup_square_pullback_order(const GroupHom& q, std::size_t n) {
  const FiniteGroup& e = q.source();
  auto carry = [&](Element a, Element b) { return a + b >= n ? 1 : 0; };
  const std::size_t dim = cochain_dim(e, 4);
  IntVector w(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    auto t = cochain_tuple(e, 4, i);
    w[i] = Integer(carry(q(t[0]), q(t[1])) * carry(q(t[2]), q(t[3])));
  }
  const auto d3 = bar_differential(e, 3);
  for (std::size_t k = 1; k <= n; ++k) {
    IntVector kw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) kw[i] = Integer(static_cast<long long>(k)) * w[i];
    if (solve_integer_system(d3, kw).has_value()) return k;
  }
  return 0;
}

// Hom(A, Z/r) for r prime, A = <a_i, b_i, g_j | n_j g_j, sum g_j>: count the
// admissible images of the g_j and read off the rank.
FinAbGroup presentation_hom(std::size_t genus, const std::vector<std::size_t>& orders, std::uint64_t r) {
  std::size_t count = 0;
  std::vector<std::uint64_t> x(orders.size(), 0);
  while (true) {
    bool ok = true;
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < orders.size(); ++j) {
      ok = ok && (orders[j] * x[j]) % r == 0;
      sum += x[j];
    }
    if (ok && sum % r == 0) ++count;
    std::size_t j = 0;
    while (j < x.size() && ++x[j] == r) x[j++] = 0;
    if (j == x.size()) break;
  }
  std::size_t rank = 2 * genus;
  while (count > 1) {
    count /= r;
    ++rank;
  }
  return elementary(r, rank);
}

CurveSpec smooth_curve(std::size_t genus, const std::vector<std::size_t>& orders) {
  CurveSpec c;
  c.coarse_genus = genus;
  for (std::size_t i = 0; i < orders.size(); ++i) c.points.push_back({"p" + std::to_string(i), cyclic(orders[i]), false, {}});
  return c;
}

Outcome cyclic_table() {
  Outcome o;
  for (std::size_t r = 2; r <= 6; ++r) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto v = cohomology_units(cyclic(r), n).value();
      const auto want = n % 2 ? FinAbGroup::cyclic(Integer(static_cast<long long>(r))) : FinAbGroup();
      o.expect(v == want, "H^" + std::to_string(n) + "(Z/" + std::to_string(r) + ", k^x) = " + v.to_string());
    }
  }
  if (o.pass) o.note("20 groups");
  return o;
}

Outcome cyclic_inflation() {
  Outcome o;
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}, {4, 2}}) {
    std::vector<Element> img(m * n);
    for (std::size_t a = 0; a < m * n; ++a) img[a] = static_cast<Element>(a % n);
    const GroupHom q(cyclic(m * n), cyclic(n), img);
    const auto f = inflation_map(q, 3, Coefficients::units());
    const bool inj = is_injective(f);
    const auto coker = cokernel(f);
    const std::size_t k = cup_square_pullback_order(q, n);
    o.expect((k == n) == inj, "engine and cup-square oracle disagree for (n,m)=(" + std::to_string(n) + "," +
                                 std::to_string(m) + ")");
    const bool ok = inj && coker == FinAbGroup::cyclic(Integer(static_cast<long long>(m)));
    std::ostringstream what;
    what << "(n,m)=(" << n << "," << m << "): injective=" << (inj ? "true" : "false") << " coker=" << coker.to_string()
         << " pulled-back generator order " << k << " of " << n;
    o.expect(ok, what.str());
  }
  if (o.pass) o.note("4 pairs injective with cokernel Z/m");
  return o;
}

Outcome root_gerbe_equivalence() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& [name, g] : family()) {
    for (std::int64_t r : {2, 4}) {
      for (const auto& c : enumerate_extension_classes(g, r)) {
        const CentralExtension e(c);
        const bool a = fiber_is_root_gerbe(e);
        const bool b = fiber_is_root_gerbe_via_inflation(e);
        o.expect(a == b, name + " r=" + std::to_string(r) + " mismatch");
        ++checked;
      }
    }
  }
  o.note(std::to_string(checked) + " extension classes");
  return o;
}

Outcome coprime_stabilizers() {
  Outcome o;
  BrauerOptions general;
  general.use_shortcuts = false;
  std::size_t checked = 0;
  const std::vector<std::pair<std::string, FiniteGroup>> groups = {
      {"Z/3", cyclic(3)}, {"Z/5", cyclic(5)}, {"S3", semidirect_cyclic_by_z2(3, 2)}};
  for (const auto& [name, g] : groups) {
    // H^2(G, k^x) = H^3(G, Z) from the un-normalized complex.
    const auto schur = oracle::full_bar_cohomology(g, 3, Coefficients::integers()).value;
    const auto classes = enumerate_extension_classes(g, 2);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& c = classes[i];
      const CentralExtension e(c);
      const auto d = analyze_fiber(e);
      const std::string at = name + " class " + std::to_string(i) + (d.split ? " (split)" : " (non-split)");
      o.expect(d.is_root_gerbe, at + ": not a root gerbe");
      o.expect(d.h3_inflation_injective == std::optional<bool>(true), at + ": H^3 inflation not injective");
      if (std::gcd(g.order(), std::size_t{2}) != 1) o.note(at + ": |G| = " + std::to_string(g.order()) + " is not prime to r = 2");

      std::vector<CurveSpec> curves;
      if (is_cyclic(g)) {
        auto smooth = smooth_curve(1, {g.order()});
        smooth.points[0].extension = c;
        curves.push_back(smooth);
      }
      CurveSpec nodal;
      nodal.smooth = false;
      nodal.h1_coarse = elementary(2, 2);
      nodal.h1_stack = elementary(2, 2);
      nodal.points.push_back({"n", g, true, c});
      curves.push_back(nodal);

      for (const auto& curve : curves) {
        const auto want = direct_sum(elementary(2, 2), schur);
        const auto fast = brauer_report(curve, 2);
        const auto slow = brauer_report(curve, 2, general);
        auto shown = [](const BrauerReport& b) { return b.determined ? b.result.to_string() : std::string("partial"); };
        o.expect(fast.determined && fast.result == want, at + ": shortcut result " + shown(fast) + ", expected " + want.to_string());
        o.expect(slow.determined && slow.result == want, at + ": general result " + shown(slow) + ", expected " + want.to_string());
        ++checked;
      }
    }
  }
  o.note(std::to_string(checked) + " reports");
  return o;
}

Outcome smooth_curves() {
  Outcome o;
  std::size_t checked = 0;
  std::vector<std::vector<std::size_t>> configs = {{}};
  for (std::size_t a : {2, 3, 4}) {
    configs.push_back({a});
    for (std::size_t b : {2, 3, 4}) {
      if (b < a) continue;
      configs.push_back({a, b});
      for (std::size_t c : {2, 3, 4}) {
        if (c >= b) configs.push_back({a, b, c});
      }
    }
  }
  for (std::size_t genus : {0, 1, 2}) {
    for (const auto& orders : configs) {
      for (std::uint64_t r : {2, 3}) {
        const auto rep = brauer_report(smooth_curve(genus, orders), static_cast<std::int64_t>(r));
        const auto want = presentation_hom(genus, orders, r);
        o.expect(rep.determined && rep.result == want, "g=" + std::to_string(genus) + " r=" + std::to_string(r) +
                                                           " result " + rep.result.to_string() + " vs " +
                                                           want.to_string());
        if (orders.empty()) o.expect(rep.result == elementary(r, 2 * genus), "no stacky points");
        ++checked;
      }
    }
  }
  o.note(std::to_string(checked) + " curves");
  return o;
}

Outcome nonvanishing() {
  Outcome o;
  CurveSpec c;
  c.smooth = false;
  c.h1_stack = FinAbGroup();
  c.points.push_back({"node", semidirect_cyclic_by_z2(4, 3), true, {}});
  const auto schur = oracle::full_bar_cohomology(c.points[0].group, 3, Coefficients::integers()).value;
  const auto h2 = stacky_units_cohomology(c, 2);
  o.expect(h2 == schur && h2 == FinAbGroup::cyclic(Integer(2)), "H^2(C, G_m) = " + h2.to_string());
  const auto rep = brauer_report(c, 2);
  o.expect(rep.determined && rep.result == FinAbGroup::cyclic(Integer(2)), "report " + rep.result.to_string());
  if (o.pass) o.note("H^2(C, G_m) = Z/2, report Determined(Z/2)");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::size_t checked = 0;
  const std::vector<Coefficients> coeffs = {Coefficients::integers(), Coefficients::cyclic(Integer(2)),
                                            Coefficients::cyclic(Integer(3)), Coefficients::cyclic(Integer(4))};
  for (const auto& [name, g] : family()) {
    for (std::size_t n = 0; n <= 3; ++n) {
      for (const auto& coeff : coeffs) {
        const auto engine = cohomology(g, n, coeff)->value();
        const auto full = oracle::full_bar_cohomology(g, n, coeff).value;
        const std::string at = name + " H^" + std::to_string(n) + "(" + coeff.to_string() + ")";
        o.expect(engine == full, at + ": engine " + engine.to_string() + " full bar " + full.to_string());
        if (is_cyclic(g)) {
          const auto closed = oracle::cyclic_closed_form(g.order(), n, coeff).value;
          o.expect(engine == closed, at + ": closed form " + closed.to_string());
        }
        ++checked;
      }
    }
    for (std::uint64_t m : {2, 3, 4}) {
      const auto brute = oracle::brute_cocycles(g, 2, m).value;
      const auto classes = enumerate_extension_classes(g, static_cast<std::int64_t>(m)).size();
      o.expect(brute.order() == Integer(static_cast<long long>(classes)),
               name + " m=" + std::to_string(m) + ": " + brute.to_string() + " vs " + std::to_string(classes) +
                   " classes");
      ++checked;
    }
  }
  o.note(std::to_string(checked) + " comparisons");
  return o;
}

Outcome torsion_property() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& [name, g] : family()) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto v = cohomology_Z(g, n).value();
      const Integer order(static_cast<long long>(g.order()));
      o.expect(v.is_finite() && divides(v.exponent(), order),
               name + " H^" + std::to_string(n) + "(Z) = " + v.to_string());
      ++checked;
    }
  }
  o.note(std::to_string(checked) + " groups");
  return o;
}

Outcome performance_floor() {
  Outcome o;
  clear_cohomology_cache();
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = cohomology_Z(quaternion8(), 4).value();
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto full = oracle::full_bar_cohomology(quaternion8(), 4, Coefficients::integers()).value;
  o.expect(v == full && v == FinAbGroup::cyclic(Integer(8)), "H^4(Q8, Z) = " + v.to_string());
  o.expect(s < 60.0, "took " + std::to_string(s) + " s");
  std::ostringstream t;
  t << std::fixed << std::setprecision(2) << s;
  if (o.pass) o.note("H^4(Q8, Z) = " + v.to_string() + " in " + t.str() + " s");
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria = {
      {1, "cyclic table", cyclic_table, 10},
      {2, "cyclic inflation", cyclic_inflation, 60},
      {3, "root-gerbe equivalence", root_gerbe_equivalence, 0},
      {4, "coprime stabilizers", coprime_stabilizers, 0},
      {5, "smooth curves", smooth_curves, 0},
      {6, "nonvanishing stacky Brauer group", nonvanishing, 0},
      {7, "oracle equivalence", oracle_equivalence, 0},
      {8, "torsion property", torsion_property, 0},
      {9, "performance floor", performance_floor, 60},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    clear_cohomology_cache();
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const Error& e) {
      o.expect(false, std::string("error [") + std::string(error_code_name(e.code())) + "]: " + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) o.expect(s < c.budget_s, "exceeded " + std::to_string(c.budget_s) + " s budget");
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.title << " (" << std::fixed
              << std::setprecision(2) << s << " s): " << o.text() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
