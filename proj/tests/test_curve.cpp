#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "stacky/curve.hpp"
#include "stacky/error.hpp"
#include "stacky/oracle.hpp"

using namespace stacky;

namespace {

FinAbGroup G(const char* text) { return FinAbGroup::parse(text); }

FiniteGroup v4() { return direct_product(cyclic(2), cyclic(2)).group; }
FiniteGroup d8() { return semidirect_cyclic_by_z2(4, 3); }

CurveSpec smooth_curve(std::size_t genus, const std::vector<std::size_t>& orders) {
  CurveSpec c;
  c.coarse_genus = genus;
  for (std::size_t i = 0; i < orders.size(); ++i) c.points.push_back({"p" + std::to_string(i), cyclic(orders[i]), false, {}});
  return c;
}

CurveSpec nodal_curve(const FiniteGroup& g, std::optional<Cocycle2> ext = {}) {
  CurveSpec c;
  c.smooth = false;
  c.coarse_genus = 0;
  c.h1_stack = FinAbGroup();
  c.points.push_back({"node", g, true, std::move(ext)});
  return c;
}

Cocycle2 quaternion_class() {
  for (const auto& c : enumerate_extension_classes(v4(), 2)) {
    if (are_isomorphic_small(CentralExtension(c).total(), quaternion8())) return c;
  }
  FAIL("no quaternion class");
  return Cocycle2::zero(v4(), 2);
}

void check_report_invariants(const BrauerReport& rep) {
  bool all_root = true;
  std::optional<bool> exact = true;
  for (const auto& f : rep.fibers) {
    all_root = all_root && f.is_root_gerbe;
    if (f.root_gerbe_via_inflation) CHECK(*f.root_gerbe_via_inflation == f.is_root_gerbe);
    if (!f.h3_inflation_injective) {
      if (exact == std::optional<bool>(true)) exact.reset();
    } else if (!*f.h3_inflation_injective) {
      exact = false;
    }
  }
  CHECK(rep.is_root_gerbe == all_root);
  CHECK(rep.is_root_gerbe == rep.left_kernel.is_trivial());
  CHECK(rep.right_exact == exact);
  // |left_term| = |left_kernel| * |left_image|.
  CHECK(rep.left_term.order() == rep.left_kernel.order() * rep.left_image.order());
}

} // namespace

TEST_CASE("stacky units cohomology") {
  CHECK(stacky_units_cohomology(smooth_curve(1, {2, 3, 4}), 2) == G("0"));
  CHECK(stacky_units_cohomology(smooth_curve(1, {2, 3, 4}), 3) == G("Z/2 + Z/12"));
  CHECK(stacky_units_cohomology(nodal_curve(d8()), 2) == G("Z/2"));
  CHECK(stacky_units_cohomology(smooth_curve(0, {}), 2) == G("0"));
  CHECK(stacky_units_cohomology(smooth_curve(3, {}), 5) == G("0"));
  // Even degrees see only the singular points.
  auto mixed = nodal_curve(v4());
  mixed.points.push_back({"q", cyclic(3), false, {}});
  for (std::size_t k : {2u, 4u}) {
    CHECK(stacky_units_cohomology(mixed, k) == cohomology_units(v4(), k).value());
  }
  CHECK(stacky_units_cohomology(mixed, 3) == direct_sum(cohomology_units(v4(), 3).value(), G("Z/3")));
  CHECK_THROWS_AS(stacky_units_cohomology(mixed, 1), Error);
}

TEST_CASE("H^1 of the stack") {
  CHECK(h1_stack_zr(smooth_curve(2, {}), 3).value == G("Z/3 + Z/3 + Z/3 + Z/3"));
  CHECK(h1_stack_zr(smooth_curve(0, {2, 2}), 3).value == G("0"));
  for (std::size_t n : {2u, 4u, 6u}) {
    for (std::int64_t r : {2, 3, 6}) {
      if (n % static_cast<std::size_t>(r) != 0) continue;
      CHECK(h1_stack_zr(smooth_curve(0, {n, n}), r).value == FinAbGroup::cyclic(Integer(r)));
    }
  }
  for (std::size_t g = 0; g <= 2; ++g) {
    for (const auto& orders : std::vector<std::vector<std::size_t>>{{}, {2}, {3, 3}, {2, 4}, {2, 2, 2}, {4, 4, 2}}) {
      for (std::int64_t r : {2, 3, 4}) {
        auto c = smooth_curve(g, orders);
        std::vector<std::uint64_t> o(orders.begin(), orders.end());
        CHECK(h1_stack_zr(c, r).value == oracle::orbifold_h1(g, o, static_cast<std::uint64_t>(r)).value);
        CHECK(h1_stack_zr(c, r).source == H1Source::StackPresentation);
      }
    }
  }
  CurveSpec singular = nodal_curve(d8());
  singular.h1_stack.reset();
  try {
    h1_stack_zr(singular, 2);
    FAIL("expected missing data");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingH1);
  }
  singular.h1_stack = G("Z/2");
  CHECK(h1_stack_zr(singular, 2).source == H1Source::StackOverride);
  CHECK(h1_coarse_zr(smooth_curve(1, {3}), 2).value == G("Z/2 + Z/2"));
}

TEST_CASE("local gerbe classification") {
  CHECK(local_gerbe_classification(smooth_curve(1, {}), 2) == G("0"));
  for (std::int64_t r : {2, 3, 4, 6}) {
    auto c = smooth_curve(0, {2, 3, 4});
    std::vector<FinAbGroup> expect;
    for (std::size_t n : {2u, 3u, 4u}) {
      expect.push_back(oracle::brute_cocycles(cyclic(n), 2, static_cast<std::uint64_t>(r)).value);
      CHECK(expect.back() == FinAbGroup::cyclic(std::gcd(static_cast<long long>(n), static_cast<long long>(r))));
    }
    CHECK(local_gerbe_classification(c, r) == direct_sum(expect));
  }
  CHECK(local_gerbe_classification(nodal_curve(v4()), 2) == G("Z/2 + Z/2 + Z/2"));
}

TEST_CASE("left kernel") {
  CHECK(left_kernel(nodal_curve(d8()), 2) == G("0"));
  CHECK(left_image(nodal_curve(d8()), 2) == G("Z/2"));
  auto quat = nodal_curve(v4(), quaternion_class());
  CHECK(left_kernel(quat, 2) == G("Z/2"));
  CHECK(left_image(quat, 2) == G("0"));
  // Two quaternion points: the diagonal tuple generates a Z/2.
  auto twice = quat;
  twice.points.push_back({"node2", v4(), true, quaternion_class()});
  CHECK(left_kernel(twice, 2) == G("Z/2"));
  CHECK(left_image(twice, 2) == G("Z/2"));
  for (const auto& c : enumerate_extension_classes(cyclic(4), 2)) {
    CHECK(left_kernel(nodal_curve(cyclic(4), c), 2) == G("0"));
  }
}

TEST_CASE("report examples") {
  auto genus2 = brauer_report(smooth_curve(2, {3, 3}), 2);
  CHECK(genus2.determined);
  CHECK(genus2.result == G("Z/2 + Z/2 + Z/2 + Z/2"));
  CHECK(genus2.splitting == Splitting::SmoothShortcut);
  CHECK(genus2.result == oracle::orbifold_h1(2, {3, 3}, 2).value);
  check_report_invariants(genus2);

  auto node = brauer_report(nodal_curve(d8()), 2);
  CHECK(node.determined);
  CHECK(node.result == G("Z/2"));
  CHECK(node.path == ReportPath::General);
  CHECK(node.splitting == Splitting::Sections);
  CHECK(node.right_term_source == H1Source::StackOverride);
  check_report_invariants(node);

  BrauerOptions direct;
  direct.use_shortcuts = false;
  auto node_direct = brauer_report(nodal_curve(d8()), 2, direct);
  CHECK(node_direct.determined);
  CHECK(node_direct.result == G("Z/2"));
  CHECK(node_direct.fibers.at(0).h3_inflation_injective == std::optional<bool>(true));

  auto empty = brauer_report(smooth_curve(1, {}), 1);
  CHECK(empty.determined);
  CHECK(empty.result == G("0"));

  auto quat = brauer_report(nodal_curve(v4(), quaternion_class()), 2);
  CHECK_FALSE(quat.is_root_gerbe);
  CHECK_FALSE(quat.determined);
  CHECK(quat.partial_subgroup == G("0"));
  check_report_invariants(quat);
}

TEST_CASE("smooth shortcut and general path agree") {
  BrauerOptions direct;
  direct.use_shortcuts = false;
  for (std::size_t g = 0; g <= 2; ++g) {
    for (const auto& orders : std::vector<std::vector<std::size_t>>{{}, {2}, {3, 3}, {2, 4}}) {
      for (std::int64_t r : {2, 3}) {
        auto c = smooth_curve(g, orders);
        auto a = brauer_report(c, r);
        auto b = brauer_report(c, r, direct);
        check_report_invariants(a);
        check_report_invariants(b);
        CHECK(a.left_term.is_trivial());
        CHECK(a.determined);
        CHECK(b.determined);
        CHECK(a.result == b.result);
      }
    }
  }
}

TEST_CASE("smooth curve with a fiber where H^3 inflation fails") {
  // Z/4 over a Z/2 point: inflation H^3(Z/2, k^x) -> H^3(Z/4, k^x) is zero,
  // so the shortcut's premise fails and the report stays partial.
  auto c = smooth_curve(1, {2});
  c.points[0].extension = enumerate_extension_classes(cyclic(2), 2).at(1);
  auto rep = brauer_report(c, 2);
  CHECK(rep.right_exact == std::optional<bool>(false));
  CHECK_FALSE(rep.determined);
  CHECK(rep.partial_quotient_bound == h1_stack_zr(c, 2).value);
  CHECK(std::any_of(rep.notes.begin(), rep.notes.end(),
                    [](const std::string& n) { return n.find("non-injective H^3 inflation") != std::string::npos; }));
  check_report_invariants(rep);
}

TEST_CASE("coprime shortcut agrees with the general path") {
  BrauerOptions direct;
  direct.use_shortcuts = false;
  for (const auto& grp : {cyclic(3), cyclic(5), semidirect_cyclic_by_z2(3, 2), v4()}) {
    for (std::int64_t r : {2, 3}) {
      if (std::gcd(grp.order(), static_cast<std::size_t>(r)) != 1) continue;
      for (const auto& cls : enumerate_extension_classes(grp, r)) {
        CurveSpec c = nodal_curve(grp, cls);
        c.h1_stack = G("Z/2");
        c.h1_coarse = G("Z/2");
        if (c.points[0].group.order() * static_cast<std::size_t>(r) > 16) continue;
        auto a = brauer_report(c, r);
        auto b = brauer_report(c, r, direct);
        CHECK(a.path == ReportPath::Coprime);
        CHECK(a.splitting == Splitting::Coprime);
        CHECK(b.path == ReportPath::General);
        CHECK(a.determined);
        CHECK(b.determined);
        CHECK(a.result == b.result);
        CHECK(a.result == direct_sum(G("Z/2"), cohomology_units(grp, 2).value()));
        CHECK(a.right_term_source == H1Source::CoarseOverride);
      }
    }
  }
}

TEST_CASE("parallel and sequential reports match") {
  auto c = nodal_curve(v4(), quaternion_class());
  c.points.push_back({"b", d8(), true, {}});
  c.points.push_back({"c", cyclic(4), true, enumerate_extension_classes(cyclic(4), 2).at(1)});
  BrauerOptions seq;
  seq.parallel = false;
  auto a = brauer_report(c, 2);
  auto b = brauer_report(c, 2, seq);
  REQUIRE(a.fibers.size() == b.fibers.size());
  for (std::size_t i = 0; i < a.fibers.size(); ++i) {
    CHECK(a.fibers[i].bockstein_class == b.fibers[i].bockstein_class);
    CHECK(a.fibers[i].h3_inflation_injective == b.fibers[i].h3_inflation_injective);
  }
  CHECK(a.left_term == b.left_term);
  CHECK(a.left_image == b.left_image);
  CHECK(a.determined == b.determined);
  check_report_invariants(a);
}

TEST_CASE("curve validation") {
  auto bad = smooth_curve(0, {});
  bad.connected = false;
  CHECK_THROWS_AS(bad.validate(), Error);
  CurveSpec nc = smooth_curve(0, {});
  nc.points.push_back({"x", v4(), false, {}});
  try {
    nc.validate();
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("non-cyclic stabilizer at smooth point") != std::string::npos);
  }
  auto tame = smooth_curve(0, {4});
  tame.characteristic = 2;
  try {
    tame.validate();
    FAIL("expected a tameness error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Tameness);
  }
  tame.characteristic = 3;
  CHECK_NOTHROW(tame.validate(2));
  CHECK_THROWS_AS(tame.validate(3), Error);
  auto wrong = nodal_curve(cyclic(2), Cocycle2::zero(cyclic(2), 3));
  CHECK_THROWS_AS(brauer_report(wrong, 2), Error);
  auto no_genus = smooth_curve(0, {});
  no_genus.coarse_genus.reset();
  CHECK_THROWS_AS(no_genus.validate(), Error);
}
