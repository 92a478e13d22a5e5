#include "stacky/gerbe.hpp"

#include <numeric>

#include "stacky/error.hpp"

namespace stacky {

namespace {

bool all_zero(const IntVector& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

AbGroupMap units_inflation(const CentralExtension& e, std::size_t n, std::uint64_t characteristic,
                           const Limits& limits) {
  return inflation_map(e.projection(), n, Coefficients::units(characteristic), limits);
}

} // namespace

std::string FiberDiagnostics::bockstein_text() const {
  if (all_zero(bockstein_class)) return "0";
  std::string s = "(";
  for (std::size_t i = 0; i < bockstein_class.size(); ++i) {
    if (i) s += ", ";
    s += bockstein_class[i].to_string();
  }
  return s + ") in " + h2_units_base.to_string();
}

bool fiber_is_root_gerbe(const CentralExtension& e, const Limits& limits) {
  return all_zero(bockstein_r(e.cocycle(), limits));
}

bool fiber_is_root_gerbe_via_inflation(const CentralExtension& e, const Limits& limits) {
  return is_injective(units_inflation(e, 2, 0, limits), limits);
}

bool h3_inflation_injective(const CentralExtension& e, const Limits& limits) {
  return is_injective(units_inflation(e, 3, 0, limits), limits);
}

bool h2_section_exists(const CentralExtension& e, const Limits& limits) {
  return is_split_injection(units_inflation(e, 2, 0, limits), limits);
}

FiberDiagnostics analyze_fiber(const CentralExtension& e, const FiberOptions& options) {
  const FiniteGroup& g = e.base();
  const auto r = static_cast<std::uint64_t>(e.modulus());
  const std::uint64_t p = options.characteristic;
  if (p != 0 && (g.order() % p == 0 || r % p == 0)) {
    fail(ErrorCode::Tameness, "characteristic " + std::to_string(p) + " divides |G| = " +
                                  std::to_string(g.order()) + " or r = " + std::to_string(r));
  }
  const Limits& limits = options.limits;
  FiberDiagnostics d(e);
  d.h2_units_base = cohomology(g, 2, Coefficients::units(p), limits)->value();
  d.bockstein_class = bockstein_r(e.cocycle(), limits);
  d.is_root_gerbe = all_zero(d.bockstein_class);
  d.split = cohomology(g, 2, Coefficients::cyclic(Integer(r)), limits)->is_coboundary(to_cochain(e.cocycle()));

  bool section_known = false;
  if (options.use_shortcuts && d.split) {
    d.root_gerbe_via_inflation = true;
    d.h3_inflation_injective = true;
    d.h2_section_exists = true;
    section_known = true;
    d.notes.push_back("split extension: inflation has a retraction in every degree");
  } else if (options.use_shortcuts && is_cyclic(g)) {
    d.root_gerbe_via_inflation = true;
    d.h2_section_exists = true;
    section_known = true;
    d.notes.push_back("cyclic stabilizer: H^2(G, k^x) = 0");
  }

  if (!section_known) {
    try {
      auto f = units_inflation(e, 2, p, limits);
      d.h2_units_total = f.target();
      d.root_gerbe_via_inflation = is_injective(f, limits);
      d.h2_section_exists = is_split_injection(f, limits);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ResourceCap) throw;
      d.notes.push_back(std::string("H^2 inflation undetermined: ") + err.what());
    }
  }
  if (!d.h2_units_total) {
    try {
      d.h2_units_total = cohomology(e.total(), 2, Coefficients::units(p), limits)->value();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ResourceCap) throw;
    }
  }
  if (!d.h3_inflation_injective) {
    try {
      d.h3_inflation_injective = is_injective(units_inflation(e, 3, p, limits), limits);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ResourceCap) throw;
      d.notes.push_back(std::string("H^3 inflation undetermined: ") + err.what());
    }
  }
  if (d.root_gerbe_via_inflation && *d.root_gerbe_via_inflation != d.is_root_gerbe) {
    fail(ErrorCode::Invariant, "Bockstein and inflation root-gerbe tests disagree");
  }
  return d;
}

} // namespace stacky
