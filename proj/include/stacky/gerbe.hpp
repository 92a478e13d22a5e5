#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stacky/cohomology.hpp"

namespace stacky {

struct FiberOptions {
  Limits limits{};
  /// Skip inflation computations that a certificate already decides
  /// (split class, cyclic base).
  bool use_shortcuts = true;
  /// Declared characteristic of the base field, 0 if unknown.
  std::uint64_t characteristic = 0;
};

/// Analysis of one fiber BE -> BG of a mu_r-gerbe.
///
/// Optional fields are empty when the computation exceeded the resource cap;
/// they never hold a guessed value.
struct FiberDiagnostics {
  explicit FiberDiagnostics(CentralExtension e) : extension(std::move(e)) {}

  CentralExtension extension;
  FinAbGroup h2_units_base;
  std::optional<FinAbGroup> h2_units_total;
  bool is_root_gerbe = false;
  std::optional<bool> root_gerbe_via_inflation;
  std::optional<bool> h3_inflation_injective;
  /// True only with a splitting certificate; false means "no certificate".
  bool h2_section_exists = false;
  /// Coordinates of the Bockstein of the class in H^2(G, k^x).
  IntVector bockstein_class;
  /// The class of the cocycle in H^2(G, Z/r) is zero.
  bool split = false;
  std::vector<std::string> notes;

  /// "0" or "(1, 0) in Z/2 + Z/2".
  std::string bockstein_text() const;
};

/// The class pushed to H^2(G, k^x) vanishes.
bool fiber_is_root_gerbe(const CentralExtension& e, const Limits& limits = {});
/// Inflation H^2(G, k^x) -> H^2(E, k^x) is injective.
bool fiber_is_root_gerbe_via_inflation(const CentralExtension& e, const Limits& limits = {});
/// Inflation H^3(G, k^x) -> H^3(E, k^x) is injective; throws ResourceCap.
bool h3_inflation_injective(const CentralExtension& e, const Limits& limits = {});
/// Inflation H^2(G, k^x) -> H^2(E, k^x) is a split injection.
bool h2_section_exists(const CentralExtension& e, const Limits& limits = {});

/// Runs every fiber test, cross-checking the two root-gerbe detectors
/// whenever both are computed (Invariant error on disagreement).
FiberDiagnostics analyze_fiber(const CentralExtension& e, const FiberOptions& options = {});

} // namespace stacky
