#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "stacky/abelian.hpp"
#include "stacky/groups.hpp"

namespace stacky {

/// Trivial-action coefficient modules: Z, Z/m, or the units of an
/// algebraically closed field of the given characteristic (0 if unknown).
struct Coefficients {
  enum class Kind : std::uint8_t { Integers, Cyclic, Units };
  Kind kind = Kind::Integers;
  Integer modulus;                  // Cyclic only, >= 1
  std::uint64_t characteristic = 0; // Units only

  static Coefficients integers() { return {}; }
  static Coefficients cyclic(const Integer& m);
  static Coefficients units(std::uint64_t characteristic = 0) {
    return {Kind::Units, Integer(0), characteristic};
  }

  /// "Z", "Z/m" or "units".
  std::string to_string() const;
  /// Inverse of to_string(); throws Error(Parse).
  static Coefficients parse(const std::string& text);

  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

// Normalized cochains: C^n has basis the n-tuples of non-identity elements,
// ordered lexicographically.

/// (|G|-1)^n; throws ResourceCap if it exceeds limits.max_entries.
std::size_t cochain_dim(const FiniteGroup& g, std::size_t n, const Limits& limits = {});
std::size_t cochain_index(const FiniteGroup& g, const std::vector<Element>& tuple);
std::vector<Element> cochain_tuple(const FiniteGroup& g, std::size_t n, std::size_t index);

/// d: C^n -> C^{n+1}, coefficient-independent integer matrix.
IntegerMatrix bar_differential(const FiniteGroup& g, std::size_t n, const Limits& limits = {});
/// d f evaluated term by term from the coboundary formula.
IntVector apply_coboundary(const FiniteGroup& g, std::size_t n, const IntVector& f,
                           const Limits& limits = {});
/// f o phi^n, zero on tuples hitting the identity.
IntVector pullback(const GroupHom& phi, std::size_t n, const IntVector& f);

/// The normalized 2-cochain of a cocycle table, and back.
IntVector to_cochain(const Cocycle2& c);
Cocycle2 to_cocycle2(const FiniteGroup& g, std::int64_t modulus, const IntVector& cochain);

/// H^n(G, A) with explicit representatives.
class CohomologyGroup {
public:
  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t degree() const noexcept { return degree_; }
  const Coefficients& coefficients() const noexcept { return coefficients_; }
  const FinAbGroup& value() const noexcept { return value_; }

  /// Degree of the cochains carrying the classes: n, or n+1 for units.
  std::size_t cochain_degree() const noexcept { return cochain_degree_; }
  /// Integer modulus the representatives live over (0 for Z and units).
  const Integer& cochain_modulus() const noexcept { return cochain_modulus_; }
  /// One normalized cocycle per generator of value().
  const std::vector<IntVector>& representatives() const noexcept { return representatives_; }

  /// Coordinates of the class of a cocycle; throws NotChainCompatible if
  /// the cochain is not a cocycle.
  IntVector classify(const IntVector& cochain) const;
  bool is_coboundary(const IntVector& cochain) const;

private:
  friend CohomologyGroup compute_cohomology(const FiniteGroup&, std::size_t, const Coefficients&,
                                            const Limits&);
  FiniteGroup group_;
  std::size_t degree_ = 0;
  Coefficients coefficients_;
  FinAbGroup value_;
  std::size_t cochain_degree_ = 0;
  Integer cochain_modulus_;
  std::vector<IntVector> representatives_;
  std::size_t torsion_count_ = 0;
  std::shared_ptr<const CokernelPresentation> cokernel_; // integral route
  std::shared_ptr<const Subquotient> subquotient_;       // Z/m route
};

/// Uncached computation.
CohomologyGroup compute_cohomology(const FiniteGroup& g, std::size_t n, const Coefficients& coeff,
                                   const Limits& limits = {});
/// Cached through a process-wide, lock-protected memo keyed by table,
/// degree and coefficients.
std::shared_ptr<const CohomologyGroup> cohomology(const FiniteGroup& g, std::size_t n,
                                                  const Coefficients& coeff,
                                                  const Limits& limits = {});

CohomologyGroup cohomology_Z(const FiniteGroup& g, std::size_t n, const Limits& limits = {});
CohomologyGroup cohomology_Zm(const FiniteGroup& g, std::size_t n, const Integer& m,
                              const Limits& limits = {});
/// H^n(G, k^x) := H^{n+1}(G, Z) for n >= 1. Throws Tameness if the
/// characteristic divides |G|.
CohomologyGroup cohomology_units(const FiniteGroup& g, std::size_t n,
                                 std::uint64_t characteristic = 0, const Limits& limits = {});

void clear_cohomology_cache();

/// The map H^n(G, A) -> H^n(E, A) induced by a surjection q: E -> G.
AbGroupMap inflation_map(const GroupHom& q, std::size_t n, const Coefficients& coeff,
                         const Limits& limits = {});
/// The map H^n(G, A) -> H^n(H, A) induced by an injection i: H -> G.
AbGroupMap restriction_map(const GroupHom& i, std::size_t n, const Coefficients& coeff,
                           const Limits& limits = {});

/// Connecting map of 0 -> Z -r-> Z -> Z/r -> 0 on a mod-r n-cocycle, as
/// coordinates in H^{n+1}(G, Z).
IntVector bockstein(const FiniteGroup& g, std::size_t n, std::int64_t r, const IntVector& cocycle,
                    const Limits& limits = {});
/// Bockstein of a 2-cocycle, as coordinates in H^2(G, k^x) = H^3(G, Z).
IntVector bockstein_r(const Cocycle2& c, const Limits& limits = {});

/// One normalized cocycle per class of H^2(G, Z/r), in lexicographic order
/// of generator coefficients.
std::vector<Cocycle2> enumerate_extension_classes(const FiniteGroup& g, std::int64_t r,
                                                  const Limits& limits = {});

} // namespace stacky
