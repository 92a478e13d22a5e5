#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stacky/fin_ab_group.hpp"
#include "stacky/integer_matrix.hpp"
#include "stacky/smith.hpp"

namespace stacky {

/// coker(M) = Z^rows / im(M) together with coordinates and generator lifts.
class CokernelPresentation {
public:
  CokernelPresentation() = default;
  CokernelPresentation(const IntegerMatrix& m, const Limits& limits = {});

  const FinAbGroup& group() const noexcept { return group_; }
  std::size_t ambient_dim() const noexcept { return ambient_; }

  /// Coordinates of the class of y, torsion entries reduced.
  IntVector coordinates(const IntVector& y) const;
  /// A representative in Z^rows of generator k.
  IntVector lift(std::size_t k) const;

private:
  std::size_t ambient_ = 0;
  FinAbGroup group_;
  std::shared_ptr<const SmithDecomposition> snf_;
  std::vector<std::size_t> positions_; // generator -> diagonal position
};

FinAbGroup cokernel(const IntegerMatrix& m, const Limits& limits = {});

/// Z_sub / B_sub for lattices B_sub <= Z_sub <= Z^n given by spanning sets.
class Subquotient {
public:
  /// Throws CompositionNonzero when some boundary is not in the cycle span.
  Subquotient(const IntegerMatrix& cycles, const IntegerMatrix& boundaries,
              const Limits& limits = {});

  std::size_t ambient_dim() const noexcept { return ambient_; }
  const FinAbGroup& group() const noexcept { return quotient_.group(); }
  /// Representatives in Z^n of the quotient generators.
  const std::vector<IntVector>& lifts() const noexcept { return lifts_; }

  /// Coordinates in the lattice basis of the cycle lattice, if y lies in it.
  std::optional<IntVector> cycle_coordinates(const IntVector& y) const;
  bool contains(const IntVector& y) const { return cycle_coordinates(y).has_value(); }
  /// Quotient coordinates; throws NotChainCompatible if y is not a cycle.
  IntVector classify(const IntVector& y) const;
  bool is_boundary(const IntVector& y) const;

private:
  std::size_t ambient_ = 0;
  std::shared_ptr<const SmithDecomposition> cycle_snf_;
  CokernelPresentation quotient_;
  std::vector<IntVector> lifts_;
};

/// ker(d_out) / im(d_in), optionally with coefficients reduced mod modulus.
/// Throws CompositionNonzero if d_out * d_in is not zero (mod modulus).
Subquotient homology_at(const IntegerMatrix& d_out, const IntegerMatrix& d_in,
                        const Integer& modulus = Integer(0), const Limits& limits = {});

/// A homomorphism between groups in canonical form, as an integer matrix
/// acting on generator coordinates.
class AbGroupMap {
public:
  /// Validates well-definedness and reduces entries mod target orders.
  AbGroupMap(FinAbGroup source, FinAbGroup target, IntegerMatrix matrix);

  static AbGroupMap identity(const FinAbGroup& g);
  static AbGroupMap zero(const FinAbGroup& source, const FinAbGroup& target);

  const FinAbGroup& source() const noexcept { return source_; }
  const FinAbGroup& target() const noexcept { return target_; }
  const IntegerMatrix& matrix() const noexcept { return matrix_; }

  IntVector apply(const IntVector& coords) const;
  bool is_zero() const noexcept { return matrix_.is_zero(); }

  friend bool operator==(const AbGroupMap&, const AbGroupMap&) = default;

private:
  FinAbGroup source_;
  FinAbGroup target_;
  IntegerMatrix matrix_;
};

/// g o f.
AbGroupMap compose(const AbGroupMap& g, const AbGroupMap& f);

/// The map on subquotients induced by an ambient matrix (target x source).
/// Throws NotChainCompatible if cycles or boundaries are not preserved.
AbGroupMap induced_map(const IntegerMatrix& ambient, const Subquotient& source,
                       const Subquotient& target);

FinAbGroup kernel(const AbGroupMap& f, const Limits& limits = {});
FinAbGroup cokernel(const AbGroupMap& f, const Limits& limits = {});
bool is_injective(const AbGroupMap& f, const Limits& limits = {});
bool is_surjective(const AbGroupMap& f, const Limits& limits = {});
/// True iff f is injective and some g has g o f = id.
bool is_split_injection(const AbGroupMap& f, const Limits& limits = {});
/// A left inverse of f, if one exists.
std::optional<AbGroupMap> left_inverse(const AbGroupMap& f, const Limits& limits = {});

/// Some y in Z^cols with A y = c, if one exists.
std::optional<IntVector> solve_integer_system(const IntegerMatrix& a, const IntVector& c,
                                              const Limits& limits = {});

} // namespace stacky
