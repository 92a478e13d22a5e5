#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stacky/integer.hpp"

namespace stacky {

/// A finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_k in
/// canonical form: every d_i >= 2 and d_1 | d_2 | ... | d_k.
///
/// Generators are ordered torsion first (ascending), then free.
class FinAbGroup {
public:
  FinAbGroup() = default;
  /// Validates canonical form; throws Error(Validation) otherwise.
  FinAbGroup(std::size_t free_rank, std::vector<Integer> invariant_factors);

  /// Canonicalizes an arbitrary list of cyclic orders; 0 stands for Z and
  /// 1 is dropped.
  static FinAbGroup from_cyclic_orders(const std::vector<Integer>& orders);
  static FinAbGroup cyclic(const Integer& n) { return from_cyclic_orders({n}); }
  static FinAbGroup free(std::size_t rank) { return FinAbGroup(rank, {}); }
  /// Inverse of to_string(): "0", "Z", "Z^2 + Z/2 + Z/4".
  static FinAbGroup parse(std::string_view text);

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }

  std::size_t generator_count() const noexcept { return factors_.size() + free_rank_; }
  /// Order of generator k; 0 for free generators.
  Integer generator_order(std::size_t k) const;

  bool is_trivial() const noexcept { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const noexcept { return free_rank_ == 0; }
  /// Throws for infinite groups.
  Integer order() const;
  /// Exponent of the torsion subgroup (1 if torsion-free).
  Integer exponent() const;

  /// Reduces coordinates into [0, d_k) on torsion generators.
  std::vector<Integer> reduce(std::vector<Integer> coords) const;
  /// Order of the element with the given coordinates (0 if infinite).
  Integer element_order(const std::vector<Integer>& coords) const;

  std::string to_string() const;

  friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;

private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> factors_;
};

FinAbGroup direct_sum(const FinAbGroup& a, const FinAbGroup& b);
FinAbGroup direct_sum(const std::vector<FinAbGroup>& parts);

/// Hom(A, Z/r) = (Z/r)^free_rank + sum Z/gcd(d_i, r).
FinAbGroup hom_to_cyclic(const FinAbGroup& a, const Integer& r);

} // namespace stacky
