#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stacky/cohomology.hpp"

// Independent verification paths. They share only abelian-core and the group
// tables with the main engine; every complex here is assembled separately.
namespace stacky::oracle {

enum class Method : std::uint8_t { FullBar, PeriodicCyclic, BruteCocycle, Presentation };

std::string method_name(Method m);

struct OracleResult {
  std::string description;
  FinAbGroup value;
  Method method;
};

/// Default budget for oracle complexes: |G|^{n+1} at most this.
inline constexpr std::size_t kOracleCap = 200'000;

/// H^n(G, A) from the un-normalized standard complex on all n-tuples.
OracleResult full_bar_cohomology(const FiniteGroup& g, std::size_t n, const Coefficients& coeff,
                                 std::size_t cap = kOracleCap);

/// Closed forms for cyclic groups from the periodic resolution.
OracleResult cyclic_closed_form(std::uint64_t order, std::size_t degree, const Coefficients& coeff);

/// H^n(G, Z/m) for n <= 2 from counts of cocycles and coboundaries over each
/// prime power of m; cross-checked by exhaustive enumeration when the
/// cochain space has at most 2^20 elements.
OracleResult brute_cocycles(const FiniteGroup& g, std::size_t n, std::uint64_t m);

/// Hom(A, Z/r) for A = <a_i, b_i, gamma_j | n_j gamma_j, sum gamma_j> by
/// enumerating the images of the gamma_j.
OracleResult orbifold_h1(std::size_t genus, const std::vector<std::uint64_t>& orders,
                         std::uint64_t r);

/// The finite abelian group with the given multiset of element orders.
FinAbGroup group_from_element_orders(const std::vector<std::uint64_t>& orders);

} // namespace stacky::oracle
