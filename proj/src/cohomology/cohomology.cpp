#include "stacky/cohomology.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "stacky/error.hpp"

namespace stacky {

Coefficients Coefficients::cyclic(const Integer& m) {
  if (m < Integer(1)) fail(ErrorCode::Validation, "coefficient modulus must be positive");
  return {Kind::Cyclic, m, 0};
}

std::string Coefficients::to_string() const {
  switch (kind) {
  case Kind::Integers: return "Z";
  case Kind::Cyclic: return "Z/" + modulus.to_string();
  case Kind::Units: return "units";
  }
  return "?";
}

Coefficients Coefficients::parse(const std::string& text) {
  if (text == "Z") return integers();
  if (text == "units") return units();
  if (text.rfind("Z/", 0) == 0) {
    Integer m = Integer::parse(text.substr(2));
    if (m < Integer(1)) fail(ErrorCode::Parse, "coefficient modulus must be positive");
    return cyclic(m);
  }
  fail(ErrorCode::Parse, "unknown coefficients '" + text + "' (expected Z, Z/m or units)");
}

// ---------------------------------------------------------------------------

IntVector CohomologyGroup::classify(const IntVector& cochain) const {
  if (subquotient_) return subquotient_->classify(cochain);
  if (cokernel_) {
    IntVector all = cokernel_->coordinates(cochain);
    for (std::size_t k = torsion_count_; k < all.size(); ++k) {
      if (!all[k].is_zero()) fail(ErrorCode::NotChainCompatible, "cochain is not a cocycle");
    }
    all.resize(torsion_count_);
    return all;
  }
  // Degree zero with integer coefficients: constant cochains.
  if (cochain.size() != 1) fail(ErrorCode::Validation, "cochain has the wrong dimension");
  return cochain;
}

bool CohomologyGroup::is_coboundary(const IntVector& cochain) const {
  for (const auto& x : classify(cochain)) {
    if (!x.is_zero()) return false;
  }
  return true;
}

CohomologyGroup compute_cohomology(const FiniteGroup& g, std::size_t n, const Coefficients& coeff,
                                   const Limits& limits) {
  CohomologyGroup h;
  h.group_ = g;
  h.degree_ = n;
  h.coefficients_ = coeff;
  std::size_t k = n;
  if (coeff.kind == Coefficients::Kind::Units) {
    if (n == 0) fail(ErrorCode::Validation, "units cohomology is only defined here in degree >= 1");
    if (coeff.characteristic != 0 && g.order() % coeff.characteristic == 0) {
      fail(ErrorCode::Tameness, "characteristic " + std::to_string(coeff.characteristic) +
                                    " divides the group order " + std::to_string(g.order()));
    }
    k = n + 1;
  }
  h.cochain_degree_ = k;
  cochain_dim(g, k + 1, limits);

  if (coeff.kind == Coefficients::Kind::Cyclic) {
    h.cochain_modulus_ = coeff.modulus;
    IntegerMatrix d_out = bar_differential(g, k, limits);
    IntegerMatrix d_in = k == 0 ? IntegerMatrix(1, 0) : bar_differential(g, k - 1, limits);
    auto sq = std::make_shared<Subquotient>(homology_at(d_out, d_in, coeff.modulus, limits));
    h.value_ = sq->group();
    for (auto v : sq->lifts()) {
      for (auto& x : v) x = mod(x, coeff.modulus);
      h.representatives_.push_back(std::move(v));
    }
    h.subquotient_ = std::move(sq);
    return h;
  }

  if (k == 0) {
    h.value_ = FinAbGroup::free(1);
    h.representatives_.push_back(IntVector{Integer(1)});
    return h;
  }
  // For k >= 1, H^k(G, Z) is |G|-torsion, and it is exactly the torsion of
  // C^k / B^k because C^k / Z^k embeds in C^{k+1}.
  auto coker = std::make_shared<CokernelPresentation>(bar_differential(g, k - 1, limits), limits);
  const FinAbGroup& full = coker->group();
  h.torsion_count_ = full.invariant_factors().size();
  h.value_ = FinAbGroup(0, full.invariant_factors());
  for (std::size_t t = 0; t < h.torsion_count_; ++t) h.representatives_.push_back(coker->lift(t));
  if (!divides(h.value_.exponent(), Integer(static_cast<long long>(g.order())))) {
    fail(ErrorCode::Invariant, "integral cohomology exponent does not divide the group order");
  }
  h.cokernel_ = std::move(coker);
  return h;
}

namespace {

struct MemoKey {
  std::uint64_t hash;
  std::size_t degree;
  std::string coeff;
  auto operator<=>(const MemoKey&) const = default;
};

struct Memo {
  std::mutex mutex;
  std::multimap<MemoKey, std::shared_ptr<const CohomologyGroup>> entries;
};

Memo& memo() {
  static Memo m;
  return m;
}

std::string memo_coeff(const Coefficients& c) {
  return c.to_string() + "@" + std::to_string(c.characteristic);
}

} // namespace

std::shared_ptr<const CohomologyGroup> cohomology(const FiniteGroup& g, std::size_t n,
                                                  const Coefficients& coeff,
                                                  const Limits& limits) {
  std::size_t k = n + (coeff.kind == Coefficients::Kind::Units ? 1 : 0);
  if (coeff.kind == Coefficients::Kind::Units) {
    if (n == 0) fail(ErrorCode::Validation, "units cohomology is only defined here in degree >= 1");
    if (coeff.characteristic != 0 && g.order() % coeff.characteristic == 0) {
      fail(ErrorCode::Tameness, "characteristic " + std::to_string(coeff.characteristic) +
                                    " divides the group order " + std::to_string(g.order()));
    }
  }
  cochain_dim(g, k + 1, limits);
  MemoKey key{g.table_hash(), n, memo_coeff(coeff)};
  {
    std::lock_guard lock(memo().mutex);
    auto [lo, hi] = memo().entries.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->second->group() == g) return it->second;
    }
  }
  auto result = std::make_shared<const CohomologyGroup>(compute_cohomology(g, n, coeff, limits));
  std::lock_guard lock(memo().mutex);
  auto [lo, hi] = memo().entries.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    if (it->second->group() == g) return it->second;
  }
  memo().entries.emplace(key, result);
  return result;
}

void clear_cohomology_cache() {
  std::lock_guard lock(memo().mutex);
  memo().entries.clear();
}

CohomologyGroup cohomology_Z(const FiniteGroup& g, std::size_t n, const Limits& limits) {
  return *cohomology(g, n, Coefficients::integers(), limits);
}

CohomologyGroup cohomology_Zm(const FiniteGroup& g, std::size_t n, const Integer& m,
                              const Limits& limits) {
  return *cohomology(g, n, Coefficients::cyclic(m), limits);
}

CohomologyGroup cohomology_units(const FiniteGroup& g, std::size_t n, std::uint64_t characteristic,
                                 const Limits& limits) {
  return *cohomology(g, n, Coefficients::units(characteristic), limits);
}

// ---------------------------------------------------------------------------

namespace {

AbGroupMap pullback_map(const GroupHom& phi, std::size_t n, const Coefficients& coeff,
                        const Limits& limits) {
  auto src = cohomology(phi.target(), n, coeff, limits);
  auto dst = cohomology(phi.source(), n, coeff, limits);
  const std::size_t gens = src->value().generator_count();
  IntegerMatrix m(dst->value().generator_count(), gens);
  for (std::size_t k = 0; k < gens; ++k) {
    IntVector pulled = pullback(phi, src->cochain_degree(), src->representatives()[k]);
    m.set_column(k, to_sparse(dst->classify(pulled)));
  }
  return AbGroupMap(src->value(), dst->value(), std::move(m));
}

} // namespace

AbGroupMap inflation_map(const GroupHom& q, std::size_t n, const Coefficients& coeff,
                         const Limits& limits) {
  if (!q.is_surjective()) fail(ErrorCode::Validation, "inflation needs a surjective homomorphism");
  return pullback_map(q, n, coeff, limits);
}

AbGroupMap restriction_map(const GroupHom& i, std::size_t n, const Coefficients& coeff,
                           const Limits& limits) {
  if (!i.is_injective()) fail(ErrorCode::Validation, "restriction needs an injective homomorphism");
  return pullback_map(i, n, coeff, limits);
}

IntVector bockstein(const FiniteGroup& g, std::size_t n, std::int64_t r, const IntVector& cocycle,
                    const Limits& limits) {
  if (r < 1) fail(ErrorCode::Validation, "Bockstein modulus must be positive");
  const Integer rr(static_cast<long long>(r));
  IntVector lift = cocycle;
  for (auto& x : lift) x = mod(x, rr);
  IntVector d = bar_differential(g, n, limits).apply(lift);
  for (auto& x : d) {
    if (!divides(rr, x)) fail(ErrorCode::Invariant, "coboundary of a mod-r cocycle lift is not divisible by r");
    x = divexact(x, rr);
  }
  return cohomology(g, n + 1, Coefficients::integers(), limits)->classify(d);
}

IntVector bockstein_r(const Cocycle2& c, const Limits& limits) {
  return bockstein(c.base(), 2, c.modulus(), to_cochain(c), limits);
}

std::vector<Cocycle2> enumerate_extension_classes(const FiniteGroup& g, std::int64_t r,
                                                  const Limits& limits) {
  auto h = cohomology(g, 2, Coefficients::cyclic(Integer(static_cast<long long>(r))), limits);
  const FinAbGroup& value = h->value();
  const Integer count = value.order();
  const std::size_t dim = (g.order() - 1) * (g.order() - 1);
  if (count > Integer(static_cast<long long>(limits.max_entries / std::max<std::size_t>(dim, 1)))) {
    fail(ErrorCode::ResourceCap, "too many extension classes to enumerate");
  }
  const std::size_t gens = value.generator_count();
  std::vector<std::int64_t> coeffs(gens, 0);
  std::vector<Cocycle2> out;
  const Integer rr(static_cast<long long>(r));
  while (true) {
    IntVector sum(dim);
    for (std::size_t k = 0; k < gens; ++k) {
      if (coeffs[k] == 0) continue;
      for (std::size_t i = 0; i < dim; ++i) sum[i] += Integer(static_cast<long long>(coeffs[k])) * h->representatives()[k][i];
    }
    for (auto& x : sum) x = mod(x, rr);
    out.push_back(to_cocycle2(g, r, sum));
    std::size_t k = gens;
    while (k-- > 0) {
      if (++coeffs[k] < value.generator_order(k).to_int64()) break;
      coeffs[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

} // namespace stacky
