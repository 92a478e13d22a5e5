#include "stacky/abelian.hpp"

#include "stacky/error.hpp"

namespace stacky {

namespace {

SmithDecomposition decompose(const IntegerMatrix& m, bool rows, bool cols, const Limits& limits) {
  SmithOptions opt;
  opt.track_rows = rows;
  opt.track_columns = cols;
  opt.limits = limits;
  return smith_decompose(m, opt);
}

void check_dim(const IntVector& y, std::size_t n, const char* what) {
  if (y.size() != n) fail(ErrorCode::Validation, std::string("dimension mismatch in ") + what);
}

} // namespace

// ---------------------------------------------------------------------------
// Cokernels

CokernelPresentation::CokernelPresentation(const IntegerMatrix& m, const Limits& limits)
    : ambient_(m.rows()) {
  auto snf = std::make_shared<SmithDecomposition>(decompose(m, true, false, limits));
  std::vector<Integer> torsion;
  for (std::size_t k = 0; k < snf->rank(); ++k) {
    if (!snf->diagonal()[k].is_one()) {
      positions_.push_back(k);
      torsion.push_back(snf->diagonal()[k]);
    }
  }
  for (std::size_t k = snf->rank(); k < m.rows(); ++k) positions_.push_back(k);
  group_ = FinAbGroup(m.rows() - snf->rank(), std::move(torsion));
  snf_ = std::move(snf);
}

IntVector CokernelPresentation::coordinates(const IntVector& y) const {
  check_dim(y, ambient_, "cokernel coordinates");
  IntVector z = snf_->apply_u(y);
  IntVector out(positions_.size());
  for (std::size_t g = 0; g < positions_.size(); ++g) out[g] = std::move(z[positions_[g]]);
  return group_.reduce(std::move(out));
}

IntVector CokernelPresentation::lift(std::size_t k) const {
  IntVector e(ambient_);
  e.at(positions_.at(k)) = Integer(1);
  return snf_->apply_u_inverse(e);
}

FinAbGroup cokernel(const IntegerMatrix& m, const Limits& limits) {
  auto snf = decompose(m, false, false, limits);
  std::vector<Integer> orders(snf.diagonal());
  orders.resize(m.rows(), Integer(0));
  return FinAbGroup::from_cyclic_orders(orders);
}

// ---------------------------------------------------------------------------
// Subquotients

Subquotient::Subquotient(const IntegerMatrix& cycles, const IntegerMatrix& boundaries,
                         const Limits& limits)
    : ambient_(cycles.rows()) {
  if (boundaries.rows() != ambient_) fail(ErrorCode::Validation, "subquotient dimension mismatch");
  cycle_snf_ = std::make_shared<SmithDecomposition>(decompose(cycles, true, false, limits));
  const std::size_t rho = cycle_snf_->rank();

  IntegerMatrix reduced(rho, 0);
  for (std::size_t j = 0; j < boundaries.cols(); ++j) {
    auto w = cycle_coordinates(to_dense(boundaries.column(j), ambient_));
    if (!w) fail(ErrorCode::CompositionNonzero, "boundary lattice is not contained in the cycle lattice");
    reduced.append_column(to_sparse(*w));
  }
  quotient_ = CokernelPresentation(reduced, limits);

  const auto& s = cycle_snf_->diagonal();
  for (std::size_t k = 0; k < quotient_.group().generator_count(); ++k) {
    IntVector w = quotient_.lift(k);
    IntVector z(ambient_);
    for (std::size_t i = 0; i < rho; ++i) z[i] = s[i] * w[i];
    lifts_.push_back(cycle_snf_->apply_u_inverse(z));
  }
}

std::optional<IntVector> Subquotient::cycle_coordinates(const IntVector& y) const {
  check_dim(y, ambient_, "subquotient");
  IntVector z = cycle_snf_->apply_u(y);
  const auto& s = cycle_snf_->diagonal();
  for (std::size_t i = s.size(); i < z.size(); ++i) {
    if (!z[i].is_zero()) return std::nullopt;
  }
  IntVector w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!divides(s[i], z[i])) return std::nullopt;
    w[i] = divexact(z[i], s[i]);
  }
  return w;
}

IntVector Subquotient::classify(const IntVector& y) const {
  auto w = cycle_coordinates(y);
  if (!w) fail(ErrorCode::NotChainCompatible, "vector is not a cycle");
  return quotient_.coordinates(*w);
}

bool Subquotient::is_boundary(const IntVector& y) const {
  auto c = classify(y);
  for (const auto& x : c) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Subquotient homology_at(const IntegerMatrix& d_out, const IntegerMatrix& d_in,
                        const Integer& modulus, const Limits& limits) {
  if (d_out.cols() != d_in.rows()) fail(ErrorCode::Validation, "differentials are not composable");
  if (modulus.sign() < 0) fail(ErrorCode::Validation, "negative modulus");
  const std::size_t n = d_in.rows();
  if (d_out.nonzeros() + d_in.nonzeros() > limits.max_entries) {
    fail(ErrorCode::ResourceCap, "differentials exceed the entry budget");
  }

  IntegerMatrix comp = d_out * d_in;
  for (std::size_t j = 0; j < comp.cols(); ++j) {
    for (const auto& e : comp.column(j)) {
      if (modulus.is_zero() || !divides(modulus, e.value)) {
        fail(ErrorCode::CompositionNonzero, "d_out * d_in is not zero");
      }
    }
  }

  auto out = decompose(d_out, false, true, limits);
  IntegerMatrix cycles(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < out.rank()) {
      if (modulus.is_zero()) continue;
      Integer factor = divexact(modulus, gcd(out.diagonal()[k], modulus));
      IntVector v = out.v_column(k);
      for (auto& x : v) x *= factor;
      cycles.append_column(to_sparse(v));
    } else {
      cycles.append_column(to_sparse(out.v_column(k)));
    }
  }

  IntegerMatrix boundaries = d_in;
  if (!modulus.is_zero()) {
    for (std::size_t i = 0; i < n; ++i) {
      boundaries.append_column({{static_cast<std::uint32_t>(i), modulus}});
    }
  }
  return Subquotient(cycles, boundaries, limits);
}

// ---------------------------------------------------------------------------
// Homomorphisms

AbGroupMap::AbGroupMap(FinAbGroup source, FinAbGroup target, IntegerMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)) {
  if (matrix.rows() != target_.generator_count() || matrix.cols() != source_.generator_count()) {
    fail(ErrorCode::Validation, "homomorphism matrix has the wrong shape");
  }
  IntegerMatrix reduced(matrix.rows(), matrix.cols());
  for (std::size_t k = 0; k < matrix.cols(); ++k) {
    Integer dk = source_.generator_order(k);
    SparseVector col;
    for (const auto& e : matrix.column(k)) {
      Integer tl = target_.generator_order(e.index);
      Integer v = tl.is_zero() ? e.value : mod(e.value, tl);
      if (v.is_zero()) continue;
      if (!dk.is_zero() && (tl.is_zero() || !divides(tl, dk * v))) {
        fail(ErrorCode::Validation, "homomorphism does not respect generator orders");
      }
      col.push_back({e.index, std::move(v)});
    }
    reduced.set_column(k, std::move(col));
  }
  matrix_ = std::move(reduced);
}

AbGroupMap AbGroupMap::identity(const FinAbGroup& g) {
  return AbGroupMap(g, g, IntegerMatrix::identity(g.generator_count()));
}

AbGroupMap AbGroupMap::zero(const FinAbGroup& source, const FinAbGroup& target) {
  return AbGroupMap(source, target,
                    IntegerMatrix(target.generator_count(), source.generator_count()));
}

IntVector AbGroupMap::apply(const IntVector& coords) const {
  check_dim(coords, source_.generator_count(), "homomorphism application");
  return target_.reduce(matrix_.apply(coords));
}

AbGroupMap compose(const AbGroupMap& g, const AbGroupMap& f) {
  if (!(g.source() == f.target())) fail(ErrorCode::Validation, "maps are not composable");
  return AbGroupMap(f.source(), g.target(), g.matrix() * f.matrix());
}

AbGroupMap induced_map(const IntegerMatrix& ambient, const Subquotient& source,
                       const Subquotient& target) {
  if (ambient.cols() != source.ambient_dim() || ambient.rows() != target.ambient_dim()) {
    fail(ErrorCode::Validation, "ambient map has the wrong shape");
  }
  const std::size_t n = source.group().generator_count();
  IntegerMatrix m(target.group().generator_count(), n);
  for (std::size_t k = 0; k < n; ++k) {
    m.set_column(k, to_sparse(target.classify(ambient.apply(source.lifts()[k]))));
  }
  // Well-definedness: relations among the generators must map to zero.
  for (std::size_t k = 0; k < n; ++k) {
    Integer d = source.group().generator_order(k);
    if (d.is_zero()) continue;
    IntVector x = source.lifts()[k];
    for (auto& v : x) v *= d;
    if (!target.is_boundary(ambient.apply(x))) {
      fail(ErrorCode::NotChainCompatible, "ambient map does not preserve boundaries");
    }
  }
  try {
    return AbGroupMap(source.group(), target.group(), std::move(m));
  } catch (const Error&) {
    fail(ErrorCode::NotChainCompatible, "ambient map does not induce a homomorphism");
  }
}

namespace {

// Columns diag(t_l) for the torsion generators of g.
IntegerMatrix relation_matrix(const FinAbGroup& g, const Integer& sign) {
  IntegerMatrix r(g.generator_count(), 0);
  for (std::size_t l = 0; l < g.invariant_factors().size(); ++l) {
    r.append_column({{static_cast<std::uint32_t>(l), sign * g.invariant_factors()[l]}});
  }
  return r;
}

} // namespace

FinAbGroup kernel(const AbGroupMap& f, const Limits& limits) {
  const std::size_t a = f.source().generator_count();
  IntegerMatrix big = f.matrix().hcat(relation_matrix(f.target(), Integer(-1)));
  auto snf = decompose(big, false, true, limits);
  IntegerMatrix lattice(a, 0);
  for (std::size_t k = snf.rank(); k < big.cols(); ++k) {
    IntVector v = snf.v_column(k);
    v.resize(a);
    lattice.append_column(to_sparse(v));
  }
  return Subquotient(lattice, relation_matrix(f.source(), Integer(1)), limits).group();
}

FinAbGroup cokernel(const AbGroupMap& f, const Limits& limits) {
  return cokernel(f.matrix().hcat(relation_matrix(f.target(), Integer(1))), limits);
}

bool is_injective(const AbGroupMap& f, const Limits& limits) {
  return kernel(f, limits).is_trivial();
}

bool is_surjective(const AbGroupMap& f, const Limits& limits) {
  return cokernel(f, limits).is_trivial();
}

std::optional<AbGroupMap> left_inverse(const AbGroupMap& f, const Limits& limits) {
  const FinAbGroup& A = f.source();
  const FinAbGroup& B = f.target();
  const std::size_t a = A.generator_count();
  const std::size_t b = B.generator_count();
  const std::size_t nt = B.invariant_factors().size();

  // Row k of g solves, modulo d_k:  t_l g_kl = 0  and  sum_l g_kl f_lk' = delta_kk'.
  IntegerMatrix g(b, a); // built transposed, one column per row of g
  for (std::size_t k = 0; k < a; ++k) {
    Integer dk = A.generator_order(k);
    const std::size_t eqs = nt + a;
    std::vector<IntegerMatrix::Triplet> trip;
    IntVector rhs(eqs);
    for (std::size_t l = 0; l < nt; ++l) {
      trip.push_back({static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(l),
                      B.invariant_factors()[l]});
    }
    for (std::size_t kp = 0; kp < a; ++kp) {
      for (const auto& e : f.matrix().column(kp)) {
        trip.push_back({static_cast<std::uint32_t>(nt + kp), e.index, e.value});
      }
      if (kp == k) rhs[nt + kp] = Integer(1);
    }
    std::size_t unknowns = b;
    if (!dk.is_zero()) {
      for (std::size_t e = 0; e < eqs; ++e) {
        trip.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(b + e), dk});
      }
      unknowns += eqs;
    }
    auto sol = solve_integer_system(IntegerMatrix::from_triplets(eqs, unknowns, std::move(trip)),
                                    rhs, limits);
    if (!sol) return std::nullopt;
    sol->resize(b);
    g.set_column(k, to_sparse(*sol));
  }
  return AbGroupMap(B, A, g.transpose());
}

bool is_split_injection(const AbGroupMap& f, const Limits& limits) {
  return left_inverse(f, limits).has_value();
}

std::optional<IntVector> solve_integer_system(const IntegerMatrix& a, const IntVector& c,
                                              const Limits& limits) {
  check_dim(c, a.rows(), "integer system");
  auto snf = decompose(a, true, true, limits);
  IntVector w = snf.apply_u(c);
  const auto& s = snf.diagonal();
  for (std::size_t i = s.size(); i < w.size(); ++i) {
    if (!w[i].is_zero()) return std::nullopt;
  }
  IntVector y(a.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!divides(s[i], w[i])) return std::nullopt;
    Integer q = divexact(w[i], s[i]);
    if (q.is_zero()) continue;
    IntVector v = snf.v_column(i);
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!v[j].is_zero()) y[j] += q * v[j];
    }
  }
  return y;
}

} // namespace stacky
