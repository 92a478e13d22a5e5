#include "stacky/curve.hpp"

#include <future>
#include <numeric>
#include <set>

#include "stacky/error.hpp"

namespace stacky {

void CurveSpec::validate(std::int64_t r) const {
  if (!connected) fail(ErrorCode::Validation, "disconnected curves are not supported");
  if (r < 0) fail(ErrorCode::Validation, "gerbe order r must be positive");
  if (smooth && proper && !coarse_genus) fail(ErrorCode::Validation, "a smooth proper curve needs its coarse genus");
  const std::uint64_t p = characteristic;
  if (p == 1) fail(ErrorCode::Validation, "characteristic must be 0 or a prime");
  if (p != 0 && r > 0 && static_cast<std::uint64_t>(r) % p == 0) {
    fail(ErrorCode::Tameness, "characteristic " + std::to_string(p) + " divides r = " + std::to_string(r));
  }
  std::set<std::string> names;
  for (const auto& pt : points) {
    if (!names.insert(pt.name).second) fail(ErrorCode::Validation, "duplicate point name '" + pt.name + "'");
    if (smooth && pt.singular) fail(ErrorCode::Validation, "singular point '" + pt.name + "' on a smooth curve");
    if (!pt.singular && !is_cyclic(pt.group)) {
      fail(ErrorCode::Validation, "non-cyclic stabilizer at smooth point '" + pt.name + "'");
    }
    if (p != 0 && pt.group.order() % p == 0) {
      fail(ErrorCode::Tameness, "characteristic " + std::to_string(p) + " divides the stabilizer order " +
                                    std::to_string(pt.group.order()) + " at '" + pt.name + "'");
    }
    if (pt.extension) {
      if (!(pt.extension->base() == pt.group)) {
        fail(ErrorCode::Validation, "extension at '" + pt.name + "' is over a different group");
      }
      if (r > 0 && pt.extension->modulus() != r) {
        fail(ErrorCode::Validation, "extension at '" + pt.name + "' has modulus " +
                                        std::to_string(pt.extension->modulus()) + ", expected r = " + std::to_string(r));
      }
    }
  }
}

FinAbGroup stacky_units_cohomology(const CurveSpec& c, std::size_t k, const Limits& limits) {
  if (k < 2) fail(ErrorCode::Validation, "stacky units cohomology is computed here for k >= 2");
  c.validate();
  std::vector<FinAbGroup> parts;
  for (const auto& pt : c.points) parts.push_back(cohomology(pt.group, k, Coefficients::units(c.characteristic), limits)->value());
  return direct_sum(parts);
}

std::string h1_source_name(H1Source s) {
  switch (s) {
  case H1Source::StackPresentation: return "stack-presentation";
  case H1Source::StackOverride: return "stack-override";
  case H1Source::CoarseSmooth: return "coarse-smooth";
  case H1Source::CoarseOverride: return "coarse-override";
  }
  return "?";
}

H1Value h1_stack_zr(const CurveSpec& c, std::int64_t r) {
  if (r < 1) fail(ErrorCode::Validation, "r must be positive");
  if (c.h1_stack) return {*c.h1_stack, H1Source::StackOverride};
  if (!(c.smooth && c.proper) || !c.coarse_genus) {
    fail(ErrorCode::MissingH1, "H^1 of a singular or non-proper stacky curve must be supplied");
  }
  // A = <a_i, b_i, gamma_j | n_j gamma_j, sum gamma_j>.
  const std::size_t g = *c.coarse_genus, n = c.points.size();
  IntegerMatrix rel(2 * g + n, 0);
  SparseVector sum;
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = static_cast<std::uint32_t>(2 * g + j);
    rel.append_column({{row, Integer(static_cast<unsigned long long>(c.points[j].group.order()))}});
    sum.push_back({row, Integer(1)});
  }
  if (n > 0) rel.append_column(std::move(sum));
  return {hom_to_cyclic(cokernel(rel), Integer(r)), H1Source::StackPresentation};
}

H1Value h1_coarse_zr(const CurveSpec& c, std::int64_t r) {
  if (r < 1) fail(ErrorCode::Validation, "r must be positive");
  if (c.h1_coarse) return {*c.h1_coarse, H1Source::CoarseOverride};
  if (!(c.smooth && c.proper) || !c.coarse_genus) {
    fail(ErrorCode::MissingH1, "H^1 of a singular or non-proper coarse curve must be supplied");
  }
  return {direct_sum(std::vector<FinAbGroup>(2 * *c.coarse_genus, FinAbGroup::cyclic(Integer(r)))),
          H1Source::CoarseSmooth};
}

FinAbGroup local_gerbe_classification(const CurveSpec& c, std::int64_t r, const Limits& limits) {
  c.validate(r);
  std::vector<FinAbGroup> parts;
  for (const auto& pt : c.points) parts.push_back(cohomology(pt.group, 2, Coefficients::cyclic(Integer(r)), limits)->value());
  return direct_sum(parts);
}

namespace {

struct LeftTerms {
  FinAbGroup term, kernel, image;
};

// The kernel of sum H^2(G_i, k^x) -> H^2(gerbe, G_m) is generated by the
// tuple of Bockstein classes.
LeftTerms left_terms(const std::vector<FinAbGroup>& parts, const std::vector<IntVector>& tuple) {
  LeftTerms out;
  out.term = direct_sum(parts);
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.generator_count();
  IntegerMatrix rel(rows, 0);
  SparseVector gen;
  Integer order(1);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t k = 0; k < parts[i].generator_count(); ++k) {
      const auto row = static_cast<std::uint32_t>(offset + k);
      rel.append_column({{row, parts[i].generator_order(k)}});
      Integer x = mod(tuple[i][k], parts[i].generator_order(k));
      if (!x.is_zero()) gen.push_back({row, x});
    }
    order = lcm(order, parts[i].element_order(tuple[i]));
    offset += parts[i].generator_count();
  }
  rel.append_column(std::move(gen));
  out.kernel = FinAbGroup::cyclic(order);
  out.image = cokernel(rel);
  return out;
}

std::vector<Cocycle2> point_extensions(const CurveSpec& c, std::int64_t r) {
  std::vector<Cocycle2> out;
  for (const auto& pt : c.points) out.push_back(pt.extension ? *pt.extension : Cocycle2::zero(pt.group, r));
  return out;
}

LeftTerms left_terms_for(const CurveSpec& c, std::int64_t r, const Limits& limits) {
  c.validate(r);
  std::vector<FinAbGroup> parts;
  std::vector<IntVector> tuple;
  for (const auto& e : point_extensions(c, r)) {
    parts.push_back(cohomology(e.base(), 2, Coefficients::units(c.characteristic), limits)->value());
    tuple.push_back(bockstein_r(e, limits));
  }
  return left_terms(parts, tuple);
}

} // namespace

FinAbGroup left_kernel(const CurveSpec& c, std::int64_t r, const Limits& limits) {
  return left_terms_for(c, r, limits).kernel;
}

FinAbGroup left_image(const CurveSpec& c, std::int64_t r, const Limits& limits) {
  return left_terms_for(c, r, limits).image;
}

std::string splitting_name(Splitting s) {
  switch (s) {
  case Splitting::Coprime: return "coprime";
  case Splitting::Sections: return "sections";
  case Splitting::SmoothShortcut: return "smooth-shortcut";
  case Splitting::Unknown: return "unknown";
  }
  return "?";
}

std::string path_name(ReportPath p) {
  switch (p) {
  case ReportPath::Smooth: return "smooth";
  case ReportPath::Coprime: return "coprime";
  case ReportPath::General: return "general";
  }
  return "?";
}

BrauerReport brauer_report(const CurveSpec& c, std::int64_t r, const BrauerOptions& options) {
  if (r < 1) fail(ErrorCode::Validation, "gerbe order r must be positive");
  c.validate(r);
  BrauerReport rep;
  rep.r = r;

  FiberOptions fopts;
  fopts.limits = options.limits;
  fopts.use_shortcuts = options.use_shortcuts;
  fopts.characteristic = c.characteristic;
  const auto extensions = point_extensions(c, r);
  if (options.parallel && extensions.size() > 1) {
    std::vector<std::future<FiberDiagnostics>> jobs;
    for (const auto& e : extensions) {
      jobs.push_back(std::async(std::launch::async, [e, fopts] { return analyze_fiber(CentralExtension(e), fopts); }));
    }
    for (auto& j : jobs) rep.fibers.push_back(j.get());
  } else {
    for (const auto& e : extensions) rep.fibers.push_back(analyze_fiber(CentralExtension(e), fopts));
  }

  std::vector<FinAbGroup> parts;
  std::vector<IntVector> tuple;
  bool all_root = true, all_sections = true, any_false = false, any_unknown = false;
  for (const auto& f : rep.fibers) {
    parts.push_back(f.h2_units_base);
    tuple.push_back(f.bockstein_class);
    all_root = all_root && f.is_root_gerbe;
    all_sections = all_sections && f.h2_section_exists;
    if (!f.h3_inflation_injective) any_unknown = true;
    else if (!*f.h3_inflation_injective) any_false = true;
  }
  auto left = left_terms(parts, tuple);
  rep.left_term = left.term;
  rep.left_kernel = left.kernel;
  rep.left_image = left.image;
  rep.is_root_gerbe = all_root;
  if (rep.is_root_gerbe != rep.left_kernel.is_trivial()) {
    fail(ErrorCode::Invariant, "root-gerbe flags disagree with the left kernel");
  }
  if (any_false) rep.right_exact = false;
  else if (!any_unknown) rep.right_exact = true;

  rep.local_classes = local_gerbe_classification(c, r, options.limits);
  rep.notes.push_back("local_classes: the kernel of the map to it is a quotient of H^2(C, mu_r), not computed");

  bool coprime = true;
  for (const auto& pt : c.points) coprime = coprime && std::gcd(pt.group.order(), static_cast<std::size_t>(r)) == 1;

  auto partial = [&](const std::string& why) {
    rep.determined = false;
    rep.splitting = Splitting::Unknown;
    rep.partial_subgroup = rep.left_image;
    rep.partial_quotient_bound = rep.right_term;
    rep.notes.push_back(why);
  };

  if (options.use_shortcuts && c.smooth) {
    rep.path = ReportPath::Smooth;
    auto h1 = h1_stack_zr(c, r);
    rep.right_term = h1.value;
    rep.right_term_source = h1.source;
    if (rep.right_exact == std::optional<bool>(false)) {
      partial("smooth shortcut not applied: some fiber has non-injective H^3 inflation");
    } else if (!rep.right_exact) {
      partial("smooth shortcut not applied: H^3 inflation undetermined for some fiber");
    } else {
      rep.determined = true;
      rep.splitting = Splitting::SmoothShortcut;
      rep.result = rep.right_term;
    }
    return rep;
  }

  if (options.use_shortcuts && coprime) {
    rep.path = ReportPath::Coprime;
    H1Value h1{};
    try {
      h1 = h1_coarse_zr(c, r);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::MissingH1 || !c.h1_stack) throw;
      h1 = h1_stack_zr(c, r);
      rep.notes.push_back("coarse H^1 not supplied; using the stack H^1, equal in the coprime case");
    }
    rep.right_term = h1.value;
    rep.right_term_source = h1.source;
    rep.determined = true;
    rep.splitting = Splitting::Coprime;
    rep.result = direct_sum(rep.right_term, rep.left_term);
    return rep;
  }

  rep.path = ReportPath::General;
  auto h1 = h1_stack_zr(c, r);
  rep.right_term = h1.value;
  rep.right_term_source = h1.source;
  if (rep.right_exact == std::optional<bool>(true)) {
    if (all_root && all_sections) {
      rep.determined = true;
      rep.splitting = Splitting::Sections;
      rep.result = direct_sum(rep.left_term, rep.right_term);
    } else {
      partial("sequence is short exact but no splitting certificate");
    }
  } else if (rep.right_exact == std::optional<bool>(false)) {
    partial("H^3 inflation is not injective at some fiber; right exactness unavailable");
  } else {
    partial("H^3 inflation undetermined for some fiber (resource cap)");
  }
  return rep;
}

} // namespace stacky
