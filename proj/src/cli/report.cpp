#include <sstream>

#include "stacky/cli.hpp"
#include "stacky/error.hpp"
#include "stacky/oracle.hpp"

namespace stacky::cli {

namespace {

std::string tri(const std::optional<bool>& v) {
  if (!v) return "undetermined";
  return *v ? "true" : "false";
}

std::string flag(bool v) { return v ? "true" : "false"; }

ReportDocument header(const std::string& command) {
  ReportDocument rep;
  rep.add("format_version", std::to_string(kFormatVersion));
  rep.add("command", command);
  return rep;
}

// Oracle cross-checks; a check whose oracle exceeds its own budget is
// counted as skipped rather than passed.
class Verifier {
public:
  void expect(const std::string& what, const FinAbGroup& engine, const FinAbGroup& oracle) {
    check(engine == oracle, what + ": engine gives " + engine.to_string() + ", oracle gives " + oracle.to_string());
  }

  void check(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::VerifyMismatch, what);
    ++passed_;
  }

  template <class F>
  void attempt(F&& f) {
    try {
      f();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ResourceCap) throw;
      ++skipped_;
    }
  }

  void add_to(ReportDocument& rep) const {
    rep.add("verify.passed", std::to_string(passed_));
    rep.add("verify.skipped", std::to_string(skipped_));
  }

private:
  std::size_t passed_ = 0;
  std::size_t skipped_ = 0;
};

void verify_group(Verifier& v, const FiniteGroup& g, std::size_t n, const Coefficients& coeff, const FinAbGroup& value,
                  const std::string& label) {
  v.attempt([&] { v.expect(label + " full bar", value, oracle::full_bar_cohomology(g, n, coeff).value); });
  if (is_cyclic(g)) {
    v.expect(label + " closed form", value, oracle::cyclic_closed_form(g.order(), n, coeff).value);
  }
  if (n <= 2 && coeff.kind == Coefficients::Kind::Cyclic && g.order() <= 16 && coeff.modulus.fits_int64()) {
    v.attempt([&] {
      v.expect(label + " cocycle count", value,
               oracle::brute_cocycles(g, n, static_cast<std::uint64_t>(coeff.modulus.to_int64())).value);
    });
  }
}

bool same_outcome(const BrauerReport& a, const BrauerReport& b) {
  if (a.determined != b.determined) return false;
  if (a.determined) return a.result == b.result;
  return a.partial_subgroup == b.partial_subgroup && a.partial_quotient_bound == b.partial_quotient_bound;
}

void verify_brauer(Verifier& v, const CurveSpec& c, std::int64_t r, const BrauerReport& rep, const Limits& limits) {
  const auto units = Coefficients::units(c.characteristic);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& pt = c.points[i];
    const std::string at = "point '" + pt.name + "'";
    verify_group(v, pt.group, 2, units, rep.fibers[i].h2_units_base, at + " H^2 units");
    verify_group(v, pt.group, 2, Coefficients::cyclic(Integer(r)),
                 cohomology(pt.group, 2, Coefficients::cyclic(Integer(r)), limits)->value(), at + " H^2 Z/r");
  }
  if (rep.right_term_source == H1Source::StackPresentation) {
    std::vector<std::uint64_t> orders;
    for (const auto& pt : c.points) orders.push_back(pt.group.order());
    v.attempt([&] {
      v.expect("stack H^1", rep.right_term,
               oracle::orbifold_h1(*c.coarse_genus, orders, static_cast<std::uint64_t>(r)).value);
    });
  }
  if (rep.path != ReportPath::General) {
    BrauerOptions general;
    general.limits = limits;
    general.use_shortcuts = false;
    v.check(same_outcome(rep, brauer_report(c, r, general)), "shortcut path and general path disagree");
  }
}

void add_fiber(ReportDocument& doc, const std::string& name, const FiberDiagnostics& f) {
  const std::string p = "fiber." + name + ".";
  doc.add(p + "group_order", std::to_string(f.extension.base().order()));
  doc.add(p + "split", flag(f.split));
  doc.add(p + "h2_units_base", f.h2_units_base.to_string());
  doc.add(p + "h2_units_total", f.h2_units_total ? f.h2_units_total->to_string() : "undetermined");
  doc.add(p + "bockstein", f.bockstein_text());
  doc.add(p + "is_root_gerbe", flag(f.is_root_gerbe));
  doc.add(p + "root_gerbe_via_inflation", tri(f.root_gerbe_via_inflation));
  doc.add(p + "h3_inflation_injective", tri(f.h3_inflation_injective));
  doc.add(p + "h2_section_exists", flag(f.h2_section_exists));
  doc.add(p + "note_count", std::to_string(f.notes.size()));
  for (std::size_t i = 0; i < f.notes.size(); ++i) doc.add(p + "note." + std::to_string(i), f.notes[i]);
}

} // namespace

std::string ReportDocument::text() const {
  std::string s;
  for (const auto& [k, v] : entries) s += k + " = " + v + "\n";
  return s;
}

int ReportDocument::exit_code() const {
  if (status == "determined") return 0;
  if (status == "partial") return 2;
  return 1;
}

ReportDocument error_report(const std::string& input_hash, const Error& e) {
  auto rep = header("brauer");
  rep.add("input_hash", input_hash);
  rep.status = "error";
  rep.add("status", rep.status);
  rep.add("error.code", std::string(error_code_name(e.code())));
  rep.add("error.message", e.what());
  return rep;
}

ReportDocument run_brauer(const InputDocument& input, const std::string& input_hash, const RunOptions& options) {
  try {
    InputDocument doc = input;
    if (options.characteristic) doc.characteristic = *options.characteristic;
    const CurveSpec c = to_curve(doc);
    BrauerOptions bopts;
    bopts.limits = options.limits;
    bopts.use_shortcuts = options.use_shortcuts;
    const BrauerReport br = brauer_report(c, doc.r, bopts);

    Verifier v;
    if (options.verify) verify_brauer(v, c, doc.r, br, options.limits);

    auto rep = header("brauer");
    rep.add("input_hash", input_hash);
    rep.status = br.determined ? "determined" : "partial";
    rep.add("status", rep.status);
    rep.add("r", std::to_string(br.r));
    rep.add("characteristic", std::to_string(c.characteristic));
    rep.add("path", path_name(br.path));
    rep.add("result", br.determined ? br.result.to_string() : "undetermined");
    rep.add("partial.subgroup", br.determined ? "none" : br.partial_subgroup.to_string());
    rep.add("partial.quotient_bound", br.determined ? "none" : br.partial_quotient_bound.to_string());
    rep.add("left_term", br.left_term.to_string());
    rep.add("left_kernel", br.left_kernel.to_string());
    rep.add("left_image", br.left_image.to_string());
    rep.add("right_term", br.right_term.to_string());
    rep.add("right_term_source", h1_source_name(br.right_term_source));
    rep.add("local_classes", br.local_classes.to_string());
    rep.add("is_root_gerbe", flag(br.is_root_gerbe));
    rep.add("right_exact", tri(br.right_exact));
    rep.add("splitting", splitting_name(br.splitting));
    rep.add("coarse_class", doc.coarse_class.value_or("none"));
    rep.add("fiber_count", std::to_string(br.fibers.size()));
    for (std::size_t i = 0; i < br.fibers.size(); ++i) add_fiber(rep, c.points[i].name, br.fibers[i]);
    rep.add("note_count", std::to_string(br.notes.size()));
    for (std::size_t i = 0; i < br.notes.size(); ++i) rep.add("note." + std::to_string(i), br.notes[i]);
    rep.add("verify", flag(options.verify));
    if (options.verify) v.add_to(rep);
    return rep;
  } catch (const Error& e) {
    return error_report(input_hash, e);
  }
}

ReportDocument run_cohomology(const std::string& group_spec, std::size_t degree, const std::string& coeff_spec,
                              const RunOptions& options, const std::filesystem::path& base_dir) {
  auto rep = header("cohomology");
  rep.add("group", group_spec);
  rep.add("degree", std::to_string(degree));
  rep.add("coefficients", coeff_spec);
  try {
    const FiniteGroup g = resolve_group(group_spec, base_dir);
    Coefficients coeff = Coefficients::parse(coeff_spec);
    if (coeff.kind == Coefficients::Kind::Units) coeff.characteristic = options.characteristic.value_or(0);
    const FinAbGroup value = cohomology(g, degree, coeff, options.limits)->value();
    Verifier v;
    if (options.verify) verify_group(v, g, degree, coeff, value, "H^" + std::to_string(degree));
    rep.status = "determined";
    rep.add("status", rep.status);
    rep.add("group_order", std::to_string(g.order()));
    rep.add("value", value.to_string());
    rep.add("verify", flag(options.verify));
    if (options.verify) v.add_to(rep);
  } catch (const Error& e) {
    rep.status = "error";
    rep.add("status", rep.status);
    rep.add("error.code", std::string(error_code_name(e.code())));
    rep.add("error.message", e.what());
  }
  return rep;
}

std::string summarize(const ReportDocument& report) {
  auto get = [&](const std::string& key) -> std::string {
    for (const auto& [k, v] : report.entries) {
      if (k == key) return v;
    }
    return {};
  };
  std::ostringstream os;
  os << "status: " << report.status << '\n';
  if (report.status == "error") {
    os << "error [" << get("error.code") << "]: " << get("error.message") << '\n';
    return os.str();
  }
  if (get("command") == "cohomology") {
    os << "H^" << get("degree") << "(" << get("group") << ", " << get("coefficients") << ") = " << get("value") << '\n';
    return os.str();
  }
  if (report.status == "determined") {
    os << "Brauer group: " << get("result") << '\n';
  } else {
    os << "Brauer group: contains " << get("partial.subgroup") << " with quotient embedding in "
       << get("partial.quotient_bound") << '\n';
  }
  os << "path: " << get("path") << ", splitting: " << get("splitting") << ", root gerbe: " << get("is_root_gerbe")
     << ", right exact: " << get("right_exact") << '\n';
  return os.str();
}

} // namespace stacky::cli
