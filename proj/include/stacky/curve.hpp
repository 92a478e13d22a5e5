#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stacky/gerbe.hpp"

namespace stacky {

/// A marked point with stabilizer G and the fiber extension of the gerbe
/// over it (empty means the split extension).
struct StabilizerPoint {
  std::string name;
  FiniteGroup group;
  bool singular = false;
  std::optional<Cocycle2> extension;
};

/// A connected tame stacky curve: coarse data plus marked points.
struct CurveSpec {
  bool smooth = true;
  bool proper = true;
  bool connected = true;
  std::optional<std::size_t> coarse_genus;
  std::uint64_t characteristic = 0;
  std::vector<StabilizerPoint> points;
  /// H^1(C, Z/r) for the coarse curve and H^1 of the stack, if supplied.
  std::optional<FinAbGroup> h1_coarse;
  std::optional<FinAbGroup> h1_stack;

  /// Checks connectedness, cyclic stabilizers at smooth points, tameness
  /// (for r too, when given) and that extensions match their points.
  void validate(std::int64_t r = 0) const;
};

/// H^k(C, G_m) = sum over points of H^k(G_i, k^x), k >= 2.
FinAbGroup stacky_units_cohomology(const CurveSpec& c, std::size_t k, const Limits& limits = {});

/// Where an H^1(-, Z/r) value came from.
enum class H1Source : std::uint8_t { StackPresentation, StackOverride, CoarseSmooth, CoarseOverride };
std::string h1_source_name(H1Source s);

struct H1Value {
  FinAbGroup value;
  H1Source source;
};

/// H^1 of the stack: the override, or Hom of the orbifold abelianization
/// for smooth proper curves; throws MissingH1 otherwise.
H1Value h1_stack_zr(const CurveSpec& c, std::int64_t r);
/// H^1 of the coarse curve: the override, or (Z/r)^{2g} for smooth proper
/// curves; throws MissingH1 otherwise.
H1Value h1_coarse_zr(const CurveSpec& c, std::int64_t r);

/// sum over points of H^2(G_i, Z/r).
FinAbGroup local_gerbe_classification(const CurveSpec& c, std::int64_t r, const Limits& limits = {});

/// Cyclic subgroup of sum H^2(G_i, k^x) generated by the Bockstein tuple,
/// and the quotient by it.
FinAbGroup left_kernel(const CurveSpec& c, std::int64_t r, const Limits& limits = {});
FinAbGroup left_image(const CurveSpec& c, std::int64_t r, const Limits& limits = {});

enum class Splitting : std::uint8_t { Coprime, Sections, SmoothShortcut, Unknown };
std::string splitting_name(Splitting s);

enum class ReportPath : std::uint8_t { Smooth, Coprime, General };
std::string path_name(ReportPath p);

struct BrauerOptions {
  Limits limits{};
  bool use_shortcuts = true;
  bool parallel = true;
};

struct BrauerReport {
  std::int64_t r = 1;
  ReportPath path = ReportPath::General;
  FinAbGroup left_term;
  FinAbGroup left_kernel;
  FinAbGroup left_image;
  FinAbGroup right_term;
  H1Source right_term_source = H1Source::StackPresentation;
  FinAbGroup local_classes;
  std::vector<FiberDiagnostics> fibers;
  bool is_root_gerbe = true;
  /// Empty when some fiber hit the resource cap and none failed.
  std::optional<bool> right_exact;
  Splitting splitting = Splitting::Unknown;
  bool determined = false;
  /// The group when determined.
  FinAbGroup result;
  /// When partial: left_image is a subgroup and the quotient embeds in
  /// right_term.
  FinAbGroup partial_subgroup;
  FinAbGroup partial_quotient_bound;
  std::vector<std::string> notes;
};

BrauerReport brauer_report(const CurveSpec& c, std::int64_t r, const BrauerOptions& options = {});

} // namespace stacky
