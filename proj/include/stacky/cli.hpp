#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stacky/curve.hpp"
#include "stacky/error.hpp"

namespace stacky::cli {

inline constexpr int kFormatVersion = 1;

struct PointSection {
  std::string name;
  std::string group = "cyclic:1";
  bool singular = false;
  std::string extension = "split";
  friend bool operator==(const PointSection&, const PointSection&) = default;
};

/// The sectioned key = value input document.
struct InputDocument {
  bool smooth = true;
  bool proper = true;
  bool connected = true;
  std::optional<std::size_t> genus;
  std::uint64_t characteristic = 0;
  std::optional<FinAbGroup> h1_stack;
  std::optional<FinAbGroup> h1_coarse;
  std::int64_t r = 1;
  /// Coarse-curve component of the gerbe class; echoed, never used.
  std::optional<std::string> coarse_class;
  std::vector<PointSection> points;
  /// Directory that table: and cocycle: paths are relative to.
  std::filesystem::path base_dir;

  friend bool operator==(const InputDocument& a, const InputDocument& b) {
    return a.smooth == b.smooth && a.proper == b.proper && a.connected == b.connected && a.genus == b.genus &&
           a.characteristic == b.characteristic && a.h1_stack == b.h1_stack && a.h1_coarse == b.h1_coarse &&
           a.r == b.r && a.coarse_class == b.coarse_class && a.points == b.points;
  }
};

/// Syntax and semantic validation; errors carry "origin:line:col:".
InputDocument parse_input(std::string_view text, const std::string& origin = "<input>",
                          const std::filesystem::path& base_dir = {});
InputDocument read_input(const std::filesystem::path& path);
/// Canonical text; parse_input(print_input(d)) == d.
std::string print_input(const InputDocument& doc);

/// cyclic:<n>, product:<spec>*<spec>, semidirect_z2:<n>:<a>, table:<path>.
FiniteGroup resolve_group(std::string_view spec, const std::filesystem::path& base_dir = {});
/// Comma-separated invariant factors; "1" is the trivial group.
FinAbGroup parse_factor_list(std::string_view text);
std::string format_factor_list(const FinAbGroup& g);

CurveSpec to_curve(const InputDocument& doc);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Flat key = value report with a fixed key order.
struct ReportDocument {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string status; // determined | partial | error

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  std::string text() const;
  /// 0 determined, 2 partial, 1 error.
  int exit_code() const;
};

struct RunOptions {
  Limits limits{};
  std::optional<std::uint64_t> characteristic;
  bool verify = false;
  bool use_shortcuts = true;
};

ReportDocument run_brauer(const InputDocument& doc, const std::string& input_hash, const RunOptions& options = {});
ReportDocument run_cohomology(const std::string& group_spec, std::size_t degree, const std::string& coeff_spec,
                              const RunOptions& options = {}, const std::filesystem::path& base_dir = {});
/// A report for an error raised before a run could start.
ReportDocument error_report(const std::string& input_hash, const Error& e);

/// Short human-readable summary of a report.
std::string summarize(const ReportDocument& report);

} // namespace stacky::cli
