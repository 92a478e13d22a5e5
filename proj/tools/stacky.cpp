#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stacky/cli.hpp"
#include "stacky/error.hpp"

namespace {

using namespace stacky;

struct Common {
  std::string report_path;
  std::size_t max_entries = Limits{}.max_entries;
  std::optional<std::uint64_t> characteristic;
  bool verify = false;

  void attach(CLI::App* app) {
    app->add_option("--report", report_path, "Write the machine report to this path");
    app->add_option("--max-entries", max_entries, "Resource cap on stored matrix entries")->check(CLI::PositiveNumber);
    app->add_option("--char", characteristic, "Characteristic of the base field (0 or a prime)");
    app->add_flag("--verify", verify, "Cross-check against independent oracles; fail on mismatch");
  }

  cli::RunOptions options() const {
    cli::RunOptions o;
    o.limits.max_entries = max_entries;
    o.characteristic = characteristic;
    o.verify = verify;
    return o;
  }
};

int emit(const cli::ReportDocument& rep, const std::string& report_path) {
  std::cout << cli::summarize(rep);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report to " << report_path << '\n';
      return 1;
    }
    out << rep.text();
  }
  return rep.exit_code();
}

int run_brauer(const std::string& input_path, const Common& common) {
  std::ifstream in(input_path, std::ios::binary);
  if (!in) {
    const Error e(ErrorCode::Parse, "cannot open " + input_path);
    return emit(cli::error_report(cli::fnv1a_hex(""), e), common.report_path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  const std::string text = os.str();
  const std::string hash = cli::fnv1a_hex(text);
  try {
    const auto doc = cli::parse_input(text, input_path, std::filesystem::path(input_path).parent_path());
    return emit(cli::run_brauer(doc, hash, common.options()), common.report_path);
  } catch (const Error& e) {
    return emit(cli::error_report(hash, e), common.report_path);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brauer groups of mu_r-gerbes over tame stacky curves"};
  app.require_subcommand(1);

  Common brauer_common;
  std::string input_path;
  auto* brauer = app.add_subcommand("brauer", "Compute the Brauer group report for an input document");
  brauer->add_option("--input", input_path, "Input document")->required();
  brauer_common.attach(brauer);

  Common coh_common;
  std::string group_spec;
  std::size_t degree = 0;
  std::string coeff = "Z";
  auto* coh = app.add_subcommand("cohomology", "Compute H^n(G, A) for a group spec");
  coh->add_option("--group", group_spec, "cyclic:<n>, product:<a>*<b>, semidirect_z2:<n>:<a> or table:<path>")
      ->required();
  coh->add_option("--degree", degree, "Cohomological degree")->required();
  coh->add_option("--coeff", coeff, "Z, Z/<m> or units");
  coh_common.attach(coh);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (brauer->parsed()) return run_brauer(input_path, brauer_common);
  return emit(cli::run_cohomology(group_spec, degree, coeff, coh_common.options()), coh_common.report_path);
}
