#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "stacky/cli.hpp"
#include "stacky/oracle.hpp"

using namespace stacky;
using namespace stacky::cli;

namespace {

const std::filesystem::path kData = STACKY_EXAMPLES_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> as_map(const ReportDocument& r) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : r.entries) {
    REQUIRE_MESSAGE(m.emplace(k, v).second, "duplicate report key " << k);
  }
  return m;
}

ReportDocument run_file(const std::string& name, const RunOptions& opts = {}) {
  const auto path = kData / name;
  return run_brauer(read_input(path), fnv1a_hex(slurp(path)), opts);
}

Error parse_error(std::string_view text) {
  try {
    parse_input(text, "doc", kData);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse failure");
  return Error(ErrorCode::Invariant, "");
}

const char* kMinimal = "[curve]\nsmooth = true\nproper = true\ngenus = 1\n\n[gerbe]\nr = 2\n";

int run_tool(const std::string& args) {
  const std::string cmd = std::string(STACKY_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("minimal smooth genus-1 document") {
  const auto doc = parse_input(kMinimal);
  CHECK(doc.smooth);
  CHECK(doc.genus == std::optional<std::size_t>(1));
  CHECK(doc.r == 2);
  CHECK(doc.points.empty());
  const auto rep = as_map(run_brauer(doc, "h"));
  CHECK(rep.at("status") == "determined");
  CHECK(rep.at("result") == "Z/2 + Z/2");
}

TEST_CASE("group specs") {
  CHECK(resolve_group("cyclic:1").order() == 1);
  CHECK(resolve_group("cyclic:6").order() == 6);
  CHECK(are_isomorphic_small(resolve_group("product:cyclic:2*cyclic:3"), cyclic(6)));
  const auto nested = resolve_group("product:cyclic:2*product:cyclic:2*cyclic:2");
  CHECK(nested.order() == 8);
  CHECK_FALSE(is_cyclic(nested));
  CHECK_FALSE(resolve_group("semidirect_z2:4:3").is_abelian());
  CHECK(are_isomorphic_small(resolve_group("table:q8.table", kData), quaternion8()));
  for (const char* bad : {"cyclic", "cyclic:x", "cyclic:0", "product:cyclic:2", "semidirect_z2:4", "semidirect_z2:4:2",
                          "semidirect_z2:4:5", "table:absent.table", "free:2"}) {
    CHECK_THROWS_AS(resolve_group(bad, kData), Error);
  }
}

TEST_CASE("invariant factor lists") {
  CHECK(parse_factor_list("1").is_trivial());
  CHECK(parse_factor_list("4,2") == FinAbGroup::parse("Z/2 + Z/4"));
  CHECK(parse_factor_list("2, 3") == FinAbGroup::cyclic(Integer(6)));
  CHECK(format_factor_list(FinAbGroup::parse("Z/2 + Z/4")) == "2,4");
  CHECK(format_factor_list(FinAbGroup()) == "1");
  CHECK_THROWS_AS(parse_factor_list("0"), Error);
  CHECK_THROWS_AS(parse_factor_list("2,,2"), Error);
  CHECK_THROWS_AS(parse_factor_list("-2"), Error);
}

TEST_CASE("syntax errors are positioned") {
  struct Case {
    std::string text;
    std::string where;
    std::string what;
  };
  const std::vector<Case> cases = {
      {"[curve]\nsmooth = true\ngenus = 1\ncolour = red\n[gerbe]\nr = 2\n", "doc:4:1:", "unknown key 'colour'"},
      {"[curve]\n  genus 1\n", "doc:2:3:", "expected 'key = value'"},
      {"[curve]\ngenus = 1\n[stack]\n", "doc:3:1:", "unknown section"},
      {"[curve]\ngenus = 1\ngenus = 2\n", "doc:3:1:", "duplicate key"},
      {"[curve]\nsmooth = yes\n", "doc:2:10:", "expected true or false"},
      {"genus = 1\n", "doc:1:1:", "outside of any section"},
      {"[curve]\ngenus = 1\n[gerbe\n", "doc:3:1:", "unterminated"},
      {"[curve]\ngenus = 1\n", "doc:1:1:", "missing 'r'"},
      {"[gerbe]\nr = 2\n", "doc:1:1:", "missing [curve]"},
      {"[curve]\ngenus = 1\n[gerbe]\nr = 0\n", "doc:4:5:", "r must be positive"},
      {"[curve]\ngenus =\n", "doc:2:8:", "empty value"},
      {"[curve]\ngenus = 1\n[gerbe]\nr = 2\n[point.a b]\n", "doc:5:1:", "unknown section"},
      {"[curve]\ngenus = 1\n[gerbe]\nr = 2\n[point.P]\ngroup = cyclic:2\n[point.P]\n", "doc:7:1:", "duplicate section"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const auto e = parse_error(c.text);
    const std::string msg = e.what();
    CHECK(msg.rfind(c.where, 0) == 0);
    CHECK(msg.find(c.what) != std::string::npos);
  }
}

TEST_CASE("semantic validation") {
  const std::string head = "[curve]\nsmooth = true\nproper = true\ngenus = 0\n";
  SUBCASE("non-cyclic stabilizer at a smooth point") {
    const auto e = parse_error(head + "[gerbe]\nr = 2\n[point.P]\ngroup = product:cyclic:2*cyclic:2\n");
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("doc:8:9: non-cyclic stabilizer at smooth point") != std::string::npos);
  }
  SUBCASE("a^2 not 1") {
    const auto e = parse_error(head + "[gerbe]\nr = 2\n[point.P]\nsingular = true\ngroup = semidirect_z2:5:2\n");
    CHECK(std::string(e.what()).find("doc:9:9:") != std::string::npos);
  }
  SUBCASE("tameness at a point") {
    const auto e = parse_error(
        "[curve]\nsmooth = false\ncharacteristic = 2\n[gerbe]\nr = 3\n[point.N]\nsingular = true\ngroup = "
        "product:cyclic:2*cyclic:2\n");
    CHECK(e.code() == ErrorCode::Tameness);
    CHECK(std::string(e.what()).find("doc:8:9:") != std::string::npos);
  }
  SUBCASE("tameness of r") {
    const auto e = parse_error("[curve]\ngenus = 1\ncharacteristic = 3\n[gerbe]\nr = 6\n");
    CHECK(e.code() == ErrorCode::Tameness);
    CHECK(std::string(e.what()).find("doc:5:5:") != std::string::npos);
  }
  SUBCASE("characteristic must be prime") {
    CHECK(parse_error("[curve]\ngenus = 1\ncharacteristic = 4\n[gerbe]\nr = 3\n").code() == ErrorCode::Validation);
  }
  SUBCASE("singular point on a smooth curve") {
    CHECK(parse_error(head + "[gerbe]\nr = 2\n[point.P]\nsingular = true\n").code() == ErrorCode::Validation);
  }
  SUBCASE("genus required for smooth proper curves") {
    CHECK(parse_error("[curve]\nsmooth = true\n[gerbe]\nr = 2\n").code() == ErrorCode::Validation);
  }
  SUBCASE("disconnected") {
    CHECK(parse_error("[curve]\ngenus = 1\nconnected = false\n[gerbe]\nr = 2\n").code() == ErrorCode::Validation);
  }
  SUBCASE("referenced files must exist") {
    const auto e = parse_error(head + "[gerbe]\nr = 2\n[point.P]\ngroup = cyclic:2\nextension = cocycle:none.cocycle\n");
    CHECK(std::string(e.what()).find("doc:9:13:") != std::string::npos);
  }
  SUBCASE("cocycle modulus must equal r") {
    const auto e =
        parse_error(head + "[gerbe]\nr = 4\n[point.P]\ngroup = cyclic:2\nextension = cocycle:z4_over_z2.cocycle\n");
    CHECK(std::string(e.what()).find("differs from r") != std::string::npos);
  }
  SUBCASE("bad extension spec") {
    CHECK(parse_error(head + "[gerbe]\nr = 2\n[point.P]\nextension = nonsplit\n").code() == ErrorCode::Parse);
  }
}

TEST_CASE("comments, blank lines and CRLF") {
  const auto a = parse_input(kMinimal);
  const auto b = parse_input("# header\r\n[curve]   # c\r\n  smooth=true\r\nproper = true\r\n\r\ngenus = 1\r\n[ gerbe ]\r\nr=2");
  CHECK(a == b);
}

TEST_CASE("round trip on the example corpus") {
  for (const auto& entry : std::filesystem::directory_iterator(kData)) {
    if (entry.path().extension() != ".stacky") continue;
    CAPTURE(entry.path().string());
    InputDocument doc;
    try {
      doc = read_input(entry.path());
    } catch (const Error&) {
      continue; // intentionally invalid examples
    }
    const std::string text = print_input(doc);
    const auto again = parse_input(text, "printed", kData);
    CHECK(again == doc);
    CHECK(print_input(again) == text);
  }
}

TEST_CASE("round trip on random documents") {
  std::mt19937 rng(20261016);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::vector<std::string> cyclic_specs = {"cyclic:1", "cyclic:2", "cyclic:3", "cyclic:5", "product:cyclic:2*cyclic:3"};
  const std::vector<std::string> singular_specs = {"semidirect_z2:4:3", "product:cyclic:2*cyclic:2", "table:q8.table",
                                                   "semidirect_z2:3:2", "cyclic:4"};
  const std::vector<std::string> factor_lists = {"1", "2", "2,2", "3,6", "4,2,2"};
  for (int trial = 0; trial < 200; ++trial) {
    InputDocument doc;
    doc.base_dir = kData;
    doc.smooth = pick(2) == 0;
    doc.proper = pick(3) != 0;
    if (doc.smooth && doc.proper) doc.genus = pick(4);
    else if (pick(2)) doc.genus = pick(4);
    doc.characteristic = std::vector<std::uint64_t>{0, 7, 11}[pick(3)];
    doc.r = std::vector<std::int64_t>{1, 2, 3, 4}[pick(4)];
    if (pick(2)) doc.h1_stack = parse_factor_list(factor_lists[pick(factor_lists.size())]);
    if (pick(2)) doc.h1_coarse = parse_factor_list(factor_lists[pick(factor_lists.size())]);
    if (pick(3) == 0) doc.coarse_class = "class " + std::to_string(pick(100));
    const std::size_t n = pick(4);
    for (std::size_t i = 0; i < n; ++i) {
      PointSection pt;
      pt.name = "p" + std::to_string(i);
      pt.singular = !doc.smooth && pick(2);
      pt.group = pt.singular ? singular_specs[pick(singular_specs.size())] : cyclic_specs[pick(cyclic_specs.size())];
      doc.points.push_back(pt);
    }
    CAPTURE(print_input(doc));
    const auto again = parse_input(print_input(doc), "random", kData);
    CHECK(again == doc);
  }
}

TEST_CASE("smooth genus-2 example") {
  // Hom(A, Z/2) for A = <a1, b1, a2, b2, g1, g2 | 3 g1, 3 g2, g1 + g2>:
  // enumerate images and count; every element has order 2.
  std::size_t homs = 0;
  for (int bits = 0; bits < 64; ++bits) {
    const int g1 = (bits >> 4) & 1;
    const int g2 = (bits >> 5) & 1;
    if ((3 * g1) % 2 == 0 && (3 * g2) % 2 == 0 && (g1 + g2) % 2 == 0) ++homs;
  }
  REQUIRE(homs == 16);
  const auto expected = FinAbGroup::from_cyclic_orders({Integer(2), Integer(2), Integer(2), Integer(2)});

  const auto rep = run_file("smooth_genus2.stacky");
  const auto m = as_map(rep);
  CHECK(rep.status == "determined");
  CHECK(rep.exit_code() == 0);
  CHECK(m.at("result") == expected.to_string());
  CHECK(m.at("path") == "smooth");
  CHECK(m.at("splitting") == "smooth-shortcut");
  CHECK(m.at("right_term_source") == "stack-presentation");
  CHECK(m.at("fiber.P.group_order") == "3");
  CHECK(m.at("fiber.Q.is_root_gerbe") == "true");
}

TEST_CASE("dihedral node example") {
  const auto d8 = semidirect_cyclic_by_z2(4, 3);
  const auto schur = oracle::full_bar_cohomology(d8, 3, Coefficients::integers()).value;
  const auto rep = run_file("dihedral_node.stacky");
  const auto m = as_map(rep);
  CHECK(rep.status == "determined");
  CHECK(m.at("result") == schur.to_string());
  CHECK(m.at("result") == "Z/2");
  CHECK(m.at("left_term") == schur.to_string());
  CHECK(m.at("right_term") == "0");
  CHECK(m.at("right_term_source") == "stack-override");
  CHECK(m.at("splitting") == "sections");
}

TEST_CASE("missing H^1 data is an error") {
  const auto rep = run_file("missing_h1.stacky");
  const auto m = as_map(rep);
  CHECK(rep.status == "error");
  CHECK(rep.exit_code() == 1);
  CHECK(m.at("error.code") == "missing-h1");
}

TEST_CASE("partial report") {
  const auto rep = run_file("nonsplit_cyclic.stacky");
  const auto m = as_map(rep);
  CHECK(rep.status == "partial");
  CHECK(rep.exit_code() == 2);
  CHECK(m.at("result") == "undetermined");
  CHECK(m.at("right_exact") == "false");
  CHECK(m.at("fiber.P.h3_inflation_injective") == "false");
  CHECK(m.at("partial.quotient_bound") == "Z/2 + Z/2");
}

TEST_CASE("report key set is fixed") {
  auto skeleton = [](const ReportDocument& r) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : r.entries) {
      if (k.rfind("fiber.", 0) == 0 || k.rfind("note.", 0) == 0) continue;
      keys.push_back(k);
    }
    return keys;
  };
  const auto a = run_file("smooth_genus2.stacky");
  const auto b = run_file("nonsplit_cyclic.stacky");
  const auto c = run_file("dihedral_node.stacky");
  CHECK(skeleton(a) == skeleton(b));
  CHECK(skeleton(a) == skeleton(c));
  CHECK(a.entries.front() == std::pair<std::string, std::string>("format_version", "1"));
  const auto e = run_file("missing_h1.stacky");
  CHECK(skeleton(e) == std::vector<std::string>{"format_version", "command", "input_hash", "status", "error.code",
                                                "error.message"});
}

TEST_CASE("reports are byte-stable") {
  for (const char* name : {"smooth_genus2.stacky", "dihedral_node.stacky", "quaternion_node.stacky"}) {
    const auto first = run_file(name).text();
    clear_cohomology_cache();
    CHECK(run_file(name).text() == first);
  }
  const auto m = as_map(run_file("smooth_genus2.stacky"));
  CHECK(m.at("input_hash") == fnv1a_hex(slurp(kData / "smooth_genus2.stacky")));
}

TEST_CASE("exit codes match status") {
  for (const auto& entry : std::filesystem::directory_iterator(kData)) {
    if (entry.path().extension() != ".stacky") continue;
    ReportDocument rep;
    try {
      rep = run_brauer(read_input(entry.path()), "h");
    } catch (const Error& e) {
      rep = error_report("h", e);
    }
    const auto m = as_map(rep);
    CHECK(m.at("status") == rep.status);
    const int expected = rep.status == "determined" ? 0 : rep.status == "partial" ? 2 : 1;
    CHECK(rep.exit_code() == expected);
  }
}

TEST_CASE("verify passes on the examples") {
  RunOptions opts;
  opts.verify = true;
  for (const char* name : {"smooth_genus2.stacky", "dihedral_node.stacky", "quaternion_node.stacky",
                           "nonsplit_cyclic.stacky"}) {
    CAPTURE(name);
    const auto m = as_map(run_file(name, opts));
    CHECK(m.at("verify") == "true");
    CHECK(std::stoul(m.at("verify.passed")) > 0);
    CHECK(m.at("status") != "error");
  }
}

TEST_CASE("characteristic override re-checks tameness") {
  RunOptions opts;
  opts.characteristic = 2;
  const auto m = as_map(run_file("dihedral_node.stacky", opts));
  CHECK(m.at("status") == "error");
  CHECK(m.at("error.code") == "tameness");
  opts.characteristic = 5;
  CHECK(as_map(run_file("dihedral_node.stacky", opts)).at("result") == "Z/2");
}

TEST_CASE("cohomology command") {
  auto value = [](const std::string& g, std::size_t n, const std::string& coeff) {
    const auto rep = run_cohomology(g, n, coeff, {}, kData);
    REQUIRE(rep.status == "determined");
    return as_map(rep).at("value");
  };
  CHECK(value("cyclic:6", 3, "units") == "Z/6");
  CHECK(value("semidirect_z2:4:3", 2, "units") == "Z/2");
  CHECK(value("cyclic:5", 2, "units") == "0");
  CHECK(value("table:q8.table", 2, "units") == "0");
  CHECK(value("product:cyclic:2*cyclic:2", 2, "units") == "Z/2");
  CHECK(value("cyclic:4", 1, "Z/2") == "Z/2");

  RunOptions tiny;
  tiny.limits.max_entries = 10;
  const auto capped = as_map(run_cohomology("table:q8.table", 4, "Z", tiny, kData));
  CHECK(capped.at("status") == "error");
  CHECK(capped.at("error.code") == "resource-cap");
  CHECK(as_map(run_cohomology("cyclic:4", 2, "Q", {}, kData)).at("error.code") == "parse");
}

TEST_CASE("command-line tool") {
  const std::string report = (std::filesystem::temp_directory_path() / "stacky_cli_report.txt").string();
  const auto input = (kData / "smooth_genus2.stacky").string();
  CHECK(run_tool("brauer --input " + input + " --report " + report) == 0);
  CHECK(slurp(report) == run_file("smooth_genus2.stacky").text());
  CHECK(run_tool("brauer --input " + (kData / "nonsplit_cyclic.stacky").string()) == 2);
  CHECK(run_tool("brauer --input " + (kData / "missing_h1.stacky").string() + " --report " + report) == 1);
  CHECK(slurp(report).find("error.code = missing-h1\n") != std::string::npos);
  CHECK(run_tool("brauer --input " + (kData / "smooth_klein.stacky").string()) == 1);
  CHECK(run_tool("brauer --input " + (kData / "absent.stacky").string()) == 1);
  CHECK(run_tool("brauer --input " + (kData / "dihedral_node.stacky").string() + " --verify --char 3") == 0);
  CHECK(run_tool("brauer --input " + (kData / "dihedral_node.stacky").string() + " --char 2") == 1);
  CHECK(run_tool("cohomology --group cyclic:6 --degree 3 --coeff units --report " + report) == 0);
  CHECK(slurp(report).find("value = Z/6\n") != std::string::npos);
  CHECK(run_tool("cohomology --group cyclic:6 --degree 4 --coeff Z --max-entries 10") == 1);
  std::filesystem::remove(report);
}
