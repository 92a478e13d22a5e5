#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "stacky/cli.hpp"
#include "stacky/error.hpp"

namespace stacky::cli {

namespace {

struct Pos {
  std::size_t line = 0;
  std::size_t col = 0;
};

struct Entry {
  std::string key;
  std::string value;
  Pos key_pos;
  Pos value_pos;
};

struct Section {
  std::string name;
  Pos pos;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::size_t leading_spaces(std::string_view s) {
  std::size_t a = 0;
  while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  return a;
}

class Positioned {
public:
  explicit Positioned(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail_at(Pos p, ErrorCode code, const std::string& msg) const {
    fail(code, origin_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg);
  }

private:
  std::string origin_;
};

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::vector<Section> scan(std::string_view text, const Positioned& where) {
  std::vector<Section> sections;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const Pos lead{line_no, leading_spaces(raw) + 1};
    if (line.front() == '[') {
      if (line.back() != ']') where.fail_at(lead, ErrorCode::Parse, "unterminated section header");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      const bool known = name == "curve" || name == "gerbe" ||
                         (name.rfind("point.", 0) == 0 && valid_name(std::string_view(name).substr(6)));
      if (!known) where.fail_at(lead, ErrorCode::Parse, "unknown section '" + name + "'");
      if (!seen.insert(name).second) where.fail_at(lead, ErrorCode::Parse, "duplicate section '" + name + "'");
      sections.push_back({name, lead, {}});
    } else {
      auto eq = raw.find('=');
      if (eq == std::string_view::npos) where.fail_at(lead, ErrorCode::Parse, "expected 'key = value'");
      if (sections.empty()) where.fail_at(lead, ErrorCode::Parse, "key outside of any section");
      Entry e;
      e.key = trim(raw.substr(0, eq));
      e.value = trim(raw.substr(eq + 1));
      e.key_pos = lead;
      e.value_pos = {line_no, eq + 1 + leading_spaces(raw.substr(eq + 1)) + 1};
      if (e.key.empty()) where.fail_at(lead, ErrorCode::Parse, "empty key");
      if (e.value.empty()) where.fail_at(e.value_pos, ErrorCode::Parse, "empty value for '" + e.key + "'");
      for (const auto& other : sections.back().entries) {
        if (other.key == e.key) where.fail_at(lead, ErrorCode::Parse, "duplicate key '" + e.key + "'");
      }
      sections.back().entries.push_back(std::move(e));
    }
    if (end == text.size()) break;
  }
  return sections;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::Parse, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(ErrorCode::Parse, "expected true or false, got '" + std::string(s) + "'");
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::string strip_prefix(std::string_view s) {
  if (s.rfind("cocycle:", 0) == 0) return std::string(s.substr(8));
  return {};
}

Cocycle2 resolve_extension(std::string_view spec, const FiniteGroup& g, const std::filesystem::path& base_dir) {
  const std::string rel = strip_prefix(spec);
  if (rel.empty()) fail(ErrorCode::Parse, "extension must be 'split' or 'cocycle:<path>', got '" + std::string(spec) + "'");
  return read_cocycle(base_dir / rel, g);
}

} // namespace

FinAbGroup parse_factor_list(std::string_view text) {
  std::vector<Integer> orders;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string part = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    const std::uint64_t d = parse_u64(part);
    if (d == 0) fail(ErrorCode::Parse, "invariant factors must be positive");
    orders.emplace_back(static_cast<std::int64_t>(d));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return FinAbGroup::from_cyclic_orders(orders);
}

std::string format_factor_list(const FinAbGroup& g) {
  if (!g.is_finite()) fail(ErrorCode::Validation, "H^1 overrides must be finite");
  if (g.is_trivial()) return "1";
  std::string s;
  for (const auto& d : g.invariant_factors()) {
    if (!s.empty()) s += ",";
    s += d.to_string();
  }
  return s;
}

FiniteGroup resolve_group(std::string_view spec, const std::filesystem::path& base_dir) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) fail(ErrorCode::Parse, "group spec needs a 'kind:' prefix: '" + std::string(spec) + "'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (kind == "cyclic") {
    const std::uint64_t n = parse_u64(rest);
    if (n == 0) fail(ErrorCode::Validation, "cyclic group order must be positive");
    return cyclic(n);
  }
  if (kind == "product") {
    auto star = rest.find('*');
    if (star == std::string_view::npos) fail(ErrorCode::Parse, "product spec needs '<spec>*<spec>'");
    return direct_product(resolve_group(rest.substr(0, star), base_dir), resolve_group(rest.substr(star + 1), base_dir))
        .group;
  }
  if (kind == "semidirect_z2") {
    auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) fail(ErrorCode::Parse, "semidirect_z2 spec needs '<n>:<a>'");
    const std::uint64_t n = parse_u64(rest.substr(0, c2));
    const std::uint64_t a = parse_u64(rest.substr(c2 + 1));
    if (n == 0 || a == 0 || a > n) fail(ErrorCode::Validation, "semidirect_z2 needs n >= 1 and 1 <= a <= n");
    if ((a * a) % n != 1 % n) {
      fail(ErrorCode::Validation, "a^2 = " + std::to_string((a * a) % n) + " mod " + std::to_string(n) + ", expected 1");
    }
    return semidirect_cyclic_by_z2(n, a);
  }
  if (kind == "table") {
    if (rest.empty()) fail(ErrorCode::Parse, "table spec needs a path");
    return read_group_table(base_dir / std::string(rest));
  }
  fail(ErrorCode::Parse, "unknown group kind '" + std::string(kind) + "'");
}

InputDocument parse_input(std::string_view text, const std::string& origin, const std::filesystem::path& base_dir) {
  const Positioned where(origin);
  const auto sections = scan(text, where);
  InputDocument doc;
  doc.base_dir = base_dir;

  auto value_of = [&](const Entry& e, auto&& parse) {
    try {
      return parse(e.value);
    } catch (const Error& err) {
      where.fail_at(e.value_pos, err.code(), "'" + e.key + "': " + err.what());
    }
  };

  const Section* curve = nullptr;
  const Section* gerbe = nullptr;
  Pos r_pos{};
  for (const auto& s : sections) {
    if (s.name == "curve") {
      curve = &s;
      for (const auto& e : s.entries) {
        if (e.key == "smooth") doc.smooth = value_of(e, parse_bool);
        else if (e.key == "proper") doc.proper = value_of(e, parse_bool);
        else if (e.key == "connected") doc.connected = value_of(e, parse_bool);
        else if (e.key == "genus") doc.genus = value_of(e, parse_u64);
        else if (e.key == "characteristic") {
          doc.characteristic = value_of(e, parse_u64);
          if (doc.characteristic != 0 && !is_prime(doc.characteristic)) {
            where.fail_at(e.value_pos, ErrorCode::Validation, "characteristic must be 0 or a prime");
          }
        } else if (e.key == "h1_stack") doc.h1_stack = value_of(e, parse_factor_list);
        else if (e.key == "h1_coarse") doc.h1_coarse = value_of(e, parse_factor_list);
        else where.fail_at(e.key_pos, ErrorCode::Parse, "unknown key '" + e.key + "' in [curve]");
      }
    } else if (s.name == "gerbe") {
      gerbe = &s;
      for (const auto& e : s.entries) {
        if (e.key == "r") {
          const std::uint64_t r = value_of(e, parse_u64);
          if (r == 0) where.fail_at(e.value_pos, ErrorCode::Validation, "r must be positive");
          doc.r = static_cast<std::int64_t>(r);
          r_pos = e.value_pos;
        } else if (e.key == "coarse_class") {
          doc.coarse_class = e.value;
        } else {
          where.fail_at(e.key_pos, ErrorCode::Parse, "unknown key '" + e.key + "' in [gerbe]");
        }
      }
    } else {
      PointSection pt;
      pt.name = s.name.substr(6);
      for (const auto& e : s.entries) {
        if (e.key == "group") pt.group = e.value;
        else if (e.key == "singular") pt.singular = value_of(e, parse_bool);
        else if (e.key == "extension") pt.extension = e.value;
        else where.fail_at(e.key_pos, ErrorCode::Parse, "unknown key '" + e.key + "' in [" + s.name + "]");
      }
      doc.points.push_back(std::move(pt));
    }
  }
  if (!curve) where.fail_at({1, 1}, ErrorCode::Parse, "missing [curve] section");
  if (!gerbe || r_pos.line == 0) where.fail_at(gerbe ? gerbe->pos : Pos{1, 1}, ErrorCode::Parse, "missing 'r' in [gerbe]");

  if (!doc.connected) where.fail_at(curve->pos, ErrorCode::Validation, "disconnected curves are not supported");
  if (doc.smooth && doc.proper && !doc.genus) {
    where.fail_at(curve->pos, ErrorCode::Validation, "a smooth proper curve needs 'genus'");
  }
  const std::uint64_t p = doc.characteristic;
  if (p != 0 && static_cast<std::uint64_t>(doc.r) % p == 0) {
    where.fail_at(r_pos, ErrorCode::Tameness, "characteristic " + std::to_string(p) + " divides r = " + std::to_string(doc.r));
  }

  // Semantic checks per point, positioned at the offending line.
  std::size_t k = 0;
  for (const auto& s : sections) {
    if (s.name.rfind("point.", 0) != 0) continue;
    const PointSection& pt = doc.points[k++];
    auto pos_of = [&](const char* key) {
      for (const auto& e : s.entries) {
        if (e.key == key) return e.value_pos;
      }
      return s.pos;
    };
    const Pos gpos = pos_of("group");
    FiniteGroup g;
    try {
      g = resolve_group(pt.group, base_dir);
    } catch (const Error& err) {
      where.fail_at(gpos, err.code(), err.what());
    }
    if (doc.smooth && pt.singular) {
      where.fail_at(pos_of("singular"), ErrorCode::Validation, "singular point '" + pt.name + "' on a smooth curve");
    }
    if (!pt.singular && !is_cyclic(g)) {
      where.fail_at(gpos, ErrorCode::Validation, "non-cyclic stabilizer at smooth point '" + pt.name + "'");
    }
    if (p != 0 && g.order() % p == 0) {
      where.fail_at(gpos, ErrorCode::Tameness, "characteristic " + std::to_string(p) + " divides the stabilizer order " +
                                                   std::to_string(g.order()));
    }
    if (pt.extension != "split") {
      const Pos epos = pos_of("extension");
      try {
        const Cocycle2 c = resolve_extension(pt.extension, g, base_dir);
        if (c.modulus() != doc.r) {
          fail(ErrorCode::Validation, "cocycle modulus " + std::to_string(c.modulus()) + " differs from r = " +
                                          std::to_string(doc.r));
        }
      } catch (const Error& err) {
        where.fail_at(epos, err.code(), err.what());
      }
    }
  }
  return doc;
}

InputDocument read_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_input(os.str(), path.string(), path.parent_path());
}

std::string print_input(const InputDocument& doc) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "[curve]\n";
  os << "smooth = " << b(doc.smooth) << '\n';
  os << "proper = " << b(doc.proper) << '\n';
  os << "connected = " << b(doc.connected) << '\n';
  if (doc.genus) os << "genus = " << *doc.genus << '\n';
  os << "characteristic = " << doc.characteristic << '\n';
  if (doc.h1_stack) os << "h1_stack = " << format_factor_list(*doc.h1_stack) << '\n';
  if (doc.h1_coarse) os << "h1_coarse = " << format_factor_list(*doc.h1_coarse) << '\n';
  os << "\n[gerbe]\n";
  os << "r = " << doc.r << '\n';
  if (doc.coarse_class) os << "coarse_class = " << *doc.coarse_class << '\n';
  for (const auto& pt : doc.points) {
    os << "\n[point." << pt.name << "]\n";
    os << "group = " << pt.group << '\n';
    os << "singular = " << b(pt.singular) << '\n';
    os << "extension = " << pt.extension << '\n';
  }
  return os.str();
}

CurveSpec to_curve(const InputDocument& doc) {
  CurveSpec c;
  c.smooth = doc.smooth;
  c.proper = doc.proper;
  c.connected = doc.connected;
  c.coarse_genus = doc.genus;
  c.characteristic = doc.characteristic;
  c.h1_stack = doc.h1_stack;
  c.h1_coarse = doc.h1_coarse;
  for (const auto& pt : doc.points) {
    StabilizerPoint sp;
    sp.name = pt.name;
    sp.group = resolve_group(pt.group, doc.base_dir);
    sp.singular = pt.singular;
    if (pt.extension != "split") sp.extension = resolve_extension(pt.extension, sp.group, doc.base_dir);
    c.points.push_back(std::move(sp));
  }
  c.validate(doc.r);
  return c;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return s;
}

} // namespace stacky::cli
