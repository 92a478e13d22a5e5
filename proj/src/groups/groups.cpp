#include "stacky/groups.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stacky/error.hpp"

namespace stacky {

namespace {

std::uint64_t fnv1a(const std::vector<Element>& table) {
  std::uint64_t h = 1469598103934665603ull;
  for (Element x : table) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (x >> (8 * byte)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

} // namespace

FiniteGroup::FiniteGroup() : impl_(std::make_shared<const Impl>()) {}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Element>> rows,
                                    std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorCode::Validation, "group table is empty");
  if (!labels.empty() && labels.size() != n) fail(ErrorCode::Validation, "label count mismatch");
  auto impl = std::make_shared<Impl>();
  impl->order = n;
  impl->table.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    if (rows[a].size() != n) fail(ErrorCode::Validation, "group table is not square");
    std::vector<char> seen(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      Element c = rows[a][b];
      if (c >= n) fail(ErrorCode::Validation, "group table entry out of range");
      if (seen[c]) fail(ErrorCode::Validation, "group table row repeats an element");
      seen[c] = 1;
      impl->table[a * n + b] = c;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<char> seen(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      Element c = impl->table[a * n + b];
      if (seen[c]) fail(ErrorCode::Validation, "group table column repeats an element");
      seen[c] = 1;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (impl->table[a] != a || impl->table[a * n] != a) {
      fail(ErrorCode::Validation, "element 0 is not the identity");
    }
  }
  const auto& t = impl->table;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Element ab = t[a * n + b];
      for (std::size_t c = 0; c < n; ++c) {
        if (t[ab * n + c] != t[a * n + t[b * n + c]]) {
          fail(ErrorCode::Validation, "group table is not associative");
        }
      }
    }
  impl->inverse.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (t[a * n + b] == 0) impl->inverse[a] = static_cast<Element>(b);
    }
  }
  for (std::size_t a = 0; a < n && impl->abelian; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (t[a * n + b] != t[b * n + a]) {
        impl->abelian = false;
        break;
      }
  impl->labels = std::move(labels);
  impl->hash = fnv1a(impl->table);
  FiniteGroup g;
  g.impl_ = std::move(impl);
  return g;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

std::string FiniteGroup::label(Element a) const {
  if (!impl_->labels.empty()) return impl_->labels.at(a);
  return std::to_string(a);
}

// ---------------------------------------------------------------------------

GroupHom::GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Element> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  const std::size_t n = source_.order();
  if (image_.size() != n) fail(ErrorCode::Validation, "homomorphism image has the wrong length");
  for (Element x : image_) {
    if (x >= target_.order()) fail(ErrorCode::Validation, "homomorphism image out of range");
  }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (image_[source_.mul(a, b)] != target_.mul(image_[a], image_[b])) {
        fail(ErrorCode::Validation, "map is not a homomorphism");
      }
    }
}

GroupHom GroupHom::identity(const FiniteGroup& g) {
  std::vector<Element> image(g.order());
  std::iota(image.begin(), image.end(), 0);
  return GroupHom(g, g, std::move(image));
}

bool GroupHom::is_injective() const {
  return std::count(image_.begin(), image_.end(), Element(0)) == 1;
}

bool GroupHom::is_surjective() const {
  std::vector<char> hit(target_.order(), 0);
  for (Element x : image_) hit[x] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (!(g.source() == f.target())) fail(ErrorCode::Validation, "homomorphisms are not composable");
  std::vector<Element> image(f.source().order());
  for (Element x = 0; x < image.size(); ++x) image[x] = g(f(x));
  return GroupHom(f.source(), g.target(), std::move(image));
}

// ---------------------------------------------------------------------------

FiniteGroup cyclic(std::size_t n) {
  if (n == 0) fail(ErrorCode::Validation, "cyclic group order must be positive");
  std::vector<std::vector<Element>> rows(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rows[a][b] = static_cast<Element>((a + b) % n);
  return FiniteGroup::from_table(std::move(rows));
}

DirectProduct direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t m = g.order(), n = h.order();
  std::vector<std::vector<Element>> rows(m * n, std::vector<Element>(m * n));
  for (std::size_t x = 0; x < m * n; ++x)
    for (std::size_t y = 0; y < m * n; ++y) {
      Element a = g.mul(static_cast<Element>(x / n), static_cast<Element>(y / n));
      Element b = h.mul(static_cast<Element>(x % n), static_cast<Element>(y % n));
      rows[x][y] = static_cast<Element>(a * n + b);
    }
  FiniteGroup p = FiniteGroup::from_table(std::move(rows));
  std::vector<Element> p1(m * n), p2(m * n), i1(m), i2(n);
  for (std::size_t x = 0; x < m * n; ++x) {
    p1[x] = static_cast<Element>(x / n);
    p2[x] = static_cast<Element>(x % n);
  }
  for (std::size_t a = 0; a < m; ++a) i1[a] = static_cast<Element>(a * n);
  for (std::size_t b = 0; b < n; ++b) i2[b] = static_cast<Element>(b);
  return {p, GroupHom(p, g, p1), GroupHom(p, h, p2), GroupHom(g, p, i1), GroupHom(h, p, i2)};
}

FiniteGroup semidirect_cyclic_by_z2(std::size_t n, std::size_t a) {
  if (n == 0 || a < 1 || a > n) fail(ErrorCode::Validation, "semidirect product needs 1 <= a <= n");
  if ((a * a) % n != 1 % n) {
    fail(ErrorCode::Validation, "invalid action: a^2 is not 1 mod n");
  }
  const std::size_t order = 2 * n;
  std::vector<std::vector<Element>> rows(order, std::vector<Element>(order));
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      std::size_t t1 = x % n, s1 = x / n, t2 = y % n, s2 = y / n;
      std::size_t t = (t1 + (s1 ? a * t2 : t2)) % n;
      std::size_t s = (s1 + s2) % 2;
      rows[x][y] = static_cast<Element>(s * n + t);
    }
  return FiniteGroup::from_table(std::move(rows));
}

FiniteGroup quaternion8() {
  // Index 2k+s is (-1)^s times unit k, with units 1, i, j, k.
  // unit products: sign and unit of u*v.
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<Element>> rows(8, std::vector<Element>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int u = x / 2, v = y / 2;
      int s = (x % 2 + y % 2 + sign[u][v]) % 2;
      rows[x][y] = static_cast<Element>(2 * unit[u][v] + s);
    }
  return FiniteGroup::from_table(std::move(rows),
                                 {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

// ---------------------------------------------------------------------------

Cocycle2::Cocycle2(FiniteGroup base, std::int64_t modulus, std::vector<std::int64_t> values)
    : base_(std::move(base)), modulus_(modulus), values_(std::move(values)) {
  const std::size_t n = base_.order();
  if (modulus_ < 1) fail(ErrorCode::Validation, "cocycle modulus must be positive");
  if (values_.size() != n * n) fail(ErrorCode::Validation, "cocycle table has the wrong size");
  for (auto& v : values_) v = ((v % modulus_) + modulus_) % modulus_;
  for (Element g = 0; g < n; ++g) {
    if ((*this)(0, g) != 0 || (*this)(g, 0) != 0) {
      fail(ErrorCode::Validation, "cocycle is not normalized");
    }
  }
  for (Element g = 0; g < n; ++g)
    for (Element h = 0; h < n; ++h)
      for (Element k = 0; k < n; ++k) {
        std::int64_t lhs = (*this)(g, h) + (*this)(base_.mul(g, h), k);
        std::int64_t rhs = (*this)(h, k) + (*this)(g, base_.mul(h, k));
        if ((lhs - rhs) % modulus_ != 0) {
          fail(ErrorCode::Validation, "cocycle identity fails at (" + std::to_string(g) + ", " +
                                          std::to_string(h) + ", " + std::to_string(k) + ")");
        }
      }
}

Cocycle2 Cocycle2::zero(const FiniteGroup& base, std::int64_t modulus) {
  return Cocycle2(base, modulus, std::vector<std::int64_t>(base.order() * base.order(), 0));
}

bool Cocycle2::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v == 0; });
}

namespace {

FiniteGroup extension_table(const Cocycle2& c) {
  const FiniteGroup& g = c.base();
  const std::size_t n = g.order();
  const std::size_t r = static_cast<std::size_t>(c.modulus());
  if (n * r > 256) fail(ErrorCode::ResourceCap, "central extension is too large");
  std::vector<std::vector<Element>> rows(n * r, std::vector<Element>(n * r));
  for (std::size_t x = 0; x < n * r; ++x)
    for (std::size_t y = 0; y < n * r; ++y) {
      Element a = static_cast<Element>(x / r), b = static_cast<Element>(y / r);
      std::size_t t = (x % r + y % r + static_cast<std::size_t>(c(a, b))) % r;
      rows[x][y] = static_cast<Element>(g.mul(a, b) * r + t);
    }
  return FiniteGroup::from_table(std::move(rows));
}

GroupHom extension_projection(const FiniteGroup& e, const Cocycle2& c) {
  std::vector<Element> image(e.order());
  for (Element x = 0; x < e.order(); ++x) image[x] = static_cast<Element>(x / c.modulus());
  return GroupHom(e, c.base(), std::move(image));
}

GroupHom extension_kernel(const FiniteGroup& e, const Cocycle2& c) {
  const auto r = static_cast<std::size_t>(c.modulus());
  std::vector<Element> image(r);
  std::iota(image.begin(), image.end(), 0);
  return GroupHom(cyclic(r), e, std::move(image));
}

} // namespace

CentralExtension::CentralExtension(Cocycle2 cocycle)
    : cocycle_(std::move(cocycle)),
      total_(extension_table(cocycle_)),
      projection_(extension_projection(total_, cocycle_)),
      kernel_embedding_(extension_kernel(total_, cocycle_)) {
  const std::size_t r = static_cast<std::size_t>(modulus());
  for (Element x = 0; x < total_.order(); ++x) {
    bool in_kernel = projection_(x) == 0;
    if (in_kernel != (x < r)) fail(ErrorCode::Invariant, "projection kernel is not Z/r");
    if (!in_kernel) continue;
    for (Element y = 0; y < total_.order(); ++y) {
      if (total_.mul(x, y) != total_.mul(y, x)) fail(ErrorCode::Invariant, "kernel is not central");
    }
  }
}

CentralExtension central_extension(const Cocycle2& c) { return CentralExtension(c); }

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> order_profile(const FiniteGroup& g) {
  std::vector<std::size_t> p;
  for (Element x = 0; x < g.order(); ++x) p.push_back(g.element_order(x));
  std::sort(p.begin(), p.end());
  return p;
}

// Greedy generating set, preferring elements of large order.
std::vector<Element> generators(const FiniteGroup& g) {
  std::vector<Element> by_order(g.order());
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(), [&](Element a, Element b) {
    return g.element_order(a) > g.element_order(b);
  });
  std::vector<char> in(g.order(), 0);
  in[0] = 1;
  std::vector<Element> gens;
  for (Element x : by_order) {
    if (in[x]) continue;
    gens.push_back(x);
    std::vector<Element> members;
    for (Element y = 0; y < g.order(); ++y)
      if (in[y]) members.push_back(y);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (Element s : gens) {
        Element z = g.mul(members[i], s);
        if (!in[z]) {
          in[z] = 1;
          members.push_back(z);
        }
      }
    }
  }
  return gens;
}

bool extends_to_isomorphism(const FiniteGroup& a, const FiniteGroup& b,
                            const std::vector<Element>& gens, const std::vector<Element>& images) {
  const std::size_t n = a.order();
  std::vector<Element> phi(n, 0);
  std::vector<char> set(n, 0);
  set[0] = 1;
  std::vector<Element> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Element x = queue[i];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Element y = a.mul(x, gens[k]);
      Element fy = b.mul(phi[x], images[k]);
      if (set[y]) {
        if (phi[y] != fy) return false;
      } else {
        set[y] = 1;
        phi[y] = fy;
        queue.push_back(y);
      }
    }
  }
  std::vector<char> hit(n, 0);
  for (Element x = 0; x < n; ++x) {
    if (hit[phi[x]]) return false;
    hit[phi[x]] = 1;
  }
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) return false;
  return true;
}

} // namespace

bool is_cyclic(const FiniteGroup& g) {
  for (Element x = 0; x < g.order(); ++x) {
    if (g.element_order(x) == g.order()) return true;
  }
  return false;
}

bool are_isomorphic_small(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() > 16 || b.order() > 16) {
    fail(ErrorCode::ResourceCap, "isomorphism testing is limited to order 16");
  }
  if (a.order() != b.order() || a.is_abelian() != b.is_abelian()) return false;
  if (order_profile(a) != order_profile(b)) return false;
  const auto gens = generators(a);
  std::vector<Element> images(gens.size(), 0);
  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == gens.size()) return extends_to_isomorphism(a, b, gens, images);
    for (Element y = 0; y < b.order(); ++y) {
      if (b.element_order(y) != a.element_order(gens[k])) continue;
      images[k] = y;
      if (self(self, k + 1)) return true;
    }
    return false;
  };
  return search(search, 0);
}

// ---------------------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  std::size_t line, col;
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    if (auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < row.size()) {
      if (std::isspace(static_cast<unsigned char>(row[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < row.size() && !std::isspace(static_cast<unsigned char>(row[j]))) ++j;
      toks.push_back({std::string(row.substr(i, j - i)), line, i + 1});
      i = j;
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    ++line;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_error(const std::string& origin, std::size_t line, std::size_t col,
                              const std::string& msg) {
  fail(ErrorCode::Parse, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::int64_t to_number(const Token& t, const std::string& origin) {
  std::int64_t v = 0;
  bool neg = false;
  std::size_t i = 0;
  if (!t.text.empty() && t.text[0] == '-') {
    neg = true;
    i = 1;
  }
  if (i == t.text.size()) parse_error(origin, t.line, t.col, "expected an integer");
  for (; i < t.text.size(); ++i) {
    char c = t.text[i];
    if (c < '0' || c > '9') parse_error(origin, t.line, t.col, "expected an integer, got '" + t.text + "'");
    if (v > (std::int64_t{1} << 40)) parse_error(origin, t.line, t.col, "integer too large");
    v = v * 10 + (c - '0');
  }
  return neg ? -v : v;
}

// Header "keyword value" followed by a size x size table of integers.
std::pair<std::int64_t, std::vector<std::int64_t>> parse_square(
    std::string_view text, const std::string& origin, const std::string& keyword,
    std::int64_t fixed_size) {
  auto lines = tokenize(text);
  if (lines.empty()) parse_error(origin, 1, 1, "missing '" + keyword + "' header");
  const auto& head = lines[0];
  if (head.size() != 2 || head[0].text != keyword) {
    parse_error(origin, head[0].line, head[0].col, "expected '" + keyword + " <n>'");
  }
  std::int64_t value = to_number(head[1], origin);
  if (value < 1) parse_error(origin, head[1].line, head[1].col, keyword + " must be positive");
  std::int64_t size = fixed_size > 0 ? fixed_size : value;
  if (size > 256) parse_error(origin, head[1].line, head[1].col, "table too large");
  if (static_cast<std::int64_t>(lines.size()) - 1 != size) {
    const auto& last = lines.back().back();
    parse_error(origin, last.line, last.col,
                "expected " + std::to_string(size) + " rows, found " + std::to_string(lines.size() - 1));
  }
  std::vector<std::int64_t> entries;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (static_cast<std::int64_t>(lines[r].size()) != size) {
      parse_error(origin, lines[r][0].line, lines[r][0].col,
                  "expected " + std::to_string(size) + " entries in this row");
    }
    for (const auto& t : lines[r]) entries.push_back(to_number(t, origin));
  }
  return {value, entries};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

FiniteGroup parse_group_table(std::string_view text, const std::string& origin) {
  auto [n, entries] = parse_square(text, origin, "order", 0);
  std::vector<std::vector<Element>> rows(n, std::vector<Element>(n));
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b) {
      std::int64_t v = entries[a * n + b];
      if (v < 0 || v >= n) fail(ErrorCode::Validation, origin + ": table entry out of range");
      rows[a][b] = static_cast<Element>(v);
    }
  return FiniteGroup::from_table(std::move(rows));
}

FiniteGroup read_group_table(const std::filesystem::path& path) {
  return parse_group_table(slurp(path), path.string());
}

std::string format_group_table(const FiniteGroup& g) {
  std::ostringstream os;
  os << "order " << g.order() << '\n';
  for (Element a = 0; a < g.order(); ++a) {
    for (Element b = 0; b < g.order(); ++b) os << (b ? " " : "") << g.mul(a, b);
    os << '\n';
  }
  return os.str();
}

Cocycle2 parse_cocycle(std::string_view text, const FiniteGroup& base, const std::string& origin) {
  auto [r, entries] = parse_square(text, origin, "modulus", static_cast<std::int64_t>(base.order()));
  return Cocycle2(base, r, std::move(entries));
}

Cocycle2 read_cocycle(const std::filesystem::path& path, const FiniteGroup& base) {
  return parse_cocycle(slurp(path), base, path.string());
}

std::string format_cocycle(const Cocycle2& c) {
  std::ostringstream os;
  const std::size_t n = c.base().order();
  os << "modulus " << c.modulus() << '\n';
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) os << (b ? " " : "") << c(a, b);
    os << '\n';
  }
  return os.str();
}

} // namespace stacky
