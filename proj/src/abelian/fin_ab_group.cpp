#include "stacky/fin_ab_group.hpp"

#include <algorithm>
#include <sstream>

#include "stacky/error.hpp"

namespace stacky {

FinAbGroup::FinAbGroup(std::size_t free_rank, std::vector<Integer> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < Integer(2)) {
      fail(ErrorCode::Validation, "invariant factor " + factors_[i].to_string() + " is below 2");
    }
    if (i > 0 && !divides(factors_[i - 1], factors_[i])) {
      fail(ErrorCode::Validation, "invariant factors do not form a divisibility chain");
    }
  }
}

FinAbGroup FinAbGroup::from_cyclic_orders(const std::vector<Integer>& orders) {
  std::size_t free_rank = 0;
  std::vector<Integer> d;
  for (const auto& o : orders) {
    if (o.is_zero()) {
      ++free_rank;
    } else if (!o.abs().is_one()) {
      d.push_back(o.abs());
    }
  }
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      if (divides(d[a], d[b])) continue;
      Integer g = gcd(d[a], d[b]);
      Integer l = lcm(d[a], d[b]);
      d[a] = std::move(g);
      d[b] = std::move(l);
    }
  }
  std::erase_if(d, [](const Integer& x) { return x.is_one(); });
  std::sort(d.begin(), d.end());
  return FinAbGroup(free_rank, std::move(d));
}

FinAbGroup FinAbGroup::parse(std::string_view text) {
  std::vector<Integer> orders;
  std::string s(text);
  std::erase_if(s, [](char c) { return c == ' ' || c == '\t'; });
  if (s == "0") return {};
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (term == "Z") {
      orders.push_back(Integer(0));
    } else if (term.rfind("Z^", 0) == 0) {
      Integer k = Integer::parse(term.substr(2));
      if (k < Integer(1)) fail(ErrorCode::Parse, "bad free rank in '" + std::string(text) + "'");
      for (std::int64_t i = 0; i < k.to_int64(); ++i) orders.push_back(Integer(0));
    } else if (term.rfind("Z/", 0) == 0) {
      Integer d = Integer::parse(term.substr(2));
      if (d < Integer(2)) fail(ErrorCode::Parse, "bad cyclic factor in '" + std::string(text) + "'");
      orders.push_back(d);
    } else {
      fail(ErrorCode::Parse, "cannot parse abelian group '" + std::string(text) + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  FinAbGroup g = from_cyclic_orders(orders);
  if (g.to_string() != s && g.to_string() != std::string(text)) {
    // Accept only canonical spellings so that printing round-trips.
    std::string canon = g.to_string();
    std::erase_if(canon, [](char c) { return c == ' '; });
    if (canon != s) fail(ErrorCode::Parse, "group '" + std::string(text) + "' is not in canonical form");
  }
  return g;
}

Integer FinAbGroup::generator_order(std::size_t k) const {
  if (k < factors_.size()) return factors_[k];
  if (k < generator_count()) return Integer(0);
  fail(ErrorCode::Validation, "generator index out of range");
}

Integer FinAbGroup::order() const {
  if (free_rank_ != 0) fail(ErrorCode::Validation, "infinite group has no finite order");
  Integer n(1);
  for (const auto& d : factors_) n *= d;
  return n;
}

Integer FinAbGroup::exponent() const { return factors_.empty() ? Integer(1) : factors_.back(); }

std::vector<Integer> FinAbGroup::reduce(std::vector<Integer> coords) const {
  if (coords.size() != generator_count()) fail(ErrorCode::Validation, "coordinate count mismatch");
  for (std::size_t k = 0; k < factors_.size(); ++k) coords[k] = mod(coords[k], factors_[k]);
  return coords;
}

Integer FinAbGroup::element_order(const std::vector<Integer>& coords) const {
  auto c = reduce(coords);
  for (std::size_t k = factors_.size(); k < c.size(); ++k) {
    if (!c[k].is_zero()) return Integer(0);
  }
  Integer order(1);
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    order = lcm(order, divexact(factors_[k], gcd(factors_[k], c[k])));
  }
  return order;
}

std::string FinAbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ == 1) {
    os << "Z";
    first = false;
  } else if (free_rank_ > 1) {
    os << "Z^" << free_rank_;
    first = false;
  }
  for (const auto& d : factors_) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  return os.str();
}

FinAbGroup direct_sum(const FinAbGroup& a, const FinAbGroup& b) { return direct_sum({a, b}); }

FinAbGroup direct_sum(const std::vector<FinAbGroup>& parts) {
  std::vector<Integer> orders;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.free_rank(); ++i) orders.push_back(Integer(0));
    orders.insert(orders.end(), p.invariant_factors().begin(), p.invariant_factors().end());
  }
  return FinAbGroup::from_cyclic_orders(orders);
}

FinAbGroup hom_to_cyclic(const FinAbGroup& a, const Integer& r) {
  if (r < Integer(1)) fail(ErrorCode::Validation, "hom_to_cyclic needs r >= 1");
  std::vector<Integer> orders(a.free_rank(), r);
  for (const auto& d : a.invariant_factors()) orders.push_back(gcd(d, r));
  return FinAbGroup::from_cyclic_orders(orders);
}

} // namespace stacky
