#include "stacky/integer.hpp"

#include <cctype>
#include <ostream>

#include "stacky/error.hpp"

namespace stacky {

namespace {

bool mpz_fits_small(const mpz_class& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) return false;
  return mpz_get_si(v.get_mpz_t()) != INT64_MIN;
}

} // namespace

Integer::Integer(unsigned long v) {
  if (v <= static_cast<unsigned long>(INT64_MAX)) {
    small_ = static_cast<std::int64_t>(v);
  } else {
    assign(mpz_class(v));
  }
}

Integer::Integer(unsigned long long v) : Integer(static_cast<unsigned long>(v)) {}

void Integer::assign(const mpz_class& v) {
  if (mpz_fits_small(v)) {
    small_ = mpz_get_si(v.get_mpz_t());
    big_.reset();
  } else {
    big_ = std::make_unique<mpz_class>(v);
    small_ = 0;
  }
}

void Integer::normalize() {
  if (big_ && mpz_fits_small(*big_)) {
    small_ = mpz_get_si(big_->get_mpz_t());
    big_.reset();
  }
}

Integer Integer::parse(std::string_view text) {
  std::string s(text);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) fail(ErrorCode::Parse, "empty integer literal");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      fail(ErrorCode::Parse, "invalid integer literal '" + s + "'");
    }
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(mpz_class(s, 10));
}

std::int64_t Integer::to_int64() const {
  if (big_) fail(ErrorCode::ResourceCap, "integer " + to_string() + " does not fit in 64 bits");
  return small_;
}

std::string Integer::to_string() const {
  return big_ ? big_->get_str(10) : std::to_string(small_);
}

std::size_t Integer::hash() const noexcept {
  if (!big_) return std::hash<std::int64_t>{}(small_);
  return std::hash<std::string>{}(big_->get_str(16));
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.to_mpz(), b.to_mpz());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Integer divexact(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return Integer(static_cast<long long>(a.small_ / b.small_));
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer floor_div(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    std::int64_t q = a.small_ / b.small_;
    std::int64_t r = a.small_ % b.small_;
    if (r != 0 && ((r < 0) != (b.small_ < 0))) --q;
    return Integer(static_cast<long long>(q));
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer mod(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    std::int64_t m = b.small_ < 0 ? -b.small_ : b.small_;
    std::int64_t r = a.small_ % m;
    if (r < 0) r += m;
    return Integer(static_cast<long long>(r));
  }
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(r);
}

bool divides(const Integer& b, const Integer& a) {
  if (b.is_zero()) return a.is_zero();
  if (!a.big_ && !b.big_) return a.small_ % b.small_ == 0;
  return mpz_divisible_p(a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t()) != 0;
}

Integer gcd(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
    std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
    while (y != 0) {
      std::int64_t t = x % y;
      x = y;
      y = t;
    }
    return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return (divexact(a, gcd(a, b)) * b).abs();
}

Bezout extended_gcd(const Integer& a, const Integer& b) {
  if (divides(b, a) && !b.is_zero()) return {b.abs(), Integer(0), Integer(b.sign())};
  if (divides(a, b) && !a.is_zero()) return {a.abs(), Integer(a.sign()), Integer(0)};
  if (a.is_zero() && b.is_zero()) return {Integer(0), Integer(1), Integer(0)};
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.to_mpz().get_mpz_t(),
             b.to_mpz().get_mpz_t());
  return {Integer(g), Integer(s), Integer(t)};
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

} // namespace stacky
