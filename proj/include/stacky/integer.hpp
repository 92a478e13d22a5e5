#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace stacky {

/// Arbitrary-precision integer with an inline 64-bit fast path.
///
/// Values that fit in int64 (excluding INT64_MIN) are stored inline; every
/// operation checks for overflow and transparently promotes to GMP. Results
/// that fit again are demoted, so the representation of a value is unique.
class Integer {
public:
  Integer() noexcept = default;
  Integer(int v) noexcept : small_(v) {}
  Integer(long v) { assign(static_cast<long long>(v)); }
  Integer(long long v) { assign(v); }
  Integer(unsigned v) noexcept : small_(v) {}
  Integer(unsigned long v);
  Integer(unsigned long long v);
  explicit Integer(const mpz_class& v) { assign(v); }

  Integer(const Integer& other)
      : small_(other.small_),
        big_(other.big_ ? std::make_unique<mpz_class>(*other.big_) : nullptr) {}
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& other) {
    if (this != &other) {
      small_ = other.small_;
      big_ = other.big_ ? std::make_unique<mpz_class>(*other.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  /// Parses an optionally signed decimal string; throws Error(Parse).
  static Integer parse(std::string_view text);

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_one() const noexcept { return !big_ && small_ == 1; }
  bool is_unit() const noexcept {
    return !big_ && (small_ == 1 || small_ == -1);
  }
  int sign() const noexcept {
    if (big_) return sgn(*big_);
    return (small_ > 0) - (small_ < 0);
  }
  bool fits_int64() const noexcept { return !big_; }
  std::int64_t to_int64() const; // throws if it does not fit
  mpz_class to_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(small_)); }
  std::string to_string() const;
  std::size_t hash() const noexcept;

  Integer operator-() const;
  Integer abs() const;

  Integer& operator+=(const Integer& rhs);
  Integer& operator-=(const Integer& rhs);
  Integer& operator*=(const Integer& rhs);

  friend Integer operator+(Integer lhs, const Integer& rhs) { return lhs += rhs; }
  friend Integer operator-(Integer lhs, const Integer& rhs) { return lhs -= rhs; }
  friend Integer operator*(Integer lhs, const Integer& rhs) { return lhs *= rhs; }

  /// this -= f * x, the inner step of every elimination.
  void submul(const Integer& f, const Integer& x);

  friend bool operator==(const Integer& a, const Integer& b) noexcept;
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept;

  /// Exact division; the caller guarantees b | a.
  friend Integer divexact(const Integer& a, const Integer& b);
  /// Quotient rounded toward negative infinity.
  friend Integer floor_div(const Integer& a, const Integer& b);
  /// Remainder in [0, |b|) for b != 0.
  friend Integer mod(const Integer& a, const Integer& b);
  /// True iff b divides a (b == 0 divides only 0).
  friend bool divides(const Integer& b, const Integer& a);
  /// Nonnegative gcd.
  friend Integer gcd(const Integer& a, const Integer& b);
  friend Integer lcm(const Integer& a, const Integer& b);

private:
  void assign(long long v);
  void assign(const mpz_class& v);
  void normalize();

  std::int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

/// g = gcd(a, b) >= 0 together with s, t such that s*a + t*b = g.
/// When b divides a the result is (|b|, 0, sign(b)); when a divides b it is
/// (|a|, sign(a), 0), keeping elimination multipliers small.
struct Bezout {
  Integer g, s, t;
};
Bezout extended_gcd(const Integer& a, const Integer& b);

std::ostream& operator<<(std::ostream& os, const Integer& v);

// Inline fast paths; the out-of-line slow paths live in integer.cpp.

inline void Integer::assign(long long v) {
  if (v == INT64_MIN) {
    big_ = std::make_unique<mpz_class>();
    mpz_set_si(big_->get_mpz_t(), static_cast<long>(v));
  } else {
    small_ = v;
    big_.reset();
  }
}

inline Integer& Integer::operator+=(const Integer& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_add_overflow(small_, rhs.small_, &r) &&
      r != INT64_MIN) {
    small_ = r;
    return *this;
  }
  mpz_class v = to_mpz() + rhs.to_mpz();
  assign(v);
  return *this;
}

inline Integer& Integer::operator-=(const Integer& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_sub_overflow(small_, rhs.small_, &r) &&
      r != INT64_MIN) {
    small_ = r;
    return *this;
  }
  mpz_class v = to_mpz() - rhs.to_mpz();
  assign(v);
  return *this;
}

inline Integer& Integer::operator*=(const Integer& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_mul_overflow(small_, rhs.small_, &r) &&
      r != INT64_MIN) {
    small_ = r;
    return *this;
  }
  mpz_class v = to_mpz() * rhs.to_mpz();
  assign(v);
  return *this;
}

inline void Integer::submul(const Integer& f, const Integer& x) {
  std::int64_t p, r;
  if (!big_ && !f.big_ && !x.big_ && !__builtin_mul_overflow(f.small_, x.small_, &p) &&
      !__builtin_sub_overflow(small_, p, &r) && r != INT64_MIN) {
    small_ = r;
    return;
  }
  mpz_class v = to_mpz() - f.to_mpz() * x.to_mpz();
  assign(v);
}

inline Integer Integer::operator-() const {
  if (!big_) return Integer(static_cast<long long>(-small_));
  return Integer(mpz_class(-*big_));
}

inline Integer Integer::abs() const { return sign() < 0 ? -*this : *this; }

inline bool operator==(const Integer& a, const Integer& b) noexcept {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false; // representations are unique
}

} // namespace stacky

template <>
struct std::hash<stacky::Integer> {
  std::size_t operator()(const stacky::Integer& v) const noexcept { return v.hash(); }
};
