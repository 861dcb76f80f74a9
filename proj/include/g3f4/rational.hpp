#pragma once

// Exact rational scalar type.
//
// Thin wrapper over GMP's mpq_class that guarantees the canonical-form
// invariant (gcd(num, den) == 1, den > 0) on every constructed value,
// including the integer/integer constructor, which raw mpq_class does not
// canonicalize.  All arithmetic is exact; division by zero throws.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace g3f4 {

class Scalar {
 public:
  Scalar() : v_(0) {}
  Scalar(long n) : v_(static_cast<long>(n)) {}  // NOLINT: implicit by design
  Scalar(int n) : v_(static_cast<long>(n)) {}   // NOLINT: implicit by design
  Scalar(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Scalar: zero denominator");
    v_.canonicalize();
  }
  explicit Scalar(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Parses "p", "-p", "p/q" (arbitrary precision).
  static Scalar from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("Scalar: cannot parse '" + s + "'");
    if (q.get_den() == 0) throw std::domain_error("Scalar: zero denominator");
    q.canonicalize();
    return Scalar(q);
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Scalar operator-() const { return Scalar(mpq_class(-v_)); }
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("Scalar: inverse of zero");
    return Scalar(mpq_class(1 / v_));
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.v_ + b.v_)); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.v_ - b.v_)); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.v_ * b.v_)); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
    return Scalar(mpq_class(a.v_ / b.v_));
  }

  Scalar& operator+=(const Scalar& b) { v_ += b.v_; return *this; }
  Scalar& operator-=(const Scalar& b) { v_ -= b.v_; return *this; }
  Scalar& operator*=(const Scalar& b) { v_ *= b.v_; return *this; }
  Scalar& operator/=(const Scalar& b) { *this = *this / b; return *this; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return a.v_ >= b.v_; }

  // "p" for integers, "p/q" otherwise; deterministic (canonical form).
  std::string str() const {
    std::string s = v_.get_num().get_str();
    if (v_.get_den() != 1) s += "/" + v_.get_den().get_str();
    return s;
  }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace g3f4
