#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace tilesep {

// Exact rational with normalized sign and gcd-reduced terms. Sizes in this
// library stay far below 2^32, so int64 intermediates never overflow.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }
  explicit Rational(int64_t n) : num(n), den(1) {}

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

}  // namespace tilesep
