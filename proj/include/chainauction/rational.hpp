// Copyright 2026 The chainauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINAUCTION_RATIONAL_HPP_
#define CHAINAUCTION_RATIONAL_HPP_

#include <cstdint>
#include <limits>
#include <string>

#include "chainauction/errors.hpp"

namespace chainauction {

// Exact rational number with 64-bit numerator and denominator.
//
// Invariants: den > 0, gcd(|num|, den) == 1, 0 is represented as 0/1.
// All operations are exact; intermediate products use 128-bit integers and
// any result whose reduced numerator or denominator does not fit in 64 bits
// throws OverflowError instead of silently losing precision. Prices, bids
// and transfers in this library never round.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(runtime/explicit)
  Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  static Rat make(__int128 n, __int128 d) {
    if (d == 0) throw BadParameter("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r.num_ = checked_cast(n);
    r.den_ = checked_cast(d);
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw BadParameter("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;  // |num| <= 2^63 - 1, negation never overflows
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  // Largest integer <= *this.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  // Smallest integer >= *this.
  std::int64_t ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Parses either a decimal literal with optional exponent ("3", "-0.25",
  // "1e-3", ".5") or an explicit fraction "p/q". Exact: "0.1" becomes 1/10.
  static Rat parse(const std::string& text);

  // Renders the exact value. If the denominator divides a power of ten the
  // result is a finite decimal ("0.25", "-3", "1.7"); otherwise "p/q".
  // parse() round-trips both forms.
  std::string to_string() const;

 private:
  static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static std::int64_t checked_cast(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
      throw OverflowError("rational exceeds 64-bit numerator/denominator");
    }
    return static_cast<std::int64_t>(v);
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// A rational extended with +inf / -inf. Used only for the out-of-range
// curve sentinels (a supply curve continues with +inf, a demand curve with
// -inf), so the price formulas max(S_l, B_{l+1}) and min(S_{l+1}, B_l)
// degrade gracefully at the curve ends. Supports comparison and clamped
// min/max against finite rationals; no arithmetic on infinities.
class ExtRat {
 public:
  ExtRat() : cls_(0), v_() {}
  ExtRat(const Rat& v) : cls_(0), v_(v) {}  // NOLINT(runtime/explicit)
  static ExtRat pos_inf() {
    ExtRat e;
    e.cls_ = 1;
    return e;
  }
  static ExtRat neg_inf() {
    ExtRat e;
    e.cls_ = -1;
    return e;
  }

  bool is_finite() const { return cls_ == 0; }
  bool is_pos_inf() const { return cls_ == 1; }
  bool is_neg_inf() const { return cls_ == -1; }

  const Rat& finite() const {
    if (cls_ != 0) throw BadParameter("infinite sentinel used as a price");
    return v_;
  }

  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.cls_ != b.cls_) return a.cls_ < b.cls_;
    return a.cls_ == 0 && a.v_ < b.v_;
  }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

 private:
  int cls_;  // -1: -inf, 0: finite, +1: +inf
  Rat v_;
};

// min / max of a finite rational against a possibly-infinite sentinel,
// where the result is known to be finite (the sentinel can only lose).
inline Rat min_finite(const Rat& a, const ExtRat& b) {
  if (!b.is_finite()) {
    if (b.is_neg_inf()) throw BadParameter("min against -inf is not finite");
    return a;
  }
  return min(a, b.finite());
}
inline Rat max_finite(const Rat& a, const ExtRat& b) {
  if (!b.is_finite()) {
    if (b.is_pos_inf()) throw BadParameter("max against +inf is not finite");
    return a;
  }
  return max(a, b.finite());
}

}  // namespace chainauction

#endif  // CHAINAUCTION_RATIONAL_HPP_
