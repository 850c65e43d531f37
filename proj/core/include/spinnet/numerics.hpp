// Copyright 2026 The spinnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file spinnet/numerics.hpp
/// Exact scalar foundation: half-integer spins, big rationals, signed square
/// roots of rationals and variable-precision reals.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace spinnet {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using MPReal = boost::multiprecision::mpfr_float;

/// Decimal digits used for MPReal when nothing else is requested.
inline constexpr unsigned kDefaultDigits = 64;

/// A spin quantum number j or projection m, stored as the integer 2j.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int integer) : twice_(2 * integer) {}

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr bool is_negative() const { return twice_ < 0; }
  /// 2j + 1, the multiplicity of a spin-j multiplet.
  constexpr int dimension() const { return twice_ + 1; }
  double to_double() const { return 0.5 * twice_; }

  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  constexpr auto operator<=>(const HalfInt&) const = default;

  /// Canonical text: "3/2", "-1/2", "2".
  std::string str() const;

  /// Accepts "n" or "n/2" for a (possibly signed) decimal integer n. Decimal
  /// fractions such as "1.5" are rejected.
  static HalfInt parse(std::string_view text);

 private:
  int twice_ = 0;
};

constexpr HalfInt abs(HalfInt h) { return h.is_negative() ? -h : h; }

/// |a-b| <= c <= a+b with a+b+c integral; all three must be nonnegative.
constexpr bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) {
  if (a.is_negative() || b.is_negative() || c.is_negative()) return false;
  if ((a.twice() + b.twice() + c.twice()) % 2 != 0) return false;
  return abs(a - b) <= c && c <= a + b;
}

/// (-1)^e for an integral exponent e.
constexpr int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

/// (-1)^h; `h` must be integral.
int phase(HalfInt h);

/// n!, exact. Memoized; throws ResourceLimitError above kMaxFactorial.
const BigInt& factorial(int n);
inline constexpr int kMaxFactorial = 20000;

/// sqrt(q) when q is the square of a rational, nullopt otherwise.
std::optional<Rational> rational_sqrt(const Rational& q);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

/// Sets the default MPReal precision (decimal digits) for its lifetime.
class ScopedDigits {
 public:
  explicit ScopedDigits(unsigned digits);
  ~ScopedDigits();
  ScopedDigits(const ScopedDigits&) = delete;
  ScopedDigits& operator=(const ScopedDigits&) = delete;

 private:
  unsigned saved_;
};

/// Decimal rendering of `x` with `digits` significant digits.
std::string to_decimal(const MPReal& x, unsigned digits);

/// sign * sqrt(square) with square a nonnegative rational. Invariant:
/// sign == 0 iff square == 0.
class QRoot {
 public:
  QRoot() = default;
  QRoot(int sign, Rational square);

  static QRoot from_rational(const Rational& q);
  static QRoot from_int(long v) { return from_rational(Rational(v)); }
  /// +sqrt(q), q >= 0.
  static QRoot sqrt_of(const Rational& q);

  int sign() const { return sign_; }
  const Rational& square() const { return square_; }
  bool is_zero() const { return sign_ == 0; }

  QRoot operator*(const QRoot& o) const;
  QRoot operator-() const;
  QRoot& operator*=(const QRoot& o) { return *this = *this * o; }

  bool operator==(const QRoot& o) const {
    return sign_ == o.sign_ && square_ == o.square_;
  }
  std::strong_ordering operator<=>(const QRoot& o) const;

  /// The value as a rational, if square is a perfect rational square.
  std::optional<Rational> as_rational() const;

  MPReal to_real(unsigned digits = kDefaultDigits) const;
  double to_double() const;

  /// "0", "1/2", "-sqrt(1/3)".
  std::string str() const;

 private:
  int sign_ = 0;
  Rational square_;
};

/// t1 + t2 when both are rational multiples of one common radical.
std::optional<QRoot> sum_if_commensurate(const QRoot& t1, const QRoot& t2);

/// Running sum of QRoot terms. Stays exact while every term is a rational
/// multiple of the first nonzero term's radical; afterwards continues in
/// MPReal at the precision given on construction.
class RadicalSum {
 public:
  explicit RadicalSum(unsigned digits = kDefaultDigits) : digits_(digits) {}

  RadicalSum& operator+=(const QRoot& term);

  bool is_exact() const { return exact_; }
  /// Exact value; nullopt after the sum became incommensurate.
  std::optional<QRoot> exact() const;
  MPReal real() const;
  unsigned digits() const { return digits_; }

 private:
  unsigned digits_;
  bool exact_ = true;
  // exact value = coefficient_ * sqrt(base_)
  Rational base_;
  Rational coefficient_;
  MPReal real_;
};

}  // namespace spinnet
