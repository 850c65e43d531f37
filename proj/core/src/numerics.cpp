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

#include "spinnet/numerics.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "spinnet/error.hpp"

namespace spinnet {

namespace {

bool parse_int(std::string_view text, long& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

HalfInt HalfInt::parse(std::string_view text) {
  const auto slash = text.find('/');
  long num = 0;
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) {
      throw ParseError("invalid spin '" + std::string(text) + "'", 0);
    }
    return HalfInt::from_twice(static_cast<int>(2 * num));
  }
  long den = 0;
  if (!parse_int(text.substr(0, slash), num)) {
    throw ParseError("invalid spin numerator in '" + std::string(text) + "'", 0);
  }
  if (!parse_int(text.substr(slash + 1), den) || den != 2) {
    throw ParseError("spin denominator must be 2 in '" + std::string(text) + "'",
                     slash + 1);
  }
  return HalfInt::from_twice(static_cast<int>(num));
}

int phase(HalfInt h) {
  if (!h.is_integer()) {
    throw DomainError("phase exponent " + h.str() + " is not an integer");
  }
  return parity_sign(h.twice() / 2);
}

const BigInt& factorial(int n) {
  static std::shared_mutex mutex;
  static std::deque<BigInt> table{BigInt(1)};
  if (n < 0) throw DomainError("factorial of negative number");
  if (n > kMaxFactorial) {
    throw ResourceLimitError("factorial table limit exceeded: " + std::to_string(n));
  }
  {
    std::shared_lock lock(mutex);
    if (static_cast<std::size_t>(n) < table.size()) return table[n];
  }
  std::unique_lock lock(mutex);
  while (table.size() <= static_cast<std::size_t>(n)) {
    // deque::push_back keeps references to existing elements valid
    table.push_back(table.back() * static_cast<long>(table.size()));
  }
  return table[n];
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (!mpz_perfect_square_p(num.backend().data()) ||
      !mpz_perfect_square_p(den.backend().data())) {
    return std::nullopt;
  }
  return Rational(boost::multiprecision::sqrt(num), boost::multiprecision::sqrt(den));
}

std::string to_string(const Rational& q) {
  return q.str();
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  auto parse_big = [&](std::string_view part, std::size_t offset) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw ParseError("empty integer", offset);
    for (std::size_t k = i; k < part.size(); ++k) {
      if (part[k] < '0' || part[k] > '9') {
        throw ParseError("invalid digit in rational", offset + k);
      }
    }
    return BigInt(std::string(part[0] == '+' ? part.substr(1) : part));
  };
  if (slash == std::string_view::npos) return Rational(parse_big(text, 0));
  BigInt num = parse_big(text.substr(0, slash), 0);
  BigInt den = parse_big(text.substr(slash + 1), slash + 1);
  if (den == 0) throw ParseError("zero denominator", slash + 1);
  return Rational(num, den);
}

ScopedDigits::ScopedDigits(unsigned digits) : saved_(MPReal::default_precision()) {
  MPReal::default_precision(digits);
}

ScopedDigits::~ScopedDigits() { MPReal::default_precision(saved_); }

std::string to_decimal(const MPReal& x, unsigned digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// QRoot

QRoot::QRoot(int sign, Rational square) : sign_(sign), square_(std::move(square)) {
  if (square_ < 0) throw DomainError("QRoot square must be nonnegative");
  if (sign_ < -1 || sign_ > 1) throw DomainError("QRoot sign must be -1, 0 or +1");
  if ((sign_ == 0) != (square_ == 0)) {
    throw DomainError("QRoot sign is zero iff square is zero");
  }
}

QRoot QRoot::from_rational(const Rational& q) {
  const int s = q.sign();
  return QRoot(s, q * q);
}

QRoot QRoot::sqrt_of(const Rational& q) {
  if (q < 0) throw DomainError("square root of negative rational");
  return QRoot(q.sign(), q);
}

QRoot QRoot::operator*(const QRoot& o) const {
  QRoot r;
  r.sign_ = sign_ * o.sign_;
  if (r.sign_ != 0) r.square_ = square_ * o.square_;
  return r;
}

QRoot QRoot::operator-() const {
  QRoot r = *this;
  r.sign_ = -sign_;
  return r;
}

std::strong_ordering QRoot::operator<=>(const QRoot& o) const {
  if (sign_ != o.sign_) return sign_ <=> o.sign_;
  if (sign_ == 0 || square_ == o.square_) return std::strong_ordering::equal;
  const bool less_mag = square_ < o.square_;
  if (sign_ > 0) return less_mag ? std::strong_ordering::less : std::strong_ordering::greater;
  return less_mag ? std::strong_ordering::greater : std::strong_ordering::less;
}

std::optional<Rational> QRoot::as_rational() const {
  auto root = rational_sqrt(square_);
  if (!root) return std::nullopt;
  return sign_ < 0 ? Rational(-*root) : *root;
}

MPReal QRoot::to_real(unsigned digits) const {
  ScopedDigits guard(digits);
  if (sign_ == 0) return MPReal(0);
  MPReal v = boost::multiprecision::sqrt(MPReal(square_));
  return sign_ < 0 ? MPReal(-v) : v;
}

double QRoot::to_double() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::sqrt(square_.convert_to<double>());
}

std::string QRoot::str() const {
  if (sign_ == 0) return "0";
  if (auto q = as_rational()) return to_string(*q);
  return std::string(sign_ < 0 ? "-" : "") + "sqrt(" + to_string(square_) + ")";
}

std::optional<QRoot> sum_if_commensurate(const QRoot& t1, const QRoot& t2) {
  if (t1.is_zero()) return t2;
  if (t2.is_zero()) return t1;
  auto ratio = rational_sqrt(t2.square() / t1.square());
  if (!ratio) return std::nullopt;
  // t1 + t2 = t1 * (1 + s * ratio)
  const Rational factor = 1 + t1.sign() * t2.sign() * *ratio;
  return QRoot(t1.sign() * factor.sign(), t1.square() * factor * factor);
}

// ---------------------------------------------------------------------------
// RadicalSum

RadicalSum& RadicalSum::operator+=(const QRoot& term) {
  if (term.is_zero()) return *this;
  if (exact_) {
    if (base_ == 0) {
      base_ = term.square();
      coefficient_ = term.sign();
      return *this;
    }
    if (auto ratio = rational_sqrt(term.square() / base_)) {
      coefficient_ += term.sign() * *ratio;
      return *this;
    }
    // incommensurate from here on
    real_ = exact()->to_real(digits_);
    exact_ = false;
  }
  ScopedDigits guard(digits_);
  real_ += term.to_real(digits_);
  return *this;
}

std::optional<QRoot> RadicalSum::exact() const {
  if (!exact_) return std::nullopt;
  if (coefficient_ == 0) return QRoot();
  return QRoot(coefficient_.sign(), coefficient_ * coefficient_ * base_);
}

MPReal RadicalSum::real() const {
  if (exact_) return exact()->to_real(digits_);
  return real_;
}

}  // namespace spinnet
