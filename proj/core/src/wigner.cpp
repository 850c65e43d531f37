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

#include "spinnet/wigner.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "spinnet/error.hpp"

namespace spinnet {

namespace {

// Packs up to six twice-values below 1024 into one key; nullopt otherwise.
template <std::size_t N>
std::optional<std::uint64_t> pack_key(const std::array<HalfInt, N>& v) {
  static_assert(N <= 6);
  std::uint64_t key = 0;
  for (HalfInt h : v) {
    if (h.twice() < 0 || h.twice() >= 1024) return std::nullopt;
    key = (key << 10) | static_cast<std::uint64_t>(h.twice());
  }
  return key;
}

template <typename Value>
class MemoTable {
 public:
  std::optional<Value> find(std::uint64_t key) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  void insert(std::uint64_t key, const Value& value) {
    std::unique_lock lock(mutex_);
    if (table_.size() < kMaxEntries) table_.emplace(key, value);
  }
  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

 private:
  static constexpr std::size_t kMaxEntries = 1u << 22;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, Value> table_;
};

MemoTable<Rational>& triangle_table() {
  static MemoTable<Rational> table;
  return table;
}

MemoTable<QRoot>& sixj_table() {
  static MemoTable<QRoot> table;
  return table;
}

// Integer value of a HalfInt known to be integral.
int whole(HalfInt h) { return h.twice() / 2; }

const BigInt& fact(int n) { return factorial(n); }

QRoot racah_sixj(const SixJArgs& s) {
  const auto& j = s.j;
  if (!triangle_ok(j[0], j[1], j[2]) || !triangle_ok(j[0], j[4], j[5]) ||
      !triangle_ok(j[3], j[1], j[5]) || !triangle_ok(j[3], j[4], j[2])) {
    return QRoot();
  }
  const int a1 = whole(j[0] + j[1] + j[2]);
  const int a2 = whole(j[0] + j[4] + j[5]);
  const int a3 = whole(j[3] + j[1] + j[5]);
  const int a4 = whole(j[3] + j[4] + j[2]);
  const int b1 = whole(j[0] + j[1] + j[3] + j[4]);
  const int b2 = whole(j[1] + j[2] + j[4] + j[5]);
  const int b3 = whole(j[2] + j[0] + j[5] + j[3]);
  const int lo = std::max({a1, a2, a3, a4});
  const int hi = std::min({b1, b2, b3});

  Rational sum = 0;
  for (int t = lo; t <= hi; ++t) {
    BigInt den = fact(t - a1) * fact(t - a2) * fact(t - a3) * fact(t - a4) *
                 fact(b1 - t) * fact(b2 - t) * fact(b3 - t);
    Rational term(fact(t + 1), den);
    if (t % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  if (sum == 0) return QRoot();
  const Rational deltas = triangle_coeff(j[0], j[1], j[2]) * triangle_coeff(j[0], j[4], j[5]) *
                          triangle_coeff(j[3], j[1], j[5]) * triangle_coeff(j[3], j[4], j[2]);
  return QRoot(sum.sign(), deltas * sum * sum);
}

// Range of x for which (a, b, x) is a triad, intersected over all pairs.
struct XRange {
  HalfInt lo, hi;
  bool empty() const { return hi < lo; }
};

XRange x_range(std::initializer_list<std::pair<HalfInt, HalfInt>> pairs) {
  XRange r{HalfInt(0), HalfInt::from_twice(1 << 20)};
  int parity = -1;
  for (auto [u, v] : pairs) {
    if (u.is_negative() || v.is_negative()) return {HalfInt(1), HalfInt(0)};
    const int p = (u + v).twice() & 1;
    if (parity >= 0 && p != parity) return {HalfInt(1), HalfInt(0)};
    parity = p;
    r.lo = std::max(r.lo, abs(u - v));
    r.hi = std::min(r.hi, u + v);
  }
  return r;
}

Amplitude finish(const RadicalSum& sum) {
  Amplitude a;
  a.exact = sum.exact();
  a.real = sum.real();
  return a;
}

Amplitude from_exact(const QRoot& v, unsigned digits) {
  return Amplitude{v, v.to_real(digits)};
}

}  // namespace

Rational triangle_coeff(HalfInt a, HalfInt b, HalfInt c) {
  if (!triangle_ok(a, b, c)) {
    throw DomainError("triad (" + a.str() + ", " + b.str() + ", " + c.str() +
                      ") is not admissible");
  }
  const auto key = pack_key(std::array<HalfInt, 3>{a, b, c});
  if (key) {
    if (auto hit = triangle_table().find(*key)) return *hit;
  }
  Rational value(fact(whole(a + b - c)) * fact(whole(a - b + c)) * fact(whole(-a + b + c)),
                 fact(whole(a + b + c) + 1));
  if (key) triangle_table().insert(*key, value);
  return value;
}

QRoot clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m) {
  if (m != m1 + m2) return QRoot();
  if (!triangle_ok(j1, j2, j)) return QRoot();
  auto projection_ok = [](HalfInt jj, HalfInt mm) {
    return abs(mm) <= jj && (jj + mm).is_integer();
  };
  if (!projection_ok(j1, m1) || !projection_ok(j2, m2) || !projection_ok(j, m)) {
    return QRoot();
  }
  const int p1 = whole(j1 + j2 - j);
  const int p2 = whole(j1 - m1);
  const int p3 = whole(j2 + m2);
  const int q1 = whole(j - j2 + m1);
  const int q2 = whole(j - j1 - m2);
  const int lo = std::max({0, -q1, -q2});
  const int hi = std::min({p1, p2, p3});
  Rational sum = 0;
  for (int k = lo; k <= hi; ++k) {
    BigInt den = fact(k) * fact(p1 - k) * fact(p2 - k) * fact(p3 - k) * fact(q1 + k) *
                 fact(q2 + k);
    if (k % 2 == 0) {
      sum += Rational(BigInt(1), den);
    } else {
      sum -= Rational(BigInt(1), den);
    }
  }
  if (sum == 0) return QRoot();
  const BigInt projections = fact(whole(j1 + m1)) * fact(whole(j1 - m1)) *
                             fact(whole(j2 + m2)) * fact(whole(j2 - m2)) *
                             fact(whole(j + m)) * fact(whole(j - m));
  const Rational square =
      Rational(j.dimension()) * triangle_coeff(j1, j2, j) * Rational(projections) * sum * sum;
  return QRoot(sum.sign(), square);
}

std::array<SixJArgs, 24> sixj_symmetries(const SixJArgs& args) {
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  // which columns have their upper and lower entries exchanged
  static constexpr std::array<std::array<bool, 3>, 4> kFlips{
      {{false, false, false}, {true, true, false}, {true, false, true}, {false, true, true}}};
  std::array<SixJArgs, 24> out;
  std::size_t i = 0;
  for (const auto& perm : kPerms) {
    for (const auto& flip : kFlips) {
      SixJArgs s;
      for (int c = 0; c < 3; ++c) {
        HalfInt upper = args.j[perm[c]];
        HalfInt lower = args.j[perm[c] + 3];
        if (flip[c]) std::swap(upper, lower);
        s.j[c] = upper;
        s.j[c + 3] = lower;
      }
      out[i++] = s;
    }
  }
  return out;
}

SixJArgs canonical_sixj(const SixJArgs& args) {
  const auto images = sixj_symmetries(args);
  return *std::min_element(images.begin(), images.end());
}

QRoot wigner6j(const SixJArgs& args) {
  const SixJArgs canon = canonical_sixj(args);
  const auto key = pack_key(canon.j);
  if (key) {
    if (auto hit = sixj_table().find(*key)) return *hit;
  }
  QRoot value = racah_sixj(canon);
  if (key) sixj_table().insert(*key, value);
  return value;
}

std::size_t sixj_cache_size() { return sixj_table().size(); }

Amplitude wigner9j(const NineJArgs& args, unsigned digits) {
  const auto& j = args.j;
  RadicalSum sum(digits);
  const XRange range = x_range({{j[0], j[8]}, {j[3], j[7]}, {j[1], j[5]}});
  if (!range.empty()) {
    for (HalfInt x = range.lo; x <= range.hi; x += HalfInt(1)) {
      QRoot term = wigner6j(j[0], j[3], j[6], j[7], j[8], x);
      if (term.is_zero()) continue;
      term *= wigner6j(j[1], j[4], j[7], j[3], x, j[5]);
      if (term.is_zero()) continue;
      term *= wigner6j(j[2], j[5], j[8], x, j[0], j[1]);
      if (term.is_zero()) continue;
      // (-1)^{2x} (2x+1)
      term *= QRoot::from_int(parity_sign(x.twice()) * x.dimension());
      sum += term;
    }
  }
  return finish(sum);
}

// ---------------------------------------------------------------------------
// Identities

namespace {

class SideSum {
 public:
  explicit SideSum(const VerifyOptions& options)
      : options_(options), exact_(options.digits) {
    ScopedDigits guard(options.digits);
    real_ = 0;
  }

  void add(const QRoot& term) {
    if (options_.mode == VerifyMode::exact) {
      exact_ += term;
    } else if (!term.is_zero()) {
      ScopedDigits guard(options_.digits);
      real_ += term.to_real(options_.digits);
    }
  }

  Amplitude value() const {
    if (options_.mode == VerifyMode::exact) return finish(exact_);
    return Amplitude{std::nullopt, real_};
  }

 private:
  const VerifyOptions& options_;
  RadicalSum exact_;
  MPReal real_;
};

IdentityReport compare(const SideSum& lhs_sum, const QRoot& rhs, bool empty_range,
                       const VerifyOptions& options) {
  IdentityReport report;
  report.lhs = lhs_sum.value();
  report.rhs = from_exact(rhs, options.digits);
  report.vacuous = empty_range && rhs.is_zero();
  ScopedDigits guard(options.digits);
  if (report.lhs.is_exact()) {
    report.exact = true;
    report.passed = *report.lhs.exact == rhs;
    report.max_deviation =
        report.passed ? MPReal(0) : MPReal(boost::multiprecision::abs(report.lhs.real - report.rhs.real));
    return report;
  }
  report.max_deviation = boost::multiprecision::abs(report.lhs.real - report.rhs.real);
  report.passed = report.max_deviation <= options.tolerance;
  return report;
}

}  // namespace

IdentityReport verify_pentagon(const std::array<HalfInt, 9>& s, const VerifyOptions& options) {
  const HalfInt a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5], p = s[6], q = s[7],
                r = s[8];
  const HalfInt big_r = a + b + c + d + e + f + p + q + r;
  SideSum lhs(options);
  const XRange range = x_range({{a, b}, {c, d}, {e, f}});
  if (!range.empty()) {
    for (HalfInt x = range.lo; x <= range.hi; x += HalfInt(1)) {
      QRoot term = wigner6j(a, b, x, c, d, p);
      if (term.is_zero()) continue;
      term *= wigner6j(c, d, x, e, f, q);
      if (term.is_zero()) continue;
      term *= wigner6j(e, f, x, b, a, r);
      if (term.is_zero()) continue;
      term *= QRoot::from_int(phase(big_r + x) * x.dimension());
      lhs.add(term);
    }
  }
  const QRoot rhs = wigner6j(p, q, r, e, a, d) * wigner6j(p, q, r, f, b, c);
  return compare(lhs, rhs, range.empty(), options);
}

IdentityReport verify_racah_triangle(const std::array<HalfInt, 6>& s,
                                     const VerifyOptions& options) {
  const HalfInt a = s[0], b = s[1], c = s[2], d = s[3], p = s[4], q = s[5];
  SideSum lhs(options);
  const XRange range = x_range({{a, b}, {c, d}});
  if (!range.empty()) {
    for (HalfInt x = range.lo; x <= range.hi; x += HalfInt(1)) {
      QRoot term = wigner6j(a, b, x, c, d, p);
      if (term.is_zero()) continue;
      term *= wigner6j(a, b, x, d, c, q);
      if (term.is_zero()) continue;
      term *= QRoot::from_int(phase(p + q + x) * x.dimension());
      lhs.add(term);
    }
  }
  const QRoot rhs = wigner6j(a, c, q, b, d, p);
  return compare(lhs, rhs, range.empty(), options);
}

namespace {

void tally(ScanSummary& summary, const IdentityReport& report) {
  ++summary.checked;
  if (report.vacuous) ++summary.vacuous;
  if (report.exact) ++summary.exact;
  if (!report.passed) ++summary.failures;
  summary.max_deviation = std::max(summary.max_deviation, report.max_deviation.convert_to<double>());
}

std::vector<HalfInt> spins_up_to(HalfInt max_spin) {
  std::vector<HalfInt> out;
  for (int t = 0; t <= max_spin.twice(); ++t) out.push_back(HalfInt::from_twice(t));
  return out;
}

}  // namespace

ScanSummary scan_pentagon(HalfInt max_spin, const VerifyOptions& options) {
  const auto spins = spins_up_to(max_spin);
  ScanSummary summary;
  for (HalfInt a : spins)
    for (HalfInt d : spins)
      for (HalfInt p : spins) {
        if (!triangle_ok(a, d, p)) continue;
        for (HalfInt b : spins)
          for (HalfInt c : spins) {
            if (!triangle_ok(c, b, p)) continue;
            for (HalfInt e : spins)
              for (HalfInt q : spins) {
                if (!triangle_ok(e, d, q)) continue;
                for (HalfInt f : spins) {
                  if (!triangle_ok(c, f, q)) continue;
                  for (HalfInt r : spins) {
                    if (!triangle_ok(e, a, r) || !triangle_ok(b, f, r) ||
                        !triangle_ok(p, q, r)) {
                      continue;
                    }
                    tally(summary, verify_pentagon({a, b, c, d, e, f, p, q, r}, options));
                  }
                }
              }
          }
      }
  return summary;
}

ScanSummary scan_racah_triangle(HalfInt max_spin, const VerifyOptions& options) {
  const auto spins = spins_up_to(max_spin);
  ScanSummary summary;
  for (HalfInt a : spins)
    for (HalfInt b : spins)
      for (HalfInt c : spins)
        for (HalfInt d : spins)
          for (HalfInt p : spins)
            for (HalfInt q : spins) {
              tally(summary, verify_racah_triangle({a, b, c, d, p, q}, options));
            }
  return summary;
}

}  // namespace spinnet
