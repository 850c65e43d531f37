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

/// \file spinnet/wigner.hpp
/// Exact Clebsch-Gordan, 6j and 9j symbols (Condon-Shortley phases) and
/// executable checks of the Biedenharn-Elliott (pentagon) and Racah
/// (triangle) identities.

#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "spinnet/numerics.hpp"

namespace spinnet {

/// {j[0] j[1] j[2]; j[3] j[4] j[5]}. Triads (0,1,2), (0,4,5), (3,1,5),
/// (3,4,2). Inadmissible arguments are legal and evaluate to 0.
struct SixJArgs {
  std::array<HalfInt, 6> j;

  auto operator<=>(const SixJArgs&) const = default;
};

/// 3x3 layout in row-major order.
struct NineJArgs {
  std::array<HalfInt, 9> j;

  auto operator<=>(const NineJArgs&) const = default;
};

/// A value that is exact when possible. `real` is always populated.
struct Amplitude {
  std::optional<QRoot> exact;
  MPReal real;

  bool is_exact() const { return exact.has_value(); }
  double to_double() const { return real.convert_to<double>(); }
};

/// Racah's triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
/// Throws DomainError if the triad is inadmissible.
Rational triangle_coeff(HalfInt a, HalfInt b, HalfInt c);

/// <j1 m1 j2 m2 | j m>. Zero when any selection rule fails.
QRoot clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j,
                     HalfInt m);

QRoot wigner6j(const SixJArgs& args);
inline QRoot wigner6j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e,
                      HalfInt f) {
  return wigner6j(SixJArgs{{a, b, c, d, e, f}});
}

/// The 24 classical symmetry images (column permutations combined with
/// upper/lower swaps in pairs of columns), starting with `args` itself.
std::array<SixJArgs, 24> sixj_symmetries(const SixJArgs& args);

/// Lexicographically smallest symmetry image. Used as the 6j cache key.
SixJArgs canonical_sixj(const SixJArgs& args);

/// Single sum over x of (2x+1) (-1)^{2x} times three 6j symbols. Every term
/// shares one radical for admissible inputs, so the result is normally exact.
Amplitude wigner9j(const NineJArgs& args, unsigned digits = kDefaultDigits);

/// Number of distinct 6j values currently memoized.
std::size_t sixj_cache_size();

// ---------------------------------------------------------------------------
// Identity verification

enum class VerifyMode { exact, real };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::exact;
  unsigned digits = 50;
  double tolerance = 1e-25;
};

struct IdentityReport {
  Amplitude lhs;
  Amplitude rhs;
  MPReal max_deviation;
  /// lhs and rhs were compared as exact QRoots.
  bool exact = false;
  /// Empty summation range and zero right-hand side: 0 = 0.
  bool vacuous = false;
  bool passed = false;
};

/// Sum_x (-)^{R+x} (2x+1) {a b x; c d p}{c d x; e f q}{e f x; b a r} against
/// {p q r; e a d}{p q r; f b c}, R = a+b+c+d+e+f+p+q+r. Spins are passed in
/// the order a b c d e f p q r.
IdentityReport verify_pentagon(const std::array<HalfInt, 9>& spins,
                               const VerifyOptions& options = {});

/// Sum_x (-)^{p+q+x} (2x+1) {a b x; c d p}{a b x; d c q} against
/// {a c q; b d p}. Spins are passed in the order a b c d p q.
IdentityReport verify_racah_triangle(const std::array<HalfInt, 6>& spins,
                                     const VerifyOptions& options = {});

struct ScanSummary {
  std::size_t checked = 0;
  std::size_t vacuous = 0;
  std::size_t exact = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;
};

/// Every spin assignment with all nine spins <= max_spin whose seven fixed
/// triads (those not involving x) are admissible.
ScanSummary scan_pentagon(HalfInt max_spin, const VerifyOptions& options = {});

/// Every assignment of the six spins in [0, max_spin].
ScanSummary scan_racah_triangle(HalfInt max_spin, const VerifyOptions& options = {});

}  // namespace spinnet
