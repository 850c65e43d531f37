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

/// \file spinnet/semiclassics.hpp
/// Ponzano-Regge asymptotics of the 6j symbol.
///
/// Edge r of the tetrahedron carries length l_r = j_r + 1/2 of
/// {j1 j2 j3; j4 j5 j6}. With vertices P0..P3 the edges are
/// 1 = P1P2, 2 = P0P2, 3 = P0P1, 4 = P0P3, 5 = P1P3, 6 = P2P3, so the four
/// triads of the symbol are the four faces.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinnet/wigner.hpp"

namespace spinnet {

using EdgeLengths = std::array<double, 6>;

/// Cayley-Menger determinant (288 V^2). Recomputed with 50-digit arithmetic
/// when the double result is within 1e-9 (relative) of zero.
double cayley_menger(const EdgeLengths& lengths);

/// sqrt(CM / 288), or nullopt when CM <= 0 (no Euclidean tetrahedron).
/// Throws DomainError for a nonpositive length.
std::optional<double> tetra_volume(const EdgeLengths& lengths);

/// Angle between the outward normals of the two faces sharing each edge,
/// i.e. pi minus the interior dihedral angle. Throws DomainError when the
/// lengths admit no Euclidean tetrahedron.
std::array<double, 6> dihedral_angles(const EdgeLengths& lengths);

EdgeLengths edge_lengths(const SixJArgs& spins);

struct PrEstimate {
  double value = 0.0;     // envelope * cos(phase)
  double envelope = 0.0;  // (12 pi V)^{-1/2}
  double phase = 0.0;     // sum_r l_r theta_r + pi/4
  double volume = 0.0;
};

/// nullopt when a triad is inadmissible or the tetrahedron is not Euclidean.
std::optional<PrEstimate> pr_estimate(const SixJArgs& spins);

struct PrRow {
  int lambda = 0;
  double exact = 0.0;
  double estimate = 0.0;
  double envelope = 0.0;
  double abs_err = 0.0;
  /// |exact - estimate| / envelope.
  double rel_env_err = 0.0;
  /// False for lambda = 1, where the asymptotics are not expected to hold.
  bool reliable = true;
};

struct PrTable {
  std::vector<PrRow> rows;
  /// Least-squares slope of log(envelope) against log(lambda) over the
  /// reliable rows; NaN with fewer than two.
  double log_envelope_slope = 0.0;
  /// rel_env_err strictly decreases along the reliable rows.
  bool error_decreasing = false;
};

/// Exact 6j against the asymptotic estimate for every scaled spin set
/// lambda * base. Throws DomainError when a scaled set is inadmissible.
PrTable pr_compare(const SixJArgs& base, const std::vector<int>& scales);

/// lambda,exact,estimate,abs_err,rel_env_err
std::string pr_table_csv(const PrTable& table);

}  // namespace spinnet
