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

/// \file spinnet/density.hpp
/// Statistical-tensor (multipole) decomposition of density-matrix blocks and
/// the 9j coupling of two blocks.
///
/// A block <s' j' m'| rho |s j m> is stored as a (2j'+1) x (2j+1) matrix with
/// rows m' = j', j'-1, ..., -j' and columns m = j, ..., -j. Its components
/// satisfy
///   <j' m'| rho |j m> = sum_{k kappa} rho^k_kappa <j m k kappa | j' m'>.

#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/numerics.hpp"

namespace spinnet {

using Complex = std::complex<double>;

/// Bra labels (sigma', j') and ket labels (sigma, j). The sigmas are opaque.
struct DensityLabels {
  std::string sigma_bra;
  HalfInt j_bra;
  std::string sigma_ket;
  HalfInt j_ket;

  bool operator==(const DensityLabels&) const = default;
};

struct TensorComponent {
  HalfInt k;
  HalfInt kappa;
  Complex value;
};

/// Components ordered by k ascending, then kappa ascending.
struct DensityBlock {
  DensityLabels labels;
  std::vector<TensorComponent> components;

  /// Zero when (k, kappa) is outside the block's range.
  Complex value(HalfInt k, HalfInt kappa) const;
};

/// Throws DomainError when the matrix shape does not match the labels.
DensityBlock decompose_density(const Eigen::MatrixXcd& elements, const DensityLabels& labels);
Eigen::MatrixXcd reconstruct(const DensityBlock& block);

struct CoupledLabels {
  DensityLabels first;
  DensityLabels second;
  HalfInt j_bra;  // j'
  HalfInt j_ket;  // j
};

struct CoupledDensityBlock {
  CoupledLabels labels;
  std::vector<TensorComponent> components;

  /// The same components under labels (s1' s2' j', s1 s2 j).
  DensityBlock as_block() const;
};

/// R^k_kappa = sum W 9j{j1 j2 j; k1 k2 k; j1' j2' j'} rho1^{k1}_{kappa1}
/// rho2^{k2}_{kappa2} <k1 kappa1 k2 kappa2 | k kappa>, with
/// W = sqrt((2j+1)(2k+1)(2j1'+1)(2j2'+1)). Throws DomainError when j or j'
/// is not reachable from the block spins.
CoupledDensityBlock couple_densities(const DensityBlock& first, const DensityBlock& second,
                                     HalfInt j_ket, HalfInt j_bra);

/// Sublevel matrix of one coupled (j', j) sector.
Eigen::MatrixXcd reconstruct_coupled_matrix(const CoupledDensityBlock& block);

/// rho1 (x) rho2 in the full coupled basis: sectors j ascending, each with
/// m descending, for bra and ket alike.
Eigen::MatrixXcd coupled_density_matrix(const DensityBlock& first, const DensityBlock& second);

/// The same operator assembled directly from the sublevel matrices with
/// Clebsch-Gordan coefficients, without statistical tensors.
Eigen::MatrixXcd direct_coupled_matrix(const Eigen::MatrixXcd& first, HalfInt j1_bra,
                                       HalfInt j1_ket, const Eigen::MatrixXcd& second,
                                       HalfInt j2_bra, HalfInt j2_ket);

// ---------------------------------------------------------------------------
// JSON: {"labels": {"sigma_bra": "", "j_bra": "1/2", "sigma_ket": "", "j_ket":
// "1/2"}, "matrix": [[[re, im], ...], ...]}

struct DensityInput {
  DensityLabels labels;
  Eigen::MatrixXcd matrix;
};

DensityInput density_from_json(std::string_view json);
std::string density_to_json(const DensityLabels& labels, const Eigen::MatrixXcd& matrix);
std::string block_to_json(const DensityBlock& block);

}  // namespace spinnet
