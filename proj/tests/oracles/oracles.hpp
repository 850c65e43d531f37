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

// Independent reference computations used only by the tests. None of them
// goes through the Racah formulas, the cluster-set graph construction or
// the statistical-tensor code they are compared against.

#pragma once

#include <Eigen/Dense>

#include "spinnet/numerics.hpp"
#include "spinnet/semiclassics.hpp"
#include "spinnet/wigner.hpp"

namespace spinnet::oracle {

/// <j1 m1 j2 m2 | j m> from highest-weight states, the lowering operator and
/// Gram-Schmidt in the product basis.
MPReal ladder_cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m,
                 unsigned digits = 50);

/// 6j from the overlap of ((a b)_d c)_f and (a (b c)_e)_f built from ladder
/// Clebsch-Gordan coefficients.
MPReal contraction_6j(const SixJArgs& args, unsigned digits = 50);

/// 9j from the overlap of ((j1 j2) (j3 j4)) and ((j1 j3) (j2 j4)).
MPReal contraction_9j(const NineJArgs& args, unsigned digits = 50);

/// rho1 (x) rho2 changed to the coupled basis (sectors j ascending, m
/// descending) with ladder Clebsch-Gordan coefficients.
Eigen::MatrixXcd tensor_product_coupled(const Eigen::MatrixXcd& rho1, HalfInt j1_bra,
                                        HalfInt j1_ket, const Eigen::MatrixXcd& rho2,
                                        HalfInt j2_bra, HalfInt j2_ket);

/// exp(i h tau) by Eigen's scaling-and-squaring matrix exponential.
Eigen::MatrixXcd expm_i(const Eigen::MatrixXcd& h, double tau = 1.0);

struct BruteGraph {
  std::size_t order = 0;
  std::size_t size = 0;
  int diameter = 0;
};

/// Rotation graph explored by BFS over canonical ordered trees, starting from
/// the left comb.
BruteGraph brute_rotation_graph(int n);

/// Volume of the tetrahedron from explicit vertex coordinates.
double embedded_volume(const EdgeLengths& lengths);

}  // namespace spinnet::oracle
