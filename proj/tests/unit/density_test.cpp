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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spinnet/density.hpp"
#include "spinnet/error.hpp"

namespace spinnet {
namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

Eigen::MatrixXcd random_block(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  }
  return m;
}

Eigen::MatrixXcd random_density(std::mt19937& rng, Eigen::Index d) {
  const Eigen::MatrixXcd a = random_block(rng, d, d);
  const Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace();
}

DensityLabels labels(int twice_bra, int twice_ket) {
  return {"a", h(twice_bra), "b", h(twice_ket)};
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TEST(Decompose, MaximallyMixedHasOnlyRankZero) {
  for (int tj = 0; tj <= 4; ++tj) {
    const Eigen::Index d = tj + 1;
    const Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    const DensityBlock b = decompose_density(rho, labels(tj, tj));
    for (const auto& c : b.components) {
      if (c.k.twice() == 0) {
        EXPECT_NEAR(std::abs(c.value - Complex(1.0 / d)), 0.0, 1e-15);
      } else {
        EXPECT_LT(std::abs(c.value), 1e-15) << c.k.str() << " " << c.kappa.str();
      }
    }
  }
}

TEST(Decompose, ComponentCountAndRange) {
  const DensityBlock b = decompose_density(Eigen::MatrixXcd::Zero(3, 2), labels(2, 1));
  // k in {1/2, 3/2}: 2 + 4 components
  EXPECT_EQ(b.components.size(), 6u);
  for (const auto& c : b.components) EXPECT_EQ(c.value, Complex(0.0));
  EXPECT_EQ(b.value(h(5), h(1)), Complex(0.0));
}

TEST(Decompose, PureStateRoundTrip) {
  Eigen::VectorXcd psi(3);
  psi << Complex(1, 0), Complex(0, 1), Complex(0.5, -0.5);
  psi.normalize();
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const DensityBlock b = decompose_density(rho, labels(2, 2));
  EXPECT_LT(max_abs(reconstruct(b) - rho), 1e-14);
}

TEST(Decompose, RoundTripAllBlocksUpToThreeHalves) {
  std::mt19937 rng(5);
  for (int tb = 0; tb <= 3; ++tb) {
    for (int tk = 0; tk <= 3; ++tk) {
      const Eigen::MatrixXcd m = random_block(rng, tb + 1, tk + 1);
      const DensityBlock b = decompose_density(m, labels(tb, tk));
      EXPECT_LT(max_abs(reconstruct(b) - m), 1e-13) << tb << " " << tk;
    }
  }
}

TEST(Decompose, ShapeMismatchThrows) {
  EXPECT_THROW(decompose_density(Eigen::MatrixXcd::Zero(2, 2), labels(2, 2)), DomainError);
}

TEST(Couple, MatchesTensorProductOracle) {
  std::mt19937 rng(9);
  for (int t1b = 0; t1b <= 2; ++t1b) {
    for (int t1k = 0; t1k <= 2; ++t1k) {
      for (int t2b = 0; t2b <= 2; ++t2b) {
        for (int t2k = 0; t2k <= 2; ++t2k) {
          const Eigen::MatrixXcd r1 = random_block(rng, t1b + 1, t1k + 1);
          const Eigen::MatrixXcd r2 = random_block(rng, t2b + 1, t2k + 1);
          const Eigen::MatrixXcd ref =
              oracle::tensor_product_coupled(r1, h(t1b), h(t1k), r2, h(t2b), h(t2k));
          const Eigen::MatrixXcd lib = coupled_density_matrix(
              decompose_density(r1, labels(t1b, t1k)), decompose_density(r2, labels(t2b, t2k)));
          ASSERT_EQ(lib.rows(), ref.rows());
          ASSERT_EQ(lib.cols(), ref.cols());
          EXPECT_LT(max_abs(lib - ref), 1e-13);
          EXPECT_LT(max_abs(direct_coupled_matrix(r1, h(t1b), h(t1k), r2, h(t2b), h(t2k)) - ref),
                    1e-13);
        }
      }
    }
  }
}

TEST(Couple, SingleSectorBlock) {
  std::mt19937 rng(2);
  const DensityBlock a = decompose_density(random_density(rng, 2), labels(1, 1));
  const DensityBlock b = decompose_density(random_density(rng, 3), labels(2, 2));
  const CoupledDensityBlock c = couple_densities(a, b, h(3), h(1));
  const Eigen::MatrixXcd m = reconstruct_coupled_matrix(c);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m.cols(), 4);
  EXPECT_EQ(c.as_block().labels.sigma_bra, "a,a");
  EXPECT_THROW(couple_densities(a, b, h(7), h(1)), DomainError);
}

TEST(Couple, IsBilinear) {
  std::mt19937 rng(4);
  const auto l = labels(2, 1);
  const Eigen::MatrixXcd x = random_block(rng, 3, 2), y = random_block(rng, 3, 2);
  const Eigen::MatrixXcd z = random_block(rng, 2, 2);
  const Complex s(0.7, -1.3);
  const DensityBlock bz = decompose_density(z, labels(1, 1));
  const Eigen::MatrixXcd lhs = coupled_density_matrix(decompose_density(x + s * y, l), bz);
  const Eigen::MatrixXcd rhs = coupled_density_matrix(decompose_density(x, l), bz) +
                               s * coupled_density_matrix(decompose_density(y, l), bz);
  EXPECT_LT(max_abs(lhs - rhs), 1e-13);
}

TEST(Couple, PreservesTraceHermiticityAndPositivity) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd r1 = random_density(rng, 2 + trial % 3);
    const Eigen::MatrixXcd r2 = random_density(rng, 2 + trial % 2);
    const int t1 = static_cast<int>(r1.rows()) - 1, t2 = static_cast<int>(r2.rows()) - 1;
    const Eigen::MatrixXcd m = coupled_density_matrix(decompose_density(r1, labels(t1, t1)),
                                                      decompose_density(r2, labels(t2, t2)));
    EXPECT_NEAR(std::abs(m.trace() - Complex(1.0)), 0.0, 1e-13);
    EXPECT_LT(max_abs(m - m.adjoint()), 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-13);
  }
}

TEST(Json, DensityRoundTrip) {
  std::mt19937 rng(1);
  const Eigen::MatrixXcd m = random_block(rng, 2, 3);
  const DensityInput in = density_from_json(density_to_json(labels(1, 2), m));
  EXPECT_EQ(in.labels, labels(1, 2));
  EXPECT_LT(max_abs(in.matrix - m), 1e-15);
  const DensityInput real_entries = density_from_json(
      R"({"labels":{"j_bra":"1/2","j_ket":"1/2"},"matrix":[[0.5,0],[0,0.5]]})");
  EXPECT_EQ(real_entries.matrix(1, 1), Complex(0.5));
  EXPECT_THROW(density_from_json("{"), ParseError);
  EXPECT_THROW(density_from_json(R"({"labels":{"j_bra":"1","j_ket":"1"},"matrix":[[1]]})"),
               DomainError);
  EXPECT_NE(block_to_json(decompose_density(m, labels(1, 2))).find("\"kappa\""),
            std::string::npos);
}

}  // namespace
}  // namespace spinnet
