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
#include "spinnet/error.hpp"
#include "spinnet/recoupling_graph.hpp"
#include "spinnet/transform_engine.hpp"

namespace spinnet {
namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

SpinBinding binding(std::vector<int> twice_leaves, int twice_j) {
  SpinBinding b;
  for (int t : twice_leaves) b.leaves.push_back(h(t));
  b.j = h(twice_j);
  b.m = h(twice_j);
  return b;
}

EngineOptions exact() { return {MatrixMode::exact, 64}; }
EngineOptions real() { return {MatrixMode::real, 64}; }

TEST(Basis, ThreeHalfSpins) {
  const auto labels = enumerate_basis(parse_bracketing("((1 2) 3)"), binding({1, 1, 1}, 1));
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0].str(), "[0,1/2]");
  EXPECT_EQ(labels[1].str(), "[1,1/2]");
  EXPECT_EQ(enumerate_basis(parse_bracketing("((1 2) 3)"), binding({1, 1, 1}, 3)).size(), 1u);
  EXPECT_TRUE(enumerate_basis(parse_bracketing("((1 2) 3)"), binding({1, 1, 1}, 5)).empty());
  EXPECT_TRUE(enumerate_basis(parse_bracketing("((1 2) 3)"), binding({1, 1, 1}, 2)).empty());
}

TEST(Basis, SingleLeafAndErrors) {
  EXPECT_EQ(enumerate_basis(parse_bracketing("1"), binding({3}, 3)).size(), 1u);
  EXPECT_TRUE(enumerate_basis(parse_bracketing("1"), binding({3}, 1)).empty());
  EXPECT_THROW(enumerate_basis(parse_bracketing("(1 2)"), binding({1}, 1)), DomainError);
  EXPECT_THROW(enumerate_basis(parse_bracketing("(1 2)"), binding({1, -1}, 0)), DomainError);
}

TEST(Basis, DimensionIsTreeIndependent) {
  const SpinBinding b = binding({2, 1, 3, 2, 1}, 3);
  const RotationGraph& g = cached_rotation_graph(4);
  const std::size_t d = make_basis(g.tree(0), b)->size();
  EXPECT_GT(d, 1u);
  for (std::size_t v = 0; v < g.order(); ++v) {
    EXPECT_EQ(make_basis(g.tree(static_cast<int>(v)), b)->size(), d);
  }
}

TEST(Rotation, HalfSpinExample) {
  const RecouplingMatrix u =
      elementary_rotation_matrix(parse_bracketing("((1 2) 3)"), 1, Direction::left,
                                 binding({1, 1, 1}, 1), exact());
  ASSERT_TRUE(u.is_exact());
  EXPECT_EQ(*u.exact_entry(0, 0), QRoot(-1, Rational(1, 4)));
  EXPECT_EQ(*u.exact_entry(0, 1), QRoot(1, Rational(3, 4)));
  EXPECT_EQ(*u.exact_entry(1, 0), QRoot(1, Rational(3, 4)));
  EXPECT_EQ(*u.exact_entry(1, 1), QRoot(1, Rational(1, 4)));
  EXPECT_TRUE(u.is_orthogonal_exact());
  EXPECT_EQ(print_bracketing(u.target().tree()), "(1 (2 3))");
}

TEST(Rotation, SpinZeroThirdLeafIsIdentity) {
  const RecouplingMatrix u =
      elementary_rotation_matrix(parse_bracketing("((1 2) 3)"), 1, Direction::left,
                                 binding({2, 3, 0}, 3), exact());
  ASSERT_EQ(u.dimension(), 1u);  // d = f = 3/2 and e = b
  EXPECT_EQ(*u.exact_entry(0, 0), QRoot::from_int(1));
}

TEST(Rotation, RightIsTransposeOfLeft) {
  const SpinBinding b = binding({2, 3, 2}, 1);
  const CouplingTree t = parse_bracketing("((1 2) 3)");
  const RecouplingMatrix l = elementary_rotation_matrix(t, 1, Direction::left, b, exact());
  const RecouplingMatrix r =
      elementary_rotation_matrix(rotate_at(t, 1, Direction::left), 1, Direction::right, b, exact());
  EXPECT_EQ(max_deviation(r, l.transpose()), 0.0);
  EXPECT_TRUE(l.then(r).to_eigen().isIdentity(1e-15));
}

TEST(Rotation, InvalidPivotThrows) {
  EXPECT_THROW(elementary_rotation_matrix(parse_bracketing("((1 2) 3)"), 1, Direction::right,
                                          binding({1, 1, 1}, 1)),
               DomainError);
}

TEST(Twist, DiagonalPhasesSquareToIdentity) {
  const SpinBinding b = binding({1, 2, 1}, 2);
  const CouplingTree t = parse_bracketing("((1 2) 3)");
  const RecouplingMatrix tw = elementary_twist_matrix(t, 0, b, exact());
  // (1/2 1)_k with k = 1/2 or 3/2: phase (-1)^{1/2 + 1 - k}
  ASSERT_EQ(tw.dimension(), 2u);
  EXPECT_EQ(*tw.exact_entry(0, 0), QRoot::from_int(-1));
  EXPECT_EQ(*tw.exact_entry(1, 1), QRoot::from_int(1));
  EXPECT_TRUE(tw.exact_entry(0, 1)->is_zero());
  const RecouplingMatrix twice = tw.then(elementary_twist_matrix(tw.target().tree(), 0, b, exact()));
  EXPECT_EQ(max_deviation(twice, RecouplingMatrix::identity(twice.source_ptr())), 0.0);
}

// Pivots are located by leaf set because ids shift between trees.
Move rotate_by_cluster(const CouplingTree& t, Cluster pivot, Direction d) {
  return Move::rotate(t.find_internal(pivot), d);
}

TEST(Pentagon, ClosedCycleIsIdentity) {
  const CouplingTree start = parse_bracketing("(((1 2) 3) 4)");
  MoveSequence seq;
  CouplingTree cur = start;
  auto step = [&](Cluster pivot, Direction d) {
    const Move m = rotate_by_cluster(cur, pivot, d);
    seq.push_back(m);
    cur = apply_move(cur, m);
  };
  step(0b1111, Direction::left);   // ((1 2) (3 4))
  step(0b1111, Direction::left);   // (1 (2 (3 4)))
  step(0b1110, Direction::right);  // (1 ((2 3) 4))
  step(0b1111, Direction::right);  // ((1 (2 3)) 4)
  step(0b0111, Direction::right);  // (((1 2) 3) 4)
  ASSERT_EQ(cur, start);
  for (int twice_j : {0, 2, 4}) {
    const SpinBinding b = binding({2, 2, 2, 2}, twice_j);
    const RecouplingMatrix u = compile_path(seq, start, b, exact());
    ASSERT_TRUE(u.is_exact());
    EXPECT_EQ(max_deviation(u, RecouplingMatrix::identity(u.source_ptr())), 0.0) << twice_j;
  }
}

TEST(Compile, CompositionMatchesProductOfSteps) {
  const SpinBinding b = binding({1, 2, 3, 1}, 1);
  const CouplingTree start = parse_bracketing("(((1 2) 3) 4)");
  MoveSequence seq;
  seq.push_back(Move::rotate(2, Direction::left));
  seq.push_back(Move::twist(0));
  seq.push_back(Move::rotate(2, Direction::left));
  const RecouplingMatrix whole = compile_path(seq, start, b, real());
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(whole.dimension(), whole.dimension());
  CouplingTree cur = start;
  for (const Move& m : seq) {
    product = elementary_matrix(cur, m, b, real()).to_eigen() * product;
    cur = apply_move(cur, m);
  }
  EXPECT_LT((whole.to_eigen() - product).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(whole.target().tree(), cur);
}

TEST(Compile, ColumnsAreProbabilityDistributions) {
  const SpinBinding b = binding({2, 2, 2, 2, 2}, 2);
  const RecouplingMatrix u = recoupling_matrix(parse_bracketing("((((1 2) 3) 4) 5)"),
                                               parse_bracketing("((1 5) ((2 4) 3))"), b);
  const Eigen::MatrixXd m = u.to_eigen();
  for (Eigen::Index c = 0; c < m.cols(); ++c) EXPECT_NEAR(m.col(c).squaredNorm(), 1.0, 1e-14);
  EXPECT_LT(u.unitarity_defect(), 1e-14);
}

TEST(Compile, IndependentOfProjection) {
  SpinBinding b = binding({2, 1, 3}, 2);
  const CouplingTree from = parse_bracketing("((1 2) 3)");
  const CouplingTree to = parse_bracketing("(2 (3 1))");
  const RecouplingMatrix top = recoupling_matrix(from, to, b, exact());
  b.m = h(-2);
  EXPECT_EQ(max_deviation(top, recoupling_matrix(from, to, b, exact())), 0.0);
}

TEST(Compile, AutomaticModeSwitchesToReal) {
  const SpinBinding b3 = binding({1, 1, 1, 1}, 0);
  EXPECT_TRUE(recoupling_matrix(parse_bracketing("(((1 2) 3) 4)"),
                                parse_bracketing("((1 2) (3 4))"), b3)
                  .is_exact());
  const SpinBinding b4 = binding({2, 2, 2, 2, 2}, 2);
  EXPECT_FALSE(recoupling_matrix(parse_bracketing("((((1 2) 3) 4) 5)"),
                                 parse_bracketing("(1 (2 (3 (4 5))))"), b4)
                   .is_exact());
}

TEST(Compile, ExactAndRealAgree) {
  const SpinBinding b = binding({3, 2, 1, 2}, 2);
  const CouplingTree from = parse_bracketing("((1 2) (3 4))");
  const CouplingTree to = parse_bracketing("(4 (1 (3 2)))");
  const RecouplingMatrix e = recoupling_matrix(from, to, b, exact());
  const RecouplingMatrix r = recoupling_matrix(from, to, b, real());
  EXPECT_LT(max_deviation(e, r), 1e-30);
}

TEST(Compile, ComposesAcrossIntermediateTrees) {
  std::mt19937 rng(23);
  for (int n : {3, 4}) {
    const RotationGraph& g = cached_rotation_graph(n);
    SpinBinding b;
    for (int i = 0; i <= n; ++i) b.leaves.push_back(h(1 + i % 2));
    b.j = b.m = h((n + 1) % 2 == 0 ? 2 : 1);
    for (int trial = 0; trial < 10; ++trial) {
      const CouplingTree t1 = g.tree(static_cast<int>(rng() % g.order()));
      const CouplingTree t2 = twist_at(g.tree(static_cast<int>(rng() % g.order())), 0).first;
      const CouplingTree t3 = g.tree(static_cast<int>(rng() % g.order()));
      const RecouplingMatrix direct = recoupling_matrix(t1, t3, b);
      const RecouplingMatrix via = recoupling_matrix(t1, t2, b).then(recoupling_matrix(t2, t3, b));
      EXPECT_LT(max_deviation(direct, via), 1e-10);
    }
  }
}

TEST(PathIndependence, RandomDetoursAgree) {
  const SpinBinding b = binding({2, 1, 1, 2}, 2);
  const PathIndependenceReport rep = check_path_independence(
      parse_bracketing("(((1 2) 3) 4)"), parse_bracketing("((4 3) (1 2))"), b, 6, 42);
  EXPECT_EQ(rep.paths, 7u);
  EXPECT_LT(rep.max_deviation, 1e-25);
}

TEST(Generator, ReflectionAndRoundTrip) {
  const RecouplingMatrix u =
      elementary_rotation_matrix(parse_bracketing("((1 2) 3)"), 1, Direction::left,
                                 binding({1, 1, 1}, 1), exact());
  const Eigen::MatrixXcd hgen = hermitian_generator(u);
  EXPECT_LT((hgen - hgen.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hgen);
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), std::numbers::pi, 1e-12);
  const Eigen::MatrixXcd back = oracle::expm_i(hgen);
  EXPECT_LT((back - u.to_eigen().cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generator, TimeStepScales) {
  Eigen::MatrixXcd u(2, 2);
  const double a = 0.3;
  u << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Eigen::MatrixXcd h1 = hermitian_generator(u, 1.0);
  const Eigen::MatrixXcd h2 = hermitian_generator(u, 2.0);
  EXPECT_LT((h1 - 2.0 * h2).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((oracle::expm_i(h2, 2.0) - u).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Generator, RejectsNonUnitary) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2) * 1.1;
  EXPECT_THROW(hermitian_generator(m), DomainError);
  EXPECT_THROW(hermitian_generator(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(2, 2)), 0.0),
               DomainError);
}

TEST(Json, RoundTripsExactAndReal) {
  const SpinBinding b = binding({2, 1, 3}, 2);
  const CouplingTree from = parse_bracketing("((1 2) 3)");
  const CouplingTree to = parse_bracketing("(1 (3 2))");
  for (const EngineOptions& opts : {exact(), real()}) {
    const RecouplingMatrix m = recoupling_matrix(from, to, b, opts);
    const RecouplingMatrix back = matrix_from_json(matrix_to_json(m));
    EXPECT_EQ(back.is_exact(), m.is_exact());
    EXPECT_EQ(back.source().tree(), m.source().tree());
    EXPECT_EQ(back.target().tree(), m.target().tree());
    EXPECT_LT(max_deviation(m, back), 1e-40);
  }
  EXPECT_THROW(matrix_from_json("{\"source\": 1}"), Error);
}

}  // namespace
}  // namespace spinnet
