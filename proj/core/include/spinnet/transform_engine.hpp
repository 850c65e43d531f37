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

/// \file spinnet/transform_engine.hpp
/// Coupled bases over a coupling tree with bound spins, the recoupling
/// matrices of elementary moves, compiled move programs and their Hermitian
/// generators.
///
/// A RecouplingMatrix U maps coefficient vectors in its source basis to
/// coefficient vectors in its target basis: U(t, s) = <t|s>. Compiling the
/// program m_0, m_1, ..., m_{L-1} gives U_{L-1} ... U_1 U_0.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinnet/coupling_tree.hpp"
#include "spinnet/numerics.hpp"

namespace spinnet {

/// Leaf spins j_1..j_{n+1} and the total spin j. m is carried but never
/// enters a recoupling coefficient.
struct SpinBinding {
  std::vector<HalfInt> leaves;
  HalfInt j;
  HalfInt m;

  bool operator==(const SpinBinding&) const = default;
};

/// Spins of the internal nodes, indexed by post-order internal id; the last
/// entry is the total spin at the root.
struct BasisLabeling {
  std::vector<HalfInt> k;

  auto operator<=>(const BasisLabeling&) const = default;
  /// "[1,1/2]"
  std::string str() const;
};

/// The admissible labelings of one tree, lexicographically ordered.
class Basis {
 public:
  Basis(CouplingTree tree, SpinBinding binding, std::vector<BasisLabeling> labels);

  const CouplingTree& tree() const { return tree_; }
  const SpinBinding& binding() const { return binding_; }
  std::size_t size() const { return labels_.size(); }
  const BasisLabeling& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<BasisLabeling>& labels() const { return labels_; }
  /// Position of `label`, or -1.
  int find(const BasisLabeling& label) const;

  /// Spin carried by a node (leaf or internal), indexed into tree().nodes().
  HalfInt node_spin(std::size_t label, int node_index) const;

 private:
  CouplingTree tree_;
  SpinBinding binding_;
  std::vector<BasisLabeling> labels_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// All admissible k-assignments. Throws DomainError on a leaf-count mismatch
/// or a negative spin.
std::vector<BasisLabeling> enumerate_basis(const CouplingTree& tree, const SpinBinding& binding);
BasisPtr make_basis(const CouplingTree& tree, const SpinBinding& binding);

enum class MatrixMode { exact, real, automatic };

struct EngineOptions {
  MatrixMode mode = MatrixMode::automatic;
  unsigned digits = kDefaultDigits;
};

/// Square matrix between two bases, stored by sparse columns. Entries are
/// exact QRoots while every entry is a single radical, MPReal otherwise.
class RecouplingMatrix {
 public:
  using ExactColumn = std::vector<std::pair<int, QRoot>>;
  using RealColumn = std::vector<std::pair<int, MPReal>>;

  RecouplingMatrix(BasisPtr source, BasisPtr target, std::vector<ExactColumn> columns);
  RecouplingMatrix(BasisPtr source, BasisPtr target, std::vector<RealColumn> columns,
                   unsigned digits);

  static RecouplingMatrix identity(BasisPtr basis, bool exact = true,
                                   unsigned digits = kDefaultDigits);

  const Basis& source() const { return *source_; }
  const Basis& target() const { return *target_; }
  BasisPtr source_ptr() const { return source_; }
  BasisPtr target_ptr() const { return target_; }
  std::size_t dimension() const { return source_->size(); }
  bool is_exact() const { return exact_; }
  unsigned digits() const { return digits_; }
  std::size_t nonzeros() const;

  const std::vector<ExactColumn>& exact_columns() const { return exact_cols_; }
  const std::vector<RealColumn>& real_columns() const { return real_cols_; }

  /// Entry (row, col); nullopt in real mode.
  std::optional<QRoot> exact_entry(int row, int col) const;
  MPReal entry(int row, int col) const;
  double entry_double(int row, int col) const;

  Eigen::MatrixXd to_eigen() const;
  RecouplingMatrix to_real(unsigned digits) const;
  RecouplingMatrix transpose() const;

  /// next * (*this). Throws DomainError when next's source basis does not
  /// match this target basis.
  RecouplingMatrix then(const RecouplingMatrix& next) const;

  /// max |(U^T U - I)_{rs}| evaluated in double precision.
  double unitarity_defect() const;
  /// U^T U == I with exact radical arithmetic. Only valid in exact mode.
  bool is_orthogonal_exact() const;

 private:
  BasisPtr source_;
  BasisPtr target_;
  bool exact_ = true;
  unsigned digits_ = kDefaultDigits;
  std::vector<ExactColumn> exact_cols_;
  std::vector<RealColumn> real_cols_;
};

/// Max entrywise |a - b|; the bases must have equal size.
double max_deviation(const RecouplingMatrix& a, const RecouplingMatrix& b);

/// Racah transform at `pivot`: entries (-1)^{a+b+c+f} sqrt((2d+1)(2e+1))
/// {a b d; c f e} between ((a b)_d c)_f and (a (b c)_e)_f, identity on the
/// spectator labels.
RecouplingMatrix elementary_rotation_matrix(const CouplingTree& tree, int pivot,
                                            Direction direction, const SpinBinding& binding,
                                            const EngineOptions& options = {});

/// Diagonal (-1)^{a+b-d} for the coupling (a b)_d at `node`.
RecouplingMatrix elementary_twist_matrix(const CouplingTree& tree, int node,
                                         const SpinBinding& binding,
                                         const EngineOptions& options = {});

RecouplingMatrix elementary_matrix(const CouplingTree& tree, const Move& move,
                                   const SpinBinding& binding, const EngineOptions& options = {});

/// Ordered product of the elementary matrices along `moves` replayed from
/// `start`.
RecouplingMatrix compile_path(const MoveSequence& moves, const CouplingTree& start,
                              const SpinBinding& binding, const EngineOptions& options = {});

/// compile_path over the shortest rotation-graph path from `from` to `to`.
RecouplingMatrix recoupling_matrix(const CouplingTree& from, const CouplingTree& to,
                                   const SpinBinding& binding, const EngineOptions& options = {});

struct PathIndependenceReport {
  std::size_t paths = 0;  // programs compiled, the shortest one included
  double max_deviation = 0.0;
};

/// Compiles the shortest program and `trials` programs through random
/// detours, and reports the largest entrywise deviation from the shortest.
PathIndependenceReport check_path_independence(const CouplingTree& from, const CouplingTree& to,
                                               const SpinBinding& binding, int trials,
                                               std::uint64_t seed,
                                               const EngineOptions& options = {});

/// Hermitian H with exp(i H tau) = U, eigenphases in (-pi, pi]. Throws
/// DomainError when U is not unitary within `tolerance`.
Eigen::MatrixXcd hermitian_generator(const Eigen::MatrixXcd& u, double tau = 1.0,
                                     double tolerance = 1e-9);
Eigen::MatrixXcd hermitian_generator(const RecouplingMatrix& u, double tau = 1.0,
                                     double tolerance = 1e-9);

/// {"source": {...}, "target": {...}, "mode": "exact"|"real", "entries": rows}
/// with exact entries as {"sq": "p/q", "sgn": -1} and real ones as decimal
/// strings.
std::string matrix_to_json(const RecouplingMatrix& m);
RecouplingMatrix matrix_from_json(std::string_view json);

}  // namespace spinnet
