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

/// \file spinnet/recoupling_graph.hpp
/// The rotation graph of coupling schemes on n+1 leaves: vertices are
/// twist-classes of coupling trees, edges single rotations. The full
/// twist-rotation graph (ordered trees, rotation and twist edges) is
/// available for small n.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spinnet/coupling_tree.hpp"

namespace spinnet {

enum class GraphKind { rotation, twist_rotation };

inline constexpr int kMaxRotationGraphN = 8;
inline constexpr int kMaxTwistRotationGraphN = 5;

class RotationGraph {
 public:
  int n() const { return n_; }
  int leaf_count() const { return n_ + 1; }
  GraphKind kind() const { return kind_; }

  std::size_t order() const { return offsets_.size() - 1; }
  /// Number of undirected edges.
  std::size_t size() const { return adjacency_.size() / 2; }

  /// Vertex ids are assigned in lexicographic order of bracketing text.
  CouplingTree tree(int v) const;
  std::string bracketing(int v) const { return print_bracketing(tree(v)); }
  /// Neighbor ids, ascending.
  std::span<const std::uint32_t> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  /// Vertex of `t` (canonicalized first for the rotation kind).
  std::optional<int> find(const CouplingTree& t) const;
  /// Like find(); throws DomainError on a leaf-count mismatch.
  int id_of(const CouplingTree& t) const;

 private:
  friend RotationGraph build_graph(int n, GraphKind kind);

  std::string key_of(const CouplingTree& t) const;

  int n_ = 0;
  GraphKind kind_ = GraphKind::rotation;
  // rotation kind: n sorted clusters per vertex, flattened
  std::vector<Cluster> clusters_;
  // twist_rotation kind: the ordered trees
  std::vector<CouplingTree> trees_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
  std::unordered_map<std::string, int> index_;
};

/// Enumerates all (2n-1)!! twist classes (times 2^n ordered trees for the
/// twist_rotation kind) by leaf insertion, then connects them by rotations.
/// Throws ResourceLimitError above kMaxRotationGraphN / kMaxTwistRotationGraphN.
RotationGraph build_graph(int n, GraphKind kind = GraphKind::rotation);

/// Process-wide cache of rotation-kind graphs.
const RotationGraph& cached_rotation_graph(int n);

/// (2n-1)!!
std::uint64_t double_factorial_odd(int n);

struct GraphStats {
  std::size_t order = 0;
  std::size_t size = 0;
  std::map<std::size_t, std::size_t> degree_histogram;
  int diameter = 0;
  /// Mean over ordered pairs of distinct vertices.
  double mean_distance = 0.0;
};

/// Exact BFS statistics. Leaf relabelings are graph automorphisms, so by
/// default one BFS per tree shape suffices; `exhaustive` runs a BFS from every
/// vertex instead.
GraphStats graph_stats(const RotationGraph& g, bool exhaustive = false);

/// Distances from `source` to every vertex.
std::vector<int> bfs_distances(const RotationGraph& g, int source);

/// Bidirectional BFS distance.
int distance(const RotationGraph& g, int from, int to);

/// Vertex ids along a shortest path from `from` to `to`, both included. Among
/// shortest paths, the lexicographically smallest id sequence.
std::vector<int> shortest_vertex_path(const RotationGraph& g, int from, int to);

/// Minimum-length move program carrying the ordered tree `from` to the ordered
/// tree `to`. For the rotation kind its rotation count equals the graph
/// distance; twists are inserted to realize each hop and to fix child order
/// at the end.
MoveSequence shortest_path(const RotationGraph& g, const CouplingTree& from,
                           const CouplingTree& to);

/// Realizes a walk of rotation-graph vertices as ordered moves starting at
/// `from` and ending exactly at `to`.
MoveSequence realize_walk(const RotationGraph& g, const CouplingTree& from,
                          std::span<const int> walk, const CouplingTree& to);

struct DistanceBoundRow {
  int n = 0;
  int diameter = 0;
  double per_n = 0.0;      // diameter / n
  double per_n_log_n = 0.0;  // diameter / (n ln n); 0 for n = 1
};

struct DistanceBoundReport {
  std::vector<DistanceBoundRow> rows;
  /// Smallest C with diameter <= C n over the rows.
  double linear_constant = 0.0;
  bool monotone = true;
};

DistanceBoundRow distance_bound_check(const RotationGraph& g);
DistanceBoundReport distance_bound_table(int n_min, int n_max);

/// One JSON object per line: {"v": id, "tree": "...", "adj": [ids]}.
std::string export_json_lines(const RotationGraph& g);
std::string export_dot(const RotationGraph& g);

}  // namespace spinnet
