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

/// \file spinnet/coupling_tree.hpp
/// Binary coupling trees, their bracketing text form, and the two elementary
/// moves: rotation (re-association) and twist (exchange of a coupled pair).
///
/// Node numbering: internal nodes are numbered 0..n-1 in post-order, so the
/// root is n-1. A rotation is addressed by its pivot node and the child edge
/// it acts on; a twist by its node. Both numberings are stable under the move
/// itself (the pivot keeps its id).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spinnet {

/// Set of leaf indices, bit i-1 for leaf i. Identifies an internal node
/// independently of child order.
using Cluster = std::uint64_t;

inline constexpr int kMaxLeaves = 63;

class CouplingTree {
 public:
  struct Node {
    int left = -1;   // index into nodes(), -1 for leaves
    int right = -1;
    int leaf = 0;    // leaf index (>= 1) for leaves, 0 for internal nodes
    Cluster cluster = 0;

    bool is_leaf() const { return leaf != 0; }
    bool operator==(const Node&) const = default;
  };

  static CouplingTree leaf(int index);
  /// (left right); the leaf sets must be disjoint.
  static CouplingTree join(const CouplingTree& left, const CouplingTree& right);
  /// The canonical tree whose internal nodes have exactly these leaf sets.
  /// Throws DomainError if the clusters do not form a full binary hierarchy on
  /// leaves 1..leaves.
  static CouplingTree from_clusters(int leaves, std::span<const Cluster> clusters);

  int leaf_count() const { return (static_cast<int>(nodes_.size()) + 1) / 2; }
  /// n: the number of internal nodes, root included.
  int internal_count() const { return static_cast<int>(internal_.size()); }

  /// All nodes in post-order; the root is last.
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(int index) const { return nodes_[index]; }
  int root_index() const { return static_cast<int>(nodes_.size()) - 1; }
  const Node& root() const { return nodes_.back(); }

  /// Position in nodes() of internal node `id`.
  int internal_index(int id) const { return internal_.at(id); }
  const Node& internal(int id) const { return nodes_[internal_.at(id)]; }
  /// Internal id of the node with this cluster, or -1.
  int find_internal(Cluster cluster) const;
  /// Leaf sets of the internal nodes, indexed by internal id.
  std::vector<Cluster> clusters() const;
  /// Internal id of the parent of internal node `id`; -1 for the root.
  int parent_of(int id) const;

  bool operator==(const CouplingTree& o) const { return nodes_ == o.nodes_; }

 private:
  friend class TreeBuilder;
  void index();

  std::vector<Node> nodes_;
  std::vector<int> internal_;
};

/// tree = leaf | "(" tree " " tree ")" ; leaf = nonzero-digit {digit}.
/// Leaves must be exactly 1..N for N leaves.
CouplingTree parse_bracketing(std::string_view text);
std::string print_bracketing(const CouplingTree& tree);

enum class Direction { left, right };

/// Rotation at the pivot's left edge: ((A B) C) -> (A (B C)).
/// Rotation at the pivot's right edge: (A (B C)) -> ((A B) C).
/// Throws DomainError for an invalid id or when that child is a leaf.
CouplingTree rotate_at(const CouplingTree& tree, int pivot, Direction direction);

/// Clusters of a twisted coupling (a b)_d. Once spins are bound the state
/// picks up (-1)^{a+b-d}.
struct TwistPhase {
  Cluster left = 0;
  Cluster right = 0;
  Cluster node = 0;
};

/// Swaps the children of internal node `node`.
std::pair<CouplingTree, TwistPhase> twist_at(const CouplingTree& tree, int node);

/// Representative of the twist class: every node has the child holding the
/// smaller leaf index on the left.
CouplingTree canonical_form(const CouplingTree& tree);

/// Child-order-free description of an unordered tree: its sorted clusters.
std::vector<Cluster> cluster_key(const CouplingTree& tree);

struct Move {
  enum class Kind { rotate, twist };
  Kind kind = Kind::rotate;
  int id = 0;  // pivot (rotate) or node (twist), post-order internal id
  Direction direction = Direction::left;  // rotate only

  static Move rotate(int pivot, Direction d) { return {Kind::rotate, pivot, d}; }
  static Move twist(int node) { return {Kind::twist, node, Direction::left}; }
  bool operator==(const Move&) const = default;
};

/// An ordered program of elementary moves.
class MoveSequence {
 public:
  MoveSequence() = default;
  explicit MoveSequence(std::vector<Move> moves) : moves_(std::move(moves)) {}

  void push_back(const Move& m) { moves_.push_back(m); }
  void append(const MoveSequence& other);
  std::size_t size() const { return moves_.size(); }
  bool empty() const { return moves_.empty(); }
  std::size_t rotation_count() const;
  const Move& operator[](std::size_t i) const { return moves_[i]; }
  auto begin() const { return moves_.begin(); }
  auto end() const { return moves_.end(); }
  const std::vector<Move>& moves() const { return moves_; }

  bool operator==(const MoveSequence&) const = default;

 private:
  std::vector<Move> moves_;
};

CouplingTree apply_move(const CouplingTree& tree, const Move& move);
CouplingTree apply_moves(const CouplingTree& tree, const MoveSequence& moves);

/// The sequence undoing `moves` when applied to apply_moves(source, moves).
MoveSequence inverse(const CouplingTree& source, const MoveSequence& moves);

/// [{"op":"rot","edge":3,"dir":"L"},{"op":"tw","node":1}]
std::string move_sequence_to_json(const MoveSequence& moves);
MoveSequence move_sequence_from_json(std::string_view json);

}  // namespace spinnet
