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

#include "spinnet/coupling_tree.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

#include "spinnet/error.hpp"

namespace spinnet {

class TreeBuilder {
 public:
  int add_leaf(int index) {
    CouplingTree::Node n;
    n.leaf = index;
    n.cluster = Cluster{1} << (index - 1);
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add_join(int left, int right) {
    CouplingTree::Node n;
    n.left = left;
    n.right = right;
    n.cluster = nodes_[left].cluster | nodes_[right].cluster;
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int copy(const CouplingTree& tree, int index) {
    const auto& n = tree.node(index);
    if (n.is_leaf()) return add_leaf(n.leaf);
    const int l = copy(tree, n.left);
    const int r = copy(tree, n.right);
    return add_join(l, r);
  }

  Cluster cluster(int index) const { return nodes_[index].cluster; }

  CouplingTree finish() {
    CouplingTree t;
    t.nodes_ = std::move(nodes_);
    t.index();
    return t;
  }

 private:
  std::vector<CouplingTree::Node> nodes_;
};

namespace {

Cluster lowest(Cluster c) { return c & (~c + 1); }

// Rebuilds `tree`, replacing the subtree at node index `target` by whatever
// `rewrite` appends to the builder.
template <typename Rewrite>
int rebuild(TreeBuilder& b, const CouplingTree& tree, int index, int target,
            const Rewrite& rewrite) {
  if (index == target) return rewrite(b);
  const auto& n = tree.node(index);
  if (n.is_leaf()) return b.add_leaf(n.leaf);
  const int l = rebuild(b, tree, n.left, target, rewrite);
  const int r = rebuild(b, tree, n.right, target, rewrite);
  return b.add_join(l, r);
}

int canonical_copy(TreeBuilder& b, const CouplingTree& tree, int index) {
  const auto& n = tree.node(index);
  if (n.is_leaf()) return b.add_leaf(n.leaf);
  int first = n.left;
  int second = n.right;
  if (lowest(tree.node(second).cluster) < lowest(tree.node(first).cluster)) {
    std::swap(first, second);
  }
  const int l = canonical_copy(b, tree, first);
  const int r = canonical_copy(b, tree, second);
  return b.add_join(l, r);
}

void check_internal_id(const CouplingTree& tree, int id, const char* what) {
  if (id < 0 || id >= tree.internal_count()) {
    throw DomainError(std::string("invalid ") + what + " id " + std::to_string(id) +
                      " for tree with " + std::to_string(tree.internal_count()) +
                      " internal nodes");
  }
}

class BracketingParser {
 public:
  explicit BracketingParser(std::string_view text) : text_(text) {}

  CouplingTree run() {
    if (text_.empty()) throw ParseError("empty bracketing", 0);
    const int root = parse_tree();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing character", pos_);
    (void)root;
    check_leaf_set();
    return builder_.finish();
  }

 private:
  int parse_tree() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (text_[pos_] == '(') {
      ++pos_;
      const int left = parse_tree();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        throw ParseError("arity error: grouping with a single member", pos_);
      }
      expect(' ');
      const int right = parse_tree();
      if (pos_ < text_.size() && text_[pos_] == ' ') {
        throw ParseError("arity error: non-binary grouping", pos_);
      }
      expect(')');
      if (builder_.cluster(left) & builder_.cluster(right)) {
        throw ParseError("leaf-set error: duplicate leaf index", pos_ - 1);
      }
      return builder_.add_join(left, right);
    }
    return parse_leaf();
  }

  int parse_leaf() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || text_[pos_] < '1' || text_[pos_] > '9') {
      throw ParseError("expected '(' or a leaf index", pos_);
    }
    long value = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      value = value * 10 + (text_[pos_] - '0');
      if (value > kMaxLeaves) {
        throw ParseError("leaf index exceeds " + std::to_string(kMaxLeaves), start);
      }
      ++pos_;
    }
    const int index = static_cast<int>(value);
    leaves_.push_back({index, start});
    return builder_.add_leaf(index);
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  void check_leaf_set() {
    const int n = static_cast<int>(leaves_.size());
    std::vector<bool> seen(n + 1, false);
    for (auto [index, at] : leaves_) {
      if (index > n) {
        throw ParseError("leaf-set error: index " + std::to_string(index) +
                             " exceeds leaf count " + std::to_string(n),
                         at);
      }
      if (seen[index]) throw ParseError("leaf-set error: duplicate leaf index", at);
      seen[index] = true;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  TreeBuilder builder_;
  std::vector<std::pair<int, std::size_t>> leaves_;
};

void print_into(const CouplingTree& tree, int index, std::string& out) {
  const auto& n = tree.node(index);
  if (n.is_leaf()) {
    out += std::to_string(n.leaf);
    return;
  }
  out += '(';
  print_into(tree, n.left, out);
  out += ' ';
  print_into(tree, n.right, out);
  out += ')';
}

}  // namespace

// ---------------------------------------------------------------------------
// CouplingTree

void CouplingTree::index() {
  internal_.clear();
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    if (!nodes_[i].is_leaf()) internal_.push_back(i);
  }
}

CouplingTree CouplingTree::leaf(int index) {
  if (index < 1 || index > kMaxLeaves) throw DomainError("leaf index out of range");
  TreeBuilder b;
  b.add_leaf(index);
  return b.finish();
}

CouplingTree CouplingTree::join(const CouplingTree& left, const CouplingTree& right) {
  if (left.root().cluster & right.root().cluster) {
    throw DomainError("join: subtrees share leaves");
  }
  TreeBuilder b;
  const int l = b.copy(left, left.root_index());
  const int r = b.copy(right, right.root_index());
  b.add_join(l, r);
  return b.finish();
}

CouplingTree CouplingTree::from_clusters(int leaves, std::span<const Cluster> clusters) {
  if (leaves < 1 || leaves > kMaxLeaves) throw DomainError("leaf count out of range");
  const Cluster full = (Cluster{1} << leaves) - 1;
  if (static_cast<int>(clusters.size()) != leaves - 1) {
    throw DomainError("expected " + std::to_string(leaves - 1) + " clusters");
  }
  std::vector<Cluster> sorted(clusters.begin(), clusters.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("duplicate cluster");
  }
  auto contains = [&](Cluster c) { return std::binary_search(sorted.begin(), sorted.end(), c); };
  if (leaves > 1 && !contains(full)) throw DomainError("clusters lack the root");

  TreeBuilder b;
  auto build = [&](auto&& self, Cluster mask) -> int {
    if (std::popcount(mask) == 1) return b.add_leaf(std::countr_zero(mask) + 1);
    Cluster part = 0;
    for (Cluster c : sorted) {
      if (c != mask && (c & ~mask) == 0 && std::popcount(c) > std::popcount(part)) part = c;
    }
    if (part == 0) part = lowest(mask);
    const Cluster rest = mask & ~part;
    if (std::popcount(rest) > 1 && !contains(rest)) {
      throw DomainError("clusters do not form a binary hierarchy");
    }
    Cluster first = part, second = rest;
    if (lowest(second) < lowest(first)) std::swap(first, second);
    const int l = self(self, first);
    const int r = self(self, second);
    return b.add_join(l, r);
  };
  build(build, full);
  return b.finish();
}

int CouplingTree::find_internal(Cluster cluster) const {
  for (int id = 0; id < internal_count(); ++id) {
    if (nodes_[internal_[id]].cluster == cluster) return id;
  }
  return -1;
}

std::vector<Cluster> CouplingTree::clusters() const {
  std::vector<Cluster> out;
  out.reserve(internal_.size());
  for (int i : internal_) out.push_back(nodes_[i].cluster);
  return out;
}

int CouplingTree::parent_of(int id) const {
  const int index = internal_.at(id);
  for (int p = 0; p < internal_count(); ++p) {
    const auto& n = nodes_[internal_[p]];
    if (n.left == index || n.right == index) return p;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Text form

CouplingTree parse_bracketing(std::string_view text) { return BracketingParser(text).run(); }

std::string print_bracketing(const CouplingTree& tree) {
  std::string out;
  print_into(tree, tree.root_index(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Moves

CouplingTree rotate_at(const CouplingTree& tree, int pivot, Direction direction) {
  check_internal_id(tree, pivot, "edge");
  const int p = tree.internal_index(pivot);
  const auto& pn = tree.node(p);
  const int child = direction == Direction::left ? pn.left : pn.right;
  if (tree.node(child).is_leaf()) {
    throw DomainError("edge " + std::to_string(pivot) +
                      (direction == Direction::left ? "L" : "R") + " is incident to a leaf");
  }
  const auto& cn = tree.node(child);
  TreeBuilder b;
  rebuild(b, tree, tree.root_index(), p, [&](TreeBuilder& out) {
    if (direction == Direction::left) {
      // ((A B) C) -> (A (B C))
      const int a = out.copy(tree, cn.left);
      const int bb = out.copy(tree, cn.right);
      const int c = out.copy(tree, pn.right);
      return out.add_join(a, out.add_join(bb, c));
    }
    // (A (B C)) -> ((A B) C)
    const int a = out.copy(tree, pn.left);
    const int bb = out.copy(tree, cn.left);
    const int ab = out.add_join(a, bb);
    const int c = out.copy(tree, cn.right);
    return out.add_join(ab, c);
  });
  return b.finish();
}

std::pair<CouplingTree, TwistPhase> twist_at(const CouplingTree& tree, int node) {
  check_internal_id(tree, node, "node");
  const int p = tree.internal_index(node);
  const auto& pn = tree.node(p);
  TreeBuilder b;
  rebuild(b, tree, tree.root_index(), p, [&](TreeBuilder& out) {
    const int r = out.copy(tree, pn.right);
    const int l = out.copy(tree, pn.left);
    return out.add_join(r, l);
  });
  TwistPhase phase{tree.node(pn.left).cluster, tree.node(pn.right).cluster, pn.cluster};
  return {b.finish(), phase};
}

CouplingTree canonical_form(const CouplingTree& tree) {
  TreeBuilder b;
  canonical_copy(b, tree, tree.root_index());
  return b.finish();
}

std::vector<Cluster> cluster_key(const CouplingTree& tree) {
  auto c = tree.clusters();
  std::sort(c.begin(), c.end());
  return c;
}

void MoveSequence::append(const MoveSequence& other) {
  moves_.insert(moves_.end(), other.moves_.begin(), other.moves_.end());
}

std::size_t MoveSequence::rotation_count() const {
  return static_cast<std::size_t>(std::count_if(
      moves_.begin(), moves_.end(), [](const Move& m) { return m.kind == Move::Kind::rotate; }));
}

CouplingTree apply_move(const CouplingTree& tree, const Move& move) {
  if (move.kind == Move::Kind::rotate) return rotate_at(tree, move.id, move.direction);
  return twist_at(tree, move.id).first;
}

CouplingTree apply_moves(const CouplingTree& tree, const MoveSequence& moves) {
  CouplingTree t = tree;
  for (const Move& m : moves) t = apply_move(t, m);
  return t;
}

MoveSequence inverse(const CouplingTree& source, const MoveSequence& moves) {
  // replay to validate; the pivot id survives its own move
  (void)apply_moves(source, moves);
  std::vector<Move> out;
  out.reserve(moves.size());
  for (auto it = moves.moves().rbegin(); it != moves.moves().rend(); ++it) {
    Move m = *it;
    if (m.kind == Move::Kind::rotate) {
      m.direction = m.direction == Direction::left ? Direction::right : Direction::left;
    }
    out.push_back(m);
  }
  return MoveSequence(std::move(out));
}

std::string move_sequence_to_json(const MoveSequence& moves) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Move& m : moves) {
    if (m.kind == Move::Kind::rotate) {
      arr.push_back({{"op", "rot"},
                     {"edge", m.id},
                     {"dir", m.direction == Direction::left ? "L" : "R"}});
    } else {
      arr.push_back({{"op", "tw"}, {"node", m.id}});
    }
  }
  return arr.dump();
}

MoveSequence move_sequence_from_json(std::string_view json) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid move JSON: ") + e.what(), e.byte);
  }
  if (!arr.is_array()) throw ParseError("move sequence must be a JSON array", 0);
  MoveSequence out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& m = arr[i];
    auto fail = [&](const std::string& what) {
      throw ParseError("move " + std::to_string(i) + ": " + what, 0);
    };
    if (!m.is_object() || !m.contains("op") || !m["op"].is_string()) fail("missing op");
    const std::string op = m["op"];
    if (op == "rot") {
      if (!m.contains("edge") || !m["edge"].is_number_integer()) fail("missing edge");
      if (!m.contains("dir") || !m["dir"].is_string()) fail("missing dir");
      const std::string dir = m["dir"];
      if (dir != "L" && dir != "R") fail("dir must be \"L\" or \"R\"");
      out.push_back(Move::rotate(m["edge"].get<int>(),
                                 dir == "L" ? Direction::left : Direction::right));
    } else if (op == "tw") {
      if (!m.contains("node") || !m["node"].is_number_integer()) fail("missing node");
      out.push_back(Move::twist(m["node"].get<int>()));
    } else {
      fail("unknown op '" + op + "'");
    }
  }
  return out;
}

}  // namespace spinnet
