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

#include "spinnet/recoupling_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "spinnet/error.hpp"

namespace spinnet {

namespace {

using ClusterSet = std::vector<Cluster>;  // sorted ascending; root is last

std::string bytes_key(std::span<const Cluster> clusters) {
  return std::string(reinterpret_cast<const char*>(clusters.data()),
                     clusters.size() * sizeof(Cluster));
}

// All twist classes on `leaves` leaves, as sorted cluster sets.
std::vector<ClusterSet> enumerate_cluster_sets(int leaves) {
  std::vector<ClusterSet> current{ClusterSet{Cluster{0b11}}};
  for (int k = 3; k <= leaves; ++k) {
    const Cluster added = Cluster{1} << (k - 1);
    std::vector<ClusterSet> next;
    next.reserve(current.size() * (2 * k - 3));
    for (const auto& set : current) {
      std::vector<Cluster> nodes(set.begin(), set.end());
      for (int leaf = 0; leaf < k - 1; ++leaf) nodes.push_back(Cluster{1} << leaf);
      // insert the new leaf on the edge above each node
      for (Cluster v : nodes) {
        ClusterSet out;
        out.reserve(set.size() + 1);
        for (Cluster c : set) {
          const bool strict_superset = (c & v) == v && c != v;
          out.push_back(strict_superset ? (c | added) : c);
        }
        out.push_back(v | added);
        std::sort(out.begin(), out.end());
        next.push_back(std::move(out));
      }
    }
    current = std::move(next);
  }
  return current;
}

// Largest cluster strictly inside `x`, or its lowest leaf.
Cluster first_child(std::span<const Cluster> set, Cluster x) {
  Cluster best = 0;
  for (Cluster c : set) {
    if (c != x && (c & ~x) == 0 && std::popcount(c) > std::popcount(best)) best = c;
  }
  return best != 0 ? best : (x & (~x + 1));
}

Cluster parent_cluster(std::span<const Cluster> set, Cluster x) {
  Cluster best = 0;
  for (Cluster c : set) {
    if (c != x && (c & x) == x && (best == 0 || std::popcount(c) < std::popcount(best))) {
      best = c;
    }
  }
  return best;
}

// The 2(n-1) rotation neighbors of an unordered tree.
template <typename Visit>
void for_each_rotation(std::span<const Cluster> set, const Visit& visit) {
  ClusterSet scratch(set.begin(), set.end());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Cluster x = set[i];
    const Cluster p = parent_cluster(set, x);
    if (p == 0) continue;  // root
    const Cluster sibling = p & ~x;
    const Cluster a = first_child(set, x);
    const Cluster b = x & ~a;
    for (Cluster kept : {a, b}) {
      scratch.assign(set.begin(), set.end());
      scratch[i] = kept | sibling;
      std::sort(scratch.begin(), scratch.end());
      visit(std::span<const Cluster>(scratch));
    }
  }
}

std::string unordered_shape(std::span<const Cluster> set, Cluster x) {
  if (std::popcount(x) == 1) return "x";
  const Cluster a = first_child(set, x);
  std::string l = unordered_shape(set, a);
  std::string r = unordered_shape(set, x & ~a);
  if (r < l) std::swap(l, r);
  return "(" + l + " " + r + ")";
}

std::string ordered_shape(const CouplingTree& t) {
  std::string s = print_bracketing(t);
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= '0' && s[i] <= '9') {
      if (out.empty() || out.back() != 'x') out += 'x';
    } else {
      out += s[i];
    }
  }
  return out;
}

// Ordered tree with children swapped at every internal node whose id bit is set.
CouplingTree twisted_variant(const CouplingTree& t, std::uint32_t mask) {
  CouplingTree cur = t;
  const std::vector<Cluster> clusters = t.clusters();
  for (int id = 0; id < t.internal_count(); ++id) {
    if (mask & (1u << id)) cur = twist_at(cur, cur.find_internal(clusters[id])).first;
  }
  return cur;
}

template <typename Key>
void finalize_adjacency(std::vector<std::vector<std::uint32_t>>& adj,
                        std::vector<std::uint32_t>& offsets,
                        std::vector<std::uint32_t>& flat) {
  offsets.assign(1, 0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    flat.insert(flat.end(), list.begin(), list.end());
    offsets.push_back(static_cast<std::uint32_t>(flat.size()));
  }
}

void check_vertex(const RotationGraph& g, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.order()) {
    throw DomainError("vertex id " + std::to_string(v) + " out of range");
  }
}

}  // namespace

std::uint64_t double_factorial_odd(int n) {
  std::uint64_t r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

// ---------------------------------------------------------------------------
// RotationGraph

std::string RotationGraph::key_of(const CouplingTree& t) const {
  if (kind_ == GraphKind::twist_rotation) return print_bracketing(t);
  const auto key = cluster_key(t);
  return bytes_key(key);
}

CouplingTree RotationGraph::tree(int v) const {
  check_vertex(*this, v);
  if (kind_ == GraphKind::twist_rotation) return trees_[v];
  return CouplingTree::from_clusters(
      leaf_count(), std::span<const Cluster>(clusters_.data() + static_cast<std::size_t>(v) * n_, n_));
}

std::optional<int> RotationGraph::find(const CouplingTree& t) const {
  if (t.leaf_count() != leaf_count()) return std::nullopt;
  auto it = index_.find(key_of(t));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int RotationGraph::id_of(const CouplingTree& t) const {
  if (t.leaf_count() != leaf_count()) {
    throw DomainError("leaf-count mismatch: tree has " + std::to_string(t.leaf_count()) +
                      " leaves, graph expects " + std::to_string(leaf_count()));
  }
  auto v = find(t);
  if (!v) throw DomainError("tree not found in graph: " + print_bracketing(t));
  return *v;
}

RotationGraph build_graph(int n, GraphKind kind) {
  if (n < 1) throw DomainError("graph order parameter n must be >= 1");
  const int limit = kind == GraphKind::rotation ? kMaxRotationGraphN : kMaxTwistRotationGraphN;
  if (n > limit) {
    throw ResourceLimitError("n = " + std::to_string(n) + " exceeds the limit " +
                             std::to_string(limit) + " for this graph kind (" +
                             std::to_string(double_factorial_odd(n)) + " twist classes)");
  }
  RotationGraph g;
  g.n_ = n;
  g.kind_ = kind;
  const int leaves = n + 1;

  std::vector<ClusterSet> sets = n == 1 ? std::vector<ClusterSet>{{Cluster{0b11}}}
                                        : enumerate_cluster_sets(leaves);

  // vertex order: lexicographic bracketing text
  std::vector<std::vector<std::uint32_t>> adj;
  if (kind == GraphKind::rotation) {
    std::vector<std::pair<std::string, std::uint32_t>> order;
    order.reserve(sets.size());
    for (std::uint32_t i = 0; i < sets.size(); ++i) {
      order.emplace_back(print_bracketing(CouplingTree::from_clusters(leaves, sets[i])), i);
    }
    std::sort(order.begin(), order.end());
    g.clusters_.reserve(sets.size() * n);
    for (std::size_t v = 0; v < order.size(); ++v) {
      const auto& set = sets[order[v].second];
      g.clusters_.insert(g.clusters_.end(), set.begin(), set.end());
      g.index_.emplace(bytes_key(set), static_cast<int>(v));
    }
    order.clear();
    order.shrink_to_fit();
    sets.clear();
    sets.shrink_to_fit();

    adj.resize(g.index_.size());
    for (std::size_t v = 0; v < adj.size(); ++v) {
      std::span<const Cluster> set(g.clusters_.data() + v * n, n);
      adj[v].reserve(2 * (n - 1));
      for_each_rotation(set, [&](std::span<const Cluster> nb) {
        auto it = g.index_.find(bytes_key(nb));
        if (it == g.index_.end()) throw std::logic_error("rotation left the vertex set");
        adj[v].push_back(static_cast<std::uint32_t>(it->second));
      });
    }
  } else {
    std::vector<CouplingTree> all;
    for (const auto& set : sets) {
      const CouplingTree canon = CouplingTree::from_clusters(leaves, set);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        all.push_back(twisted_variant(canon, mask));
      }
    }
    std::vector<std::pair<std::string, std::uint32_t>> order;
    for (std::uint32_t i = 0; i < all.size(); ++i) order.emplace_back(print_bracketing(all[i]), i);
    std::sort(order.begin(), order.end());
    for (std::size_t v = 0; v < order.size(); ++v) {
      g.trees_.push_back(all[order[v].second]);
      g.index_.emplace(order[v].first, static_cast<int>(v));
    }
    adj.resize(g.trees_.size());
    for (std::size_t v = 0; v < g.trees_.size(); ++v) {
      const CouplingTree& t = g.trees_[v];
      for (int id = 0; id < t.internal_count(); ++id) {
        for (Direction d : {Direction::left, Direction::right}) {
          const auto& node = t.internal(id);
          const int child = d == Direction::left ? node.left : node.right;
          if (t.node(child).is_leaf()) continue;
          adj[v].push_back(static_cast<std::uint32_t>(g.id_of(rotate_at(t, id, d))));
        }
        adj[v].push_back(static_cast<std::uint32_t>(g.id_of(twist_at(t, id).first)));
      }
    }
  }
  finalize_adjacency<int>(adj, g.offsets_, g.adjacency_);
  return g;
}

const RotationGraph& cached_rotation_graph(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<RotationGraph>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RotationGraph>(build_graph(n));
  return *slot;
}

// ---------------------------------------------------------------------------
// Distances

std::vector<int> bfs_distances(const RotationGraph& g, int source) {
  check_vertex(g, source);
  std::vector<int> dist(g.order(), -1);
  std::vector<int> queue;
  queue.reserve(g.order());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (std::uint32_t w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(static_cast<int>(w));
      }
    }
  }
  return dist;
}

int distance(const RotationGraph& g, int from, int to) {
  check_vertex(g, from);
  check_vertex(g, to);
  if (from == to) return 0;
  // side 0 grows from `from`, side 1 from `to`
  std::vector<std::int8_t> side(g.order(), -1);
  std::vector<int> frontier[2] = {{from}, {to}};
  side[from] = 0;
  side[to] = 1;
  int depth[2] = {0, 0};
  while (!frontier[0].empty() && !frontier[1].empty()) {
    const int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<int> next;
    for (int v : frontier[s]) {
      for (std::uint32_t w : g.neighbors(v)) {
        if (side[w] == 1 - s) return depth[0] + depth[1] + 1;
        if (side[w] < 0) {
          side[w] = static_cast<std::int8_t>(s);
          next.push_back(static_cast<int>(w));
        }
      }
    }
    ++depth[s];
    frontier[s] = std::move(next);
  }
  throw std::logic_error("rotation graph is disconnected");
}

std::vector<int> shortest_vertex_path(const RotationGraph& g, int from, int to) {
  check_vertex(g, from);
  check_vertex(g, to);
  // BFS from the target until the source is reached; every vertex closer to
  // the target than the source is then labelled.
  std::vector<int> dist(g.order(), -1);
  std::vector<int> queue{to};
  dist[to] = 0;
  for (std::size_t head = 0; head < queue.size() && dist[from] < 0; ++head) {
    const int v = queue[head];
    for (std::uint32_t w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(static_cast<int>(w));
      }
    }
  }
  if (dist[from] < 0) throw std::logic_error("rotation graph is disconnected");
  std::vector<int> path{from};
  int cur = from;
  while (cur != to) {
    int next = -1;
    for (std::uint32_t w : g.neighbors(cur)) {  // ascending ids
      if (dist[w] == dist[cur] - 1) {
        next = static_cast<int>(w);
        break;
      }
    }
    cur = next;
    path.push_back(cur);
  }
  return path;
}

namespace {

// Ordered moves turning `cur` into an ordered tree whose twist class has the
// clusters of `target` (one rotation, at most two twists).
void realize_hop(CouplingTree& cur, const ClusterSet& target, MoveSequence& out) {
  const ClusterSet mine = cluster_key(cur);
  Cluster removed = 0, added = 0;
  for (Cluster c : mine) {
    if (!std::binary_search(target.begin(), target.end(), c)) removed = c;
  }
  for (Cluster c : target) {
    if (!std::binary_search(mine.begin(), mine.end(), c)) added = c;
  }
  if (removed == 0 || added == 0) throw std::logic_error("walk step is not a rotation");

  auto apply = [&](const Move& m) {
    cur = apply_move(cur, m);
    out.push_back(m);
  };
  const int pivot_cluster_id = cur.parent_of(cur.find_internal(removed));
  const Cluster pivot = cur.internal(pivot_cluster_id).cluster;

  // bring the removed node to the pivot's left
  {
    const int p = cur.find_internal(pivot);
    const auto& pn = cur.internal(p);
    if (cur.node(pn.left).cluster != removed) apply(Move::twist(p));
  }
  // its right child must join the pivot's right subtree
  {
    const int p = cur.find_internal(pivot);
    const auto& pn = cur.internal(p);
    const Cluster sibling = cur.node(pn.right).cluster;
    const int x = cur.find_internal(removed);
    const auto& xn = cur.internal(x);
    if ((cur.node(xn.right).cluster | sibling) != added) apply(Move::twist(x));
  }
  apply(Move::rotate(cur.find_internal(pivot), Direction::left));
}

}  // namespace

MoveSequence realize_walk(const RotationGraph& g, const CouplingTree& from,
                          std::span<const int> walk, const CouplingTree& to) {
  if (from.leaf_count() != g.leaf_count() || to.leaf_count() != g.leaf_count()) {
    throw DomainError("leaf-count mismatch between trees and graph");
  }
  MoveSequence out;
  CouplingTree cur = from;
  if (g.kind() == GraphKind::rotation) {
    for (std::size_t i = 1; i < walk.size(); ++i) {
      realize_hop(cur, cluster_key(g.tree(walk[i])), out);
    }
    // fix child order to match `to`
    for (int id = 0; id < to.internal_count(); ++id) {
      const auto& tn = to.internal(id);
      const int mine = cur.find_internal(tn.cluster);
      if (mine < 0) throw DomainError("walk does not end at the target twist class");
      const auto& cn = cur.internal(mine);
      if (cur.node(cn.left).cluster != to.node(tn.left).cluster) {
        const Move m = Move::twist(mine);
        cur = apply_move(cur, m);
        out.push_back(m);
      }
    }
  } else {
    for (std::size_t i = 1; i < walk.size(); ++i) {
      const CouplingTree next = g.tree(walk[i]);
      bool found = false;
      for (int id = 0; id < cur.internal_count() && !found; ++id) {
        std::vector<Move> candidates{Move::twist(id)};
        const auto& node = cur.internal(id);
        if (!cur.node(node.left).is_leaf()) candidates.push_back(Move::rotate(id, Direction::left));
        if (!cur.node(node.right).is_leaf()) candidates.push_back(Move::rotate(id, Direction::right));
        for (const Move& m : candidates) {
          if (apply_move(cur, m) == next) {
            cur = next;
            out.push_back(m);
            found = true;
            break;
          }
        }
      }
      if (!found) throw DomainError("walk step is not an elementary move");
    }
  }
  if (!(cur == to)) throw DomainError("walk does not end at the target tree");
  return out;
}

MoveSequence shortest_path(const RotationGraph& g, const CouplingTree& from,
                           const CouplingTree& to) {
  const int a = g.id_of(from);
  const int b = g.id_of(to);
  const auto walk = shortest_vertex_path(g, a, b);
  return realize_walk(g, from, walk, to);
}

// ---------------------------------------------------------------------------
// Statistics

GraphStats graph_stats(const RotationGraph& g, bool exhaustive) {
  GraphStats s;
  s.order = g.order();
  s.size = g.size();
  for (std::size_t v = 0; v < g.order(); ++v) ++s.degree_histogram[g.neighbors(v).size()];

  // representative -> orbit size
  std::vector<std::pair<int, std::size_t>> sources;
  if (exhaustive) {
    for (std::size_t v = 0; v < g.order(); ++v) sources.emplace_back(static_cast<int>(v), 1);
  } else {
    std::map<std::string, std::pair<int, std::size_t>> orbits;
    for (std::size_t v = 0; v < g.order(); ++v) {
      const CouplingTree t = g.tree(static_cast<int>(v));
      const std::string shape = g.kind() == GraphKind::rotation
                                    ? unordered_shape(cluster_key(t), t.root().cluster)
                                    : ordered_shape(t);
      auto [it, inserted] = orbits.try_emplace(shape, static_cast<int>(v), 0);
      ++it->second.second;
    }
    for (const auto& [shape, rep] : orbits) sources.push_back(rep);
  }

  long double total = 0;
  for (auto [source, weight] : sources) {
    const auto dist = bfs_distances(g, source);
    long double sum = 0;
    for (int d : dist) {
      if (d < 0) throw std::logic_error("rotation graph is disconnected");
      s.diameter = std::max(s.diameter, d);
      sum += d;
    }
    total += sum * static_cast<long double>(weight);
  }
  const long double pairs = static_cast<long double>(s.order) * (s.order - 1);
  s.mean_distance = pairs > 0 ? static_cast<double>(total / pairs) : 0.0;
  return s;
}

DistanceBoundRow distance_bound_check(const RotationGraph& g) {
  DistanceBoundRow row;
  row.n = g.n();
  row.diameter = graph_stats(g).diameter;
  row.per_n = static_cast<double>(row.diameter) / g.n();
  row.per_n_log_n = g.n() > 1 ? row.diameter / (g.n() * std::log(static_cast<double>(g.n()))) : 0.0;
  return row;
}

DistanceBoundReport distance_bound_table(int n_min, int n_max) {
  DistanceBoundReport report;
  for (int n = n_min; n <= n_max; ++n) {
    report.rows.push_back(distance_bound_check(cached_rotation_graph(n)));
    const auto& row = report.rows.back();
    report.linear_constant = std::max(report.linear_constant, row.per_n);
    if (report.rows.size() > 1 && row.diameter < report.rows[report.rows.size() - 2].diameter) {
      report.monotone = false;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Export

std::string export_json_lines(const RotationGraph& g) {
  std::string out;
  for (std::size_t v = 0; v < g.order(); ++v) {
    nlohmann::json line;
    line["v"] = v;
    line["tree"] = g.bracketing(static_cast<int>(v));
    auto nb = g.neighbors(static_cast<int>(v));
    line["adj"] = std::vector<std::uint32_t>(nb.begin(), nb.end());
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string export_dot(const RotationGraph& g) {
  std::ostringstream os;
  os << "graph G" << g.n() << " {\n";
  for (std::size_t v = 0; v < g.order(); ++v) {
    os << "  " << v << " [label=\"" << g.bracketing(static_cast<int>(v)) << "\"];\n";
  }
  for (std::size_t v = 0; v < g.order(); ++v) {
    for (std::uint32_t w : g.neighbors(static_cast<int>(v))) {
      if (w > v) os << "  " << v << " -- " << w << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace spinnet
