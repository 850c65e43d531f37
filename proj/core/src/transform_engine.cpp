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

#include "spinnet/transform_engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "spinnet/error.hpp"
#include "spinnet/recoupling_graph.hpp"
#include "spinnet/wigner.hpp"

namespace spinnet {

namespace {

using Json = nlohmann::json;

std::vector<int> internal_id_of_node(const CouplingTree& tree) {
  std::vector<int> out(tree.nodes().size(), -1);
  for (int id = 0; id < tree.internal_count(); ++id) out[tree.internal_index(id)] = id;
  return out;
}

bool same_basis(const Basis& a, const Basis& b) {
  return a.tree() == b.tree() && a.binding() == b.binding();
}

bool resolve_exact(const CouplingTree& tree, const EngineOptions& options) {
  switch (options.mode) {
    case MatrixMode::exact:
      return true;
    case MatrixMode::real:
      return false;
    case MatrixMode::automatic:
      break;
  }
  return tree.internal_count() <= 3;
}

template <typename Column>
void sort_column(Column& col) {
  std::sort(col.begin(), col.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
}

// For each internal id of `to`, the internal id of `from` with the same
// cluster, or -1.
std::vector<int> cluster_correspondence(const CouplingTree& from, const CouplingTree& to) {
  std::vector<int> out(to.internal_count());
  for (int id = 0; id < to.internal_count(); ++id) {
    out[id] = from.find_internal(to.internal(id).cluster);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bases

std::string BasisLabeling::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ',';
    out += k[i].str();
  }
  return out + "]";
}

Basis::Basis(CouplingTree tree, SpinBinding binding, std::vector<BasisLabeling> labels)
    : tree_(std::move(tree)), binding_(std::move(binding)), labels_(std::move(labels)) {}

int Basis::find(const BasisLabeling& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return -1;
  return static_cast<int>(it - labels_.begin());
}

HalfInt Basis::node_spin(std::size_t label, int node_index) const {
  const auto& node = tree_.node(node_index);
  if (node.is_leaf()) return binding_.leaves[node.leaf - 1];
  for (int id = 0; id < tree_.internal_count(); ++id) {
    if (tree_.internal_index(id) == node_index) return labels_[label].k[id];
  }
  throw std::logic_error("node index out of range");
}

std::vector<BasisLabeling> enumerate_basis(const CouplingTree& tree, const SpinBinding& binding) {
  if (static_cast<int>(binding.leaves.size()) != tree.leaf_count()) {
    throw DomainError("leaf-count mismatch: tree has " + std::to_string(tree.leaf_count()) +
                      " leaves, binding has " + std::to_string(binding.leaves.size()) + " spins");
  }
  for (HalfInt s : binding.leaves) {
    if (s.is_negative()) throw DomainError("negative leaf spin " + s.str());
  }
  if (binding.j.is_negative()) throw DomainError("negative total spin " + binding.j.str());

  std::vector<BasisLabeling> out;
  const int n = tree.internal_count();
  if (n == 0) {
    if (binding.j == binding.leaves[0]) out.push_back({});
    return out;
  }
  const auto node_id = internal_id_of_node(tree);
  std::vector<HalfInt> k(n);
  auto spin_of = [&](int node_index) {
    const auto& node = tree.node(node_index);
    return node.is_leaf() ? binding.leaves[node.leaf - 1] : k[node_id[node_index]];
  };
  auto recurse = [&](auto& self, int id) -> void {
    if (id == n) {
      out.push_back({k});
      return;
    }
    const auto& node = tree.internal(id);
    const HalfInt a = spin_of(node.left);
    const HalfInt b = spin_of(node.right);
    if (id == n - 1) {
      if (triangle_ok(a, b, binding.j)) {
        k[id] = binding.j;
        self(self, id + 1);
      }
      return;
    }
    for (HalfInt c = abs(a - b); c <= a + b; c += HalfInt(1)) {
      k[id] = c;
      self(self, id + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

BasisPtr make_basis(const CouplingTree& tree, const SpinBinding& binding) {
  return std::make_shared<const Basis>(tree, binding, enumerate_basis(tree, binding));
}

// ---------------------------------------------------------------------------
// RecouplingMatrix

RecouplingMatrix::RecouplingMatrix(BasisPtr source, BasisPtr target,
                                   std::vector<ExactColumn> columns)
    : source_(std::move(source)), target_(std::move(target)), exact_cols_(std::move(columns)) {
  if (source_->size() != target_->size() || exact_cols_.size() != source_->size()) {
    throw DomainError("recoupling matrix dimensions do not match its bases");
  }
}

RecouplingMatrix::RecouplingMatrix(BasisPtr source, BasisPtr target,
                                   std::vector<RealColumn> columns, unsigned digits)
    : source_(std::move(source)),
      target_(std::move(target)),
      exact_(false),
      digits_(digits),
      real_cols_(std::move(columns)) {
  if (source_->size() != target_->size() || real_cols_.size() != source_->size()) {
    throw DomainError("recoupling matrix dimensions do not match its bases");
  }
}

RecouplingMatrix RecouplingMatrix::identity(BasisPtr basis, bool exact, unsigned digits) {
  const std::size_t d = basis->size();
  if (exact) {
    std::vector<ExactColumn> cols(d);
    for (std::size_t i = 0; i < d; ++i) cols[i].emplace_back(static_cast<int>(i), QRoot::from_int(1));
    return RecouplingMatrix(basis, basis, std::move(cols));
  }
  ScopedDigits guard(digits);
  std::vector<RealColumn> cols(d);
  for (std::size_t i = 0; i < d; ++i) cols[i].emplace_back(static_cast<int>(i), MPReal(1));
  return RecouplingMatrix(basis, basis, std::move(cols), digits);
}

std::size_t RecouplingMatrix::nonzeros() const {
  std::size_t total = 0;
  if (exact_) {
    for (const auto& c : exact_cols_) total += c.size();
  } else {
    for (const auto& c : real_cols_) total += c.size();
  }
  return total;
}

std::optional<QRoot> RecouplingMatrix::exact_entry(int row, int col) const {
  if (!exact_) return std::nullopt;
  for (const auto& [r, v] : exact_cols_.at(col)) {
    if (r == row) return v;
  }
  return QRoot();
}

MPReal RecouplingMatrix::entry(int row, int col) const {
  ScopedDigits guard(digits_);
  if (exact_) return exact_entry(row, col)->to_real(digits_);
  for (const auto& [r, v] : real_cols_.at(col)) {
    if (r == row) return v;
  }
  return MPReal(0);
}

double RecouplingMatrix::entry_double(int row, int col) const {
  if (exact_) return exact_entry(row, col)->to_double();
  return entry(row, col).convert_to<double>();
}

Eigen::MatrixXd RecouplingMatrix::to_eigen() const {
  const auto d = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    if (exact_) {
      for (const auto& [r, v] : exact_cols_[c]) m(r, c) = v.to_double();
    } else {
      for (const auto& [r, v] : real_cols_[c]) m(r, c) = v.convert_to<double>();
    }
  }
  return m;
}

RecouplingMatrix RecouplingMatrix::to_real(unsigned digits) const {
  ScopedDigits guard(digits);
  std::vector<RealColumn> cols(dimension());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (exact_) {
      for (const auto& [r, v] : exact_cols_[c]) cols[c].emplace_back(r, v.to_real(digits));
    } else {
      for (const auto& [r, v] : real_cols_[c]) cols[c].emplace_back(r, MPReal(v, digits));
    }
  }
  return RecouplingMatrix(source_, target_, std::move(cols), digits);
}

RecouplingMatrix RecouplingMatrix::transpose() const {
  const std::size_t d = dimension();
  if (exact_) {
    std::vector<ExactColumn> cols(d);
    for (std::size_t c = 0; c < d; ++c) {
      for (const auto& [r, v] : exact_cols_[c]) cols[r].emplace_back(static_cast<int>(c), v);
    }
    return RecouplingMatrix(target_, source_, std::move(cols));
  }
  std::vector<RealColumn> cols(d);
  for (std::size_t c = 0; c < d; ++c) {
    for (const auto& [r, v] : real_cols_[c]) cols[r].emplace_back(static_cast<int>(c), v);
  }
  return RecouplingMatrix(target_, source_, std::move(cols), digits_);
}

RecouplingMatrix RecouplingMatrix::then(const RecouplingMatrix& next) const {
  if (!same_basis(*target_, next.source())) {
    throw DomainError("cannot compose: bases do not match");
  }
  const std::size_t d = dimension();
  if (exact_ && next.exact_) {
    std::vector<ExactColumn> cols(d);
    std::vector<std::pair<int, QRoot>> terms;
    for (std::size_t c = 0; c < d; ++c) {
      terms.clear();
      for (const auto& [k, b] : exact_cols_[c]) {
        for (const auto& [i, a] : next.exact_cols_[k]) terms.emplace_back(i, a * b);
      }
      sort_column(terms);
      for (std::size_t s = 0; s < terms.size();) {
        std::size_t e = s;
        RadicalSum sum(digits_);
        while (e < terms.size() && terms[e].first == terms[s].first) sum += terms[e++].second;
        if (!sum.is_exact()) {
          const unsigned digits = std::max(digits_, next.digits_);
          return to_real(digits).then(next.to_real(digits));
        }
        QRoot v = *sum.exact();
        if (!v.is_zero()) cols[c].emplace_back(terms[s].first, std::move(v));
        s = e;
      }
    }
    return RecouplingMatrix(source_, next.target_, std::move(cols));
  }
  if (exact_ || next.exact_) {
    const unsigned digits = exact_ ? next.digits_ : digits_;
    return (exact_ ? to_real(digits) : *this).then(next.exact_ ? next.to_real(digits) : next);
  }
  const unsigned digits = std::max(digits_, next.digits_);
  ScopedDigits guard(digits);
  std::vector<RealColumn> cols(d);
  std::vector<std::pair<int, MPReal>> terms;
  for (std::size_t c = 0; c < d; ++c) {
    terms.clear();
    for (const auto& [k, b] : real_cols_[c]) {
      for (const auto& [i, a] : next.real_cols_[k]) terms.emplace_back(i, a * b);
    }
    sort_column(terms);
    for (std::size_t s = 0; s < terms.size();) {
      MPReal sum = 0;
      const int row = terms[s].first;
      while (s < terms.size() && terms[s].first == row) sum += terms[s++].second;
      cols[c].emplace_back(row, std::move(sum));
    }
  }
  return RecouplingMatrix(source_, next.target_, std::move(cols), digits);
}

double RecouplingMatrix::unitarity_defect() const {
  const std::size_t d = dimension();
  // rows of U as (column, value) lists
  std::vector<std::vector<std::pair<int, double>>> rows(d);
  for (std::size_t c = 0; c < d; ++c) {
    if (exact_) {
      for (const auto& [r, v] : exact_cols_[c]) rows[r].emplace_back(static_cast<int>(c), v.to_double());
    } else {
      for (const auto& [r, v] : real_cols_[c]) {
        rows[r].emplace_back(static_cast<int>(c), v.convert_to<double>());
      }
    }
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (const auto& row : rows) {
    for (const auto& [r, x] : row) {
      for (const auto& [s, y] : row) gram(r, s) += x * y;
    }
  }
  gram -= Eigen::MatrixXd::Identity(d, d);
  return d == 0 ? 0.0 : gram.cwiseAbs().maxCoeff();
}

bool RecouplingMatrix::is_orthogonal_exact() const {
  if (!exact_) throw DomainError("exact orthogonality check needs an exact matrix");
  const std::size_t d = dimension();
  std::vector<std::vector<std::pair<int, const QRoot*>>> rows(d);
  for (std::size_t c = 0; c < d; ++c) {
    for (const auto& [r, v] : exact_cols_[c]) rows[r].emplace_back(static_cast<int>(c), &v);
  }
  std::vector<RadicalSum> gram(d * d, RadicalSum(digits_));
  for (const auto& row : rows) {
    for (const auto& [r, x] : row) {
      for (const auto& [s, y] : row) gram[r * d + s] += *x * *y;
    }
  }
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t s = 0; s < d; ++s) {
      const auto v = gram[r * d + s].exact();
      if (!v) return false;
      if (*v != QRoot::from_int(r == s ? 1 : 0)) return false;
    }
  }
  return true;
}

double max_deviation(const RecouplingMatrix& a, const RecouplingMatrix& b) {
  if (a.dimension() != b.dimension()) throw DomainError("matrix dimensions differ");
  const std::size_t d = a.dimension();
  double worst = 0.0;
  if (a.is_exact() && b.is_exact()) {
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<std::pair<int, QRoot>> terms(a.exact_columns()[c]);
      for (const auto& [r, v] : b.exact_columns()[c]) terms.emplace_back(r, -v);
      sort_column(terms);
      for (std::size_t s = 0; s < terms.size();) {
        RadicalSum sum(a.digits());
        const int row = terms[s].first;
        while (s < terms.size() && terms[s].first == row) sum += terms[s++].second;
        worst = std::max(worst, std::abs(sum.real().convert_to<double>()));
      }
    }
    return worst;
  }
  const unsigned digits = std::max(a.digits(), b.digits());
  const RecouplingMatrix ra = a.is_exact() ? a.to_real(digits) : a;
  const RecouplingMatrix rb = b.is_exact() ? b.to_real(digits) : b;
  ScopedDigits guard(digits);
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<std::pair<int, MPReal>> terms(ra.real_columns()[c]);
    for (const auto& [r, v] : rb.real_columns()[c]) terms.emplace_back(r, -v);
    sort_column(terms);
    for (std::size_t s = 0; s < terms.size();) {
      MPReal sum = 0;
      const int row = terms[s].first;
      while (s < terms.size() && terms[s].first == row) sum += terms[s++].second;
      worst = std::max(worst, std::abs(sum.convert_to<double>()));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Elementary moves

namespace {

RecouplingMatrix rotation_matrix(const BasisPtr& source, int pivot, Direction direction,
                                 bool exact, unsigned digits) {
  const CouplingTree& tree = source->tree();
  const CouplingTree rotated = rotate_at(tree, pivot, direction);
  const BasisPtr target = make_basis(rotated, source->binding());
  if (source->size() != target->size()) throw std::logic_error("rotation changed the dimension");

  const auto& p = tree.internal(pivot);
  // ((A B)_d C)_f on the left side, (A (B C)_e)_f on the right side
  int a, b, c, old_node;
  if (direction == Direction::left) {
    old_node = p.left;
    a = tree.node(old_node).left;
    b = tree.node(old_node).right;
    c = p.right;
  } else {
    old_node = p.right;
    a = p.left;
    b = tree.node(old_node).left;
    c = tree.node(old_node).right;
  }
  const auto from_source = cluster_correspondence(tree, rotated);
  const auto node_id = internal_id_of_node(tree);
  const SpinBinding& binding = source->binding();
  auto spin = [&](const BasisLabeling& l, int node_index) {
    const auto& node = tree.node(node_index);
    return node.is_leaf() ? binding.leaves[node.leaf - 1] : l.k[node_id[node_index]];
  };

  const std::size_t dim = source->size();
  std::vector<RecouplingMatrix::ExactColumn> exact_cols(exact ? dim : 0);
  std::vector<RecouplingMatrix::RealColumn> real_cols(exact ? 0 : dim);
  ScopedDigits guard(digits);
  BasisLabeling target_label;
  target_label.k.resize(rotated.internal_count());
  for (std::size_t s = 0; s < dim; ++s) {
    const BasisLabeling& l = (*source)[s];
    const HalfInt ja = spin(l, a), jb = spin(l, b), jc = spin(l, c);
    const HalfInt jf = l.k[pivot];
    const HalfInt old_spin = l.k[node_id[old_node]];
    // new spin couples (b c) on the left move, (a b) on the right move
    const HalfInt x = direction == Direction::left ? jb : ja;
    const HalfInt y = direction == Direction::left ? jc : jb;
    for (HalfInt g = abs(x - y); g <= x + y; g += HalfInt(1)) {
      const HalfInt outer = direction == Direction::left ? ja : jc;
      if (!triangle_ok(outer, g, jf)) continue;
      for (int id = 0; id < rotated.internal_count(); ++id) {
        target_label.k[id] = from_source[id] >= 0 ? l.k[from_source[id]] : g;
      }
      const int t = target->find(target_label);
      if (t < 0) throw std::logic_error("rotation target labeling missing");
      const HalfInt d = direction == Direction::left ? old_spin : g;
      const HalfInt e = direction == Direction::left ? g : old_spin;
      const QRoot sixj = wigner6j(ja, jb, d, jc, jf, e);
      if (sixj.is_zero()) continue;
      QRoot value = QRoot::sqrt_of(Rational(d.dimension() * e.dimension())) * sixj;
      if (phase(ja + jb + jc + jf) < 0) value = -value;
      if (exact) {
        exact_cols[s].emplace_back(t, std::move(value));
      } else {
        real_cols[s].emplace_back(t, value.to_real(digits));
      }
    }
    if (exact) {
      sort_column(exact_cols[s]);
    } else {
      sort_column(real_cols[s]);
    }
  }
  if (exact) return RecouplingMatrix(source, target, std::move(exact_cols));
  return RecouplingMatrix(source, target, std::move(real_cols), digits);
}

RecouplingMatrix twist_matrix(const BasisPtr& source, int node, bool exact, unsigned digits) {
  const CouplingTree& tree = source->tree();
  const CouplingTree twisted = twist_at(tree, node).first;
  const BasisPtr target = make_basis(twisted, source->binding());
  const auto from_source = cluster_correspondence(tree, twisted);
  const auto node_id = internal_id_of_node(tree);
  const auto& p = tree.internal(node);
  const SpinBinding& binding = source->binding();
  auto spin = [&](const BasisLabeling& l, int node_index) {
    const auto& nd = tree.node(node_index);
    return nd.is_leaf() ? binding.leaves[nd.leaf - 1] : l.k[node_id[node_index]];
  };

  const std::size_t dim = source->size();
  std::vector<RecouplingMatrix::ExactColumn> exact_cols(exact ? dim : 0);
  std::vector<RecouplingMatrix::RealColumn> real_cols(exact ? 0 : dim);
  ScopedDigits guard(digits);
  BasisLabeling target_label;
  target_label.k.resize(twisted.internal_count());
  for (std::size_t s = 0; s < dim; ++s) {
    const BasisLabeling& l = (*source)[s];
    for (int id = 0; id < twisted.internal_count(); ++id) target_label.k[id] = l.k[from_source[id]];
    const int t = target->find(target_label);
    if (t < 0) throw std::logic_error("twist target labeling missing");
    const int sign = phase(spin(l, p.left) + spin(l, p.right) - l.k[node]);
    if (exact) {
      exact_cols[s].emplace_back(t, QRoot::from_int(sign));
    } else {
      real_cols[s].emplace_back(t, MPReal(sign));
    }
  }
  if (exact) return RecouplingMatrix(source, target, std::move(exact_cols));
  return RecouplingMatrix(source, target, std::move(real_cols), digits);
}

RecouplingMatrix move_matrix(const BasisPtr& source, const Move& move, bool exact,
                             unsigned digits) {
  if (move.kind == Move::Kind::twist) return twist_matrix(source, move.id, exact, digits);
  return rotation_matrix(source, move.id, move.direction, exact, digits);
}

}  // namespace

RecouplingMatrix elementary_rotation_matrix(const CouplingTree& tree, int pivot,
                                            Direction direction, const SpinBinding& binding,
                                            const EngineOptions& options) {
  return rotation_matrix(make_basis(tree, binding), pivot, direction,
                         resolve_exact(tree, options), options.digits);
}

RecouplingMatrix elementary_twist_matrix(const CouplingTree& tree, int node,
                                         const SpinBinding& binding,
                                         const EngineOptions& options) {
  return twist_matrix(make_basis(tree, binding), node, resolve_exact(tree, options),
                      options.digits);
}

RecouplingMatrix elementary_matrix(const CouplingTree& tree, const Move& move,
                                   const SpinBinding& binding, const EngineOptions& options) {
  return move_matrix(make_basis(tree, binding), move, resolve_exact(tree, options),
                     options.digits);
}

RecouplingMatrix compile_path(const MoveSequence& moves, const CouplingTree& start,
                              const SpinBinding& binding, const EngineOptions& options) {
  const bool exact = resolve_exact(start, options);
  RecouplingMatrix acc = RecouplingMatrix::identity(make_basis(start, binding), exact,
                                                    options.digits);
  for (const Move& m : moves) {
    const RecouplingMatrix step = move_matrix(acc.target_ptr(), m, exact, options.digits);
    acc = acc.then(step);
  }
  return acc;
}

RecouplingMatrix recoupling_matrix(const CouplingTree& from, const CouplingTree& to,
                                   const SpinBinding& binding, const EngineOptions& options) {
  if (from.leaf_count() != to.leaf_count()) {
    throw DomainError("leaf-count mismatch between source and target trees");
  }
  if (from == to) return compile_path({}, from, binding, options);
  const RotationGraph& g = cached_rotation_graph(from.leaf_count() - 1);
  return compile_path(shortest_path(g, from, to), from, binding, options);
}

PathIndependenceReport check_path_independence(const CouplingTree& from, const CouplingTree& to,
                                               const SpinBinding& binding, int trials,
                                               std::uint64_t seed,
                                               const EngineOptions& options) {
  if (from.leaf_count() != to.leaf_count()) {
    throw DomainError("leaf-count mismatch between source and target trees");
  }
  PathIndependenceReport report;
  std::mt19937_64 rng(seed);
  const int leaves = from.leaf_count();
  if (leaves < 2) {
    report.paths = 1;
    return report;
  }
  const RotationGraph& g = cached_rotation_graph(leaves - 1);
  const int a = g.id_of(from);
  const int b = g.id_of(to);
  const auto shortest = shortest_vertex_path(g, a, b);
  const RecouplingMatrix reference =
      compile_path(realize_walk(g, from, shortest, to), from, binding, options);
  report.paths = 1;

  for (int trial = 0; trial < trials; ++trial) {
    MoveSequence program;
    if (g.order() > 1) {
      std::vector<int> walk{a};
      for (int attempt = 0; attempt < 8; ++attempt) {
        walk.assign(1, a);
        const int steps = 1 + static_cast<int>(rng() % 3);
        for (int s = 0; s < steps; ++s) {
          const auto nb = g.neighbors(walk.back());
          walk.push_back(static_cast<int>(nb[rng() % nb.size()]));
        }
        const auto rest = shortest_vertex_path(g, walk.back(), b);
        walk.insert(walk.end(), rest.begin() + 1, rest.end());
        if (walk != shortest) break;
      }
      program = realize_walk(g, from, walk, to);
    } else {
      // a single twist class: go around by a double twist
      const int node = static_cast<int>(rng() % from.internal_count());
      program.push_back(Move::twist(node));
      program.push_back(Move::twist(node));
      program.append(realize_walk(g, from, shortest, to));
    }
    const RecouplingMatrix m = compile_path(program, from, binding, options);
    report.max_deviation = std::max(report.max_deviation, max_deviation(reference, m));
    ++report.paths;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Generators

Eigen::MatrixXcd hermitian_generator(const Eigen::MatrixXcd& u, double tau, double tolerance) {
  if (u.rows() != u.cols()) throw DomainError("generator needs a square matrix");
  if (!(tau > 0)) throw DomainError("time step must be positive");
  const Eigen::Index d = u.rows();
  if (d == 0) return Eigen::MatrixXcd(0, 0);
  const double defect =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > tolerance) {
    throw DomainError("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  const Eigen::MatrixXcd& q = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double phi = std::arg(t(i, i));
    if (phi <= -std::numbers::pi) phi += 2 * std::numbers::pi;
    phases(i) = phi / tau;
  }
  Eigen::MatrixXcd h = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

Eigen::MatrixXcd hermitian_generator(const RecouplingMatrix& u, double tau, double tolerance) {
  return hermitian_generator(Eigen::MatrixXcd(u.to_eigen().cast<std::complex<double>>()), tau,
                             tolerance);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json basis_to_json(const Basis& b) {
  Json spins = Json::array();
  for (HalfInt s : b.binding().leaves) spins.push_back(s.str());
  Json labels = Json::array();
  for (const auto& l : b.labels()) labels.push_back(l.str());
  return {{"tree", print_bracketing(b.tree())},
          {"spins", spins},
          {"j", b.binding().j.str()},
          {"basis", labels}};
}

BasisPtr basis_from_json(const Json& j) {
  SpinBinding binding;
  for (const auto& s : j.at("spins")) binding.leaves.push_back(HalfInt::parse(s.get<std::string>()));
  binding.j = HalfInt::parse(j.at("j").get<std::string>());
  BasisPtr basis = make_basis(parse_bracketing(j.at("tree").get<std::string>()), binding);
  if (j.contains("basis")) {
    const auto& labels = j.at("basis");
    if (labels.size() != basis->size()) throw DomainError("basis listing does not match spins");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].get<std::string>() != (*basis)[i].str()) {
        throw DomainError("basis listing out of canonical order at " + std::to_string(i));
      }
    }
  }
  return basis;
}

}  // namespace

std::string matrix_to_json(const RecouplingMatrix& m) {
  const std::size_t d = m.dimension();
  Json rows = Json::array();
  for (std::size_t r = 0; r < d; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < d; ++c) {
      if (m.is_exact()) {
        const QRoot v = *m.exact_entry(static_cast<int>(r), static_cast<int>(c));
        row.push_back({{"sq", to_string(v.square())}, {"sgn", v.sign()}});
      } else {
        row.push_back(to_decimal(m.entry(static_cast<int>(r), static_cast<int>(c)), m.digits()));
      }
    }
    rows.push_back(std::move(row));
  }
  Json out = {{"source", basis_to_json(m.source())},
              {"target", basis_to_json(m.target())},
              {"mode", m.is_exact() ? "exact" : "real"},
              {"entries", rows}};
  if (!m.is_exact()) out["digits"] = m.digits();
  return out.dump();
}

RecouplingMatrix matrix_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  try {
    BasisPtr source = basis_from_json(j.at("source"));
    BasisPtr target = basis_from_json(j.at("target"));
    const auto& rows = j.at("entries");
    const std::size_t d = source->size();
    if (rows.size() != d) throw DomainError("entry rows do not match the basis size");
    const bool exact = j.value("mode", std::string("exact")) == "exact";
    const unsigned digits = j.value("digits", kDefaultDigits);
    std::vector<RecouplingMatrix::ExactColumn> ec(exact ? d : 0);
    std::vector<RecouplingMatrix::RealColumn> rc(exact ? 0 : d);
    ScopedDigits guard(digits);
    for (std::size_t r = 0; r < d; ++r) {
      if (rows[r].size() != d) throw DomainError("matrix is not square");
      for (std::size_t c = 0; c < d; ++c) {
        const auto& e = rows[r][c];
        if (exact) {
          QRoot v(e.at("sgn").get<int>(), parse_rational(e.at("sq").get<std::string>()));
          if (!v.is_zero()) ec[c].emplace_back(static_cast<int>(r), std::move(v));
        } else {
          MPReal v(e.is_string() ? e.get<std::string>() : std::to_string(e.get<double>()));
          if (v != 0) rc[c].emplace_back(static_cast<int>(r), std::move(v));
        }
      }
    }
    if (exact) return RecouplingMatrix(source, target, std::move(ec));
    return RecouplingMatrix(source, target, std::move(rc), digits);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed matrix file: ") + e.what());
  }
}

}  // namespace spinnet
