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

#include "spinnet/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "spinnet/error.hpp"

namespace spinnet {

namespace {

// squared distances d[i][j] between vertices P0..P3
template <typename T>
std::array<std::array<T, 4>, 4> squared_distances(const EdgeLengths& l) {
  std::array<std::array<T, 4>, 4> d{};
  auto set = [&](int i, int j, double len) {
    d[i][j] = d[j][i] = T(len) * T(len);
  };
  set(1, 2, l[0]);
  set(0, 2, l[1]);
  set(0, 1, l[2]);
  set(0, 3, l[3]);
  set(1, 3, l[4]);
  set(2, 3, l[5]);
  return d;
}

template <typename T>
T determinant5(std::array<std::array<T, 5>, 5> m) {
  using std::abs;
  using boost::multiprecision::abs;
  T det = 1;
  for (int c = 0; c < 5; ++c) {
    int pivot = c;
    for (int r = c + 1; r < 5; ++r) {
      if (abs(m[r][c]) > abs(m[pivot][c])) pivot = r;
    }
    if (m[pivot][c] == 0) return T(0);
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 5; ++r) {
      const T f = m[r][c] / m[c][c];
      for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

template <typename T>
T cm_determinant(const EdgeLengths& l) {
  const auto d = squared_distances<T>(l);
  std::array<std::array<T, 5>, 5> m{};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) {
        m[i][j] = 0;
      } else if (i == 0 || j == 0) {
        m[i][j] = 1;
      } else {
        m[i][j] = d[i - 1][j - 1];
      }
    }
  }
  return determinant5(m);
}

void check_lengths(const EdgeLengths& l) {
  for (double x : l) {
    if (!(x > 0)) throw DomainError("edge lengths must be positive");
  }
}

}  // namespace

double cayley_menger(const EdgeLengths& lengths) {
  check_lengths(lengths);
  const double cm = cm_determinant<double>(lengths);
  const double scale = std::pow(*std::max_element(lengths.begin(), lengths.end()), 6);
  if (std::abs(cm) > 1e-9 * scale) return cm;
  ScopedDigits guard(50);
  return cm_determinant<MPReal>(lengths).convert_to<double>();
}

std::optional<double> tetra_volume(const EdgeLengths& lengths) {
  const double cm = cayley_menger(lengths);
  if (!(cm > 0)) return std::nullopt;
  return std::sqrt(cm / 288.0);
}

std::array<double, 6> dihedral_angles(const EdgeLengths& lengths) {
  if (!tetra_volume(lengths)) throw DomainError("lengths do not form a Euclidean tetrahedron");
  const auto d = squared_distances<double>(lengths);
  // P0 at the origin, P1 on the x axis, P2 in the xy plane, P3 above it
  std::array<Eigen::Vector3d, 4> p;
  p[0] = Eigen::Vector3d::Zero();
  const double x1 = std::sqrt(d[0][1]);
  p[1] = {x1, 0, 0};
  const double x2 = (d[0][2] + d[0][1] - d[1][2]) / (2 * x1);
  p[2] = {x2, std::sqrt(std::max(0.0, d[0][2] - x2 * x2)), 0};
  const double x3 = (d[0][3] + d[0][1] - d[1][3]) / (2 * x1);
  const double y3 = (d[0][3] - d[2][3] + d[0][2] - 2 * x2 * x3) / (2 * p[2].y());
  p[3] = {x3, y3, std::sqrt(std::max(0.0, d[0][3] - x3 * x3 - y3 * y3))};

  // outward unit normal of the face opposite vertex k
  std::array<Eigen::Vector3d, 4> normal;
  for (int k = 0; k < 4; ++k) {
    int f[3], n = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != k) f[n++] = i;
    }
    Eigen::Vector3d v = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]).normalized();
    if (v.dot(p[k] - p[f[0]]) > 0) v = -v;
    normal[k] = v;
  }
  // faces sharing edge r are those opposite the two vertices off the edge
  constexpr int off[6][2] = {{0, 3}, {1, 3}, {2, 3}, {1, 2}, {0, 2}, {0, 1}};
  std::array<double, 6> theta;
  for (int r = 0; r < 6; ++r) {
    const double c = normal[off[r][0]].dot(normal[off[r][1]]);
    theta[r] = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return theta;
}

EdgeLengths edge_lengths(const SixJArgs& spins) {
  EdgeLengths l;
  for (int r = 0; r < 6; ++r) l[r] = spins.j[r].to_double() + 0.5;
  return l;
}

std::optional<PrEstimate> pr_estimate(const SixJArgs& s) {
  const auto& j = s.j;
  if (!triangle_ok(j[0], j[1], j[2]) || !triangle_ok(j[0], j[4], j[5]) ||
      !triangle_ok(j[3], j[1], j[5]) || !triangle_ok(j[3], j[4], j[2])) {
    return std::nullopt;
  }
  const EdgeLengths l = edge_lengths(s);
  const auto volume = tetra_volume(l);
  if (!volume) return std::nullopt;
  const auto theta = dihedral_angles(l);
  PrEstimate e;
  e.volume = *volume;
  e.envelope = 1.0 / std::sqrt(12.0 * std::numbers::pi * e.volume);
  e.phase = std::numbers::pi / 4;
  for (int r = 0; r < 6; ++r) e.phase += l[r] * theta[r];
  e.value = e.envelope * std::cos(e.phase);
  return e;
}

PrTable pr_compare(const SixJArgs& base, const std::vector<int>& scales) {
  PrTable table;
  for (int lambda : scales) {
    if (lambda < 1) throw DomainError("scale factors must be positive");
    SixJArgs scaled;
    for (int r = 0; r < 6; ++r) scaled.j[r] = HalfInt::from_twice(base.j[r].twice() * lambda);
    const auto est = pr_estimate(scaled);
    if (!est) {
      throw DomainError("scaled spins at lambda = " + std::to_string(lambda) +
                        " do not form a Euclidean tetrahedron");
    }
    PrRow row;
    row.lambda = lambda;
    row.exact = wigner6j(scaled).to_double();
    row.estimate = est->value;
    row.envelope = est->envelope;
    row.abs_err = std::abs(row.exact - row.estimate);
    row.rel_env_err = row.abs_err / row.envelope;
    row.reliable = lambda >= 2;
    table.rows.push_back(row);
  }

  std::vector<double> xs, ys, errs;
  for (const auto& row : table.rows) {
    if (!row.reliable) continue;
    xs.push_back(std::log(static_cast<double>(row.lambda)));
    ys.push_back(std::log(row.envelope));
    errs.push_back(row.rel_env_err);
  }
  if (xs.size() < 2) {
    table.log_envelope_slope = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    table.log_envelope_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  table.error_decreasing = errs.size() >= 2;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (!(errs[i] < errs[i - 1])) table.error_decreasing = false;
  }
  return table;
}

std::string pr_table_csv(const PrTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,exact,estimate,abs_err,rel_env_err\n";
  for (const auto& r : table.rows) {
    os << r.lambda << ',' << r.exact << ',' << r.estimate << ',' << r.abs_err << ','
       << r.rel_env_err << '\n';
  }
  return os.str();
}

}  // namespace spinnet
