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

#include "spinnet/density.hpp"

#include <cmath>

#include <json.hpp>

#include "spinnet/error.hpp"
#include "spinnet/wigner.hpp"

namespace spinnet {

namespace {

using Json = nlohmann::json;

double cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m) {
  return clebsch_gordan(j1, m1, j2, m2, j, m).to_double();
}

// m for row/column i of a multiplet: j, j-1, ..., -j
HalfInt projection(HalfInt j, int i) { return j - HalfInt(i); }

std::vector<TensorComponent> empty_components(HalfInt j_ket, HalfInt j_bra) {
  std::vector<TensorComponent> out;
  for (HalfInt k = abs(j_ket - j_bra); k <= j_ket + j_bra; k += HalfInt(1)) {
    for (HalfInt q = -k; q <= k; q += HalfInt(1)) out.push_back({k, q, Complex(0)});
  }
  return out;
}

Complex lookup(const std::vector<TensorComponent>& comps, HalfInt k, HalfInt kappa) {
  for (const auto& c : comps) {
    if (c.k == k && c.kappa == kappa) return c.value;
  }
  return Complex(0);
}

Eigen::MatrixXcd expand(const std::vector<TensorComponent>& comps, HalfInt j_bra, HalfInt j_ket) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(j_bra.dimension(), j_ket.dimension());
  for (int r = 0; r < j_bra.dimension(); ++r) {
    for (int c = 0; c < j_ket.dimension(); ++c) {
      const HalfInt mp = projection(j_bra, r);
      const HalfInt mk = projection(j_ket, c);
      for (const auto& t : comps) {
        if (t.value == Complex(0) || mk + t.kappa != mp) continue;
        m(r, c) += t.value * cg(j_ket, mk, t.k, t.kappa, j_bra, mp);
      }
    }
  }
  return m;
}

void check_spin(HalfInt j, const char* what) {
  if (j.is_negative()) throw DomainError(std::string("negative ") + what);
}

}  // namespace

Complex DensityBlock::value(HalfInt k, HalfInt kappa) const {
  return lookup(components, k, kappa);
}

DensityBlock decompose_density(const Eigen::MatrixXcd& elements, const DensityLabels& labels) {
  check_spin(labels.j_bra, "bra spin");
  check_spin(labels.j_ket, "ket spin");
  const HalfInt jp = labels.j_bra;
  const HalfInt j = labels.j_ket;
  if (elements.rows() != jp.dimension() || elements.cols() != j.dimension()) {
    throw DomainError("density block must be " + std::to_string(jp.dimension()) + " x " +
                      std::to_string(j.dimension()) + " for j' = " + jp.str() + ", j = " + j.str());
  }
  DensityBlock block{labels, empty_components(j, jp)};
  for (auto& t : block.components) {
    Complex sum = 0;
    for (int r = 0; r < jp.dimension(); ++r) {
      for (int c = 0; c < j.dimension(); ++c) {
        const HalfInt mp = projection(jp, r);
        const HalfInt m = projection(j, c);
        if (m + t.kappa != mp) continue;
        sum += elements(r, c) * cg(j, m, t.k, t.kappa, jp, mp);
      }
    }
    t.value = sum * static_cast<double>(t.k.dimension()) / static_cast<double>(jp.dimension());
  }
  return block;
}

Eigen::MatrixXcd reconstruct(const DensityBlock& block) {
  return expand(block.components, block.labels.j_bra, block.labels.j_ket);
}

DensityBlock CoupledDensityBlock::as_block() const {
  DensityLabels l{labels.first.sigma_bra + "," + labels.second.sigma_bra, labels.j_bra,
                  labels.first.sigma_ket + "," + labels.second.sigma_ket, labels.j_ket};
  return {l, components};
}

CoupledDensityBlock couple_densities(const DensityBlock& first, const DensityBlock& second,
                                     HalfInt j_ket, HalfInt j_bra) {
  const HalfInt j1 = first.labels.j_ket, j1p = first.labels.j_bra;
  const HalfInt j2 = second.labels.j_ket, j2p = second.labels.j_bra;
  if (!triangle_ok(j1, j2, j_ket)) {
    throw DomainError("j = " + j_ket.str() + " is not reachable from " + j1.str() + " and " +
                      j2.str());
  }
  if (!triangle_ok(j1p, j2p, j_bra)) {
    throw DomainError("j' = " + j_bra.str() + " is not reachable from " + j1p.str() + " and " +
                      j2p.str());
  }
  CoupledDensityBlock out{{first.labels, second.labels, j_bra, j_ket},
                          empty_components(j_ket, j_bra)};
  const double base = static_cast<double>(j_ket.dimension()) * j1p.dimension() * j2p.dimension();
  for (auto& t : out.components) {
    Complex sum = 0;
    for (const auto& a : first.components) {
      if (a.value == Complex(0)) continue;
      for (const auto& b : second.components) {
        if (b.value == Complex(0) || a.kappa + b.kappa != t.kappa) continue;
        const double c = cg(a.k, a.kappa, b.k, b.kappa, t.k, t.kappa);
        if (c == 0) continue;
        const double nine =
            wigner9j(NineJArgs{{j1, j2, j_ket, a.k, b.k, t.k, j1p, j2p, j_bra}}).to_double();
        sum += nine * c * a.value * b.value;
      }
    }
    t.value = std::sqrt(base * t.k.dimension()) * sum;
  }
  return out;
}

Eigen::MatrixXcd reconstruct_coupled_matrix(const CoupledDensityBlock& block) {
  return expand(block.components, block.labels.j_bra, block.labels.j_ket);
}

namespace {

std::vector<HalfInt> sectors(HalfInt a, HalfInt b) {
  std::vector<HalfInt> out;
  for (HalfInt j = abs(a - b); j <= a + b; j += HalfInt(1)) out.push_back(j);
  return out;
}

int total_dimension(const std::vector<HalfInt>& js) {
  int d = 0;
  for (HalfInt j : js) d += j.dimension();
  return d;
}

}  // namespace

Eigen::MatrixXcd coupled_density_matrix(const DensityBlock& first, const DensityBlock& second) {
  const auto bra = sectors(first.labels.j_bra, second.labels.j_bra);
  const auto ket = sectors(first.labels.j_ket, second.labels.j_ket);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(total_dimension(bra), total_dimension(ket));
  int row = 0;
  for (HalfInt jp : bra) {
    int col = 0;
    for (HalfInt j : ket) {
      out.block(row, col, jp.dimension(), j.dimension()) =
          reconstruct_coupled_matrix(couple_densities(first, second, j, jp));
      col += j.dimension();
    }
    row += jp.dimension();
  }
  return out;
}

Eigen::MatrixXcd direct_coupled_matrix(const Eigen::MatrixXcd& first, HalfInt j1_bra,
                                       HalfInt j1_ket, const Eigen::MatrixXcd& second,
                                       HalfInt j2_bra, HalfInt j2_ket) {
  // change of basis from product states |m1 m2> to coupled states |j m>
  auto basis_change = [](HalfInt a, HalfInt b) {
    const auto js = sectors(a, b);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(total_dimension(js), a.dimension() * b.dimension());
    int row = 0;
    for (HalfInt j : js) {
      for (int i = 0; i < j.dimension(); ++i, ++row) {
        const HalfInt m = projection(j, i);
        for (int p = 0; p < a.dimension(); ++p) {
          for (int q = 0; q < b.dimension(); ++q) {
            u(row, p * b.dimension() + q) = cg(a, projection(a, p), b, projection(b, q), j, m);
          }
        }
      }
    }
    return u;
  };
  const Eigen::MatrixXd ub = basis_change(j1_bra, j2_bra);
  const Eigen::MatrixXd uk = basis_change(j1_ket, j2_ket);
  Eigen::MatrixXcd product(first.rows() * second.rows(), first.cols() * second.cols());
  for (Eigen::Index i = 0; i < first.rows(); ++i) {
    for (Eigen::Index j = 0; j < first.cols(); ++j) {
      product.block(i * second.rows(), j * second.cols(), second.rows(), second.cols()) =
          first(i, j) * second;
    }
  }
  return ub.cast<Complex>() * product * uk.transpose().cast<Complex>();
}

// ---------------------------------------------------------------------------
// JSON

DensityInput density_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  try {
    DensityInput in;
    const auto& l = j.at("labels");
    in.labels.sigma_bra = l.value("sigma_bra", std::string());
    in.labels.sigma_ket = l.value("sigma_ket", std::string());
    in.labels.j_bra = HalfInt::parse(l.at("j_bra").get<std::string>());
    in.labels.j_ket = HalfInt::parse(l.at("j_ket").get<std::string>());
    const auto& rows = j.at("matrix");
    const int nr = in.labels.j_bra.dimension();
    const int nc = in.labels.j_ket.dimension();
    if (in.labels.j_bra.is_negative() || in.labels.j_ket.is_negative()) {
      throw DomainError("negative spin label");
    }
    if (static_cast<int>(rows.size()) != nr) {
      throw DomainError("matrix needs " + std::to_string(nr) + " rows");
    }
    in.matrix.resize(nr, nc);
    for (int r = 0; r < nr; ++r) {
      if (static_cast<int>(rows[r].size()) != nc) {
        throw DomainError("matrix row " + std::to_string(r) + " needs " + std::to_string(nc) +
                          " entries");
      }
      for (int c = 0; c < nc; ++c) {
        const auto& e = rows[r][c];
        if (e.is_number()) {
          in.matrix(r, c) = Complex(e.get<double>(), 0.0);
        } else {
          in.matrix(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
    }
    return in;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed density file: ") + e.what());
  }
}

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json labels_json(const DensityLabels& l) {
  return {{"sigma_bra", l.sigma_bra},
          {"j_bra", l.j_bra.str()},
          {"sigma_ket", l.sigma_ket},
          {"j_ket", l.j_ket.str()}};
}

}  // namespace

std::string density_to_json(const DensityLabels& labels, const Eigen::MatrixXcd& matrix) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) row.push_back(complex_json(matrix(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"labels", labels_json(labels)}, {"matrix", rows}}.dump();
}

std::string block_to_json(const DensityBlock& block) {
  Json comps = Json::array();
  for (const auto& t : block.components) {
    comps.push_back({{"k", t.k.str()}, {"kappa", t.kappa.str()}, {"value", complex_json(t.value)}});
  }
  return Json{{"labels", labels_json(block.labels)}, {"components", comps}}.dump();
}

}  // namespace spinnet
