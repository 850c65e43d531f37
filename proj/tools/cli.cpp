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

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinnet/density.hpp"
#include "spinnet/error.hpp"
#include "spinnet/recoupling_graph.hpp"
#include "spinnet/semiclassics.hpp"
#include "spinnet/wigner.hpp"

namespace spinnet::cli {

namespace {

using Json = nlohmann::json;

// Usage problems detected after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

struct Context {
  RunConfig config;
  std::ostream& out;
};

void emit(const Context& ctx, const Json& value) {
  if (ctx.config.format == Format::json) {
    ctx.out << value.dump() << '\n';
    return;
  }
  if (ctx.config.format == Format::csv) throw UsageError("this command has no csv output");
  for (const auto& [key, v] : value.items()) {
    ctx.out << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

std::vector<HalfInt> parse_spins(const std::vector<std::string>& tokens) {
  std::vector<HalfInt> out;
  for (const auto& t : tokens) out.push_back(HalfInt::parse(t));
  return out;
}

Json qroot_json(const QRoot& v, unsigned digits) {
  return {{"sign", v.sign()},
          {"square", to_string(v.square())},
          {"decimal", to_decimal(v.to_real(digits), digits)}};
}

Json complex_matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

// ---------------------------------------------------------------------------
// symbol

void cmd_symbol(const Context& ctx, const std::string& kind, const std::vector<std::string>& args) {
  const auto spins = parse_spins(args);
  const unsigned digits = ctx.config.digits;
  if (kind == "6j") {
    if (spins.size() != 6) throw UsageError("6j takes 6 spins");
    emit(ctx, qroot_json(wigner6j(SixJArgs{{spins[0], spins[1], spins[2], spins[3], spins[4],
                                            spins[5]}}),
                         digits));
  } else if (kind == "9j") {
    if (spins.size() != 9) throw UsageError("9j takes 9 spins");
    NineJArgs a;
    std::copy(spins.begin(), spins.end(), a.j.begin());
    const Amplitude v = wigner9j(a, digits);
    Json j = v.exact ? qroot_json(*v.exact, digits) : Json{{"decimal", to_decimal(v.real, digits)}};
    j["exact"] = v.is_exact();
    emit(ctx, j);
  } else {
    if (spins.size() != 6) throw UsageError("cg takes j1 m1 j2 m2 j m");
    emit(ctx, qroot_json(clebsch_gordan(spins[0], spins[1], spins[2], spins[3], spins[4],
                                        spins[5]),
                         digits));
  }
}

// ---------------------------------------------------------------------------
// verify

ScanSummary sample_identity(const std::string& kind, HalfInt max_spin, int samples,
                            const Context& ctx, const VerifyOptions& opts) {
  std::mt19937_64 rng(ctx.config.seed);
  std::uniform_int_distribution<int> pick(0, max_spin.twice());
  auto draw = [&] { return HalfInt::from_twice(pick(rng)); };
  ScanSummary s;
  const long max_attempts = 1000L * samples;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(s.checked) < samples;
       ++attempt) {
    IdentityReport r;
    if (kind == "pentagon") {
      std::array<HalfInt, 9> a;
      for (auto& x : a) x = draw();
      // a b c d e f p q r
      if (!triangle_ok(a[0], a[3], a[6]) || !triangle_ok(a[2], a[1], a[6]) ||
          !triangle_ok(a[4], a[3], a[7]) || !triangle_ok(a[2], a[5], a[7]) ||
          !triangle_ok(a[4], a[0], a[8]) || !triangle_ok(a[1], a[5], a[8]) ||
          !triangle_ok(a[6], a[7], a[8])) {
        continue;
      }
      r = verify_pentagon(a, opts);
    } else {
      std::array<HalfInt, 6> a;
      for (auto& x : a) x = draw();
      r = verify_racah_triangle(a, opts);
    }
    ++s.checked;
    if (r.vacuous) ++s.vacuous;
    if (r.exact) ++s.exact;
    if (!r.passed) ++s.failures;
    s.max_deviation = std::max(s.max_deviation, r.max_deviation.convert_to<double>());
  }
  return s;
}

int cmd_verify(const Context& ctx, const std::string& kind, const std::string& max_spin_text,
               bool exhaustive, int samples, double tolerance) {
  const HalfInt max_spin = HalfInt::parse(max_spin_text);
  if (max_spin.is_negative()) throw DomainError("--max-spin must be nonnegative");
  VerifyOptions opts;
  opts.mode = ctx.config.mode == MatrixMode::real ? VerifyMode::real : VerifyMode::exact;
  opts.digits = ctx.config.digits;
  opts.tolerance = tolerance;
  ScanSummary s;
  if (exhaustive) {
    s = kind == "pentagon" ? scan_pentagon(max_spin, opts) : scan_racah_triangle(max_spin, opts);
  } else {
    s = sample_identity(kind, max_spin, samples, ctx, opts);
  }
  emit(ctx, {{"identity", kind},
             {"max_spin", max_spin.str()},
             {"exhaustive", exhaustive},
             {"checked", s.checked},
             {"vacuous", s.vacuous},
             {"exact", s.exact},
             {"failures", s.failures},
             {"max_deviation", s.max_deviation},
             {"passed", s.failures == 0}});
  return s.failures == 0 ? kExitOk : kExitDomain;
}

// ---------------------------------------------------------------------------
// graph, path

void cmd_graph(const Context& ctx, const std::string& action, int n, bool exhaustive,
               const std::string& as) {
  const RotationGraph& g = cached_rotation_graph(n);
  if (action == "build") {
    emit(ctx, {{"n", n}, {"order", g.order()}, {"size", g.size()}});
  } else if (action == "stats") {
    const GraphStats s = graph_stats(g, exhaustive);
    Json hist = Json::object();
    for (const auto& [deg, count] : s.degree_histogram) hist[std::to_string(deg)] = count;
    emit(ctx, {{"n", n},
               {"order", s.order},
               {"size", s.size},
               {"degree_histogram", hist},
               {"diameter", s.diameter},
               {"mean_distance", s.mean_distance}});
  } else if (as == "dot") {
    ctx.out << export_dot(g);
  } else {
    ctx.out << export_json_lines(g);
  }
}

void cmd_path(const Context& ctx, int n, const std::string& from_text, const std::string& to_text) {
  const CouplingTree from = parse_bracketing(from_text);
  const CouplingTree to = parse_bracketing(to_text);
  if (from.leaf_count() != n + 1 || to.leaf_count() != n + 1) {
    throw DomainError("trees must have n + 1 = " + std::to_string(n + 1) + " leaves");
  }
  const RotationGraph& g = cached_rotation_graph(n);
  const MoveSequence moves = shortest_path(g, from, to);
  Json trees = Json::array({print_bracketing(from)});
  CouplingTree cur = from;
  for (const Move& m : moves) {
    cur = apply_move(cur, m);
    trees.push_back(print_bracketing(cur));
  }
  emit(ctx, {{"from", print_bracketing(from)},
             {"to", print_bracketing(to)},
             {"distance", moves.rotation_count()},
             {"moves", Json::parse(move_sequence_to_json(moves))},
             {"trees", trees}});
}

// ---------------------------------------------------------------------------
// compile, generator

void cmd_compile(const Context& ctx, const std::vector<std::string>& spins_text,
                 const std::string& j_text, const std::string& from_text,
                 const std::string& to_text, bool check_paths, int trials) {
  SpinBinding b;
  b.leaves = parse_spins(spins_text);
  b.j = HalfInt::parse(j_text);
  b.m = b.j;
  const CouplingTree from = parse_bracketing(from_text);
  const CouplingTree to = parse_bracketing(to_text);
  EngineOptions opts{ctx.config.mode, ctx.config.digits};

  MoveSequence moves;
  if (!(from == to)) {
    if (from.leaf_count() != to.leaf_count()) throw DomainError("trees differ in leaf count");
    moves = shortest_path(cached_rotation_graph(from.leaf_count() - 1), from, to);
  }
  const RecouplingMatrix m = compile_path(moves, from, b, opts);
  Json out = {{"moves", Json::parse(move_sequence_to_json(moves))},
              {"dimension", m.dimension()},
              {"unitarity_defect", m.unitarity_defect()},
              {"matrix", Json::parse(matrix_to_json(m))}};
  if (check_paths) {
    const auto r = check_path_independence(from, to, b, trials, ctx.config.seed, opts);
    out["path_check"] = {{"paths", r.paths},
                         {"max_deviation", r.max_deviation},
                         {"passed", r.max_deviation <= 1e-10}};
  }
  emit(ctx, out);
}

Eigen::MatrixXcd matrix_from_file(const std::string& text) {
  const Json j = parse_json(text);
  if (j.is_object()) {
    const Json& m = j.contains("matrix") ? j.at("matrix") : j;
    return matrix_from_json(m.dump()).to_eigen().cast<std::complex<double>>();
  }
  if (!j.is_array()) throw DomainError("matrix file must hold an object or an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd u(rows, rows);
  try {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(j[r].size()) != rows) throw DomainError("matrix is not square");
      for (Eigen::Index c = 0; c < rows; ++c) {
        const auto& e = j[r][c];
        u(r, c) = e.is_number() ? Complex(e.get<double>(), 0)
                                : Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed matrix entry: ") + e.what());
  }
  return u;
}

void cmd_generator(const Context& ctx, const std::string& path, double tau) {
  const Eigen::MatrixXcd u = matrix_from_file(read_file(path));
  const Eigen::MatrixXcd h = hermitian_generator(u, tau, std::max(ctx.config.tolerance, 1e-9));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(Complex(0, eig.eigenvalues()(i) * tau));
  }
  const Eigen::MatrixXcd back = eig.eigenvectors() * phases.asDiagonal() *
                                eig.eigenvectors().adjoint();
  const double recon = h.rows() ? (back - u).cwiseAbs().maxCoeff() : 0.0;
  const double herm = h.rows() ? (h - h.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  emit(ctx, {{"tau", tau},
             {"dimension", h.rows()},
             {"reconstruction_error", recon},
             {"hermiticity_defect", herm},
             {"H", complex_matrix_json(h)}});
}

// ---------------------------------------------------------------------------
// prcheck

void cmd_prcheck(const Context& ctx, const std::vector<std::string>& spins_text,
                 const std::vector<int>& scales) {
  const auto spins = parse_spins(spins_text);
  if (spins.size() != 6) throw UsageError("--spins takes 6 spins");
  SixJArgs base{{spins[0], spins[1], spins[2], spins[3], spins[4], spins[5]}};
  const PrTable t = pr_compare(base, scales);
  if (ctx.config.format == Format::csv) {
    ctx.out << pr_table_csv(t);
    return;
  }
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"lambda", r.lambda},
                    {"exact", r.exact},
                    {"estimate", r.estimate},
                    {"envelope", r.envelope},
                    {"abs_err", r.abs_err},
                    {"rel_env_err", r.rel_env_err},
                    {"reliable", r.reliable}});
  }
  Json out = {{"rows", rows}, {"error_decreasing", t.error_decreasing}};
  out["log_envelope_slope"] = std::isnan(t.log_envelope_slope) ? Json(nullptr)
                                                                : Json(t.log_envelope_slope);
  emit(ctx, out);
}

// ---------------------------------------------------------------------------
// density

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void cmd_density(const Context& ctx, const std::string& action, const std::string& path) {
  const std::string text = read_file(path);
  if (action == "decompose") {
    const DensityInput in = density_from_json(text);
    ctx.out << block_to_json(decompose_density(in.matrix, in.labels)) << '\n';
    return;
  }
  if (action == "roundtrip") {
    const DensityInput in = density_from_json(text);
    const Eigen::MatrixXcd back = reconstruct(decompose_density(in.matrix, in.labels));
    emit(ctx, {{"max_error", in.matrix.size() ? (back - in.matrix).cwiseAbs().maxCoeff() : 0.0},
               {"hermiticity_defect_in", hermiticity_defect(in.matrix)},
               {"hermiticity_defect_out", hermiticity_defect(back)},
               {"matrix", complex_matrix_json(back)}});
    return;
  }
  const Json j = parse_json(text);
  if (!j.is_object() || !j.contains("first") || !j.contains("second")) {
    throw DomainError("couple expects an object with \"first\" and \"second\" densities");
  }
  const DensityInput a = density_from_json(j.at("first").dump());
  const DensityInput b = density_from_json(j.at("second").dump());
  const DensityBlock ba = decompose_density(a.matrix, a.labels);
  const DensityBlock bb = decompose_density(b.matrix, b.labels);
  Json sectors = Json::array();
  for (HalfInt jp = abs(a.labels.j_bra - b.labels.j_bra); jp <= a.labels.j_bra + b.labels.j_bra;
       jp += HalfInt(1)) {
    for (HalfInt jk = abs(a.labels.j_ket - b.labels.j_ket);
         jk <= a.labels.j_ket + b.labels.j_ket; jk += HalfInt(1)) {
      sectors.push_back(Json::parse(block_to_json(couple_densities(ba, bb, jk, jp).as_block())));
    }
  }
  const Eigen::MatrixXcd full = coupled_density_matrix(ba, bb);
  const Complex trace = full.rows() == full.cols() ? full.trace() : Complex(0);
  emit(ctx, {{"sectors", sectors},
             {"trace", {trace.real(), trace.imag()}},
             {"matrix", complex_matrix_json(full)}});
}

unsigned default_digits() {
  if (const char* env = std::getenv("SPINNET_PRECISION")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 16 && v <= 10000) return static_cast<unsigned>(v);
  }
  return kDefaultDigits;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact angular-momentum recoupling and spin-network tools", "spinnet"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  config.digits = default_digits();
  std::string mode = "auto", format = "json";
  app.add_option("--digits", config.digits, "decimal digits for MPReal arithmetic (>= 16)")
      ->check(CLI::Range(16u, 10000u));
  app.add_option("--tol", config.tolerance, "numerical tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "matrix mode")->check(CLI::IsMember({"exact", "real", "auto"}));
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", config.seed, "seed for randomized checks");

  // symbol
  auto* symbol = app.add_subcommand("symbol", "6j, 9j or Clebsch-Gordan coefficient");
  std::string symbol_kind;
  std::vector<std::string> symbol_args;
  symbol->add_option("kind", symbol_kind)->required()->check(CLI::IsMember({"6j", "9j", "cg"}));
  symbol->add_option("spins", symbol_args)->required();

  // verify
  auto* verify = app.add_subcommand("verify", "check the pentagon or Racah triangle identity");
  std::string verify_kind, max_spin = "1";
  bool exhaustive = false;
  int samples = 200;
  double verify_tol = 1e-25;
  verify->add_option("identity", verify_kind)
      ->required()
      ->check(CLI::IsMember({"pentagon", "triangle"}));
  verify->add_option("--max-spin", max_spin, "largest spin")->required();
  verify->add_flag("--exhaustive", exhaustive, "every admissible assignment");
  verify->add_option("--samples", samples, "random assignments when not exhaustive")
      ->check(CLI::PositiveNumber);
  verify->add_option("--deviation", verify_tol, "allowed deviation in real mode");

  // graph
  auto* graph = app.add_subcommand("graph", "rotation graph of coupling schemes");
  std::string graph_action, export_as = "jsonl";
  int graph_n = 0;
  bool graph_exhaustive = false;
  graph->add_option("action", graph_action)
      ->required()
      ->check(CLI::IsMember({"build", "stats", "export"}));
  graph->add_option("--n", graph_n, "leaves minus one")->required()->check(CLI::PositiveNumber);
  graph->add_flag("--exhaustive", graph_exhaustive, "BFS from every vertex");
  graph->add_option("--as", export_as, "export format")->check(CLI::IsMember({"jsonl", "dot"}));

  // path
  auto* path = app.add_subcommand("path", "shortest move program between two trees");
  int path_n = 0;
  std::string from_text, to_text;
  path->add_option("--n", path_n)->required()->check(CLI::PositiveNumber);
  path->add_option("--from", from_text)->required();
  path->add_option("--to", to_text)->required();

  // compile
  auto* compile = app.add_subcommand("compile", "recoupling matrix between two trees");
  std::vector<std::string> compile_spins;
  std::string compile_j;
  bool check_paths = false;
  int trials = 4;
  compile->add_option("--spins", compile_spins)->required()->delimiter(',');
  compile->add_option("--j", compile_j)->required();
  compile->add_option("--from", from_text)->required();
  compile->add_option("--to", to_text)->required();
  compile->add_flag("--check-paths", check_paths, "compare against randomized detours");
  compile->add_option("--trials", trials)->check(CLI::PositiveNumber);

  // generator
  auto* generator = app.add_subcommand("generator", "Hermitian generator of a unitary matrix");
  std::string matrix_file;
  double tau = 1.0;
  generator->add_option("--matrix", matrix_file)->required();
  generator->add_option("--tau", tau)->check(CLI::PositiveNumber);

  // prcheck
  auto* prcheck = app.add_subcommand("prcheck", "exact 6j against the Ponzano-Regge estimate");
  std::vector<std::string> pr_spins;
  std::vector<int> scales{1, 2, 4, 8, 16};
  prcheck->add_option("--spins", pr_spins)->required()->delimiter(',');
  prcheck->add_option("--scales", scales)->delimiter(',');

  // density
  auto* density = app.add_subcommand("density", "statistical tensors of density matrices");
  std::string density_action, density_file;
  density->add_option("action", density_action)
      ->required()
      ->check(CLI::IsMember({"decompose", "couple", "roundtrip"}));
  density->add_option("--in", density_file)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  config.mode = mode == "exact" ? MatrixMode::exact
                : mode == "real" ? MatrixMode::real
                                 : MatrixMode::automatic;
  config.format = format == "csv" ? Format::csv : format == "text" ? Format::text : Format::json;
  Context ctx{config, out};

  try {
    if (*symbol) {
      cmd_symbol(ctx, symbol_kind, symbol_args);
    } else if (*verify) {
      return cmd_verify(ctx, verify_kind, max_spin, exhaustive, samples, verify_tol);
    } else if (*graph) {
      cmd_graph(ctx, graph_action, graph_n, graph_exhaustive, export_as);
    } else if (*path) {
      cmd_path(ctx, path_n, from_text, to_text);
    } else if (*compile) {
      cmd_compile(ctx, compile_spins, compile_j, from_text, to_text, check_paths, trials);
    } else if (*generator) {
      cmd_generator(ctx, matrix_file, tau);
    } else if (*prcheck) {
      cmd_prcheck(ctx, pr_spins, scales);
    } else if (*density) {
      cmd_density(ctx, density_action, density_file);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace spinnet::cli
