// Command-line front-end: generate test matrices, factorize, solve, and run
// benchmark sweeps. All numerical work lives in the headers; this file only
// moves bytes between files and the library.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or input-data error,
// 3 numerical failure (no stable pivot / singular matrix).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparseldl/sparseldl.hpp"

namespace {

using namespace sparseldl;

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

// Block list, one line per diagonal block of B, indices 0-based in permuted
// order: "1 i v" for a scalar, "2 i j v11 v12 v22" for a symmetric 2x2.
std::string render_blocks(const BlockDiagonal& blocks) {
  std::string body;
  for (const Block& b : blocks.blocks()) {
    if (b.size == 1) {
      body += "1 " + std::to_string(b.offset) + " " + format_real(b.b11) + "\n";
    } else {
      body += "2 " + std::to_string(b.offset) + " " + std::to_string(b.offset + 1) + " " +
              format_real(b.b11) + " " + format_real(b.b21) + " " + format_real(b.b22) + "\n";
    }
  }
  return body;
}

// Permutation vector: line k holds the original index placed at position k.
std::string render_permutation(const Permutation& perm) {
  std::string body;
  for (Index k = 0; k < perm.dim(); ++k) {
    body += std::to_string(perm.original(k)) + "\n";
  }
  return body;
}

std::string render_stats(const SymmetricSparseMatrix& a, const FactorizeStats& stats) {
  std::string body;
  body += "n = " + std::to_string(stats.n) + "\n";
  body += "nnz_A = " + std::to_string(a.nnz()) + "\n";
  body += "nnz_L = " + std::to_string(stats.nnz_L) + "\n";
  body += "num_1x1 = " + std::to_string(stats.num_1x1) + "\n";
  body += "num_2x2 = " + std::to_string(stats.num_2x2) + "\n";
  body += "dense_switch_at = " +
          (stats.dense_switch_at ? std::to_string(*stats.dense_switch_at) : std::string("-")) +
          "\n";
  body += "max_abs_L = " + format_real(stats.max_abs_L) + "\n";
  return body;
}

struct GenArgs {
  std::string output;
  Index n = 100;
  Real density = 0.3;
  std::uint64_t seed = 0;
  Real value_min = -1.0;
  Real value_max = 1.0;
};

int run_gen(const GenArgs& args) {
  GenSpec spec;
  spec.n = args.n;
  spec.density = args.density;
  spec.seed = args.seed;
  spec.value_min = args.value_min;
  spec.value_max = args.value_max;
  const SymmetricSparseMatrix a = generate(spec);
  write_matrix_market_file(args.output, a);
  std::cout << "wrote " << args.output << " (n = " << a.dim() << ", nnz = " << a.nnz()
            << ")\n";
  return 0;
}

struct FactorArgs {
  std::string input;
  std::string lower_path = "L.mtx";
  std::string blocks_path = "B.txt";
  std::string perm_path = "P.txt";
  std::string stats_path = "stats.txt";
  Real alpha = 0.01;
  Real dense_switch_density = 1.0;
  Index dense_switch_min_dim = 0;
  bool check = false;
};

int run_factor(const FactorArgs& args) {
  const SymmetricSparseMatrix a = read_matrix_market_file(args.input);
  FactorizeOptions opts;
  opts.stability.alpha = args.alpha;
  opts.dense_switch_density = args.dense_switch_density;
  opts.dense_switch_min_dim = args.dense_switch_min_dim;
  opts.validate();

  const auto [f, stats] = factorize(a, opts);
  write_matrix_market_file(args.lower_path, f.lower);
  write_text_file(args.blocks_path, render_blocks(f.blocks));
  write_text_file(args.perm_path, render_permutation(f.perm));
  write_text_file(args.stats_path, render_stats(a, stats));

  std::cout << "factorized " << args.input << ": n = " << stats.n << ", nnz_L = "
            << stats.nnz_L << ", 1x1 = " << stats.num_1x1 << ", 2x2 = " << stats.num_2x2
            << "\n";
  if (args.check) {
    std::cout << "fill_pct = " << format_real(fill_percentage(f)) << "\n";
    std::cout << "residual = " << format_real(residual(a, f)) << "\n";
  }
  return 0;
}

struct SolveArgs {
  std::string matrix;
  std::string rhs;
  std::string output = "x.txt";
  Real alpha = 0.01;
  bool verify = false;
};

int run_solve(const SolveArgs& args) {
  const SymmetricSparseMatrix a = read_matrix_market_file(args.matrix);
  const std::vector<Real> b = read_vector_file(args.rhs);
  if (static_cast<Index>(b.size()) != a.dim()) {
    throw std::runtime_error("right-hand side has " + std::to_string(b.size()) +
                             " entries but the matrix has dimension " +
                             std::to_string(a.dim()));
  }

  FactorizeOptions opts;
  opts.stability.alpha = args.alpha;
  opts.validate();
  const auto [f, stats] = factorize(a, opts);
  const std::vector<Real> x = solve(f, b);
  write_vector_file(args.output, x);
  std::cout << "wrote " << args.output << "\n";

  if (args.verify) {
    std::vector<Real> r(b.begin(), b.end());
    for (Index j = 0; j < a.dim(); ++j) {
      for (const Entry& e : a.column(j)) r[e.row] -= e.value * x[j];
    }
    Real rr = 0.0;
    Real bb = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      rr += r[k] * r[k];
      bb += b[k] * b[k];
    }
    const Real rel = bb > 0.0 ? std::sqrt(rr) / std::sqrt(bb) : std::sqrt(rr);
    std::cout << "relative_residual = " << format_real(rel) << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::vector<Index> ns = {100};
  std::vector<Real> densities = {0.3};
  Index instances = 20;
  std::uint64_t seed = 42;
  Real alpha = 0.01;
  std::string csv_path;
};

int run_bench(const BenchArgs& args) {
  BenchConfig config;
  config.ns = args.ns;
  config.densities = args.densities;
  config.instances = args.instances;
  config.seed = args.seed;
  config.alpha = args.alpha;

  const BenchReport report = run_benchmark(config);
  if (!args.csv_path.empty()) {
    std::ofstream out(args.csv_path);
    if (!out) throw std::runtime_error("cannot open '" + args.csv_path + "' for writing");
    write_csv(out, report);
    if (!out) throw std::runtime_error("failed while writing '" + args.csv_path + "'");
  }
  write_table(std::cout, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse symmetric indefinite LDL^T factorization tool"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a random symmetric test matrix");
  gen->add_option("output", gen_args.output, "Matrix Market output path")->required();
  gen->add_option("--n", gen_args.n, "dimension");
  gen->add_option("--density", gen_args.density, "target nonzero fraction of the full matrix");
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("--value-min", gen_args.value_min, "lower end of the value range");
  gen->add_option("--value-max", gen_args.value_max, "upper end of the value range");

  FactorArgs factor_args;
  CLI::App* factor = app.add_subcommand("factor", "factorize a Matrix Market matrix");
  factor->add_option("input", factor_args.input, "Matrix Market input path")->required();
  factor->add_option("--lower", factor_args.lower_path, "output path for L (Matrix Market)");
  factor->add_option("--blocks", factor_args.blocks_path, "output path for B (block list)");
  factor->add_option("--perm", factor_args.perm_path, "output path for P (index per line)");
  factor->add_option("--stats", factor_args.stats_path, "output path for the stats summary");
  factor->add_option("--alpha", factor_args.alpha, "stability threshold in (0, 0.5]");
  factor->add_option("--dense-switch-density", factor_args.dense_switch_density,
                     "remaining-density trigger for the dense kernel");
  factor->add_option("--dense-switch-min-dim", factor_args.dense_switch_min_dim,
                     "remaining-dimension trigger for the dense kernel");
  factor->add_flag("--check", factor_args.check, "print fill percentage and residual");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "factorize and solve A x = b");
  solve->add_option("matrix", solve_args.matrix, "Matrix Market input path")->required();
  solve->add_option("rhs", solve_args.rhs, "right-hand side, one value per line")->required();
  solve->add_option("-o,--output", solve_args.output, "solution output path");
  solve->add_option("--alpha", solve_args.alpha, "stability threshold in (0, 0.5]");
  solve->add_flag("--verify", solve_args.verify, "print the relative residual of A x = b");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark sweep");
  bench->add_option("--n", bench_args.ns, "dimensions (comma separated)")->delimiter(',');
  bench->add_option("--density", bench_args.densities, "densities (comma separated)")
      ->delimiter(',');
  bench->add_option("--instances", bench_args.instances, "instances per (n, density) group");
  bench->add_option("--seed", bench_args.seed, "base RNG seed");
  bench->add_option("--alpha", bench_args.alpha, "stability threshold in (0, 0.5]");
  bench->add_option("--csv", bench_args.csv_path, "also write the report as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(gen)) return run_gen(gen_args);
    if (app.got_subcommand(factor)) return run_factor(factor_args);
    if (app.got_subcommand(solve)) return run_solve(solve_args);
    return run_bench(bench_args);
  } catch (const sparseldl::SingularMatrixError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const sparseldl::AsymmetryError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const sparseldl::DimensionMismatchError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
