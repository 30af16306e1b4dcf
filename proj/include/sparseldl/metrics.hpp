#ifndef SPARSELDL_METRICS_HPP_
#define SPARSELDL_METRICS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sparseldl/factorization.hpp"
#include "sparseldl/factorize.hpp"
#include "sparseldl/matgen.hpp"
#include "sparseldl/matrix_market.hpp"
#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Percentage of nonzeros in the factor: 100 * nnz(L) / n^2, where nnz(L)
// counts stored strictly-lower entries plus the n unit diagonal ones.
inline Real fill_percentage(const Factorization& f) {
  const Index n = f.dim();
  if (n == 0) return 0.0;
  return 100.0 * static_cast<Real>(f.lower.nnz()) /
         (static_cast<Real>(n) * static_cast<Real>(n));
}

inline Real frobenius_norm(const SymmetricSparseMatrix& m) {
  Real sum = 0.0;
  for (Index j = 0; j < m.dim(); ++j) {
    for (const Entry& e : m.column(j)) sum += e.value * e.value;
  }
  return std::sqrt(sum);
}

// Frobenius norm of P^T A P - L B L^T. The difference is accumulated over
// the union of the two patterns only (keyed sparse accumulator, no dense
// matrix), and the final sum runs in sorted key order for determinism.
inline Real residual(const SymmetricSparseMatrix& a, const Factorization& f) {
  const Index n = a.dim();
  if (n != f.dim()) throw DimensionMismatchError("residual: dimension mismatch");

  const SymmetricSparseMatrix permuted = apply_permutation(a, f.perm);
  std::unordered_map<std::int64_t, Real> acc;
  acc.reserve(static_cast<std::size_t>(permuted.nnz()) * 2);
  auto key = [n](Index r, Index s) {
    return static_cast<std::int64_t>(r) * static_cast<std::int64_t>(n) + s;
  };
  for (Index j = 0; j < n; ++j) {
    for (const Entry& e : permuted.column(j)) acc[key(e.row, j)] += e.value;
  }

  // Subtract L B L^T block by block; each block touches only the rows of
  // its own L columns (plus the implicit unit diagonal).
  std::vector<Entry> c1;
  std::vector<Entry> c2;
  for (const Block& b : f.blocks.blocks()) {
    c1.assign(1, Entry{b.offset, 1.0});
    c1.insert(c1.end(), f.lower.column(b.offset).begin(), f.lower.column(b.offset).end());
    if (b.size == 1) {
      for (const Entry& er : c1) {
        const Real rd = er.value * b.b11;
        for (const Entry& es : c1) acc[key(er.row, es.row)] -= rd * es.value;
      }
    } else {
      c2.assign(1, Entry{b.offset + 1, 1.0});
      c2.insert(c2.end(), f.lower.column(b.offset + 1).begin(),
                f.lower.column(b.offset + 1).end());
      // Rows touched by either column, with (u1, u2) = (row of L) * B.
      for (const Entry& er : c1) {
        const Real u1 = er.value * b.b11;
        const Real u2 = er.value * b.b21;
        for (const Entry& es : c1) acc[key(er.row, es.row)] -= u1 * es.value;
        for (const Entry& es : c2) acc[key(er.row, es.row)] -= u2 * es.value;
      }
      for (const Entry& er : c2) {
        const Real u1 = er.value * b.b21;
        const Real u2 = er.value * b.b22;
        for (const Entry& es : c1) acc[key(er.row, es.row)] -= u1 * es.value;
        for (const Entry& es : c2) acc[key(er.row, es.row)] -= u2 * es.value;
      }
    }
  }

  std::vector<std::pair<std::int64_t, Real>> items(acc.begin(), acc.end());
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Real sum = 0.0;
  for (const auto& [k, v] : items) {
    (void)k;
    sum += v * v;
  }
  return std::sqrt(sum);
}

// One benchmark sweep: every (n, density) group gets `instances` fresh
// matrices with seeds derived from `seed`.
struct BenchConfig {
  std::vector<Index> ns = {100};
  std::vector<Real> densities = {0.3};
  Index instances = 20;
  std::uint64_t seed = 42;
  Real alpha = 0.01;

  void validate() const {
    if (ns.empty() || densities.empty()) {
      throw std::invalid_argument("benchmark needs at least one n and one density");
    }
    for (Index n : ns) {
      if (n < 1) throw std::invalid_argument("benchmark n must be positive");
    }
    for (Real d : densities) {
      if (!(d > 0.0) || d > 1.0) {
        throw std::invalid_argument("benchmark density must lie in (0, 1]");
      }
    }
    if (instances < 1) throw std::invalid_argument("instances must be positive");
    StabilityConfig{alpha}.validate();
  }
};

struct InstanceResult {
  Index n = 0;
  Real density = 0.0;
  Index instance = 0;
  std::uint64_t seed = 0;
  Real fill_pct = 0.0;
  Real residual = 0.0;
  Index num_1x1 = 0;
  Index num_2x2 = 0;
  std::optional<Index> dense_switch_at;
  double wall_ms = 0.0;  // informational; kept out of the CSV so reruns byte-match
};

struct GroupAggregate {
  Index n = 0;
  Real density = 0.0;
  Index instances = 0;
  Real mean_fill_pct = 0.0;
  Real mean_residual = 0.0;
  double mean_wall_ms = 0.0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<InstanceResult> rows;
  std::vector<GroupAggregate> aggregates;
};

inline BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();
  BenchReport report;
  report.config = config;
  FactorizeOptions opts;
  opts.stability.alpha = config.alpha;

  for (Index n : config.ns) {
    for (Real density : config.densities) {
      Real fill_sum = 0.0;
      Real residual_sum = 0.0;
      double wall_sum = 0.0;
      for (Index instance = 0; instance < config.instances; ++instance) {
        GenSpec gen;
        gen.n = n;
        gen.density = density;
        gen.seed = instance_seed(config.seed, n, density, instance);
        const SymmetricSparseMatrix a = generate(gen);

        const auto start = std::chrono::steady_clock::now();
        auto [f, stats] = factorize(a, opts);
        const auto stop = std::chrono::steady_clock::now();

        InstanceResult row;
        row.n = n;
        row.density = density;
        row.instance = instance;
        row.seed = gen.seed;
        row.fill_pct = fill_percentage(f);
        row.residual = residual(a, f);
        row.num_1x1 = stats.num_1x1;
        row.num_2x2 = stats.num_2x2;
        row.dense_switch_at = stats.dense_switch_at;
        row.wall_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                .count();
        fill_sum += row.fill_pct;
        residual_sum += row.residual;
        wall_sum += row.wall_ms;
        report.rows.push_back(row);
      }
      GroupAggregate agg;
      agg.n = n;
      agg.density = density;
      agg.instances = config.instances;
      agg.mean_fill_pct = fill_sum / static_cast<Real>(config.instances);
      agg.mean_residual = residual_sum / static_cast<Real>(config.instances);
      agg.mean_wall_ms = wall_sum / static_cast<double>(config.instances);
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

// CSV serialization: one row per instance plus one flagged aggregate row
// per (n, density) group. Timing is deliberately absent so identical runs
// produce identical bytes.
inline void write_csv(std::ostream& out, const BenchReport& report) {
  out << "kind,n,density,instance,seed,fill_pct,residual,num_1x1,num_2x2,dense_switch_at\n";
  for (const InstanceResult& r : report.rows) {
    out << "instance," << r.n << "," << format_real(r.density) << "," << r.instance << ","
        << r.seed << "," << format_real(r.fill_pct) << "," << format_real(r.residual) << ","
        << r.num_1x1 << "," << r.num_2x2 << ",";
    if (r.dense_switch_at) out << *r.dense_switch_at;
    out << "\n";
  }
  for (const GroupAggregate& a : report.aggregates) {
    out << "aggregate," << a.n << "," << format_real(a.density) << "," << a.instances
        << ",," << format_real(a.mean_fill_pct) << "," << format_real(a.mean_residual)
        << ",,,\n";
  }
}

// Human-readable summary. Includes wall time, unlike the CSV.
inline void write_table(std::ostream& out, const BenchReport& report) {
  out << "benchmark: " << report.config.instances << " instance(s) per group, alpha = "
      << format_real(report.config.alpha) << ", base seed = " << report.config.seed << "\n";
  out << "recipe: full diagonal plus uniform off-diagonal pairs, values uniform in [-1, 1], "
         "diagonal counted in the density budget\n";
  out << "residual = Frobenius norm of P'AP - LBL'\n\n";
  out << std::left << std::setw(8) << "n" << std::setw(10) << "density" << std::setw(12)
      << "mean fill%" << std::setw(14) << "mean resid" << std::setw(12) << "mean ms"
      << "\n";
  for (const GroupAggregate& a : report.aggregates) {
    std::ostringstream density;
    density << std::fixed << std::setprecision(4) << a.density;
    std::ostringstream fill;
    fill << std::fixed << std::setprecision(2) << a.mean_fill_pct;
    std::ostringstream resid;
    resid << std::scientific << std::setprecision(2) << a.mean_residual;
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(2) << a.mean_wall_ms;
    out << std::left << std::setw(8) << a.n << std::setw(10) << density.str()
        << std::setw(12) << fill.str() << std::setw(14) << resid.str() << std::setw(12)
        << ms.str() << "\n";
  }
}

}  // namespace sparseldl

#endif  // SPARSELDL_METRICS_HPP_
