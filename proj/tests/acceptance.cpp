// Copyright 2026 The ctqw-fid Authors
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

// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "ctqw/ctqw.hpp"
#include "support/oracles.hpp"

using namespace ctqw;

namespace {

constexpr std::size_t kRandomGraphs = 200;
constexpr std::size_t kMaxOrder = 60;
const std::vector<double> kTimes{0.0, 0.3, 1.7, 10.0};

constexpr double kEquivalenceTol = 1e-9;     // criteria 1, 3, 7
constexpr double kClosedFormTol = 1e-10;     // criterion 2
constexpr double kDominatingFloor = 4e-4;    // criterion 4, at n = 10^4
constexpr double kResidualTol = 1e-10;       // criterion 6, complete(500)
constexpr double kSpectrumTol = 1e-9;        // criterion 6, complete(500)

struct Outcome {
  bool passed = true;
  double worst = 0.0;
  std::size_t checks = 0;
  std::string detail;

  void observe(double error, double tolerance) {
    ++checks;
    if (std::isnan(error) || error > worst) worst = std::isnan(error) ? INFINITY : error;
    if (!(error <= tolerance)) passed = false;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int criterion, const char* title, const Outcome& o, double seconds) {
  std::printf("criterion %d: %s  %s  (checks=%zu, worst=%.3g%s%s, %.1fs)\n", criterion,
              o.passed ? "PASS" : "FAIL", title, o.checks, o.worst, o.detail.empty() ? "" : ", ",
              o.detail.c_str(), seconds);
  std::fflush(stdout);
}

struct Instance {
  Graph graph;
  std::vector<FidPartition> partitions;
};

std::vector<Instance> random_instances() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; seed < kRandomGraphs; ++seed) {
    auto comp = testing::random_composition(seed, kMaxOrder);
    Instance inst{comp.graph, {}};
    inst.partitions.push_back(trivial_partition(comp.graph));
    inst.partitions.push_back(singleton_partition(comp.graph));
    inst.partitions.push_back(twin_coarsen(comp.graph));
    inst.partitions.push_back(require_fid(comp.graph, comp.pieces));
    out.push_back(std::move(inst));
  }
  return out;
}

// Criteria 1, 3 and 7 share one sweep over every instance.
struct SweepOutcomes {
  Outcome equivalence;
  Outcome series;
  Outcome gap;
  Outcome unitarity;
  Outcome symmetry;
  double gap_ratio = 0.0;  // largest gap / bound seen
};

SweepOutcomes sweep(const std::vector<Instance>& instances) {
  SweepOutcomes s;
  std::set<std::size_t> orders;
  for (std::size_t g_index = 0; g_index < instances.size(); ++g_index) {
    const Instance& inst = instances[g_index];
    const Graph& g = inst.graph;
    const std::size_t n = g.order();
    orders.insert(n);
    const DirectWalk direct(g);

    // The direct route itself is checked against a series exponential on a
    // subset of graphs.
    if (g_index % 10 == 0) {
      for (double t : kTimes) {
        const auto u = testing::expm_series(laplacian(g), t);
        for (Vertex x = 0; x < n; ++x)
          for (Vertex y = 0; y < n; ++y)
            s.series.observe(std::abs(direct.amplitude(x, y, t) - u[x][y]), kEquivalenceTol);
      }
    }

    std::vector<double> reference(n * n);
    std::vector<double> fid(n * n);
    for (const FidPartition& p : inst.partitions) {
      const FidWalk walk(g, p);
      std::vector<DirectWalk> block_walks;
      for (std::size_t i = 0; i < p.block_count(); ++i) block_walks.emplace_back(g.induced(p.block(i)));
      for (double t : kTimes) {
        for (Vertex x = 0; x < n; ++x) {
          double total = 0.0;
          for (Vertex y = 0; y < n; ++y) {
            reference[x * n + y] = direct.probability(x, y, t);
            fid[x * n + y] = walk.probability(x, y, t).probability;
            total += fid[x * n + y];
            s.equivalence.observe(std::abs(fid[x * n + y] - reference[x * n + y]), kEquivalenceTol);
          }
          s.unitarity.observe(std::abs(total - 1.0), kEquivalenceTol);

          const std::size_t i = p.block_of(x);
          const GapReport gap = theorem1_gap(direct, block_walks[i], x, p.local_index(x), t);
          s.gap.observe(std::max(0.0, gap.gap - gap.bound), kEquivalenceTol);
          s.gap_ratio = std::max(s.gap_ratio, gap.gap / gap.bound);
        }
        for (Vertex x = 0; x < n; ++x)
          for (Vertex y = x + 1; y < n; ++y)
            s.symmetry.observe(std::abs(fid[x * n + y] - fid[y * n + x]), kEquivalenceTol);
      }
    }
  }
  s.equivalence.detail = std::to_string(instances.size()) + " graphs, n in [" +
                         std::to_string(*orders.begin()) + "," + std::to_string(*orders.rbegin()) + "]";
  char ratio[64];
  std::snprintf(ratio, sizeof ratio, "largest gap / bound %.4f", s.gap_ratio);
  s.gap.detail = ratio;
  return s;
}

Outcome criterion2() {
  Outcome o;
  const auto times = default_time_grid();
  auto check = [&](const Graph& g) {
    const auto split = dominating_split(g);
    if (!split) {
      o.passed = false;
      o.detail = "graph without a dominating vertex";
      return;
    }
    const std::size_t n = g.order();
    const FidWalk walk(g, *split);
    const Vertex x = split->block(0).front();
    for (double t : times) {
      o.observe(std::abs(walk.probability(x, x, t).probability - dominating_return_probability(n, t)),
                kClosedFormTol);
      const double cross = dominating_cross_probability(n, t);
      for (Vertex y = 0; y < n; ++y)
        if (y != x) o.observe(std::abs(walk.probability(x, y, t).probability - cross), kClosedFormTol);
    }
  };
  for (std::size_t n = 2; n <= 200; ++n) {
    check(complete_graph(n));
    check(star_graph(n));
  }
  std::size_t thresholds = 0;
  for (std::uint64_t seed = 0; thresholds < 20; ++seed) {
    UniformSource pick(seed);
    const auto n = 2 + static_cast<std::size_t>(pick.next() * 199.0);
    const Graph g = threshold_graph(n, 0.5, seed);
    if (dominating_vertices(g).empty()) continue;
    check(g);
    ++thresholds;
  }
  o.detail = "complete and star n=2..200, " + std::to_string(thresholds) + " threshold graphs";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::size_t> sizes{10, 100, 1000, 10000};
  std::vector<double> minima(sizes.size(), 1.0);
  std::size_t s = 0;
  stream_localization_scan(DominatingScan{{Family::star, 0, 0.0, 0}}, sizes, default_time_grid(),
                           [&](const ScanRow& row) {
                             while (sizes[s] != row.size) ++s;
                             minima[s] = std::min(minima[s], row.return_probability);
                             ++o.checks;
                           });
  o.worst = 1.0 - minima.back();
  if (!(minima.back() >= 1.0 - kDominatingFloor)) o.passed = false;
  for (std::size_t k = 1; k < minima.size(); ++k)
    if (!(minima[k] >= minima[k - 1])) o.passed = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "min P = %.6f, %.6f, %.6f, %.8f", minima[0], minima[1], minima[2],
                minima[3]);
  o.detail = buf;
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<std::size_t> sizes{12, 52, 102, 502};
  stream_localization_scan(CliqueGatewayScan{2, path_graph(10)}, sizes, default_time_grid(),
                           [&](const ScanRow& row) {
                             o.observe(std::max(0.0, (1.0 - row.return_probability) - row.bound),
                                       kEquivalenceTol);
                           });
  o.detail = "outer graph path(10), n_c = 12, 52, 102, 502";
  return o;
}

Outcome criterion6(const std::vector<Instance>& instances) {
  Outcome o;
  const std::set<std::string> spectral{"decomposition_identity",
                                       "reduced_row_sums",
                                       "block_eigen_residual",
                                       "block_orthonormality",
                                       "block_completeness",
                                       "reduced_eigen_residual",
                                       "reduced_weighted_orthonormality",
                                       "completeness",
                                       "constant_weight_sum",
                                       "constant_weight_bound",
                                       "full_eigen_consistency"};
  const std::vector<double> no_times;
  for (const Instance& inst : instances)
    for (const FidPartition& p : inst.partitions)
      for (const InvariantResult& r : check_invariants(inst.graph, p, no_times)) {
        if (!spectral.count(r.name)) continue;
        o.observe(r.max_error, r.tolerance);
        if (!r.passed && o.detail.empty()) o.detail = r.name + " at " + r.witness;
      }

  const std::size_t n = 500;
  const SymmetricMatrix lap = laplacian(complete_graph(n));
  const EigenDecomposition e = eigh(lap);
  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = e.vector(j);
    const auto lv = lap.apply(v);
    for (std::size_t x = 0; x < n; ++x) residual = std::max(residual, std::abs(lv[x] - e.eigenvalues[j] * v[x]));
  }
  o.observe(residual, kResidualTol);
  o.observe(std::abs(e.eigenvalues[0]), kSpectrumTol);
  for (std::size_t j = 1; j < n; ++j) o.observe(std::abs(e.eigenvalues[j] - 500.0), kSpectrumTol);
  char buf[96];
  std::snprintf(buf, sizeof buf, "complete(500) residual %.3g", residual);
  o.detail += o.detail.empty() ? buf : std::string("; ") + buf;
  return o;
}

}  // namespace

int main() {
  bool all = true;
  Stopwatch build;
  const std::vector<Instance> instances = random_instances();
  const double build_seconds = build.seconds();

  Stopwatch sweep_clock;
  SweepOutcomes s = sweep(instances);
  const double sweep_seconds = sweep_clock.seconds() + build_seconds;

  Outcome c1 = s.equivalence;
  c1.passed = c1.passed && s.series.passed;
  char series[64];
  std::snprintf(series, sizeof series, "; series exponential worst %.3g", s.series.worst);
  c1.detail += series;
  report(1, "decomposition route equals direct route within 1e-9", c1, sweep_seconds);
  all = all && c1.passed;

  {
    Stopwatch clock;
    const Outcome o = criterion2();
    report(2, "dominating vertex closed forms within 1e-10", o, clock.seconds());
    all = all && o.passed;
  }

  report(3, "return gap within 4/n_i + 1e-9", s.gap, 0.0);
  all = all && s.gap.passed;

  {
    Stopwatch clock;
    const Outcome o = criterion4();
    report(4, "dominating scan min P >= 1 - 4e-4 at n = 10^4 and non-decreasing", o, clock.seconds());
    all = all && o.passed;
  }
  {
    Stopwatch clock;
    const Outcome o = criterion5();
    report(5, "clique gateway scan 1 - P <= 8/(n_c - 2) + 1e-9", o, clock.seconds());
    all = all && o.passed;
  }
  {
    Stopwatch clock;
    const Outcome o = criterion6(instances);
    report(6, "spectral identities and complete(500) spectrum", o, clock.seconds());
    all = all && o.passed;
  }

  Outcome c7 = s.unitarity;
  c7.passed = c7.passed && s.symmetry.passed;
  c7.checks += s.symmetry.checks;
  c7.worst = std::max(c7.worst, s.symmetry.worst);
  report(7, "unitarity and symmetry within 1e-9", c7, 0.0);
  all = all && c7.passed;

  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
