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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ctqw/ctqw.hpp"
#include "support/oracles.hpp"

using namespace ctqw;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kTimes{0.0, 0.3, 1.7, 10.0};

std::vector<FidPartition> partitions_for(const testing::Composition& comp) {
  const Graph& g = comp.graph;
  return {trivial_partition(g), singleton_partition(g), twin_coarsen(g), require_fid(g, comp.pieces)};
}

}  // namespace

TEST_CASE("walk at t = 0 is the identity", "[walk]") {
  const Graph g = erdos_renyi_graph(12, 0.4, 8);
  const DirectWalk direct(g);
  const FidWalk fid(g, twin_coarsen(g));
  for (Vertex x = 0; x < 12; ++x)
    for (Vertex y = 0; y < 12; ++y) {
      const double expected = x == y ? 1.0 : 0.0;
      CHECK_THAT(direct.probability(x, y, 0.0), WithinAbs(expected, 1e-12));
      CHECK_THAT(fid.probability(x, y, 0.0).probability, WithinAbs(expected, 1e-12));
      CHECK_THAT(std::abs(direct.amplitude(x, y, 0.0) - expected), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("K2 amplitude and return probability", "[walk]") {
  const Graph g = complete_graph(2);
  for (double t : {0.0, 0.4, 1.0, 2.5, 7.0}) {
    const Amplitude expected = (1.0 + std::exp(Amplitude(0.0, 2.0 * t))) / 2.0;
    CHECK(std::abs(amplitude_direct(g, 0, 0, t) - expected) <= 1e-14);
    CHECK_THAT(probability_direct(g, 0, 0, t).probability, WithinAbs(std::cos(t) * std::cos(t), 1e-14));
    CHECK_THAT(dominating_return_probability(2, t), WithinAbs(std::cos(t) * std::cos(t), 1e-14));
  }
}

TEST_CASE("edgeless graph does not move", "[walk]") {
  const Graph g = edgeless_graph(4);
  for (double t : kTimes)
    for (Vertex x = 0; x < 4; ++x)
      for (Vertex y = 0; y < 4; ++y) {
        CHECK(amplitude_direct(g, x, y, t) == Amplitude(x == y ? 1.0 : 0.0, 0.0));
        CHECK(amplitude_fid(g, singleton_partition(g), x, y, t) == Amplitude(x == y ? 1.0 : 0.0, 0.0));
      }
}

TEST_CASE("complete graph K4 at t = pi/4", "[walk]") {
  CHECK_THAT(probability_direct(complete_graph(4), 1, 1, kPi / 4).probability, WithinAbs(0.25, 1e-12));
  CHECK_THAT(dominating_return_probability(4, kPi / 4), WithinAbs(0.25, 1e-15));
}

TEST_CASE("no probability crosses between components", "[walk]") {
  const Graph g = disjoint_union(complete_graph(2), complete_graph(2));
  const FidPartition p = require_fid(g, {{0, 1}, {2, 3}});
  for (double t : kTimes) {
    CHECK_THAT(probability_direct(g, 0, 3, t).probability, WithinAbs(0.0, 1e-24));
    const ProbabilityReport r = probability_fid_terms(g, p, 0, 3, t);
    REQUIRE(r.cross_term);
    CHECK_THAT(*r.cross_term, WithinAbs(0.0, 1e-30));
    CHECK(std::abs(amplitude_fid(g, p, 1, 2, t)) <= 1e-15);
  }
}

TEST_CASE("dominating vertex formulas", "[walk][dominating]") {
  CHECK_THAT(dominating_return_probability(2, kPi / 2), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dominating_cross_probability(2, kPi / 2), WithinAbs(1.0, 1e-15));
  for (std::size_t n : {1u, 3u, 10u, 57u}) {
    CHECK(dominating_return_probability(n, 0.0) == 1.0);
    CHECK(dominating_cross_probability(n, 0.0) == 0.0);
    for (double t : default_time_grid()) {
      const double nn = static_cast<double>(n);
      CHECK(nn * (1.0 - dominating_return_probability(n, t)) <= 4.0 + 1e-12);
      // Return plus (n - 1) equal cross probabilities conserve probability.
      CHECK_THAT(dominating_return_probability(n, t) + (nn - 1.0) * dominating_cross_probability(n, t),
                 WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("simulated dominating walks match the closed form", "[walk][dominating]") {
  std::uint64_t seed = 0;
  while (dominating_vertices(threshold_graph(9, 0.5, seed)).empty()) ++seed;
  for (const Graph& g : {star_graph(9), complete_graph(9), join(complete_graph(2), path_graph(7)),
                         threshold_graph(9, 0.5, seed)}) {
    const auto split = dominating_split(g);
    REQUIRE(split);
    const FidWalk walk(g, *split);
    const Vertex x = split->block(0).front();
    for (double t : default_time_grid()) {
      const ProbabilityReport r = walk.probability(x, x, t);
      CHECK_THAT(r.probability, WithinAbs(dominating_return_probability(9, t), 1e-10));
      for (Vertex y = 0; y < 9; ++y)
        if (y != x)
          CHECK_THAT(walk.probability(x, y, t).probability,
                     WithinAbs(dominating_cross_probability(9, t), 1e-10));
    }
  }
}

TEST_CASE("star centre return probability at n = 100", "[walk][dominating]") {
  const Graph g = star_graph(100);
  const FidWalk walk(g, *dominating_split(g));
  for (double t : default_time_grid())
    CHECK_THAT(walk.probability(0, 0, t).probability,
               WithinAbs(1.0 - 0.02 * 0.99 * (1.0 - std::cos(100.0 * t)), 1e-10));
}

TEST_CASE("direct walk matches a series matrix exponential", "[walk][oracle]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto comp = testing::random_composition(seed, 18);
    const Graph& g = comp.graph;
    const DirectWalk direct(g);
    for (double t : kTimes) {
      const auto u = testing::expm_series(laplacian(g), t);
      for (Vertex x = 0; x < g.order(); ++x)
        for (Vertex y = 0; y < g.order(); ++y)
          CHECK(std::abs(direct.amplitude(x, y, t) - u[x][y]) <= 1e-10);
    }
  }
}

TEST_CASE("decomposition route matches the direct route", "[walk][oracle]") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto comp = testing::random_composition(seed, 30);
    const Graph& g = comp.graph;
    const DirectWalk direct(g);
    for (const FidPartition& p : partitions_for(comp)) {
      const FidWalk fid(g, p);
      for (double t : kTimes)
        for (Vertex x = 0; x < g.order(); ++x)
          for (Vertex y = 0; y < g.order(); ++y) {
            const double expected = direct.probability(x, y, t);
            const ProbabilityReport r = fid.probability(x, y, t);
            CHECK(std::abs(r.probability - expected) <= kEquivalenceTolerance);
            CHECK(std::abs(fid.amplitude(x, y, t) - direct.amplitude(x, y, t)) <= kEquivalenceTolerance);
            CHECK_THAT(r.probability, WithinAbs(std::norm(fid.amplitude(x, y, t)), 1e-12));
          }
    }
  }
}

TEST_CASE("modulus form terms equal the explicit pairwise sums", "[walk][terms]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto comp = testing::random_composition(seed, 30);
    const Graph& g = comp.graph;
    for (const FidPartition& p : partitions_for(comp)) {
      const FidWalk fid(g, p);
      const ReducedSpectrum& r = fid.reduced();
      std::vector<std::vector<double>> alpha(r.k(), std::vector<double>(r.k()));
      for (std::size_t j = 0; j < r.k(); ++j)
        for (std::size_t i = 0; i < r.k(); ++i) alpha[j][i] = 3.0 * r.alpha(j, i);
      std::vector<std::size_t> sizes(p.block_count());
      for (std::size_t i = 0; i < p.block_count(); ++i) sizes[i] = p.block_size(i);

      for (double t : kTimes)
        for (Vertex x = 0; x < g.order(); x += 3)
          for (Vertex y = 0; y < g.order(); y += 2) {
            const ProbabilityReport report = fid.probability(x, y, t);
            const std::size_t i = p.block_of(x);
            const std::size_t i2 = p.block_of(y);
            if (i != i2) {
              REQUIRE(report.cross_term);
              CHECK_FALSE(report.terms);
              CHECK_THAT(*report.cross_term,
                         WithinAbs(testing::explicit_cross_term(i, i2, r.eigenvalues, alpha, sizes, t), 1e-11));
              continue;
            }
            REQUIRE(report.terms);
            const auto e = testing::explicit_same_block_terms(
                fid.block_spectrum(i), p.local_index(x), p.local_index(y),
                static_cast<double>(p.d_tilde(i)), r.eigenvalues, alpha, sizes, i, t);
            CHECK_THAT(report.terms->subgraph, WithinAbs(e.subgraph, 1e-11));
            CHECK_THAT(report.terms->tilde, WithinAbs(e.tilde, 1e-11));
            CHECK(report.terms->correction_const == e.correction_const);
            CHECK_THAT(report.terms->correction_cos, WithinAbs(e.correction_cos, 1e-11));
            CHECK_THAT(report.terms->correction_cross, WithinAbs(e.correction_cross, 1e-11));
            CHECK_THAT(report.terms->total(), WithinAbs(report.probability, kExactFormulaTolerance));
          }
    }
  }
}

TEST_CASE("terms at t = 0", "[walk][terms]") {
  const Graph g = join(complete_graph(3), path_graph(4));
  const FidWalk fid(g, *dominating_split(g));
  for (Vertex x = 0; x < 7; ++x)
    for (Vertex y = 0; y < 7; ++y) {
      const ProbabilityReport r = fid.probability(x, y, 0.0);
      CHECK_THAT(r.probability, WithinAbs(x == y ? 1.0 : 0.0, 1e-12));
      if (r.terms) {
        const double m = static_cast<double>(fid.partition().block_size(fid.partition().block_of(x)));
        const double delta = x == y ? 1.0 : 0.0;
        CHECK_THAT(r.terms->subgraph, WithinAbs(delta, 1e-12));
        CHECK_THAT(r.terms->correction_cos, WithinAbs(-2.0 / m * (delta - 1.0 / m), 1e-12));
      }
    }
}

TEST_CASE("unitarity and symmetry", "[walk]") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto comp = testing::random_composition(seed, 30);
    const Graph& g = comp.graph;
    const FidWalk fid(g, twin_coarsen(g));
    const DirectWalk direct(g);
    for (double t : kTimes)
      for (Vertex x = 0; x < g.order(); ++x) {
        double total = 0.0;
        double total_direct = 0.0;
        const auto row = direct.amplitudes_from(x, t);
        for (Vertex y = 0; y < g.order(); ++y) {
          total += fid.probability(x, y, t).probability;
          total_direct += std::norm(row[y]);
          CHECK_THAT(fid.probability(x, y, t).probability,
                     WithinAbs(fid.probability(y, x, t).probability, 1e-12));
          CHECK(std::abs(row[y] - direct.amplitude(x, y, t)) <= 1e-13);
        }
        CHECK_THAT(total, WithinAbs(1.0, kEquivalenceTolerance));
        CHECK_THAT(total_direct, WithinAbs(1.0, kEquivalenceTolerance));
      }
  }
}

TEST_CASE("integer spectra give 2 pi periodic probabilities", "[walk]") {
  for (const Graph& g : {complete_graph(6), star_graph(7), join(edgeless_graph(3), complete_graph(2))}) {
    const DirectWalk direct(g);
    for (double t : {0.2, 1.1, 3.0})
      for (Vertex y = 0; y < g.order(); ++y)
        CHECK_THAT(direct.probability(0, y, t + 2 * kPi), WithinAbs(direct.probability(0, y, t), 1e-11));
  }
}

TEST_CASE("probabilities do not depend on the decomposition", "[walk]") {
  const auto comp = testing::random_composition(123, 40);
  const Graph& g = comp.graph;
  const auto parts = partitions_for(comp);
  std::vector<FidWalk> walks;
  for (const auto& p : parts) walks.emplace_back(g, p);
  for (double t : kTimes)
    for (Vertex x = 0; x < g.order(); x += 5)
      for (Vertex y = 0; y < g.order(); ++y)
        for (std::size_t w = 1; w < walks.size(); ++w)
          CHECK_THAT(walks[w].probability(x, y, t).probability,
                     WithinAbs(walks[0].probability(x, y, t).probability, 1e-10));
}

TEST_CASE("return gap under the block-size bound", "[walk][gap]") {
  const Graph g = star_graph(9);
  const GapReport trivial = theorem1_gap(g, trivial_partition(g), 0, 3, 1.7);
  CHECK_THAT(trivial.gap, WithinAbs(0.0, 1e-13));
  CHECK(trivial.bound == 4.0 / 9.0);

  const FidPartition split = *dominating_split(g);
  for (double t : default_time_grid()) {
    const GapReport leaf = theorem1_gap(g, split, 1, 4, t);
    CHECK(leaf.bound == 0.5);
    CHECK(leaf.gap <= leaf.bound + 1e-9);
  }

  const Graph k = complete_graph(10);
  const FidPartition whole = *dominating_split(k);
  for (double t : default_time_grid()) {
    const GapReport r = theorem1_gap(k, whole, 0, 0, t);
    CHECK(r.gap <= 4.0 / 10.0 + 1e-9);
  }
}

TEST_CASE("return gap on random compositions", "[walk][gap]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto comp = testing::random_composition(seed, 30);
    const FidPartition p = require_fid(comp.graph, comp.pieces);
    for (Vertex x = 0; x < comp.graph.order(); ++x)
      for (double t : kTimes) {
        const GapReport r = theorem1_gap(comp.graph, p, p.block_of(x), x, t);
        CHECK(r.gap <= r.bound + 1e-9);
      }
  }
}

TEST_CASE("walk argument errors", "[walk][errors]") {
  const Graph g = path_graph(4);
  CHECK_THROWS_AS(amplitude_direct(g, 0, 4, 1.0), InputError);
  CHECK_THROWS_AS(probability_fid_terms(g, singleton_partition(g), 5, 0, 1.0), InputError);
  CHECK_THROWS_AS(theorem1_gap(g, singleton_partition(g), 0, 2, 1.0), InputError);
  CHECK_THROWS_AS(FidWalk(g, singleton_partition(path_graph(5))), InputError);
  CHECK_THROWS_AS(FidWalk(g, twin_coarsen(star_graph(4))), InputError);
}

TEST_CASE("time grids", "[walk]") {
  const auto grid = default_time_grid();
  REQUIRE(grid.size() == 64);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 2 * kPi);
  CHECK(time_grid(1.0, 2.0, 1) == std::vector<double>{1.0});
  CHECK(time_grid(0.0, 1.0, 3) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(time_grid(0.0, 1.0, 0), InputError);
  CHECK_THROWS_AS(time_grid(2.0, 1.0, 4), InputError);
}
