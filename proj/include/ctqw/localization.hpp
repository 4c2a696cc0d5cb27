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

// Return-probability scans over growing graph families.
//
// Dominating family: a graph with a dominating vertex x. The return
// probability is 1 - (2/n)(1 - 1/n)(1 - cos nt), so 1 - P <= 4/n.
//
// Clique-gateway family: a clique K_c of which n_g members (the gateways)
// have edges into a fixed outer graph. For x a non-gateway clique member,
// the walk on the decomposition block K_{c - n_g} loses at most 4/(c - n_g)
// and the rest of the graph moves P by at most another 4/(c - n_g), so
// 1 - P <= 8/(c - n_g).

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ctqw/decomposition.hpp"
#include "ctqw/generators.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/walk.hpp"

namespace ctqw {

struct ScanRow {
  std::size_t size = 0;        // n for the dominating family, clique size for the clique family
  std::size_t block_size = 0;  // n_d, or clique size minus gateways
  double t = 0.0;
  double return_probability = 0.0;
  double bound = 0.0;
  bool within_bound = false;  // 1 - P <= bound + tol
};

struct DominatingScan {
  FamilySpec generator;  // generator.n is replaced by each scanned size
};

struct CliqueGatewayScan {
  std::size_t gateways = 2;
  Graph outer;
};

using ScanFamily = std::variant<DominatingScan, CliqueGatewayScan>;

/// Clique on vertices 0..clique_size-1 followed by a copy of `outer`. The last
/// `gateways` clique vertices are the gateways; gateway j gets one edge, to
/// outer vertex j mod |outer|.
inline Graph clique_gateway_graph(std::size_t clique_size, std::size_t gateways, const Graph& outer) {
  if (gateways >= clique_size)
    throw InputError("clique of size " + std::to_string(clique_size) + " cannot have " +
                     std::to_string(gateways) + " gateways and a non-gateway start vertex");
  if (gateways > 0 && outer.order() == 0) throw InputError("gateways need a non-empty outer graph");
  GraphBuilder b(clique_size + outer.order());
  for (Vertex u = 0; u < clique_size; ++u)
    for (Vertex v = u + 1; v < clique_size; ++v) b.add_edge(u, v);
  for (const auto& [u, v] : outer.edges()) b.add_edge(clique_size + u, clique_size + v);
  for (std::size_t j = 0; j < gateways; ++j)
    b.add_edge(clique_size - gateways + j, clique_size + j % outer.order());
  return std::move(b).build();
}

namespace detail {

inline void check_ascending(std::span<const std::size_t> sizes) {
  for (std::size_t s = 1; s < sizes.size(); ++s)
    if (sizes[s] <= sizes[s - 1]) throw InputError("scan sizes must be strictly ascending");
}

template <class Emit>
void scan_walk(const FidWalk& walk, Vertex x, std::size_t size, std::size_t block_size, double bound,
               std::span<const double> times, double tol, Emit& emit) {
  for (double t : times) {
    ScanRow row;
    row.size = size;
    row.block_size = block_size;
    row.t = t;
    row.return_probability = walk.probability(x, x, t).probability;
    row.bound = bound;
    row.within_bound = 1.0 - row.return_probability <= bound + tol;
    emit(row);
  }
}

}  // namespace detail

/// Streams one ScanRow per (size, t) in that order to `emit`. Return
/// probabilities go through the decomposition route, which only diagonalizes
/// the block holding the start vertex.
template <class Emit>
void stream_localization_scan(const ScanFamily& family, std::span<const std::size_t> sizes,
                       std::span<const double> times, Emit&& emit,
                       double tol = kEquivalenceTolerance) {
  detail::check_ascending(sizes);
  for (std::size_t size : sizes) {
    if (const auto* dom = std::get_if<DominatingScan>(&family)) {
      FamilySpec spec = dom->generator;
      spec.n = size;
      Graph g = generate(spec);
      auto split = dominating_split(g);
      if (!split)
        throw InputError(std::string(family_name(spec.family)) + " graph with n = " +
                         std::to_string(size) + " has no dominating vertex");
      const Vertex x = split->block(0).front();
      const std::size_t nd = split->block_size(0);
      const FidWalk walk(std::move(g), std::move(*split));
      detail::scan_walk(walk, x, size, nd, 4.0 / static_cast<double>(size), times, tol, emit);
    } else {
      const auto& cg = std::get<CliqueGatewayScan>(family);
      Graph g = clique_gateway_graph(size, cg.gateways, cg.outer);
      std::vector<Vertex> clique(size);
      std::iota(clique.begin(), clique.end(), Vertex{0});
      const auto gateways = gateway_vertices(g, clique);
      FidPartition p = clique_gateway_split(g, clique);
      Vertex x = 0;
      while (std::binary_search(gateways.begin(), gateways.end(), x)) ++x;
      const std::size_t core = size - gateways.size();
      const FidWalk walk(std::move(g), std::move(p));
      detail::scan_walk(walk, x, size, core, 8.0 / static_cast<double>(core), times, tol, emit);
    }
  }
}

inline std::vector<ScanRow> localization_scan(const ScanFamily& family,
                                              std::span<const std::size_t> sizes,
                                              std::span<const double> times,
                                              double tol = kEquivalenceTolerance) {
  std::vector<ScanRow> rows;
  stream_localization_scan(family, sizes, times, [&](const ScanRow& r) { rows.push_back(r); }, tol);
  return rows;
}

}  // namespace ctqw
