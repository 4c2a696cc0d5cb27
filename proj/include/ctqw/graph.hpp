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

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

/// Vertex index. The C++ API is 0-based; every text format and CLI output
/// uses 1-based labels (label = index + 1).
using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Bit set of vertices, one bit per vertex, packed into 64-bit words.
using VertexMask = std::vector<std::uint64_t>;

inline std::size_t mask_words(std::size_t n) noexcept { return (n + 63) / 64; }

inline VertexMask make_mask(std::size_t n, std::span<const Vertex> vertices) {
  VertexMask mask(mask_words(n), 0);
  for (Vertex v : vertices) mask[v / 64] |= std::uint64_t{1} << (v % 64);
  return mask;
}

/// Calls f(v) for every set bit v, in ascending order.
template <class F>
void for_each_bit(std::span<const std::uint64_t> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      f(w * 64 + static_cast<std::size_t>(b));
      bits &= bits - 1;
    }
  }
}

inline std::size_t popcount_and(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b) noexcept {
  std::size_t count = 0;
  for (std::size_t w = 0; w < a.size(); ++w) count += std::popcount(a[w] & b[w]);
  return count;
}

class GraphBuilder;

/// Simple undirected graph on vertices 0..n-1 with dense bit-row adjacency.
///
/// Immutable once built; construct through GraphBuilder, build_graph or one of
/// the generators.
class Graph {
 public:
  Graph() = default;

  std::size_t order() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_; }

  bool adjacent(Vertex u, Vertex v) const noexcept {
    return ((rows_[u * words_ + v / 64] >> (v % 64)) & 1U) != 0;
  }

  std::size_t degree(Vertex v) const noexcept { return degrees_[v]; }
  const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }

  /// Adjacency row of v as a vertex mask.
  std::span<const std::uint64_t> row(Vertex v) const noexcept {
    return {rows_.data() + v * words_, words_};
  }

  std::vector<Vertex> neighbors(Vertex v) const {
    std::vector<Vertex> out;
    out.reserve(degrees_[v]);
    for_each_bit(row(v), [&](Vertex w) { out.push_back(w); });
    return out;
  }

  /// All edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < n_; ++u)
      for_each_bit(row(u), [&](Vertex v) {
        if (u < v) out.emplace_back(u, v);
      });
    return out;
  }

  /// Subgraph induced by `vertices`; vertex i of the result is vertices[i].
  Graph induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::size_t> degrees_;
};

/// Accumulates edges and produces an immutable Graph. Duplicate edges collapse.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) {
    g_.n_ = n;
    g_.words_ = mask_words(n);
    g_.rows_.assign(n * g_.words_, 0);
  }

  std::size_t order() const noexcept { return g_.n_; }

  GraphBuilder& add_edge(Vertex u, Vertex v) {
    if (u >= g_.n_ || v >= g_.n_)
      throw InputError("edge (" + std::to_string(u + 1) + ", " + std::to_string(v + 1) +
                       ") has a vertex outside 1.." + std::to_string(g_.n_));
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u + 1));
    set(u, v);
    set(v, u);
    return *this;
  }

  Graph build() && {
    g_.degrees_.assign(g_.n_, 0);
    std::size_t total = 0;
    for (Vertex v = 0; v < g_.n_; ++v) {
      std::size_t d = 0;
      for (std::uint64_t word : g_.row(v)) d += std::popcount(word);
      g_.degrees_[v] = d;
      total += d;
    }
    g_.edges_ = total / 2;
    return std::move(g_);
  }

 private:
  void set(Vertex u, Vertex v) noexcept {
    g_.rows_[u * g_.words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }

  Graph g_;
};

inline Graph Graph::induced(std::span<const Vertex> vertices) const {
  GraphBuilder builder(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (adjacent(vertices[i], vertices[j])) builder.add_edge(i, j);
  return std::move(builder).build();
}

/// Graph on n vertices with exactly the given (0-based) edges, symmetrized.
inline Graph build_graph(std::size_t n, std::span<const Edge> edges) {
  GraphBuilder builder(n);
  for (const auto& [u, v] : edges) builder.add_edge(u, v);
  return std::move(builder).build();
}

inline Graph build_graph(std::size_t n, std::initializer_list<Edge> edges) {
  return build_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

/// L = D - A.
inline SymmetricMatrix laplacian(const Graph& g) {
  SymmetricMatrix lap(g.order());
  for (Vertex u = 0; u < g.order(); ++u) {
    lap.set(u, u, static_cast<double>(g.degree(u)));
    for_each_bit(g.row(u), [&](Vertex v) {
      if (u < v) lap.set(u, v, -1.0);
    });
  }
  return lap;
}

/// Union of g1 and g2 (g2 relabelled after g1) plus every edge between them.
inline Graph join(const Graph& g1, const Graph& g2) {
  const std::size_t n1 = g1.order();
  const std::size_t n2 = g2.order();
  GraphBuilder builder(n1 + n2);
  for (const auto& [u, v] : g1.edges()) builder.add_edge(u, v);
  for (const auto& [u, v] : g2.edges()) builder.add_edge(n1 + u, n1 + v);
  for (Vertex u = 0; u < n1; ++u)
    for (Vertex v = 0; v < n2; ++v) builder.add_edge(u, n1 + v);
  return std::move(builder).build();
}

inline Graph disjoint_union(const Graph& g1, const Graph& g2) {
  const std::size_t n1 = g1.order();
  GraphBuilder builder(n1 + g2.order());
  for (const auto& [u, v] : g1.edges()) builder.add_edge(u, v);
  for (const auto& [u, v] : g2.edges()) builder.add_edge(n1 + u, n1 + v);
  return std::move(builder).build();
}

/// Number of connected components of the subgraph induced by `vertices`.
inline std::size_t component_count(const Graph& g, std::span<const Vertex> vertices) {
  const VertexMask inside = make_mask(g.order(), vertices);
  VertexMask seen(inside.size(), 0);
  std::vector<Vertex> stack;
  std::size_t components = 0;
  for (Vertex s : vertices) {
    if ((seen[s / 64] >> (s % 64)) & 1U) continue;
    ++components;
    seen[s / 64] |= std::uint64_t{1} << (s % 64);
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      const auto r = g.row(u);
      for (std::size_t w = 0; w < r.size(); ++w) {
        std::uint64_t fresh = r[w] & inside[w] & ~seen[w];
        seen[w] |= fresh;
        while (fresh != 0) {
          stack.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(fresh)));
          fresh &= fresh - 1;
        }
      }
    }
  }
  return components;
}

}  // namespace ctqw
