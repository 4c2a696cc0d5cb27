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

// Fully interconnected graph decompositions.
//
// A decomposition is an ordered partition of V into blocks such that every
// pair of distinct blocks is either completely joined or completely
// non-adjacent. The Laplacian then splits as
//
//   L = diag(L_1, ..., L_k) + Ltilde
//
// where L_i is the Laplacian of the subgraph induced by block i and Ltilde
// carries d~_i on the diagonal of block i and -1 between joined blocks.

#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctqw/graph.hpp"
#include "ctqw/graph_io.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

using Block = std::vector<Vertex>;

class FidPartition;
struct FidViolation;
using FidResult = std::variant<FidPartition, FidViolation>;

/// A verified decomposition. Only verify_fid (and the constructors built on
/// it) can produce one, so every instance satisfies the block conditions.
class FidPartition {
 public:
  std::size_t order() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t i) const noexcept { return blocks_[i]; }
  std::size_t block_size(std::size_t i) const noexcept { return blocks_[i].size(); }

  std::size_t block_of(Vertex v) const noexcept { return block_of_[v]; }
  /// Position of v inside its (ascending) block.
  std::size_t local_index(Vertex v) const noexcept { return local_[v]; }

  /// True iff blocks i and j (i != j) are fully interconnected.
  bool interconnected(std::size_t i, std::size_t j) const noexcept {
    return quotient_.adjacent(i, j);
  }

  /// Block-level adjacency as a graph on k vertices.
  const Graph& quotient() const noexcept { return quotient_; }

  /// Number of vertices in blocks fully interconnected with block i.
  std::size_t d_tilde(std::size_t i) const noexcept { return d_tilde_[i]; }

 private:
  friend FidResult verify_fid(const Graph&, std::vector<Block>);

  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<std::size_t> local_;
  Graph quotient_;
  std::vector<std::size_t> d_tilde_;
};

enum class ViolationKind { overlap, uncovered, mixed_cross_edges };

/// Why a proposed block list is not a decomposition, with a witness.
///
/// overlap: `vertex` sits in blocks `first_block` and `second_block`.
/// uncovered: `vertex` is in no block.
/// mixed_cross_edges: `present` is an edge and `absent` a non-edge, both
/// running between blocks `first_block` and `second_block`.
struct FidViolation {
  ViolationKind kind = ViolationKind::uncovered;
  Vertex vertex = 0;
  std::size_t first_block = 0;
  std::size_t second_block = 0;
  Edge present{};
  Edge absent{};

  std::string describe() const {
    auto label = [](Vertex v) { return std::to_string(v + 1); };
    auto pair = [&](const Edge& e) { return "(" + label(e.first) + "," + label(e.second) + ")"; };
    switch (kind) {
      case ViolationKind::overlap:
        return "overlap: vertex " + label(vertex) + " is in blocks " + label(first_block) +
               " and " + label(second_block);
      case ViolationKind::uncovered:
        return "uncovered: vertex " + label(vertex) + " is in no block";
      case ViolationKind::mixed_cross_edges:
        return "mixed_cross_edges: blocks " + label(first_block) + " and " + label(second_block) +
               " have edge " + pair(present) + " but non-edge " + pair(absent);
    }
    return "unknown violation";
  }
};

/// Checks the decomposition conditions and, on success, fills in the block
/// adjacency and d~. Vertices inside each block are sorted; block order is
/// kept. Runs in O(n^2 / 64 + n k) word operations.
inline FidResult verify_fid(const Graph& g, std::vector<Block> blocks) {
  const std::size_t n = g.order();
  constexpr std::size_t kUnowned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kUnowned);

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& b = blocks[i];
    if (b.empty()) throw InputError("block " + std::to_string(i + 1) + " is empty");
    for (Vertex v : b)
      if (v >= n)
        throw InputError("block " + std::to_string(i + 1) + " names vertex " +
                         std::to_string(v + 1) + " outside 1.." + std::to_string(n));
    std::sort(b.begin(), b.end());
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (Vertex v : blocks[i]) {
      if (owner[v] != kUnowned) {
        FidViolation bad;
        bad.kind = ViolationKind::overlap;
        bad.vertex = v;
        bad.first_block = owner[v];
        bad.second_block = i;
        return bad;
      }
      owner[v] = i;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (owner[v] == kUnowned) {
      FidViolation bad;
      bad.kind = ViolationKind::uncovered;
      bad.vertex = v;
      return bad;
    }
  }

  const std::size_t k = blocks.size();
  auto mixed = [&](std::size_t i, std::size_t j, Edge present, Edge absent) {
    FidViolation bad;
    bad.kind = ViolationKind::mixed_cross_edges;
    bad.first_block = std::min(i, j);
    bad.second_block = std::max(i, j);
    bad.present = present;
    bad.absent = absent;
    return bad;
  };

  // Every vertex must see exactly the same vertices outside its block as the
  // block's representative (its smallest vertex).
  for (std::size_t i = 0; i < k; ++i) {
    const auto& b = blocks[i];
    if (b.size() < 2) continue;
    const VertexMask inside = make_mask(n, b);
    const Vertex rep = b.front();
    const auto rep_row = g.row(rep);
    for (std::size_t pos = 1; pos < b.size(); ++pos) {
      const Vertex u = b[pos];
      const auto row = g.row(u);
      for (std::size_t w = 0; w < row.size(); ++w) {
        const std::uint64_t diff = (row[w] ^ rep_row[w]) & ~inside[w];
        if (diff == 0) continue;
        const Vertex x = w * 64 + static_cast<std::size_t>(std::countr_zero(diff));
        const bool u_sees = g.adjacent(u, x);
        const Edge with_u{std::min(u, x), std::max(u, x)};
        const Edge with_rep{std::min(rep, x), std::max(rep, x)};
        return u_sees ? mixed(i, owner[x], with_u, with_rep) : mixed(i, owner[x], with_rep, with_u);
      }
    }
  }

  // Representatives must see each other block entirely or not at all.
  GraphBuilder quotient(k);
  std::vector<std::size_t> seen(k, 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex rep = blocks[i].front();
    touched.clear();
    for_each_bit(g.row(rep), [&](Vertex v) {
      const std::size_t j = owner[v];
      if (j == i) return;
      if (seen[j]++ == 0) touched.push_back(j);
    });
    for (std::size_t j : touched) {
      if (seen[j] != blocks[j].size()) {
        Vertex hit = blocks[j].front();
        Vertex miss = blocks[j].front();
        for (Vertex v : blocks[j]) {
          if (g.adjacent(rep, v)) hit = v;
          else miss = v;
        }
        return mixed(i, j, {std::min(rep, hit), std::max(rep, hit)},
                     {std::min(rep, miss), std::max(rep, miss)});
      }
      if (i < j) quotient.add_edge(i, j);
    }
    for (std::size_t j : touched) seen[j] = 0;
  }

  FidPartition p;
  p.quotient_ = std::move(quotient).build();
  p.block_of_ = std::move(owner);
  p.local_.assign(n, 0);
  for (const auto& b : blocks)
    for (std::size_t pos = 0; pos < b.size(); ++pos) p.local_[b[pos]] = pos;
  p.d_tilde_.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for_each_bit(p.quotient_.row(i), [&](Vertex j) { p.d_tilde_[i] += blocks[j].size(); });
  p.blocks_ = std::move(blocks);
  return p;
}

/// verify_fid for block lists that are valid by construction.
inline FidPartition require_fid(const Graph& g, std::vector<Block> blocks) {
  auto result = verify_fid(g, std::move(blocks));
  if (auto* bad = std::get_if<FidViolation>(&result))
    throw std::logic_error("internal decomposition is invalid: " + bad->describe());
  return std::get<FidPartition>(std::move(result));
}

inline FidPartition trivial_partition(const Graph& g) {
  Block all(g.order());
  std::iota(all.begin(), all.end(), Vertex{0});
  return require_fid(g, {std::move(all)});
}

inline FidPartition singleton_partition(const Graph& g) {
  std::vector<Block> blocks;
  blocks.reserve(g.order());
  for (Vertex v = 0; v < g.order(); ++v) blocks.push_back({v});
  return require_fid(g, std::move(blocks));
}

/// Twin classes of g: u and v share a class iff N[u] = N[v] (true twins) or
/// N(u) = N(v) (false twins). Both relations are equivalences and no vertex
/// has twins of both kinds, so merging twin pairs reaches its fixed point at
/// these classes. Classes are sorted by their smallest vertex.
inline std::vector<Block> twin_classes(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  // Group by exact open and closed neighborhoods; vertices are visited in
  // ascending order so the first vertex of a group is its smallest.
  std::map<VertexMask, Vertex> open_seen;
  std::map<VertexMask, Vertex> closed_seen;
  for (Vertex v = 0; v < n; ++v) {
    VertexMask open(g.row(v).begin(), g.row(v).end());
    VertexMask closed = open;
    closed[v / 64] |= std::uint64_t{1} << (v % 64);
    if (auto [it, inserted] = open_seen.emplace(std::move(open), v); !inserted) unite(it->second, v);
    if (auto [it, inserted] = closed_seen.emplace(std::move(closed), v); !inserted)
      unite(it->second, v);
  }

  std::vector<Block> classes;
  std::vector<std::size_t> index_of(n, static_cast<std::size_t>(-1));
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t root = find(v);
    if (index_of[root] == static_cast<std::size_t>(-1)) {
      index_of[root] = classes.size();
      classes.emplace_back();
    }
    classes[index_of[root]].push_back(v);
  }
  return classes;
}

inline FidPartition twin_coarsen(const Graph& g) { return require_fid(g, twin_classes(g)); }

/// Vertices adjacent to every other vertex.
inline std::vector<Vertex> dominating_vertices(const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.degree(v) + 1 == g.order()) out.push_back(v);
  return out;
}

/// [dominating vertices, the rest], or a single block when every vertex is
/// dominating; nullopt when g has no dominating vertex.
inline std::optional<FidPartition> dominating_split(const Graph& g) {
  Block dominating = dominating_vertices(g);
  if (dominating.empty()) return std::nullopt;
  if (dominating.size() == g.order()) return require_fid(g, {std::move(dominating)});
  Block rest;
  rest.reserve(g.order() - dominating.size());
  for (Vertex v = 0, d = 0; v < g.order(); ++v) {
    if (d < dominating.size() && dominating[d] == v) ++d;
    else rest.push_back(v);
  }
  return require_fid(g, {std::move(dominating), std::move(rest)});
}

namespace detail {

inline Block checked_clique(const Graph& g, std::span<const Vertex> clique) {
  Block c(clique.begin(), clique.end());
  std::sort(c.begin(), c.end());
  if (c.empty()) throw InputError("clique is empty");
  if (std::adjacent_find(c.begin(), c.end()) != c.end())
    throw InputError("clique lists a vertex twice");
  if (c.back() >= g.order())
    throw InputError("clique vertex " + std::to_string(c.back() + 1) + " out of range");
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b)
      if (!g.adjacent(c[a], c[b]))
        throw InputError("clique is not complete: vertices " + std::to_string(c[a] + 1) + " and " +
                         std::to_string(c[b] + 1) + " are not adjacent");
  return c;
}

}  // namespace detail

/// Clique members with at least one neighbour outside the clique.
inline std::vector<Vertex> gateway_vertices(const Graph& g, std::span<const Vertex> clique) {
  const Block c = detail::checked_clique(g, clique);
  const VertexMask inside = make_mask(g.order(), c);
  std::vector<Vertex> gateways;
  for (Vertex v : c) {
    const auto row = g.row(v);
    for (std::size_t w = 0; w < row.size(); ++w) {
      if ((row[w] & ~inside[w]) != 0) {
        gateways.push_back(v);
        break;
      }
    }
  }
  return gateways;
}

/// [clique minus gateways, {gateway_1}, ..., {gateway_g}, outside].
///
/// Empty blocks are dropped. When the outside vertices do not form a valid
/// block they are split into the twin classes of g restricted to them; twin
/// classes are modules, so the result is always a decomposition.
inline FidPartition clique_gateway_split(const Graph& g, std::span<const Vertex> clique) {
  const Block c = detail::checked_clique(g, clique);
  const std::vector<Vertex> gateways = gateway_vertices(g, c);

  std::vector<Block> blocks;
  Block core;
  std::set_difference(c.begin(), c.end(), gateways.begin(), gateways.end(),
                      std::back_inserter(core));
  if (!core.empty()) blocks.push_back(std::move(core));
  for (Vertex v : gateways) blocks.push_back({v});

  std::vector<bool> in_clique(g.order(), false);
  for (Vertex v : c) in_clique[v] = true;
  Block outside;
  for (Vertex v = 0; v < g.order(); ++v)
    if (!in_clique[v]) outside.push_back(v);
  if (outside.empty()) return require_fid(g, std::move(blocks));

  auto attempt = blocks;
  attempt.push_back(outside);
  if (auto result = verify_fid(g, std::move(attempt)); std::holds_alternative<FidPartition>(result))
    return std::get<FidPartition>(std::move(result));

  for (auto& twins : twin_classes(g)) {
    Block part;
    for (Vertex v : twins)
      if (!in_clique[v]) part.push_back(v);
    if (!part.empty()) blocks.push_back(std::move(part));
  }
  return require_fid(g, std::move(blocks));
}

/// Ltilde in the original vertex order: d~_i on the diagonal of block i,
/// -1 between vertices of joined blocks, 0 elsewhere.
inline SymmetricMatrix tilde_matrix(const FidPartition& p) {
  const std::size_t n = p.order();
  SymmetricMatrix m(n);
  for (Vertex u = 0; u < n; ++u) {
    m.set(u, u, static_cast<double>(p.d_tilde(p.block_of(u))));
    for (Vertex v = u + 1; v < n; ++v) {
      const auto bu = p.block_of(u);
      const auto bv = p.block_of(v);
      if (bu != bv && p.interconnected(bu, bv)) m.set(u, v, -1.0);
    }
  }
  return m;
}

/// diag(L_1, ..., L_k) in the original vertex order.
inline SymmetricMatrix block_diagonal_laplacian(const Graph& g, const FidPartition& p) {
  const std::size_t n = g.order();
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    const auto& b = p.block(i);
    for (std::size_t a = 0; a < b.size(); ++a) {
      std::size_t internal_degree = 0;
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (a != c && g.adjacent(b[a], b[c])) {
          ++internal_degree;
          m.set(b[a], b[c], -1.0);
        }
      }
      m.set(b[a], b[a], static_cast<double>(internal_degree));
    }
  }
  return m;
}

/// The k x k matrix Lbar: d~_i on the diagonal, -n_j where blocks i and j are
/// joined. Rows sum to zero.
inline Matrix reduced_matrix(const FidPartition& p) {
  const std::size_t k = p.block_count();
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    m(i, i) = static_cast<double>(p.d_tilde(i));
    for_each_bit(p.quotient().row(i),
                 [&](Vertex j) { m(i, j) = -static_cast<double>(p.block_size(j)); });
  }
  return m;
}

// Partition text format: one block per line, 1-based labels separated by
// spaces. Blank lines and '#' lines are skipped.

inline std::vector<Block> parse_blocks(std::string_view text, std::size_t n) {
  std::vector<Block> blocks;
  std::vector<std::size_t> tokens;
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!detail::parse_unsigned_tokens(line, tokens))
      throw ParseError(line_no, "expected vertex labels, got '" + std::string(line) + "'");
    Block b;
    for (std::size_t label : tokens) {
      if (label < 1 || label > n)
        throw ParseError(line_no, "vertex label " + std::to_string(label) + " out of range 1.." +
                                      std::to_string(n));
      b.push_back(label - 1);
    }
    blocks.push_back(std::move(b));
  });
  return blocks;
}

inline std::string serialize_blocks(const std::vector<Block>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    for (std::size_t pos = 0; pos < b.size(); ++pos) {
      if (pos) out += ' ';
      out += std::to_string(b[pos] + 1);
    }
    out += '\n';
  }
  return out;
}

}  // namespace ctqw
