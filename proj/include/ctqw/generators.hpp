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

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ctqw/graph.hpp"

namespace ctqw {

/// Uniform doubles in [0, 1) from a std::mt19937_64 stream.
///
/// The top 53 bits of each 64-bit draw are scaled by 2^-53, so a given seed
/// produces the same sequence on every conforming standard library.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return next() < p; }

 private:
  std::mt19937_64 engine_;
};

inline Graph edgeless_graph(std::size_t n) { return GraphBuilder(n).build(); }

inline Graph complete_graph(std::size_t n) {
  GraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) b.add_edge(u, v);
  return std::move(b).build();
}

/// Vertex 0 is the center.
inline Graph star_graph(std::size_t n) {
  GraphBuilder b(n);
  for (Vertex v = 1; v < n; ++v) b.add_edge(0, v);
  return std::move(b).build();
}

inline Graph path_graph(std::size_t n) {
  GraphBuilder b(n);
  for (Vertex v = 1; v < n; ++v) b.add_edge(v - 1, v);
  return std::move(b).build();
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least 3 vertices, got " + std::to_string(n));
  GraphBuilder b(n);
  for (Vertex v = 0; v < n; ++v) b.add_edge(v, (v + 1) % n);
  return std::move(b).build();
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError("edge probability must lie in [0, 1], got " + std::to_string(p));
}

/// G(n, p): pairs (u, v), u < v, are visited in lexicographic order, one draw each.
inline Graph erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  UniformSource rng(seed);
  GraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) b.add_edge(u, v);
  return std::move(b).build();
}

/// Threshold network model: vertex s (s = 0..n-1) arrives either isolated
/// (probability 1 - p) or joined to every earlier vertex (probability p).
inline Graph threshold_graph(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  UniformSource rng(seed);
  GraphBuilder b(n);
  for (Vertex s = 0; s < n; ++s)
    if (rng.bernoulli(p))
      for (Vertex u = 0; u < s; ++u) b.add_edge(u, s);
  return std::move(b).build();
}

enum class Family { complete, star, path, cycle, erdos_renyi, threshold, edgeless };

inline constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::complete, "complete"},
    {Family::star, "star"},
    {Family::path, "path"},
    {Family::cycle, "cycle"},
    {Family::erdos_renyi, "erdos_renyi"},
    {Family::threshold, "threshold"},
    {Family::edgeless, "edgeless"},
}};

inline std::string_view family_name(Family f) {
  for (const auto& [family, name] : kFamilyNames)
    if (family == f) return name;
  return "unknown";
}

inline std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, known] : kFamilyNames)
    if (known == name) return family;
  if (name == "threshold_model") return Family::threshold;
  return std::nullopt;
}

struct FamilySpec {
  Family family = Family::complete;
  std::size_t n = 1;
  double p = 0.0;  // erdos_renyi and threshold only
  std::uint64_t seed = 0;
};

inline Graph generate(const FamilySpec& spec) {
  if (spec.n < 1) throw InputError("graph family needs n >= 1");
  switch (spec.family) {
    case Family::complete: return complete_graph(spec.n);
    case Family::star: return star_graph(spec.n);
    case Family::path: return path_graph(spec.n);
    case Family::cycle: return cycle_graph(spec.n);
    case Family::erdos_renyi: return erdos_renyi_graph(spec.n, spec.p, spec.seed);
    case Family::threshold: return threshold_graph(spec.n, spec.p, spec.seed);
    case Family::edgeless: return edgeless_graph(spec.n);
  }
  throw InputError("unknown graph family");
}

}  // namespace ctqw
