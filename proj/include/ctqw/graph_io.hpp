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

// Edge-list text format:
//
//   n
//   u v
//   u v
//   ...
//
// First content line is the vertex count; each following content line is one
// edge between 1-based labels. Blank lines and lines starting with '#' are
// skipped. The canonical form written by serialize_edge_list lists every edge
// once with u < v, sorted, LF-terminated.

#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ctqw/graph.hpp"

namespace ctqw {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Splits on runs of spaces/tabs and parses every token as an unsigned integer.
inline bool parse_unsigned_tokens(std::string_view line, std::vector<std::size_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, value);
    if (ec != std::errc{} || ptr != line.data() + end) return false;
    out.push_back(value);
    pos = end;
  }
  return true;
}

/// Calls f(line_number, content) for every non-blank, non-comment line.
template <class F>
void for_each_content_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') f(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace detail

inline Graph parse_edge_list(std::string_view text) {
  bool have_header = false;
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> tokens;
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!detail::parse_unsigned_tokens(line, tokens))
      throw ParseError(line_no, "expected non-negative integers, got '" + std::string(line) + "'");
    if (!have_header) {
      if (tokens.size() != 1) throw ParseError(line_no, "first line must hold the vertex count");
      n = tokens[0];
      have_header = true;
      return;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "edge line must hold exactly two labels");
    const auto u = tokens[0];
    const auto v = tokens[1];
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(line_no, "vertex label out of range 1.." + std::to_string(n));
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    edges.emplace_back(u - 1, v - 1);
  });
  if (!have_header) throw ParseError(1, "missing vertex count");
  return build_graph(n, edges);
}

inline std::string serialize_edge_list(const Graph& g) {
  std::string out = std::to_string(g.order()) + "\n";
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u + 1);
    out += ' ';
    out += std::to_string(v + 1);
    out += '\n';
  }
  return out;
}

}  // namespace ctqw
