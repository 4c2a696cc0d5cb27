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

// Numerical audit of a (graph, decomposition) pair: the Laplacian split, the
// orthonormality and completeness identities of the assembled eigenbasis, and
// the walk-level properties (route agreement, unitarity, symmetry, and the
// 4/n_i bound on the return-probability gap).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "ctqw/decomposition.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectral.hpp"
#include "ctqw/walk.hpp"

namespace ctqw {

struct InvariantTolerances {
  double eigen = kEigenTolerance;
  double identity = kExactFormulaTolerance;    // eigen-identities of the assembled basis
  double equivalence = kEquivalenceTolerance;  // walk-level checks
};

struct InvariantResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string witness;  // location of the worst deviation, 1-based labels
};

namespace detail {

class Audit {
 public:
  Audit(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  template <class Witness>
  void observe(double error, Witness&& witness) {
    if (std::isnan(result_.max_error)) return;
    if (std::isnan(error) || error > result_.max_error) {
      result_.max_error = error;
      result_.witness = witness();
    }
  }

  InvariantResult finish() && {
    result_.passed = result_.max_error <= result_.tolerance;
    return std::move(result_);
  }

 private:
  InvariantResult result_;
};

inline std::string lbl(std::size_t v) { return std::to_string(v + 1); }

inline std::string fmt_t(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

}  // namespace detail

/// Runs every check and returns one result per invariant, in a fixed order.
inline std::vector<InvariantResult> check_invariants(const Graph& g, const FidPartition& p,
                                                     std::span<const double> times,
                                                     const InvariantTolerances& tol = {}) {
  using detail::Audit;
  using detail::fmt_t;
  using detail::lbl;

  const std::size_t n = g.order();
  const std::size_t k = p.block_count();
  std::vector<InvariantResult> out;

  const SymmetricMatrix lap = laplacian(g);
  {
    Audit split("decomposition_identity", 0.0);
    const SymmetricMatrix rebuilt = block_diagonal_laplacian(g, p) + tilde_matrix(p);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u; v < n; ++v)
        split.observe(std::abs(lap(u, v) - rebuilt(u, v)),
                      [&] { return "entry (" + lbl(u) + "," + lbl(v) + ")"; });
    out.push_back(std::move(split).finish());
  }
  {
    Audit rows("reduced_row_sums", 0.0);
    const Matrix lbar = reduced_matrix(p);
    for (std::size_t i = 0; i < k; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += lbar(i, j);
      rows.observe(std::abs(s), [&] { return "block " + lbl(i); });
    }
    out.push_back(std::move(rows).finish());
  }

  const FidWalk walk(g, p, tol.eigen);
  const ReducedSpectrum& red = walk.reduced();

  Audit block_residual("block_eigen_residual", tol.identity);
  Audit block_ortho("block_orthonormality", tol.identity);
  Audit block_complete("block_completeness", tol.identity);
  Audit complete("completeness", tol.identity);
  Audit weight_sum("constant_weight_sum", tol.identity);
  Audit weight_bound("constant_weight_bound", tol.identity);
  Audit full_consistency("full_eigen_consistency", tol.identity);

  for (std::size_t i = 0; i < k; ++i) {
    const BlockSpectrum& bs = walk.block_spectrum(i);
    const Block& b = p.block(i);
    const std::size_t m = b.size();
    const double shift = static_cast<double>(p.d_tilde(i));
    const std::size_t count = bs.nontrivial_count();

    std::vector<std::vector<double>> vecs(count);
    for (std::size_t l = 0; l < count; ++l) vecs[l] = bs.vector(l);

    for (std::size_t l = 0; l < count; ++l) {
      const auto& v = vecs[l];
      const double lambda = bs.eigenvalue(l);
      if (lambda < 0.0)
        block_residual.observe(-lambda, [&] { return "negative eigenvalue, block " + lbl(i); });
      for (std::size_t a = 0; a < m; ++a) {
        double lv = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
          if (a == c) continue;
          if (g.adjacent(b[a], b[c])) lv += v[a] - v[c];
        }
        block_residual.observe(std::abs(lv - lambda * v[a]),
                               [&] { return "block " + lbl(i) + " pair " + lbl(l); });
      }
      double along_one = 0.0;
      for (double x : v) along_one += x;
      block_ortho.observe(std::abs(along_one) / std::sqrt(static_cast<double>(m)),
                          [&] { return "block " + lbl(i) + " vector " + lbl(l) + " vs constant"; });
      for (std::size_t l2 = l; l2 < count; ++l2) {
        double d = 0.0;
        for (std::size_t a = 0; a < m; ++a) d += v[a] * vecs[l2][a];
        block_ortho.observe(std::abs(d - (l == l2 ? 1.0 : 0.0)), [&] {
          return "block " + lbl(i) + " vectors " + lbl(l) + "," + lbl(l2);
        });
      }
      // Padded into R^n the vector is an eigenvector of L with eigenvalue
      // lambda + d~_i.
      for (Vertex u = 0; u < n; ++u) {
        double lw = 0.0;
        for (std::size_t a = 0; a < m; ++a) lw += lap(u, b[a]) * v[a];
        const double expect =
            p.block_of(u) == i ? (lambda + shift) * v[p.local_index(u)] : 0.0;
        full_consistency.observe(std::abs(lw - expect), [&] {
          return "block " + lbl(i) + " pair " + lbl(l) + " row " + lbl(u);
        });
      }
    }

    double alpha_sq = 0.0;
    for (std::size_t j = 0; j < red.k(); ++j) {
      const double a2 = red.alpha(j, i) * red.alpha(j, i);
      alpha_sq += a2;
      weight_bound.observe(std::max(0.0, a2 - 1.0 / static_cast<double>(m)),
                           [&] { return "block " + lbl(i) + " reduced pair " + lbl(j); });
    }
    weight_sum.observe(std::abs(alpha_sq - 1.0 / static_cast<double>(m)),
                       [&] { return "block " + lbl(i); });

    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = x; y < m; ++y) {
        double s = 0.0;
        for (std::size_t l = 0; l < count; ++l) s += vecs[l][x] * vecs[l][y];
        const double delta = x == y ? 1.0 : 0.0;
        block_complete.observe(std::abs(s + 1.0 / static_cast<double>(m) - delta), [&] {
          return "block " + lbl(i) + " vertices " + lbl(b[x]) + "," + lbl(b[y]);
        });
        complete.observe(std::abs(s + alpha_sq - delta), [&] {
          return "block " + lbl(i) + " vertices " + lbl(b[x]) + "," + lbl(b[y]);
        });
      }
    }
  }

  Audit reduced_residual("reduced_eigen_residual", tol.identity);
  Audit reduced_ortho("reduced_weighted_orthonormality", tol.identity);
  {
    const Matrix lbar = reduced_matrix(p);
    for (std::size_t j = 0; j < red.k(); ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += lbar(i, c) * red.alpha(j, c);
        reduced_residual.observe(std::abs(s - red.eigenvalues[j] * red.alpha(j, i)),
                                 [&] { return "reduced pair " + lbl(j) + " row " + lbl(i); });
      }
      for (std::size_t j2 = j; j2 < red.k(); ++j2) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i)
          s += static_cast<double>(p.block_size(i)) * red.alpha(j, i) * red.alpha(j2, i);
        reduced_ortho.observe(std::abs(s - (j == j2 ? 1.0 : 0.0)),
                              [&] { return "reduced pairs " + lbl(j) + "," + lbl(j2); });
      }
      // Block-constant vector with value alpha_j(i) on block i.
      for (Vertex u = 0; u < n; ++u) {
        double lx = 0.0;
        const auto row = lap.row(u);
        for (Vertex v = 0; v < n; ++v) lx += row[v] * red.alpha(j, p.block_of(v));
        full_consistency.observe(
            std::abs(lx - red.eigenvalues[j] * red.alpha(j, p.block_of(u))),
            [&] { return "reduced pair " + lbl(j) + " row " + lbl(u); });
      }
    }
  }

  for (auto* a : {&block_residual, &block_ortho, &block_complete, &reduced_residual, &reduced_ortho,
                  &complete, &weight_sum, &weight_bound, &full_consistency})
    out.push_back(std::move(*a).finish());

  const DirectWalk direct(g, tol.eigen);
  std::vector<DirectWalk> block_walks;
  block_walks.reserve(k);
  for (std::size_t i = 0; i < k; ++i) block_walks.emplace_back(g.induced(p.block(i)), tol.eigen);

  Audit terms_sum("lemma_terms_sum", tol.equivalence);
  Audit equivalence("oracle_equivalence", tol.equivalence);
  Audit unit_direct("unitarity_direct", tol.equivalence);
  Audit unit_fid("unitarity_fid", tol.equivalence);
  Audit symmetry("symmetry", tol.equivalence);
  Audit gap_bound("return_gap_bound", tol.equivalence);

  std::vector<double> fid(n * n);
  std::vector<double> dir(n * n);
  for (double t : times) {
    for (Vertex x = 0; x < n; ++x) {
      const auto amps = direct.amplitudes_from(x, t);
      double total_direct = 0.0;
      double total_fid = 0.0;
      for (Vertex y = 0; y < n; ++y) {
        const ProbabilityReport r = walk.probability(x, y, t);
        const double via_amplitude = std::norm(walk.amplitude(x, y, t));
        fid[x * n + y] = r.probability;
        dir[x * n + y] = std::norm(amps[y]);
        total_direct += dir[x * n + y];
        total_fid += r.probability;
        terms_sum.observe(std::abs(r.probability - via_amplitude), [&] {
          return "x=" + lbl(x) + " y=" + lbl(y) + " t=" + fmt_t(t);
        });
        equivalence.observe(std::abs(r.probability - dir[x * n + y]), [&] {
          return "x=" + lbl(x) + " y=" + lbl(y) + " t=" + fmt_t(t);
        });
      }
      unit_direct.observe(std::abs(total_direct - 1.0),
                          [&] { return "x=" + lbl(x) + " t=" + fmt_t(t); });
      unit_fid.observe(std::abs(total_fid - 1.0), [&] { return "x=" + lbl(x) + " t=" + fmt_t(t); });

      const std::size_t i = p.block_of(x);
      const GapReport gap = theorem1_gap(direct, block_walks[i], x, p.local_index(x), t);
      gap_bound.observe(std::max(0.0, gap.gap - gap.bound),
                        [&] { return "x=" + lbl(x) + " t=" + fmt_t(t); });
    }
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = x + 1; y < n; ++y) {
        const double e = std::max(std::abs(fid[x * n + y] - fid[y * n + x]),
                                  std::abs(dir[x * n + y] - dir[y * n + x]));
        symmetry.observe(e, [&] { return "x=" + lbl(x) + " y=" + lbl(y) + " t=" + fmt_t(t); });
      }
  }
  for (auto* a : {&terms_sum, &equivalence, &unit_direct, &unit_fid, &symmetry, &gap_bound})
    out.push_back(std::move(*a).finish());
  return out;
}

inline bool all_passed(const std::vector<InvariantResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace ctqw
