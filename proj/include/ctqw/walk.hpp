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

// Continuous-time quantum walk U_t = exp(i t L) on the Laplacian of a graph,
// started from a single vertex x. P_t^x(y) = |U_t(x, y)|^2.
//
// Two evaluation routes are provided:
//   DirectWalk  diagonalizes L itself (the reference route);
//   FidWalk     assembles U_t from a fully interconnected decomposition: the
//               block spectra shifted by d~_i, plus the block-constant
//               eigenvectors from the reduced matrix.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctqw/decomposition.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectral.hpp"

namespace ctqw {

using Amplitude = std::complex<double>;

/// Agreement required between the two evaluation routes.
inline constexpr double kEquivalenceTolerance = 1e-9;
/// Agreement required against closed-form probabilities.
inline constexpr double kExactFormulaTolerance = 1e-10;

namespace detail {

inline void check_vertex(std::size_t n, Vertex v) {
  if (v >= n)
    throw InputError("vertex " + std::to_string(v + 1) + " outside 1.." + std::to_string(n));
}

inline Amplitude phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Entry (x, y) of U_0 = I.
inline Amplitude delta(Vertex x, Vertex y) { return {x == y ? 1.0 : 0.0, 0.0}; }

}  // namespace detail

/// Decomposition of P_t^x(y) for x, y in the same block i (m = n_i):
///
///   subgraph          walk on the block alone,  |sum_l e^{it lambda_l} v_l(x)v_l(y) + 1/m|^2
///   tilde             |sum_j e^{it nu_j} alpha_j(i)^2|^2
///   correction_const  -1/m^2
///   correction_cos    -(2/m) sum_l v_l(x)v_l(y) cos(t lambda_l)
///   correction_cross  2 sum_l sum_j v_l(x)v_l(y) alpha_j(i)^2 cos(t(lambda_l + d~_i - nu_j))
struct LemmaTerms {
  double subgraph = 0.0;
  double tilde = 0.0;
  double correction_const = 0.0;
  double correction_cos = 0.0;
  double correction_cross = 0.0;

  double total() const noexcept {
    return subgraph + tilde + correction_const + correction_cos + correction_cross;
  }
};

struct ProbabilityReport {
  Vertex x = 0;
  Vertex y = 0;
  double t = 0.0;
  double probability = 0.0;
  std::optional<LemmaTerms> terms;   // same-block pairs on the decomposition route
  std::optional<double> cross_term;  // cross-block pairs on the decomposition route
};

/// Walk evaluated from the full eigendecomposition of L.
class DirectWalk {
 public:
  explicit DirectWalk(const Graph& g, double tol = kEigenTolerance)
      : spectrum_(eigh(laplacian(g), tol)) {}

  std::size_t order() const noexcept { return spectrum_.dim(); }
  const EigenDecomposition& spectrum() const noexcept { return spectrum_; }

  Amplitude amplitude(Vertex x, Vertex y, double t) const {
    detail::check_vertex(order(), x);
    detail::check_vertex(order(), y);
    if (t == 0.0) return detail::delta(x, y);
    Amplitude sum{0.0, 0.0};
    for (std::size_t j = 0; j < order(); ++j)
      sum += detail::phase(t * spectrum_.eigenvalues[j]) *
             (spectrum_.vectors(j, x) * spectrum_.vectors(j, y));
    return sum;
  }

  double probability(Vertex x, Vertex y, double t) const { return std::norm(amplitude(x, y, t)); }

  /// Row x of U_t, i.e. the state at time t after starting at x.
  std::vector<Amplitude> amplitudes_from(Vertex x, double t) const {
    detail::check_vertex(order(), x);
    std::vector<Amplitude> out(order(), Amplitude{0.0, 0.0});
    if (t == 0.0) {
      out[x] = 1.0;
      return out;
    }
    for (std::size_t j = 0; j < order(); ++j) {
      const Amplitude coeff = detail::phase(t * spectrum_.eigenvalues[j]) * spectrum_.vectors(j, x);
      const auto v = spectrum_.vector(j);
      for (std::size_t y = 0; y < order(); ++y) out[y] += coeff * v[y];
    }
    return out;
  }

 private:
  EigenDecomposition spectrum_;
};

/// Walk evaluated through a fully interconnected decomposition.
///
/// The reduced spectrum is computed up front; block spectra are computed the
/// first time a pair inside that block is queried, so a walk on a large graph
/// touching only a few blocks never diagonalizes the others. Safe to query
/// from several threads.
class FidWalk {
 public:
  FidWalk(Graph g, FidPartition p, double tol = kEigenTolerance)
      : graph_(std::move(g)),
        partition_(std::move(p)),
        tol_(tol),
        reduced_(reduced_spectrum(partition_, tol)),
        blocks_(partition_.block_count()),
        once_(std::make_unique<std::once_flag[]>(partition_.block_count())) {
    if (partition_.order() != graph_.order() ||
        !std::holds_alternative<FidPartition>(verify_fid(graph_, partition_.blocks())))
      throw InputError("partition is not a decomposition of this graph");
  }

  const Graph& graph() const noexcept { return graph_; }
  const FidPartition& partition() const noexcept { return partition_; }
  const ReducedSpectrum& reduced() const noexcept { return reduced_; }

  const BlockSpectrum& block_spectrum(std::size_t i) const {
    std::call_once(once_[i], [&] { blocks_[i] = ctqw::block_spectrum(graph_, partition_, i, tol_); });
    return *blocks_[i];
  }

  Amplitude amplitude(Vertex x, Vertex y, double t) const {
    detail::check_vertex(graph_.order(), x);
    detail::check_vertex(graph_.order(), y);
    if (t == 0.0) return detail::delta(x, y);
    const std::size_t i = partition_.block_of(x);
    const std::size_t i2 = partition_.block_of(y);
    Amplitude sum{0.0, 0.0};
    for (std::size_t j = 0; j < reduced_.k(); ++j)
      sum += detail::phase(t * reduced_.eigenvalues[j]) * (reduced_.alpha(j, i) * reduced_.alpha(j, i2));
    if (i != i2) return sum;

    std::vector<KernelTerm> kernel;
    block_spectrum(i).kernel(partition_.local_index(x), partition_.local_index(y), kernel);
    const double shift = static_cast<double>(partition_.d_tilde(i));
    for (const auto& term : kernel) sum += detail::phase(t * (term.eigenvalue + shift)) * term.weight;
    return sum;
  }

  /// P_t^x(y) with its term-by-term breakdown. At t = 0 the probability is
  /// exactly delta_xy; the terms are still evaluated.
  ProbabilityReport probability(Vertex x, Vertex y, double t) const {
    detail::check_vertex(graph_.order(), x);
    detail::check_vertex(graph_.order(), y);
    ProbabilityReport report;
    report.x = x;
    report.y = y;
    report.t = t;
    const std::size_t i = partition_.block_of(x);
    const std::size_t i2 = partition_.block_of(y);
    const std::size_t k = reduced_.k();

    if (i != i2) {
      Amplitude cross{0.0, 0.0};
      for (std::size_t j = 0; j < k; ++j)
        cross += detail::phase(t * reduced_.eigenvalues[j]) * (reduced_.alpha(j, i) * reduced_.alpha(j, i2));
      report.cross_term = std::norm(cross);
      report.probability = t == 0.0 ? 0.0 : *report.cross_term;
      return report;
    }

    const double m = static_cast<double>(partition_.block_size(i));
    const double shift = static_cast<double>(partition_.d_tilde(i));
    std::vector<KernelTerm> kernel;
    block_spectrum(i).kernel(partition_.local_index(x), partition_.local_index(y), kernel);

    LemmaTerms terms;
    Amplitude within{1.0 / m, 0.0};
    double cos_sum = 0.0;
    for (const auto& term : kernel) {
      within += detail::phase(t * term.eigenvalue) * term.weight;
      cos_sum += term.weight * std::cos(t * term.eigenvalue);
    }
    terms.subgraph = std::norm(within);

    Amplitude constant{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) {
      const double a = reduced_.alpha(j, i);
      constant += detail::phase(t * reduced_.eigenvalues[j]) * (a * a);
    }
    terms.tilde = std::norm(constant);
    terms.correction_const = -1.0 / (m * m);
    terms.correction_cos = -2.0 / m * cos_sum;

    double cross = 0.0;
    for (const auto& term : kernel) {
      double inner = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double a = reduced_.alpha(j, i);
        inner += a * a * std::cos(t * (term.eigenvalue + shift - reduced_.eigenvalues[j]));
      }
      cross += term.weight * inner;
    }
    terms.correction_cross = 2.0 * cross;

    report.terms = terms;
    report.probability = t == 0.0 ? std::norm(detail::delta(x, y)) : terms.total();
    return report;
  }

 private:
  Graph graph_;
  FidPartition partition_;
  double tol_;
  ReducedSpectrum reduced_;
  mutable std::vector<std::optional<BlockSpectrum>> blocks_;
  std::unique_ptr<std::once_flag[]> once_;
};

inline Amplitude amplitude_direct(const Graph& g, Vertex x, Vertex y, double t,
                                  double tol = kEigenTolerance) {
  return DirectWalk(g, tol).amplitude(x, y, t);
}

inline ProbabilityReport probability_direct(const Graph& g, Vertex x, Vertex y, double t,
                                            double tol = kEigenTolerance) {
  ProbabilityReport report;
  report.x = x;
  report.y = y;
  report.t = t;
  report.probability = DirectWalk(g, tol).probability(x, y, t);
  return report;
}

inline Amplitude amplitude_fid(const Graph& g, const FidPartition& p, Vertex x, Vertex y, double t,
                               double tol = kEigenTolerance) {
  return FidWalk(g, p, tol).amplitude(x, y, t);
}

inline ProbabilityReport probability_fid_terms(const Graph& g, const FidPartition& p, Vertex x,
                                               Vertex y, double t, double tol = kEigenTolerance) {
  return FidWalk(g, p, tol).probability(x, y, t);
}

/// Return probability at a dominating vertex of an n-vertex graph:
/// 1 - (2/n)(1 - 1/n)(1 - cos nt).
inline double dominating_return_probability(std::size_t n, double t) {
  const double nn = static_cast<double>(n);
  return 1.0 - 2.0 / nn * (1.0 - 1.0 / nn) * (1.0 - std::cos(nn * t));
}

/// Probability of moving from a dominating vertex to any other vertex:
/// (2/n^2)(1 - cos nt).
inline double dominating_cross_probability(std::size_t n, double t) {
  const double nn = static_cast<double>(n);
  return 2.0 / (nn * nn) * (1.0 - std::cos(nn * t));
}

struct GapReport {
  double gap = 0.0;    // |P_G(x, x) - P_block(x, x)|
  double bound = 0.0;  // 4 / n_i
};

/// Gap between the return probability on the whole graph and on the block
/// containing x alone, for precomputed walks. `x_local` is x's index in the
/// block walk.
inline GapReport theorem1_gap(const DirectWalk& whole, const DirectWalk& block_walk, Vertex x,
                              Vertex x_local, double t) {
  GapReport r;
  r.gap = std::abs(whole.probability(x, x, t) - block_walk.probability(x_local, x_local, t));
  r.bound = 4.0 / static_cast<double>(block_walk.order());
  return r;
}

inline GapReport theorem1_gap(const Graph& g, const FidPartition& p, std::size_t i, Vertex x,
                              double t, double tol = kEigenTolerance) {
  detail::check_vertex(g.order(), x);
  if (i >= p.block_count() || p.block_of(x) != i)
    throw InputError("vertex " + std::to_string(x + 1) + " is not in block " + std::to_string(i + 1));
  const DirectWalk whole(g, tol);
  const DirectWalk block_walk(g.induced(p.block(i)), tol);
  return theorem1_gap(whole, block_walk, x, p.local_index(x), t);
}

/// `steps` evenly spaced times from t_min to t_max inclusive (just t_min when
/// steps == 1).
inline std::vector<double> time_grid(double t_min, double t_max, std::size_t steps) {
  if (steps < 1) throw InputError("time grid needs at least one step");
  if (!(t_min <= t_max)) throw InputError("time grid needs t_min <= t_max");
  std::vector<double> out(steps);
  for (std::size_t s = 0; s < steps; ++s)
    out[s] = steps == 1 ? t_min
                        : t_min + (t_max - t_min) * static_cast<double>(s) /
                                      static_cast<double>(steps - 1);
  return out;
}

inline std::vector<double> default_time_grid() {
  return time_grid(0.0, 2.0 * std::numbers::pi, 64);
}

}  // namespace ctqw
