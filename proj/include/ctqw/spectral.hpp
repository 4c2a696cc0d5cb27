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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ctqw/decomposition.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

/// Default relative tolerance of the eigensolver.
inline constexpr double kEigenTolerance = 1e-12;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix vectors;                   // row j is the unit eigenvector of eigenvalues[j]

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t j) const noexcept { return vectors.row(j); }
};

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps over all (p, q), p < q, until every off-diagonal entry is at most
/// tol * ||a||_F, then runs one more sweep. Eigenpairs come back sorted ascending; equal eigenvalues keep
/// the order of their diagonal positions.
inline EigenDecomposition eigh(const SymmetricMatrix& a, double tol = kEigenTolerance) {
  if (!(tol > 0.0)) throw InputError("eigensolver tolerance must be positive");
  const std::size_t n = a.dim();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(row[j]))
        throw InputError("matrix entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") is not finite");
      m[i * n + j] = row[j];
    }
  }
  Matrix vt = Matrix::identity(n);

  const double threshold = tol * a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  bool converged = false;
  bool polishing = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(m[p * n + q]));
    if (off <= threshold) {
      if (polishing || off == 0.0) {
        converged = true;
        break;
      }
      polishing = true;
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (apq == 0.0) continue;
        const double app = m[p * n + p];
        const double aqq = m[q * n + q];
        // Once rotations stop changing the diagonal, the entry is noise.
        if (sweep > 3 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq)) {
          m[p * n + q] = 0.0;
          m[q * n + p] = 0.0;
          continue;
        }

        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        double* rp = m.data() + p * n;
        double* rq = m.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double xp = rp[k];
          const double xq = rq[k];
          rp[k] = c * xp - s * xq;
          rq[k] = s * xp + c * xq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          m[k * n + p] = rp[k];
          m[k * n + q] = rq[k];
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = 0.0;
        rq[p] = 0.0;

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double xp = vp[k];
          const double xq = vq[k];
          vp[k] = c * xp - s * xq;
          vq[k] = s * xp + c * xq;
        }
      }
    }
  }
  if (!converged)
    throw ConvergenceError("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) +
                           " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m[i * n + i] < m[j * n + j]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = m[order[j] * n + order[j]];
    std::copy_n(vt.row(order[j]).begin(), n, out.vectors.row(j).begin());
  }
  return out;
}

/// One nontrivial spectral contribution to a block kernel entry:
/// `weight` is the sum of v_l(x) v_l(y) over the pairs sharing `eigenvalue`.
struct KernelTerm {
  double eigenvalue;
  double weight;
};

/// Spectrum of the Laplacian of one block, with the constant eigenvector
/// 1/sqrt(m) held apart from the m - 1 nontrivial pairs, which are all
/// orthogonal to it.
///
/// Complete and edgeless blocks are stored implicitly: their Laplacian is
/// lambda (I - J/m) with lambda = m or 0, and the nontrivial vectors are the
/// Helmert basis v_l = (1, ..., 1, -l, 0, ..., 0) / sqrt(l (l + 1)), l = 1..m-1,
/// with l leading ones.
class BlockSpectrum {
 public:
  static BlockSpectrum uniform(std::size_t block, std::size_t size, double eigenvalue) {
    BlockSpectrum s;
    s.block_ = block;
    s.size_ = size;
    s.uniform_ = true;
    s.uniform_eigenvalue_ = eigenvalue;
    return s;
  }

  /// `vectors` holds the m - 1 nontrivial eigenvectors as rows.
  static BlockSpectrum dense(std::size_t block, std::vector<double> eigenvalues, Matrix vectors) {
    BlockSpectrum s;
    s.block_ = block;
    s.size_ = vectors.cols();
    s.eigenvalues_ = std::move(eigenvalues);
    s.vectors_ = std::move(vectors);
    return s;
  }

  std::size_t block() const noexcept { return block_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t nontrivial_count() const noexcept { return size_ == 0 ? 0 : size_ - 1; }
  bool is_uniform() const noexcept { return uniform_; }

  double constant_entry() const noexcept { return 1.0 / std::sqrt(static_cast<double>(size_)); }

  double eigenvalue(std::size_t l) const noexcept {
    return uniform_ ? uniform_eigenvalue_ : eigenvalues_[l];
  }

  /// Entry x of nontrivial eigenvector l (both 0-based, x local to the block).
  double entry(std::size_t l, std::size_t x) const noexcept {
    if (!uniform_) return vectors_(l, x);
    const double lead = static_cast<double>(l + 1);
    const double scale = 1.0 / std::sqrt(lead * (lead + 1.0));
    if (x <= l) return scale;
    if (x == l + 1) return -lead * scale;
    return 0.0;
  }

  std::vector<double> vector(std::size_t l) const {
    std::vector<double> v(size_);
    for (std::size_t x = 0; x < size_; ++x) v[x] = entry(l, x);
    return v;
  }

  /// Nontrivial kernel terms for the local pair (x, y). For uniform blocks the
  /// m - 1 pairs collapse into one term of weight delta_xy - 1/m.
  void kernel(std::size_t x, std::size_t y, std::vector<KernelTerm>& out) const {
    out.clear();
    if (size_ < 2) return;
    if (uniform_) {
      const double delta = x == y ? 1.0 : 0.0;
      out.push_back({uniform_eigenvalue_, delta - 1.0 / static_cast<double>(size_)});
      return;
    }
    out.reserve(eigenvalues_.size());
    for (std::size_t l = 0; l < eigenvalues_.size(); ++l)
      out.push_back({eigenvalues_[l], vectors_(l, x) * vectors_(l, y)});
  }

 private:
  BlockSpectrum() = default;

  std::size_t block_ = 0;
  std::size_t size_ = 0;
  bool uniform_ = false;
  double uniform_eigenvalue_ = 0.0;
  std::vector<double> eigenvalues_;
  Matrix vectors_;
};

/// Spectrum of the Laplacian of the subgraph induced by block i.
inline BlockSpectrum block_spectrum(const Graph& g, const FidPartition& p, std::size_t i,
                                    double tol = kEigenTolerance) {
  const Block& b = p.block(i);
  const std::size_t m = b.size();
  if (m == 1) return BlockSpectrum::uniform(i, 1, 0.0);

  const VertexMask inside = make_mask(g.order(), b);
  std::size_t degree_sum = 0;
  for (Vertex v : b) degree_sum += popcount_and(g.row(v), inside);
  if (degree_sum == m * (m - 1)) return BlockSpectrum::uniform(i, m, static_cast<double>(m));
  if (degree_sum == 0) return BlockSpectrum::uniform(i, m, 0.0);

  const EigenDecomposition raw = eigh(laplacian(g.induced(b)), tol);

  // The zero eigenspace has dimension equal to the number of components.
  // Rotate it so that 1/sqrt(m) is one of its basis vectors: project the raw
  // zero vectors off the constant direction and keep the c - 1 best
  // conditioned ones by pivoted Gram-Schmidt.
  const std::size_t c = component_count(g, b);
  const double unit = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<std::vector<double>> candidates;
  for (std::size_t r = 0; r < c; ++r) {
    const auto z = raw.vector(r);
    double along = 0.0;
    for (double zx : z) along += zx * unit;
    std::vector<double> w(z.begin(), z.end());
    for (double& wx : w) wx -= along * unit;
    candidates.push_back(std::move(w));
  }
  std::vector<std::vector<double>> zero_basis;
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  while (zero_basis.size() + 1 < c) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < candidates.size(); ++r)
      if (norm(candidates[r]) > norm(candidates[best])) best = r;
    std::vector<double> q = std::move(candidates[best]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    const double len = norm(q);
    for (double& x : q) x /= len;
    for (auto& w : candidates) {
      double d = 0.0;
      for (std::size_t x = 0; x < m; ++x) d += w[x] * q[x];
      for (std::size_t x = 0; x < m; ++x) w[x] -= d * q[x];
    }
    zero_basis.push_back(std::move(q));
  }

  std::vector<double> eigenvalues;
  Matrix vectors(m - 1, m);
  std::size_t l = 0;
  for (const auto& q : zero_basis) {
    eigenvalues.push_back(0.0);
    std::copy(q.begin(), q.end(), vectors.row(l++).begin());
  }
  for (std::size_t r = c; r < m; ++r) {
    eigenvalues.push_back(raw.eigenvalues[r]);
    const auto v = raw.vector(r);
    std::copy(v.begin(), v.end(), vectors.row(l++).begin());
  }
  return BlockSpectrum::dense(i, std::move(eigenvalues), std::move(vectors));
}

/// Eigenpairs (nu_j, alpha_j) of the reduced matrix Lbar, scaled so that
/// sum_l n_l alpha_j(l) alpha_j'(l) = delta_jj'. With this scaling the
/// block-constant eigenvectors of L have entries alpha_j(i) on block i and
/// are already unit vectors.
struct ReducedSpectrum {
  std::vector<double> eigenvalues;  // nu_j, ascending
  Matrix alpha;                     // alpha(j, i) = alpha_j(i)

  std::size_t k() const noexcept { return eigenvalues.size(); }
};

/// Diagonalizes D^{1/2} Lbar D^{-1/2} (symmetric, -sqrt(n_i n_j) on joined
/// blocks) and maps its orthonormal eigenvectors back by D^{-1/2}.
inline ReducedSpectrum reduced_spectrum(const FidPartition& p, double tol = kEigenTolerance) {
  const std::size_t k = p.block_count();
  SymmetricMatrix s(k);
  for (std::size_t i = 0; i < k; ++i) {
    s.set(i, i, static_cast<double>(p.d_tilde(i)));
    for_each_bit(p.quotient().row(i), [&](Vertex j) {
      if (i < j)
        s.set(i, j, -std::sqrt(static_cast<double>(p.block_size(i)) *
                               static_cast<double>(p.block_size(j))));
    });
  }
  EigenDecomposition e = eigh(s, tol);
  ReducedSpectrum out;
  out.eigenvalues = std::move(e.eigenvalues);
  out.alpha = Matrix(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i)
      out.alpha(j, i) = e.vectors(j, i) / std::sqrt(static_cast<double>(p.block_size(i)));
  return out;
}

}  // namespace ctqw
