// Copyright 2026 The ubmrps Authors
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

// Increments of the Brownian motion on N x N Hermitian matrices.
//
// The process is normalized by the scalar product <A, B> = N Tr[A* B]: over a
// step dt the strict upper entries are (X + iY) / sqrt(2N) and the diagonal
// entries D / sqrt(N), with X, Y, D independent N(0, dt). Consequently
// E[dH dH] = dt I and d<H^ij, H^kl> = (dt / N) delta_il delta_jk.

#ifndef UBMRPS_HERMITIAN_BM_HPP
#define UBMRPS_HERMITIAN_BM_HPP

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ubmrps/linalg.hpp"
#include "ubmrps/rng.hpp"

namespace ubmrps {

class BrownianIncrement {
 public:
  BrownianIncrement(double dt, HermitianMatrix matrix);

  double dt() const noexcept { return dt_; }
  const HermitianMatrix& matrix() const noexcept { return matrix_; }

 private:
  double dt_;
  HermitianMatrix matrix_;
};

/// Writes one increment over `dt` into `h` (resized by the caller to n x n).
/// Draw order is fixed: for each row j, the diagonal deviate, then (X, Y) for
/// every k > j. The integrator and sample_increment share this routine, so a
/// given stream yields the same increments through either path.
template <class Matrix>
void fill_increment(Matrix& h, int n, double dt, RngStream& rng) {
  const double diag_scale = std::sqrt(dt / n);
  const double off_scale = std::sqrt(dt / (2.0 * n));
  for (int j = 0; j < n; ++j) {
    h(j, j) = Complex(diag_scale * rng.normal(), 0.0);
    for (int k = j + 1; k < n; ++k) {
      const double x = rng.normal();
      const double y = rng.normal();
      const Complex z(off_scale * x, off_scale * y);
      h(j, k) = z;
      h(k, j) = std::conj(z);
    }
  }
}

/// Throws InvalidArgument for n < 1 or dt <= 0.
BrownianIncrement sample_increment(int n, double dt, RngStream& rng);

/// Orthonormal basis of the Hermitian matrices under <A, B> = N Tr[A* B]:
/// E_jj / sqrt(N), (E_jk + E_kj) / sqrt(2N) and i(E_kj - E_jk) / sqrt(2N).
std::vector<HermitianMatrix> orthonormal_hermitian_basis(int n);

struct IncrementCovariance {
  /// mean(a, b) estimates E[<A_a, dH><A_b, dH>] / dt.
  Eigen::MatrixXd mean;
  Eigen::MatrixXd std_error;
};

/// Empirical covariance of the linear functionals <A, dH> over `samples`,
/// normalized by dt, for a test family {A}. Requires at least
/// kMinCovarianceSamples samples sharing one dt.
IncrementCovariance increment_covariance_check(
    std::span<const BrownianIncrement> samples,
    std::span<const HermitianMatrix> family);

inline constexpr std::size_t kMinCovarianceSamples = 10000;

}  // namespace ubmrps

#endif  // UBMRPS_HERMITIAN_BM_HPP
