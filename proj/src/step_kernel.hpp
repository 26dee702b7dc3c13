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

// Hot loop of the integrator. Fixed-size Eigen types are used for the small
// dimensions that dominate the workloads; everything else runs on dynamic
// storage allocated once per trajectory.

#ifndef UBMRPS_SRC_STEP_KERNEL_HPP
#define UBMRPS_SRC_STEP_KERNEL_HPP

#include <cmath>
#include <sstream>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "ubmrps/error.hpp"
#include "ubmrps/hermitian_bm.hpp"
#include "ubmrps/linalg.hpp"

namespace ubmrps::detail {

template <int D>
class StepKernel {
 public:
  using Mat = Eigen::Matrix<Complex, D, D>;
  using Vec = Eigen::Matrix<Complex, D, 1>;

  explicit StepKernel(int n)
      : n_(n), h_(n, n), es_(n), phases_(n), tmp_(n), tmp_mat_(n, n) {}

  int dim() const noexcept { return n_; }

  /// Draws dH over dt into the increment buffer.
  void draw(double dt, RngStream& rng) { fill_increment(h_, n_, dt, rng); }

  Mat& increment() noexcept { return h_; }

  /// Diagonalizes the increment buffer and caches exp(i lambda).
  void decompose() {
    es_.compute(h_);
    if (es_.info() != Eigen::Success) {
      std::ostringstream os;
      os << "step: Hermitian eigendecomposition failed (N = " << n_
         << ", ||dH||_F = " << h_.norm() << ")";
      throw NumericError(os.str());
    }
    for (int j = 0; j < n_; ++j) phases_(j) = std::polar(1.0, es_.eigenvalues()(j));
  }

  /// x <- exp(i dH) x for a vector or a matrix.
  template <class Target>
  void apply(Target& x) {
    const auto& q = es_.eigenvectors();
    if constexpr (Target::ColsAtCompileTime == 1) {
      tmp_.noalias() = q.adjoint() * x;
      tmp_.array() *= phases_.array();
      x.noalias() = q * tmp_;
    } else {
      tmp_mat_.noalias() = q.adjoint() * x;
      tmp_mat_ = phases_.asDiagonal() * tmp_mat_;
      x.noalias() = q * tmp_mat_;
    }
  }

 private:
  int n_;
  Mat h_;
  Eigen::SelfAdjointEigenSolver<Mat> es_;
  Vec phases_;
  Vec tmp_;
  Mat tmp_mat_;
};

/// Calls f(std::integral_constant<int, D>) with D = n for the specialized
/// sizes and D = Eigen::Dynamic otherwise.
template <class F>
decltype(auto) dispatch_dim(int n, F&& f) {
  switch (n) {
    case 2:
      return f(std::integral_constant<int, 2>{});
    case 3:
      return f(std::integral_constant<int, 3>{});
    case 4:
      return f(std::integral_constant<int, 4>{});
    default:
      return f(std::integral_constant<int, Eigen::Dynamic>{});
  }
}

/// Number of sub-steps covering `span` with steps no longer than `h`.
inline long substep_count(double span, double h) {
  if (!(span > 0.0)) return 0;
  const double ratio = span / h;
  long n = static_cast<long>(std::ceil(ratio - 1e-9));
  return n < 1 ? 1 : n;
}

}  // namespace ubmrps::detail

#endif  // UBMRPS_SRC_STEP_KERNEL_HPP
