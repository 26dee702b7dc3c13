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

#include "ubmrps/hermitian_bm.hpp"

#include <sstream>
#include <utility>

#include "ubmrps/error.hpp"

namespace ubmrps {

BrownianIncrement::BrownianIncrement(double dt, HermitianMatrix matrix)
    : dt_(dt), matrix_(std::move(matrix)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw InvalidArgument("BrownianIncrement: dt must be positive and finite");
  }
}

BrownianIncrement sample_increment(int n, double dt, RngStream& rng) {
  if (n < 1) throw InvalidArgument("sample_increment: N must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("sample_increment: dt must be positive and finite");
  }
  Eigen::MatrixXcd h(n, n);
  fill_increment(h, n, dt, rng);
  return BrownianIncrement(dt, HermitianMatrix(std::move(h)));
}

std::vector<HermitianMatrix> orthonormal_hermitian_basis(int n) {
  if (n < 1) throw InvalidArgument("orthonormal_hermitian_basis: N < 1");
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double d = 1.0 / std::sqrt(static_cast<double>(n));
  const double o = 1.0 / std::sqrt(2.0 * n);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    e(j, j) = d;
    basis.emplace_back(std::move(e));
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(n, n);
      re(j, k) = o;
      re(k, j) = o;
      basis.emplace_back(std::move(re));
      Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(n, n);
      im(j, k) = Complex(0.0, -o);
      im(k, j) = Complex(0.0, o);
      basis.emplace_back(std::move(im));
    }
  }
  return basis;
}

IncrementCovariance increment_covariance_check(
    std::span<const BrownianIncrement> samples,
    std::span<const HermitianMatrix> family) {
  const auto k = static_cast<Eigen::Index>(family.size());
  IncrementCovariance out{Eigen::MatrixXd::Zero(k, k),
                          Eigen::MatrixXd::Zero(k, k)};
  if (k == 0) return out;
  if (samples.size() < kMinCovarianceSamples) {
    std::ostringstream os;
    os << "increment_covariance_check: need at least " << kMinCovarianceSamples
       << " samples, got " << samples.size();
    throw InvalidArgument(os.str());
  }
  const double dt = samples.front().dt();
  const int n = samples.front().matrix().dim();
  for (const auto& a : family) {
    if (a.dim() != n) {
      throw InvalidArgument("increment_covariance_check: dimension mismatch");
    }
  }

  const auto m = static_cast<double>(samples.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd x(k);
  for (const auto& s : samples) {
    if (s.dt() != dt) {
      throw InvalidArgument("increment_covariance_check: mixed dt in samples");
    }
    if (s.matrix().dim() != n) {
      throw InvalidArgument("increment_covariance_check: mixed dimensions");
    }
    for (Eigen::Index a = 0; a < k; ++a) {
      x(a) = hs_inner(family[a], s.matrix()) / std::sqrt(dt);
    }
    const Eigen::MatrixXd prod = x * x.transpose();
    sum += prod;
    sum_sq += prod.cwiseAbs2();
  }
  out.mean = sum / m;
  const Eigen::MatrixXd var =
      (sum_sq / m - out.mean.cwiseAbs2()) * (m / (m - 1.0));
  out.std_error = (var.cwiseMax(0.0) / m).cwiseSqrt();
  return out;
}

}  // namespace ubmrps
