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

#include "ubmrps/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "ubmrps/error.hpp"

namespace ubmrps {
namespace {

bool all_finite(const Eigen::MatrixXcd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_square_finite(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw InvalidArgument(os.str());
  }
  if (!all_finite(m)) {
    throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  require_square_finite(m_, "ComplexMatrix");
}

ComplexMatrix ComplexMatrix::identity(int n) {
  return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  require_square_finite(m_, "HermitianMatrix");
  const Eigen::Index n = m_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m_(j, j).imag() != 0.0) {
      throw InvalidArgument("HermitianMatrix: diagonal entry is not real");
    }
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (m_(k, j) != std::conj(m_(j, k))) {
        throw InvalidArgument("HermitianMatrix: matrix is not self-adjoint");
      }
    }
  }
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(Eigen::MatrixXcd::Zero(n, n));
}

HermitianMatrix HermitianMatrix::operator-() const {
  return HermitianMatrix(-m_);
}

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  require_square_finite(m_, "UnitaryMatrix");
  const double defect = unitarity_defect(m_);
  if (!(defect <= kUnitarityTolerance)) {
    std::ostringstream os;
    os << "UnitaryMatrix: ||U U* - I||_F = " << defect << " exceeds "
       << kUnitarityTolerance;
    throw NumericError(os.str());
  }
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
  return UnitaryMatrix(Eigen::MatrixXcd::Identity(n, n));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  return UnitaryMatrix(m_.adjoint());
}

PureState::PureState(Eigen::VectorXcd amplitudes, double tolerance)
    : psi_(std::move(amplitudes)) {
  if (psi_.size() < 1) throw InvalidArgument("PureState: empty vector");
  const double norm = psi_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "PureState: norm " << norm << " deviates from 1 by more than "
       << tolerance;
    throw InvalidArgument(os.str());
  }
}

PureState PureState::normalized(const Eigen::VectorXcd& v) {
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw InvalidArgument("PureState::normalized: zero or non-finite vector");
  }
  return PureState(v / norm);
}

PureState PureState::basis(int n, int index) {
  if (n < 1 || index < 0 || index >= n) {
    throw InvalidArgument("PureState::basis: index out of range");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v(index) = 1.0;
  return PureState(std::move(v));
}

ProbabilityVector::ProbabilityVector(Eigen::VectorXd weights)
    : p_(std::move(weights)) {
  if (p_.size() < 1) throw InvalidArgument("ProbabilityVector: empty");
  for (Eigen::Index j = 0; j < p_.size(); ++j) {
    if (!(p_(j) >= 0.0)) {
      throw InvalidArgument("ProbabilityVector: negative or NaN weight");
    }
  }
  const double sum = p_.sum();
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "ProbabilityVector: weights sum to " << sum;
    throw InvalidArgument(os.str());
  }
}

HermitianMatrix hermitian_from_parts(std::span<const double> diag,
                                     std::span<const Complex> upper) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  if (n < 1) throw InvalidArgument("hermitian_from_parts: empty diagonal");
  if (static_cast<Eigen::Index>(upper.size()) != n * (n - 1) / 2) {
    throw InvalidArgument(
        "hermitian_from_parts: upper part must hold N(N-1)/2 entries");
  }
  Eigen::MatrixXcd m(n, n);
  std::size_t idx = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(diag[j])) {
      throw InvalidArgument("hermitian_from_parts: non-finite diagonal");
    }
    m(j, j) = Complex(diag[j], 0.0);
    for (Eigen::Index k = j + 1; k < n; ++k, ++idx) {
      const Complex z = upper[idx];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidArgument("hermitian_from_parts: non-finite entry");
      }
      m(j, k) = z;
      m(k, j) = std::conj(z);
    }
  }
  return HermitianMatrix(std::move(m));
}

UnitaryMatrix expi(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.eigen());
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "expi: Hermitian eigendecomposition failed for a " << h.dim() << "x"
       << h.dim() << " matrix with ||H||_F = " << h.eigen().norm();
    throw NumericError(os.str());
  }
  const Eigen::VectorXcd phases =
      es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); });
  const Eigen::MatrixXcd& q = es.eigenvectors();
  return UnitaryMatrix(q * phases.asDiagonal() * q.adjoint());
}

ProbabilityVector state_to_prob(const PureState& psi) {
  return ProbabilityVector(psi.eigen().cwiseAbs2());
}

UnitaryMatrix polar_reunitarize(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      m.eigen(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > std::numeric_limits<double>::epsilon() * m.dim() * smax)) {
    std::ostringstream os;
    os << "polar_reunitarize: matrix is singular (sigma_min = " << smin
       << ", sigma_max = " << smax << ")";
    throw NumericError(os.str());
  }
  return UnitaryMatrix(svd.matrixU() * svd.matrixV().adjoint());
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
  return (m * m.adjoint() -
          Eigen::MatrixXcd::Identity(m.rows(), m.cols()))
      .norm();
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("hs_inner: dimension mismatch");
  return a.dim() * (a.eigen().adjoint() * b.eigen()).trace().real();
}

}  // namespace ubmrps
