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

// Dense complex matrix and state types shared by the whole toolkit.
//
// The wrappers below are thin value types around Eigen objects. Each one
// checks its invariant at construction, so a HermitianMatrix is always exactly
// self-adjoint, a UnitaryMatrix is unitary to within kUnitarityTolerance and a
// PureState has unit norm. All checks use the Frobenius / Euclidean norm.

#ifndef UBMRPS_LINALG_HPP
#define UBMRPS_LINALG_HPP

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace ubmrps {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kStateNormTolerance = 1e-12;
inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Square complex matrix with finite entries.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(Eigen::MatrixXcd m);

  static ComplexMatrix identity(int n);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

 private:
  Eigen::MatrixXcd m_;
};

/// Exactly self-adjoint matrix. The lower triangle is always the conjugate of
/// the upper triangle and the diagonal is real.
class HermitianMatrix {
 public:
  /// Accepts only matrices with m == m.adjoint() bit for bit.
  explicit HermitianMatrix(Eigen::MatrixXcd m);

  static HermitianMatrix zero(int n);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator-() const;

 private:
  Eigen::MatrixXcd m_;
};

class UnitaryMatrix {
 public:
  /// Throws NumericError if ||U U* - I||_F exceeds kUnitarityTolerance.
  explicit UnitaryMatrix(Eigen::MatrixXcd m);

  static UnitaryMatrix identity(int n);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  UnitaryMatrix adjoint() const;

 private:
  Eigen::MatrixXcd m_;
};

class PureState {
 public:
  /// Throws InvalidArgument unless | ||psi|| - 1 | <= tolerance.
  explicit PureState(Eigen::VectorXcd amplitudes,
                     double tolerance = kStateNormTolerance);

  /// psi / ||psi||; throws InvalidArgument for a zero or non-finite vector.
  static PureState normalized(const Eigen::VectorXcd& v);
  /// Canonical basis vector e_{index+1} (index is zero-based).
  static PureState basis(int n, int index);

  int dim() const noexcept { return static_cast<int>(psi_.size()); }
  const Eigen::VectorXcd& eigen() const noexcept { return psi_; }
  Complex operator[](int j) const { return psi_(j); }

 private:
  Eigen::VectorXcd psi_;
};

/// Non-negative weights summing to one.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Eigen::VectorXd weights);

  int dim() const noexcept { return static_cast<int>(p_.size()); }
  const Eigen::VectorXd& eigen() const noexcept { return p_; }
  double operator[](int j) const { return p_(j); }

 private:
  Eigen::VectorXd p_;
};

/// Builds H with H_jj = diag_j and H_jk = upper_jk, H_kj = conj(upper_jk) for
/// j < k. `upper` lists the strict upper triangle row by row:
/// (0,1), (0,2), ..., (0,N-1), (1,2), ...
HermitianMatrix hermitian_from_parts(std::span<const double> diag,
                                     std::span<const Complex> upper);

/// exp(iH) via the Hermitian eigendecomposition H = Q diag(l) Q*.
UnitaryMatrix expi(const HermitianMatrix& h);

/// p_j = |psi_j|^2.
ProbabilityVector state_to_prob(const PureState& psi);

/// Unitary polar factor of a nonsingular matrix, i.e. the closest unitary
/// matrix in Frobenius norm. Computed from the SVD M = W S V*, result W V*.
UnitaryMatrix polar_reunitarize(const ComplexMatrix& m);

/// ||M M* - I||_F.
double unitarity_defect(const Eigen::MatrixXcd& m);

/// <A, B> = N Tr[A* B], the scalar product that normalizes the Hermitian
/// Brownian motion.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace ubmrps

#endif  // UBMRPS_LINALG_HPP
