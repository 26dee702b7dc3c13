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

// Closed-form statistics of the states psi_t = U_t psi.
//
// For one coordinate x_t = |psi_t^j|^2 with x_0 = c, the Laplace transform
// phi(lambda; t) = E exp(lambda x_t) solves
//
//   d/dt phi = (lambda/N) phi + (lambda^2/N - lambda) phi' - (lambda^2/N) phi''
//
// and expands as
//
//   phi(lambda; t) = sum_n a_n exp(-Lambda_n t) lambda^n 1F1(n+1; N+2n; lambda),
//   Lambda_n = n + n(n-1)/N,
//
// where a_0 = 1 and the a_n follow from phi(lambda; 0) = exp(lambda c):
//
//   sum_{n<=p} a_n C(p,n) / (N+2n)_{p-n} = c^p / p!   for every p >= 0.
//
// Moments y_p(t) = E x_t^p are p! times the lambda^p coefficient of phi.

#ifndef UBMRPS_ANALYTICS_HPP
#define UBMRPS_ANALYTICS_HPP

#include <memory>
#include <span>
#include <vector>

#include "ubmrps/linalg.hpp"

namespace ubmrps {

/// Largest coefficient index the triangular solver accepts.
inline constexpr int kMaxCoefficientIndex = 60;

/// Lambda_n = n + n(n-1)/N.
double rate(int n, int dim);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), (x)_0 = 1.
double pochhammer(double x, int n);

/// a_0, ..., a_{n_max} for dimension N and initial squared modulus c.
class CoefficientSequence {
 public:
  CoefficientSequence(int dim, double c, std::vector<double> values);

  int dim() const noexcept { return dim_; }
  double initial_condition() const noexcept { return c_; }
  int max_index() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double operator[](int n) const { return values_.at(static_cast<std::size_t>(n)); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  int dim_;
  double c_;
  std::vector<double> values_;
};

/// Forward substitution on the triangular system for a_n. The system is
/// solved in 100-digit binary floating point and rounded once: partial sums
/// cancel by up to ~57 decimal digits at n = 60, which double precision
/// cannot absorb. Results are memoized per (N, c).
CoefficientSequence solve_coefficients(int dim, double c, int n_max);

/// a_n = (-1)^n / (N+n-1)_n, the solution for c = 0.
double coefficient_c0(int dim, int n);
/// a_n = (N-1)_n / (n! (N+n-1)_n), the solution for c = 1.
double coefficient_c1(int dim, int n);

/// Kummer's confluent hypergeometric series sum_k (a)_k z^k / ((b)_k k!).
/// For z < 0 the series is evaluated through exp(z) 1F1(b-a; b; -z) so that
/// every term is positive. Requires |z| <= 50 and b not a non-positive
/// integer; throws NumericError if 10^4 terms do not converge.
double kummer_1f1(double a, double b, double z);

/// phi(lambda; t) for one coordinate with |psi^j|^2 = c.
double laplace_marginal(int dim, double c, double t, double lambda,
                        int n_max = kMaxCoefficientIndex);

/// Sum of exponentials t -> sum_n weight_n exp(-Lambda_n t).
class ExponentialSum {
 public:
  struct Term {
    double rate;
    double weight;
  };

  explicit ExponentialSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

  double operator()(double t) const;
  double derivative(double t) const;
  const std::vector<Term>& terms() const noexcept { return terms_; }

 private:
  std::vector<Term> terms_;
};

/// y_p(t) = E |psi_t^j|^{2p} given |psi^j|^2 = c:
///   y_p(t) = p! sum_{n<=p} C(p, p-n) a_n / (N+2n)_{p-n} exp(-Lambda_n t).
class MomentCurve {
 public:
  MomentCurve(int dim, int p, CoefficientSequence coefficients);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return p_; }
  const CoefficientSequence& coefficients() const noexcept { return coeffs_; }
  double operator()(double t) const { return sum_(t); }
  double derivative(double t) const { return sum_.derivative(t); }
  const ExponentialSum& expansion() const noexcept { return sum_; }

 private:
  int dim_;
  int p_;
  CoefficientSequence coeffs_;
  ExponentialSum sum_;
};

MomentCurve moment_curve(int dim, double c, int p);

/// Moments for psi = e_1: the j = 1 coordinate (c = 1) or j > 1 (c = 0),
/// both from the closed-form coefficients. `j` is one-based.
MomentCurve moment_e1_curve(int dim, int p, int j);

/// f_jk(t) = E[|psi_t^j|^2 |psi_t^k|^2] for j != k, solving
///   f' = (f_j + f_k) / N - (2 + 2/N) f.
class CovarianceCurve {
 public:
  CovarianceCurve(int dim, double fj0, double fk0, double fjk0);

  int dim() const noexcept { return dim_; }
  double operator()(double t) const { return sum_(t); }
  double derivative(double t) const { return sum_.derivative(t); }
  /// f_j(t) + f_k(t), the forcing term of the ODE.
  double marginal_sum(double t) const;

 private:
  int dim_;
  double fj0_;
  double fk0_;
  double fjk0_;
  ExponentialSum sum_;
};

CovarianceCurve covariance_curve(int dim, double fj0, double fk0, double fjk0);

/// E <psi_t, A psi_t> = (<psi, A psi> - Tr A / N) e^{-t} + Tr A / N.
double observable_average(const HermitianMatrix& a, const PureState& psi,
                          double t);

/// Y_p(t) = sum_j E |psi_t^j|^{2p} for psi = e_1.
double sum_of_moments_e1(int dim, int p, double t);

/// Jensen lower bound ln(Y_p(t)) / (1 - p) on E[S_p(psi_t)], psi = e_1.
double entropy_bound(int dim, int p, double t);

/// Same bound for an arbitrary initial state, Y_p summed from moment curves.
double renyi_bound(const PureState& psi, int p, double t);

/// sum_{k=2}^{N} 1/k.
double haar_entropy_bound(int dim);

/// E |psi^j|^{2p} = p! / (N)_p under the uniform measure on unit vectors.
double haar_moment(int dim, int p);

/// Max over `lambdas` of the residual of the one-coordinate PDE at time t,
/// with all derivatives of phi taken term by term from the series.
double pde_residual(int dim, double c, double t,
                    std::span<const double> lambdas,
                    int n_max = kMaxCoefficientIndex);

}  // namespace ubmrps

#endif  // UBMRPS_ANALYTICS_HPP
