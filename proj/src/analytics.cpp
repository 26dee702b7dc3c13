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

#include "ubmrps/analytics.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ubmrps/error.hpp"

namespace ubmrps {
namespace {

using Real = boost::multiprecision::cpp_bin_float_100;

void require_dim(int dim, const char* what) {
  if (dim < 1) throw InvalidArgument(std::string(what) + ": N must be >= 1");
}

void require_unit_interval(double c, const char* what) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": c must lie in [0, 1]");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<double> solve_triangular_system(int dim, double c, int n_max) {
  // a_p = c^p / p! - sum_{n<p} a_n C(p,n) / (N+2n)_{p-n};
  // the diagonal coefficient C(p,p) / (N+2p)_0 is one.
  std::vector<Real> a;
  a.reserve(static_cast<std::size_t>(n_max) + 1);
  const Real cc(c);
  Real c_pow = 1;
  Real fact = 1;
  for (int p = 0; p <= n_max; ++p) {
    if (p > 0) {
      c_pow *= cc;
      fact *= p;
    }
    Real rhs = c_pow / fact;
    Real binom = 1;  // C(p, n), updated incrementally in n
    for (int n = 0; n < p; ++n) {
      Real poch = 1;
      for (int i = 0; i < p - n; ++i) poch *= Real(dim + 2 * n + i);
      rhs -= a[static_cast<std::size_t>(n)] * binom / poch;
      binom = binom * (p - n) / (n + 1);
    }
    a.push_back(rhs);
  }
  std::vector<double> out;
  out.reserve(a.size());
  for (const Real& v : a) out.push_back(static_cast<double>(v));
  return out;
}

class CoefficientCache {
 public:
  std::shared_ptr<const std::vector<double>> get(int dim, double c) {
    const Key key{dim, std::bit_cast<std::uint64_t>(c)};
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto values = std::make_shared<const std::vector<double>>(
        solve_triangular_system(dim, c, kMaxCoefficientIndex));
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(key, std::move(values)).first->second;
  }

 private:
  using Key = std::pair<int, std::uint64_t>;
  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const std::vector<double>>> cache_;
};

CoefficientCache& coefficient_cache() {
  static CoefficientCache cache;
  return cache;
}

double kummer_series(double a, double b, double z) {
  constexpr int kMaxTerms = 10000;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  std::ostringstream os;
  os << "kummer_1f1: series for (a, b, z) = (" << a << ", " << b << ", " << z
     << ") did not converge in " << kMaxTerms << " terms (partial sum " << sum
     << ")";
  throw NumericError(os.str());
}

// lambda^n 1F1(n+1; N+2n; lambda) and its first two lambda-derivatives.
struct SeriesTerm {
  double g;
  double dg;
  double d2g;
};

SeriesTerm series_term(int dim, int n, double lambda) {
  const double a = n + 1.0;
  const double b = dim + 2.0 * n;
  const double f0 = kummer_1f1(a, b, lambda);
  const double f1 = a / b * kummer_1f1(a + 1, b + 1, lambda);
  const double f2 = a * (a + 1) / (b * (b + 1)) * kummer_1f1(a + 2, b + 2, lambda);
  const double l0 = std::pow(lambda, n);
  const double l1 = n >= 1 ? n * std::pow(lambda, n - 1) : 0.0;
  const double l2 = n >= 2 ? n * (n - 1.0) * std::pow(lambda, n - 2) : 0.0;
  return {l0 * f0, l1 * f0 + l0 * f1, l2 * f0 + 2.0 * l1 * f1 + l0 * f2};
}

// Walks the n-series of phi until two consecutive terms are bounded by
// 1e-14. A single small term is not enough: a_n can vanish (a_1 = 0 when
// c = 1/N).
template <class Visit>
void walk_laplace_series(int dim, double c, double t, double lambda,
                         int n_max, Visit&& visit) {
  require_dim(dim, "laplace_marginal");
  require_unit_interval(c, "laplace_marginal");
  if (!(t >= 0.0)) throw InvalidArgument("laplace_marginal: t must be >= 0");
  if (n_max < 0 || n_max > kMaxCoefficientIndex) {
    throw InvalidArgument("laplace_marginal: n_max must lie in [0, 60]");
  }
  if (!(std::abs(lambda) <= 50.0)) {
    throw InvalidArgument("laplace_marginal: |lambda| must be <= 50");
  }
  const CoefficientSequence a = solve_coefficients(dim, c, n_max);
  int small_run = 0;
  for (int n = 0; n <= n_max; ++n) {
    const double scale = a[n] * std::exp(-rate(n, dim) * t);
    visit(n, scale);
    const double bound = std::abs(scale * std::pow(lambda, n)) *
                         kummer_1f1(n + 1.0, dim + 2.0 * n, std::abs(lambda));
    small_run = bound < 1e-14 ? small_run + 1 : 0;
    if (small_run == 2) return;
  }
  std::ostringstream os;
  os << "laplace_marginal: series not converged at n_max = " << n_max
     << " (N = " << dim << ", c = " << c << ", t = " << t
     << ", lambda = " << lambda << "); increase n_max or reduce |lambda|";
  throw NumericError(os.str());
}

}  // namespace

double rate(int n, int dim) {
  require_dim(dim, "rate");
  if (n < 0) throw InvalidArgument("rate: n must be >= 0");
  return n + n * (n - 1.0) / dim;
}

double pochhammer(double x, int n) {
  if (n < 0) throw InvalidArgument("pochhammer: n must be >= 0");
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

CoefficientSequence::CoefficientSequence(int dim, double c,
                                         std::vector<double> values)
    : dim_(dim), c_(c), values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidArgument("CoefficientSequence: at least a_0 is required");
  }
}

CoefficientSequence solve_coefficients(int dim, double c, int n_max) {
  require_dim(dim, "solve_coefficients");
  require_unit_interval(c, "solve_coefficients");
  if (n_max < 0) throw InvalidArgument("solve_coefficients: n_max < 0");
  if (n_max > kMaxCoefficientIndex) {
    std::ostringstream os;
    os << "solve_coefficients: n_max = " << n_max << " exceeds the guard "
       << kMaxCoefficientIndex << "; reduce the requested range";
    throw InvalidArgument(os.str());
  }
  const auto full = coefficient_cache().get(dim, c);
  return CoefficientSequence(
      dim, c, std::vector<double>(full->begin(), full->begin() + n_max + 1));
}

double coefficient_c0(int dim, int n) {
  require_dim(dim, "coefficient_c0");
  return (n % 2 == 0 ? 1.0 : -1.0) / pochhammer(dim + n - 1.0, n);
}

double coefficient_c1(int dim, int n) {
  require_dim(dim, "coefficient_c1");
  return pochhammer(dim - 1.0, n) / (factorial(n) * pochhammer(dim + n - 1.0, n));
}

double kummer_1f1(double a, double b, double z) {
  if (b <= 0.0 && b == std::floor(b)) {
    throw InvalidArgument("kummer_1f1: b must not be a non-positive integer");
  }
  if (!(std::abs(z) <= 50.0)) {
    throw InvalidArgument("kummer_1f1: |z| must be <= 50");
  }
  if (z == 0.0) return 1.0;
  if (z < 0.0) return std::exp(z) * kummer_series(b - a, b, -z);
  return kummer_series(a, b, z);
}

double laplace_marginal(int dim, double c, double t, double lambda,
                        int n_max) {
  double sum = 0.0;
  walk_laplace_series(dim, c, t, lambda, n_max, [&](int n, double scale) {
    if (scale != 0.0) {
      sum += scale * std::pow(lambda, n) *
             kummer_1f1(n + 1.0, dim + 2.0 * n, lambda);
    }
  });
  return sum;
}

double ExponentialSum::operator()(double t) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.weight * std::exp(-term.rate * t);
  return s;
}

double ExponentialSum::derivative(double t) const {
  double s = 0.0;
  for (const auto& term : terms_) {
    s -= term.rate * term.weight * std::exp(-term.rate * t);
  }
  return s;
}

namespace {

ExponentialSum moment_expansion(int dim, int p, const CoefficientSequence& a) {
  std::vector<ExponentialSum::Term> terms;
  terms.reserve(static_cast<std::size_t>(p) + 1);
  const double pf = factorial(p);
  for (int n = 0; n <= p; ++n) {
    const double w =
        pf * binomial(p, p - n) * a[n] / pochhammer(dim + 2.0 * n, p - n);
    terms.push_back({rate(n, dim), w});
  }
  return ExponentialSum(std::move(terms));
}

}  // namespace

MomentCurve::MomentCurve(int dim, int p, CoefficientSequence coefficients)
    : dim_(dim),
      p_(p),
      coeffs_(std::move(coefficients)),
      sum_(moment_expansion(dim, p, coeffs_)) {}

MomentCurve moment_curve(int dim, double c, int p) {
  require_dim(dim, "moment_curve");
  if (p < 1) throw InvalidArgument("moment_curve: p must be >= 1");
  return MomentCurve(dim, p, solve_coefficients(dim, c, p));
}

MomentCurve moment_e1_curve(int dim, int p, int j) {
  require_dim(dim, "moment_e1_curve");
  if (p < 1) throw InvalidArgument("moment_e1_curve: p must be >= 1");
  if (j < 1 || j > dim) throw InvalidArgument("moment_e1_curve: j out of range");
  std::vector<double> a;
  for (int n = 0; n <= p; ++n) {
    a.push_back(j == 1 ? coefficient_c1(dim, n) : coefficient_c0(dim, n));
  }
  return MomentCurve(dim, p, CoefficientSequence(dim, j == 1 ? 1.0 : 0.0, a));
}

CovarianceCurve::CovarianceCurve(int dim, double fj0, double fk0, double fjk0)
    : dim_(dim), fj0_(fj0), fk0_(fk0), fjk0_(fjk0), sum_({}) {
  require_dim(dim, "covariance_curve");
  for (double v : {fj0, fk0, fjk0}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("covariance_curve: initial values must lie in [0, 1]");
    }
  }
  const double n = dim;
  const double drive = fj0 + fk0 - 2.0 / n;
  const double stationary = 1.0 / (n * (n + 1.0));
  sum_ = ExponentialSum({
      {2.0 + 2.0 / n, fjk0 - drive / (n + 2.0) - stationary},
      {1.0, drive / (n + 2.0)},
      {0.0, stationary},
  });
}

double CovarianceCurve::marginal_sum(double t) const {
  const double n = dim_;
  return (fj0_ + fk0_ - 2.0 / n) * std::exp(-t) + 2.0 / n;
}

CovarianceCurve covariance_curve(int dim, double fj0, double fk0, double fjk0) {
  return CovarianceCurve(dim, fj0, fk0, fjk0);
}

double observable_average(const HermitianMatrix& a, const PureState& psi,
                          double t) {
  if (a.dim() != psi.dim()) {
    throw InvalidArgument("observable_average: dimension mismatch");
  }
  const double mean_trace = a.trace() / a.dim();
  const double initial = psi.eigen().dot(a.eigen() * psi.eigen()).real();
  return (initial - mean_trace) * std::exp(-t) + mean_trace;
}

double sum_of_moments_e1(int dim, int p, double t) {
  require_dim(dim, "sum_of_moments_e1");
  if (p < 1) throw InvalidArgument("sum_of_moments_e1: p must be >= 1");
  // Coordinate 1 starts at c = 1, the other N - 1 at c = 0.
  const double pf = factorial(p);
  double y = 0.0;
  for (int n = 0; n <= p; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const double numerator =
        pochhammer(dim - 1.0, n) / factorial(n) + (dim - 1.0) * sign;
    y += binomial(p, p - n) * numerator /
         (pochhammer(dim + n - 1.0, n) * pochhammer(dim + 2.0 * n, p - n)) *
         std::exp(-rate(n, dim) * t);
  }
  return pf * y;
}

double entropy_bound(int dim, int p, double t) {
  if (p < 2) throw InvalidArgument("entropy_bound: p must be >= 2");
  const double y = sum_of_moments_e1(dim, p, t);
  if (!(y > 0.0)) {
    std::ostringstream os;
    os << "entropy_bound: Y_p = " << y << " is not positive (N = " << dim
       << ", p = " << p << ", t = " << t << ")";
    throw InternalError(os.str());
  }
  return std::log(y) / (1.0 - p);
}

double renyi_bound(const PureState& psi, int p, double t) {
  if (p < 2) throw InvalidArgument("renyi_bound: p must be >= 2");
  double y = 0.0;
  for (int j = 0; j < psi.dim(); ++j) {
    y += moment_curve(psi.dim(), std::min(1.0, std::norm(psi[j])), p)(t);
  }
  if (!(y > 0.0)) throw InternalError("renyi_bound: Y_p is not positive");
  return std::log(y) / (1.0 - p);
}

double haar_entropy_bound(int dim) {
  require_dim(dim, "haar_entropy_bound");
  double s = 0.0;
  for (int k = dim; k >= 2; --k) s += 1.0 / k;
  return s;
}

double haar_moment(int dim, int p) {
  require_dim(dim, "haar_moment");
  if (p < 0) throw InvalidArgument("haar_moment: p must be >= 0");
  return factorial(p) / pochhammer(dim, p);
}

double pde_residual(int dim, double c, double t,
                    std::span<const double> lambdas, int n_max) {
  const double n = dim;
  double worst = 0.0;
  for (double lambda : lambdas) {
    double phi = 0.0, dphi = 0.0, d2phi = 0.0, dtphi = 0.0;
    walk_laplace_series(dim, c, t, lambda, n_max, [&](int k, double scale) {
      if (scale == 0.0) return;
      const SeriesTerm g = series_term(dim, k, lambda);
      phi += scale * g.g;
      dphi += scale * g.dg;
      d2phi += scale * g.d2g;
      dtphi -= rate(k, dim) * scale * g.g;
    });
    const double rhs = lambda / n * phi + (lambda * lambda / n - lambda) * dphi -
                       lambda * lambda / n * d2phi;
    worst = std::max(worst, std::abs(dtphi - rhs));
  }
  return worst;
}

}  // namespace ubmrps
