#include "fascopula/mvn.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "fascopula/errors.hpp"
#include "fascopula/parallel.hpp"
#include "fascopula/rng.hpp"
#include "fascopula/specfun.hpp"

namespace fascopula {

namespace {

using specfun::std_normal_cdf;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kShifts = 16;
constexpr std::uint64_t kShiftStream = 0x51f7;
// Schur complements at or below this are treated as exactly zero.
constexpr double kDegenerateVariance = 1e-13;
constexpr double kBivariateErr = 1e-14;

std::vector<int> first_primes(std::size_t count) {
  std::vector<int> primes;
  for (int candidate = 2; primes.size() < count; ++candidate) {
    bool is_prime = true;
    for (int p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        is_prime = false;
        break;
      }
    }
    if (is_prime) primes.push_back(candidate);
  }
  return primes;
}

double step_or_cdf(double limit, double scale) {
  if (scale > 0.0) return std_normal_cdf(limit / scale);
  return limit >= 0.0 ? 1.0 : 0.0;
}

// E[Z | Z < d] for Z standard normal.
double truncated_mean(double d) {
  const double p = std_normal_cdf(d);
  if (p < 1e-300) return d;
  return -specfun::std_normal_pdf(d) / p;
}

/// Reordered Cholesky factor and limits for the Genz integrand.
class GenzIntegrand {
 public:
  GenzIntegrand(const Eigen::MatrixXd& corr, std::vector<double> upper) : n_(corr.rows()) {
    Eigen::MatrixXd sigma = corr;
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n_, n_);
    std::vector<double> expected(n_, 0.0);

    for (Eigen::Index i = 0; i < n_; ++i) {
      // Pick the remaining variable with the smallest expected truncation
      // probability.
      Eigen::Index best = i;
      double best_prob = kInf;
      for (Eigen::Index j = i; j < n_; ++j) {
        double var = sigma(j, j);
        double shift = 0.0;
        for (Eigen::Index m = 0; m < i; ++m) {
          var -= lower(j, m) * lower(j, m);
          shift += lower(j, m) * expected[m];
        }
        const double scale = var > kDegenerateVariance ? std::sqrt(var) : 0.0;
        const double prob = step_or_cdf(upper[j] - shift, scale);
        if (prob < best_prob) {
          best_prob = prob;
          best = j;
        }
      }
      if (best != i) {
        sigma.row(i).swap(sigma.row(best));
        sigma.col(i).swap(sigma.col(best));
        lower.row(i).swap(lower.row(best));
        std::swap(upper[i], upper[best]);
      }

      double var = sigma(i, i);
      for (Eigen::Index m = 0; m < i; ++m) var -= lower(i, m) * lower(i, m);
      if (var < -1e-10) throw NotPositiveSemidefinite("mvn_cdf: correlation matrix is not PSD");
      const double diag = var > kDegenerateVariance ? std::sqrt(var) : 0.0;
      lower(i, i) = diag;
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        if (diag == 0.0) {
          lower(j, i) = 0.0;
          continue;
        }
        double s = sigma(j, i);
        for (Eigen::Index m = 0; m < i; ++m) s -= lower(j, m) * lower(i, m);
        lower(j, i) = s / diag;
      }
      double shift = 0.0;
      for (Eigen::Index m = 0; m < i; ++m) shift += lower(i, m) * expected[m];
      expected[i] = diag > 0.0 ? truncated_mean((upper[i] - shift) / diag) : 0.0;
    }

    factor_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) factor_[i * n_ + j] = lower(i, j);
    upper_ = std::move(upper);
    first_ = step_or_cdf(upper_[0], factor_[0]);
  }

  std::size_t random_dims() const { return static_cast<std::size_t>(n_ - 1); }

  /// w has random_dims() coordinates in [0, 1]; y is scratch of size n.
  double operator()(const double* w, double* y) const {
    double f = first_;
    if (f == 0.0) return 0.0;
    y[0] = sample(w[0], f, factor_[0]);
    for (Eigen::Index i = 1; i < n_; ++i) {
      const double* row = &factor_[i * n_];
      double shift = 0.0;
      for (Eigen::Index m = 0; m < i; ++m) shift += row[m] * y[m];
      const double e = step_or_cdf(upper_[i] - shift, row[i]);
      f *= e;
      if (f == 0.0) return 0.0;
      if (i + 1 < n_) y[i] = sample(w[i], e, row[i]);
    }
    return f;
  }

 private:
  static double sample(double w, double bound, double scale) {
    if (scale == 0.0) return 0.0;
    const double u = std::clamp(w * bound, 1e-300, 1.0 - 0x1.0p-53);
    return specfun::std_normal_quantile(u);
  }

  Eigen::Index n_;
  std::vector<double> factor_;  // row-major lower triangle
  std::vector<double> upper_;
  double first_ = 0.0;
};

MvnResult integrate_qmc(const GenzIntegrand& integrand, const MvnOptions& options) {
  const std::size_t dims = integrand.random_dims();
  const std::size_t n = dims + 1;
  const std::vector<int> primes = first_primes(dims);
  std::vector<double> alpha(dims);
  for (std::size_t j = 0; j < dims; ++j) {
    const double r = std::sqrt(static_cast<double>(primes[j]));
    alpha[j] = r - std::floor(r);
  }
  std::vector<std::vector<double>> shifts(kShifts, std::vector<double>(dims));
  for (int s = 0; s < kShifts; ++s) {
    rng::NormalStream stream(rng::derive_seed(options.seed, kShiftStream, static_cast<std::uint64_t>(s)));
    for (auto& v : shifts[s]) v = stream.uniform();
  }

  std::array<double, kShifts> sums{};
  std::uint64_t done = 0;
  std::uint64_t target = std::min<std::uint64_t>(128, std::max<std::uint64_t>(1, options.max_points / kShifts));
  MvnResult result;
  for (;;) {
    parallel_for(kShifts, options.threads, [&](std::size_t s) {
      std::vector<double> w(dims);
      std::vector<double> y(n);
      double acc = 0.0;
      for (std::uint64_t i = done + 1; i <= target; ++i) {
        const double index = static_cast<double>(i);
        for (std::size_t j = 0; j < dims; ++j) {
          double x = index * alpha[j] + shifts[s][j];
          x -= std::floor(x);
          w[j] = std::fabs(2.0 * x - 1.0);
        }
        acc += integrand(w.data(), y.data());
      }
      sums[s] += acc;
    });
    done = target;

    double mean = 0.0;
    for (double v : sums) mean += v / static_cast<double>(done);
    mean /= kShifts;
    double var = 0.0;
    for (double v : sums) {
      const double d = v / static_cast<double>(done) - mean;
      var += d * d;
    }
    var /= static_cast<double>(kShifts) * (kShifts - 1);
    result.value = std::clamp(mean, 0.0, 1.0);
    result.err_estimate = 3.0 * std::sqrt(var);
    result.points_used = done * kShifts;
    if (result.err_estimate <= options.abs_tol) break;
    if (2 * done * kShifts > options.max_points) break;
    target = 2 * done;
  }
  return result;
}

void validate_options(const MvnOptions& options) {
  if (!(options.abs_tol > 0.0)) throw DomainError("mvn_cdf: abs_tol must be positive");
  if (options.max_points < 1000) throw DomainError("mvn_cdf: max_points must be at least 1000");
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  if (std::isnan(h) || std::isnan(k) || std::isnan(rho))
    throw DomainError("bivariate_normal_cdf: NaN argument");
  if (h == -kInf || k == -kInf) return 0.0;
  if (h == kInf) return std_normal_cdf(k);
  if (k == kInf) return std_normal_cdf(h);
  if (rho >= 1.0) return std_normal_cdf(std::min(h, k));
  if (rho <= -1.0) return std::max(0.0, std_normal_cdf(h) - std_normal_cdf(-k));

  // Phi(h)Phi(k) + 1/(2 pi) * integral_0^{asin rho} exp(-E(theta)) dtheta with
  // E = (h^2 + k^2 - 2hk sin)/(2 cos^2), rearranged so neither end of the
  // interval cancels catastrophically.
  const double hk = h * k;
  const double diff2 = (h - k) * (h - k);
  const double sum2 = (h + k) * (h + k);
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double c2 = c * c;
    if (c2 == 0.0) return 0.0;
    const double e = s >= 0.0 ? diff2 / (2.0 * c2) + hk / (1.0 + s)
                              : sum2 / (2.0 * c2) - hk / (1.0 - s);
    return std::exp(-e);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double top = std::asin(rho);
  const double integral =
      top >= 0.0 ? Quad::integrate(integrand, 0.0, top, 10, 1e-14)
                 : -Quad::integrate(integrand, top, 0.0, 10, 1e-14);
  const double value = std_normal_cdf(h) * std_normal_cdf(k) + integral / (2.0 * specfun::kPi);
  const double cap = std::min(std_normal_cdf(h), std_normal_cdf(k));
  return std::clamp(value, 0.0, cap);
}

MvnResult mvn_cdf(std::span<const double> upper, const CorrelationMatrix& corr,
                  const MvnOptions& options) {
  validate_options(options);
  if (static_cast<Eigen::Index>(upper.size()) != corr.dim())
    throw DimensionMismatch("mvn_cdf: " + std::to_string(upper.size()) + " limits for a " +
                            std::to_string(corr.dim()) + "-dimensional matrix");
  std::vector<Eigen::Index> kept;
  std::vector<double> limits;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (std::isnan(upper[i])) throw DomainError("mvn_cdf: NaN limit");
    if (upper[i] == -kInf) return {0.0, 0.0, 0};
    if (upper[i] == kInf) continue;
    kept.push_back(static_cast<Eigen::Index>(i));
    limits.push_back(upper[i]);
  }
  if (kept.empty()) return {1.0, 0.0, 0};
  if (kept.size() == 1) return {std_normal_cdf(limits[0]), 0.0, 0};

  const CorrelationMatrix reduced =
      kept.size() == upper.size() ? corr : corr.submatrix(kept);
  if (kept.size() == 2) {
    return {bivariate_normal_cdf(limits[0], limits[1], reduced(0, 1)), kBivariateErr, 0};
  }
  const GenzIntegrand integrand(reduced.matrix(), std::move(limits));
  return integrate_qmc(integrand, options);
}

MvnResult mvn_cdf(const MvnRequest& request) {
  return mvn_cdf(request.upper, request.corr, request.options);
}

}  // namespace fascopula
