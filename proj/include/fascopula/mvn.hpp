#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fascopula/linalg.hpp"

namespace fascopula {

struct MvnOptions {
  double abs_tol = 1e-6;
  std::uint64_t max_points = std::uint64_t{1} << 22;
  std::uint64_t seed = 0x6d766e2d636466ULL;
  /// Worker threads for the QMC batches; 0 uses the hardware concurrency.
  /// The result does not depend on this value.
  unsigned threads = 0;
};

/// P(Z_1 <= upper_1, ..., Z_K <= upper_K) for Z ~ N(0, corr).
struct MvnRequest {
  std::vector<double> upper;  ///< +inf allowed per coordinate
  CorrelationMatrix corr;
  MvnOptions options;
};

struct MvnResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::uint64_t points_used = 0;
};

/// Multivariate standard normal CDF.
///
/// Coordinates with an infinite upper limit are marginalized out first. One
/// and two remaining dimensions are evaluated in closed form (erfc and a
/// one-dimensional bivariate integral); three or more go through the Genz
/// separation-of-variables transform with variable reordering, integrated by
/// a randomly shifted rank-1 lattice. Iteration stops when the estimated
/// error drops to abs_tol or the point budget is spent.
///
/// Throws DimensionMismatch, DomainError (bad options or NaN limits) and
/// NotPositiveSemidefinite when the matrix has a pivot below -1e-10.
MvnResult mvn_cdf(const MvnRequest& request);
MvnResult mvn_cdf(std::span<const double> upper, const CorrelationMatrix& corr,
                  const MvnOptions& options = {});

/// Phi_2(h, k; rho), accurate to about 1e-14 for every rho in [-1, 1].
double bivariate_normal_cdf(double h, double k, double rho);

}  // namespace fascopula
