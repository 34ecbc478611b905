#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fascopula/linalg.hpp"
#include "fascopula/mvn.hpp"

namespace fascopula {

/// Gaussian copula C(u) = Phi_R(q(u_1), ..., q(u_K)).
///
/// Components equal to 1 are marginalized out and any component equal to 0
/// gives 0; neither reaches the normal quantile. Throws DomainError for
/// components outside [0, 1] and DimensionMismatch on a size mismatch.
double gaussian_copula_cdf(std::span<const double> u, const CorrelationMatrix& corr,
                           const MvnOptions& options = {});

/// Copula density exp(-q^T (R^{-1} - I) q / 2) / sqrt(det R), q the normal
/// scores of u. Built once per matrix; evaluation is const and thread-safe.
class GaussianCopulaDensity {
 public:
  /// Throws SingularMatrix when the factor has a diagonal entry below 1e-12.
  explicit GaussianCopulaDensity(const CholeskyFactor& factor);

  Eigen::Index dim() const { return precision_minus_identity_.rows(); }

  /// Components must lie strictly inside (0, 1); interior values closer than
  /// 1e-15 to either end are clamped before the quantile transform.
  double operator()(std::span<const double> u) const;
  double log_density(std::span<const double> u) const;

  /// Log density as a function of the normal scores directly.
  double log_density_scores(const Eigen::VectorXd& scores) const;

 private:
  Eigen::MatrixXd precision_minus_identity_;
  double log_det_;
};

double gaussian_copula_density(std::span<const double> u, const CholeskyFactor& factor);

// Rank correlations of the bivariate Gaussian copula and their inverses.
// All four throw DomainError outside [-1, 1].
double spearman_from_eta(double eta);
double kendall_from_eta(double eta);
double eta_from_spearman(double rho_s);
double eta_from_kendall(double tau);

enum class SampleKind { uniform, gain };

/// Row-major n x K draws.
struct SampleBatch {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  SampleKind kind = SampleKind::uniform;

  double operator()(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
  std::vector<double> column(std::size_t col) const;
};

/// Rows per independently seeded chunk in every sampler.
inline constexpr std::size_t kSampleChunkRows = 8192;

/// n i.i.d. draws from the Gaussian copula with matrix corr (repaired when
/// needed): V = A S with A A^T = R, then U_k = Phi(V_k). The output depends
/// only on (corr, n, seed).
SampleBatch sample_copula(const CorrelationMatrix& corr, std::size_t n, std::uint64_t seed,
                          unsigned threads = 0);

namespace detail {
/// Rows [chunk * kSampleChunkRows, ...) of the copula sampler, `rows` of them,
/// written row-major to out. `lower` is the (repaired) Cholesky factor.
void copula_chunk(const Eigen::MatrixXd& lower, std::uint64_t seed, std::size_t chunk,
                  std::size_t rows, double* out);
}  // namespace detail

/// Spearman correlation with average ranks for ties.
double empirical_spearman(std::span<const double> x, std::span<const double> y);
/// Kendall tau-b, O(n log n).
double empirical_kendall(std::span<const double> x, std::span<const double> y);

double empirical_spearman(const SampleBatch& batch, std::size_t col_a, std::size_t col_b);
double empirical_kendall(const SampleBatch& batch, std::size_t col_a, std::size_t col_b);

}  // namespace fascopula
