#include "fascopula/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fascopula/errors.hpp"
#include "fascopula/parallel.hpp"
#include "fascopula/rng.hpp"
#include "fascopula/specfun.hpp"

namespace fascopula {

namespace {

constexpr double kBoundaryEps = 1e-15;
constexpr std::uint64_t kCopulaStream = 0xc0b01a;

void check_unit_vector(std::span<const double> u, Eigen::Index dim, const char* who) {
  if (static_cast<Eigen::Index>(u.size()) != dim)
    throw DimensionMismatch(std::string(who) + ": expected " + std::to_string(dim) +
                            " components, got " + std::to_string(u.size()));
  for (double v : u) {
    if (!(v >= 0.0 && v <= 1.0))
      throw DomainError(std::string(who) + ": components must lie in [0, 1], got " +
                        std::to_string(v));
  }
}

void check_unit_interval(double x, const char* who) {
  if (!(x >= -1.0 && x <= 1.0))
    throw DomainError(std::string(who) + ": argument must lie in [-1, 1], got " +
                      std::to_string(x));
}

// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) rank[order[k]] = r;
    i = j;
  }
  return rank;
}

// Pairs tied within runs of equal values of a sorted sequence.
template <class It, class Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run = first + 1;
    while (run != last && eq(*run, *first)) ++run;
    const auto t = static_cast<std::int64_t>(run - first);
    total += t * (t - 1) / 2;
    first = run;
  }
  return total;
}

// Sorts v in place and returns the number of strictly inverted pairs.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("rank statistic: columns differ in length");
  if (x.size() < 2) throw DomainError("rank statistic: need at least two observations");
}

}  // namespace

double gaussian_copula_cdf(std::span<const double> u, const CorrelationMatrix& corr,
                           const MvnOptions& options) {
  check_unit_vector(u, corr.dim(), "gaussian_copula_cdf");
  std::vector<double> limits(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] == 0.0) return 0.0;
    limits[k] = specfun::std_normal_quantile(u[k], specfun::QuantileMode::extended);
  }
  return mvn_cdf(limits, corr, options).value;
}

GaussianCopulaDensity::GaussianCopulaDensity(const CholeskyFactor& factor) {
  InverseAndLogDet inv = inverse_and_logdet(factor);
  precision_minus_identity_ = std::move(inv.inverse);
  precision_minus_identity_.diagonal().array() -= 1.0;
  log_det_ = inv.log_det;
}

double GaussianCopulaDensity::log_density_scores(const Eigen::VectorXd& scores) const {
  if (scores.size() != dim()) throw DimensionMismatch("copula density: wrong score length");
  return -0.5 * scores.dot(precision_minus_identity_ * scores) - 0.5 * log_det_;
}

double GaussianCopulaDensity::log_density(std::span<const double> u) const {
  check_unit_vector(u, dim(), "gaussian_copula_density");
  Eigen::VectorXd scores(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) {
    const double v = u[static_cast<std::size_t>(k)];
    if (v == 0.0 || v == 1.0)
      throw DomainError("gaussian_copula_density: components must lie strictly inside (0, 1)");
    scores(k) = specfun::std_normal_quantile(std::clamp(v, kBoundaryEps, 1.0 - kBoundaryEps));
  }
  return log_density_scores(scores);
}

double GaussianCopulaDensity::operator()(std::span<const double> u) const {
  return std::exp(log_density(u));
}

double gaussian_copula_density(std::span<const double> u, const CholeskyFactor& factor) {
  return GaussianCopulaDensity(factor)(u);
}

double spearman_from_eta(double eta) {
  check_unit_interval(eta, "spearman_from_eta");
  return 6.0 / specfun::kPi * std::asin(0.5 * eta);
}

double kendall_from_eta(double eta) {
  check_unit_interval(eta, "kendall_from_eta");
  return 2.0 / specfun::kPi * std::asin(eta);
}

double eta_from_spearman(double rho_s) {
  check_unit_interval(rho_s, "eta_from_spearman");
  return 2.0 * std::sin(specfun::kPi * rho_s / 6.0);
}

double eta_from_kendall(double tau) {
  check_unit_interval(tau, "eta_from_kendall");
  return std::sin(0.5 * specfun::kPi * tau);
}

std::vector<double> SampleBatch::column(std::size_t col) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = values[r * cols + col];
  return out;
}

void detail::copula_chunk(const Eigen::MatrixXd& lower, std::uint64_t seed, std::size_t chunk,
                          std::size_t rows, double* out) {
  const Eigen::Index k = lower.rows();
  rng::NormalStream normal(rng::derive_seed(seed, kCopulaStream, chunk));
  Eigen::VectorXd s(k);
  for (std::size_t row = 0; row < rows; ++row, out += k) {
    for (Eigen::Index j = 0; j < k; ++j) s(j) = normal();
    for (Eigen::Index i = 0; i < k; ++i) {
      double v = 0.0;
      for (Eigen::Index j = 0; j <= i; ++j) v += lower(i, j) * s(j);
      out[i] = specfun::std_normal_cdf(v);
    }
  }
}

SampleBatch sample_copula(const CorrelationMatrix& corr, std::size_t n, std::uint64_t seed,
                          unsigned threads) {
  if (n < 1) throw DomainError("sample_copula: n must be positive");
  const CholeskyFactor factor = cholesky(corr, true);
  const Eigen::MatrixXd& a = factor.lower();
  const auto k = static_cast<std::size_t>(a.rows());

  SampleBatch batch;
  batch.rows = n;
  batch.cols = k;
  batch.seed = seed;
  batch.kind = SampleKind::uniform;
  batch.values.resize(n * k);

  const std::size_t chunks = (n + kSampleChunkRows - 1) / kSampleChunkRows;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t first = c * kSampleChunkRows;
    const std::size_t rows = std::min(n, first + kSampleChunkRows) - first;
    detail::copula_chunk(a, seed, c, rows, &batch.values[first * k]);
  });
  return batch;
}

double empirical_spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateColumn("empirical_spearman: constant column");
  return sxy / std::sqrt(sxx * syy);
}

double empirical_kendall(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  const auto same_x = [&](std::size_t a, std::size_t b) { return x[a] == x[b]; };
  const auto same_xy = [&](std::size_t a, std::size_t b) { return x[a] == x[b] && y[a] == y[b]; };
  const std::int64_t ties_x = tied_pairs(order.begin(), order.end(), same_x);
  const std::int64_t ties_xy = tied_pairs(order.begin(), order.end(), same_xy);

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  std::vector<double> scratch(n);
  const std::int64_t swaps = merge_count(ys, scratch, 0, n);
  const std::int64_t ties_y =
      tied_pairs(ys.begin(), ys.end(), [](double a, double b) { return a == b; });

  const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  if (ties_x == total || ties_y == total)
    throw DegenerateColumn("empirical_kendall: constant column");
  const double numer =
      static_cast<double>(total - ties_x - ties_y + ties_xy - 2 * swaps);
  const double denom = std::sqrt(static_cast<double>(total - ties_x)) *
                       std::sqrt(static_cast<double>(total - ties_y));
  return numer / denom;
}

double empirical_spearman(const SampleBatch& batch, std::size_t col_a, std::size_t col_b) {
  if (col_a >= batch.cols || col_b >= batch.cols)
    throw DimensionMismatch("empirical_spearman: column index out of range");
  return empirical_spearman(batch.column(col_a), batch.column(col_b));
}

double empirical_kendall(const SampleBatch& batch, std::size_t col_a, std::size_t col_b) {
  if (col_a >= batch.cols || col_b >= batch.cols)
    throw DimensionMismatch("empirical_kendall: column index out of range");
  return empirical_kendall(batch.column(col_a), batch.column(col_b));
}

}  // namespace fascopula
