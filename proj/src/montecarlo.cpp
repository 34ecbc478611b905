#include "fascopula/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fascopula/errors.hpp"
#include "fascopula/parallel.hpp"
#include "fascopula/rng.hpp"

namespace fascopula {

namespace {

constexpr std::uint64_t kJakesStream = 0x1a6e5;
// Largest double below 1; keeps quantile arguments inside [0, 1).
constexpr double kBelowOne = 1.0 - 0x1.0p-53;

std::size_t chunk_count(std::size_t n) { return (n + kSampleChunkRows - 1) / kSampleChunkRows; }

std::size_t chunk_rows(std::size_t n, std::size_t c) {
  const std::size_t first = c * kSampleChunkRows;
  return std::min(n, first + kSampleChunkRows) - first;
}

int gaussian_components(double m) {
  const double twice = 2.0 * m;
  if (!(m >= 0.5) || std::isinf(m) || twice != std::round(twice))
    throw UnsupportedShape("direct Jakes simulation needs 2m to be a positive integer, got m = " +
                           std::to_string(m));
  return static_cast<int>(twice);
}

void check_n(std::size_t n) {
  if (n < 1) throw DomainError("sample count must be positive");
}

// Gains of one chunk of the direct construction, row-major.
void jakes_chunk(const Eigen::MatrixXd& lower, int components, double scale, std::uint64_t seed,
                 std::size_t chunk, std::size_t rows, double* out) {
  const Eigen::Index k = lower.rows();
  rng::NormalStream normal(rng::derive_seed(seed, kJakesStream, chunk));
  Eigen::VectorXd s(k);
  Eigen::VectorXd power(k);
  for (std::size_t row = 0; row < rows; ++row, out += k) {
    power.setZero();
    for (int c = 0; c < components; ++c) {
      for (Eigen::Index j = 0; j < k; ++j) s(j) = normal();
      for (Eigen::Index i = 0; i < k; ++i) {
        double v = 0.0;
        for (Eigen::Index j = 0; j <= i; ++j) v += lower(i, j) * s(j);
        power(i) += v * v;
      }
    }
    for (Eigen::Index i = 0; i < k; ++i) out[i] = scale * std::sqrt(power(i));
  }
}

// Histogram of best-port values over the sorted thresholds; cumulative sums
// give the empirical cdf at every threshold.
class ThresholdCounter {
 public:
  explicit ThresholdCounter(std::span<const double> thresholds)
      : order_(thresholds.size()), sorted_(thresholds.size()) {
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(),
              [&](auto a, auto b) { return thresholds[a] < thresholds[b]; });
    for (std::size_t i = 0; i < order_.size(); ++i) sorted_[i] = thresholds[order_[i]];
  }

  std::size_t size() const { return sorted_.size(); }

  // Bin index: the first sorted threshold >= v (size() when none).
  std::size_t bin(double v) const {
    return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), v) -
                                    sorted_.begin());
  }

  std::vector<McEstimate> finish(const std::vector<std::uint64_t>& histogram,
                                 std::size_t n) const {
    std::vector<McEstimate> out(sorted_.size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
      running += histogram[i];
      const double p = static_cast<double>(running) / static_cast<double>(n);
      out[order_[i]] = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
    }
    return out;
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> sorted_;
};

template <class ChunkBest>
std::vector<McEstimate> streamed_cdf(std::span<const double> thresholds, std::size_t n,
                                     unsigned threads, ChunkBest&& chunk_best) {
  check_n(n);
  const ThresholdCounter counter(thresholds);
  const std::size_t chunks = chunk_count(n);
  std::vector<std::vector<std::uint64_t>> histograms(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<std::uint64_t> hist(counter.size() + 1, 0);
    for (double best : chunk_best(c, chunk_rows(n, c))) ++hist[counter.bin(best)];
    histograms[c] = std::move(hist);
  });
  std::vector<std::uint64_t> total(counter.size() + 1, 0);
  for (const auto& h : histograms)
    for (std::size_t i = 0; i < h.size(); ++i) total[i] += h[i];
  return counter.finish(total, n);
}

std::vector<double> row_max(const double* values, std::size_t rows, std::size_t cols) {
  std::vector<double> best(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = values + r * cols;
    best[r] = *std::max_element(row, row + cols);
  }
  return best;
}

CorrelationMatrix two_port_matrix(const FasConfig& config) {
  if (config.num_ports != 2) throw DimensionMismatch("scatter_pairs needs exactly two ports");
  return jakes_correlation(config).matrix;
}

}  // namespace

GainSamples sample_fas_gains(const CorrelationMatrix& corr, const Marginal& marginal,
                             std::size_t n, std::uint64_t seed, unsigned threads) {
  GainSamples out;
  out.gains = sample_copula(corr, n, seed, threads);
  out.gains.kind = SampleKind::gain;
  auto& values = out.gains.values;
  parallel_for(chunk_count(n), threads, [&](std::size_t c) {
    const std::size_t first = c * kSampleChunkRows * out.gains.cols;
    const std::size_t last = first + chunk_rows(n, c) * out.gains.cols;
    for (std::size_t i = first; i < last; ++i)
      values[i] = marginal.quantile(std::min(values[i], kBelowOne));
  });
  out.best = row_max(values.data(), n, out.gains.cols);
  return out;
}

GainSamples sample_fas_gains(const FasConfig& config, const Marginal& marginal, std::size_t n,
                             std::uint64_t seed, unsigned threads) {
  return sample_fas_gains(jakes_correlation(config).matrix, marginal, n, seed, threads);
}

GainSamples sample_jakes_direct(const CorrelationMatrix& corr, double m, double mu, std::size_t n,
                                std::uint64_t seed, unsigned threads) {
  const int components = gaussian_components(m);
  if (!(mu > 0.0) || std::isinf(mu)) throw DomainError("spread mu must be positive");
  check_n(n);
  const CholeskyFactor factor = cholesky(corr, true);
  const double scale = std::sqrt(mu / (2.0 * m));
  const auto k = static_cast<std::size_t>(corr.dim());

  GainSamples out;
  out.gains.rows = n;
  out.gains.cols = k;
  out.gains.seed = seed;
  out.gains.kind = SampleKind::gain;
  out.gains.values.resize(n * k);
  parallel_for(chunk_count(n), threads, [&](std::size_t c) {
    jakes_chunk(factor.lower(), components, scale, seed, c, chunk_rows(n, c),
                &out.gains.values[c * kSampleChunkRows * k]);
  });
  out.best = row_max(out.gains.values.data(), n, k);
  return out;
}

GainSamples sample_jakes_direct(const FasConfig& config, double m, double mu, std::size_t n,
                                std::uint64_t seed, unsigned threads) {
  return sample_jakes_direct(jakes_correlation(config).matrix, m, mu, n, seed, threads);
}

McEstimate estimate_exceedance(std::span<const double> samples, double threshold) {
  if (samples.size() < 100)
    throw DomainError("estimate_exceedance needs at least 100 samples, got " +
                      std::to_string(samples.size()));
  const auto hits = std::count_if(samples.begin(), samples.end(),
                                  [threshold](double v) { return v <= threshold; });
  const double n = static_cast<double>(samples.size());
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), samples.size()};
}

std::vector<McEstimate> copula_best_port_cdf(const CorrelationMatrix& corr,
                                             const Marginal& marginal,
                                             std::span<const double> thresholds, std::size_t n,
                                             std::uint64_t seed, unsigned threads) {
  const CholeskyFactor factor = cholesky(corr, true);
  const auto k = static_cast<std::size_t>(corr.dim());
  return streamed_cdf(thresholds, n, threads, [&](std::size_t c, std::size_t rows) {
    std::vector<double> u(rows * k);
    detail::copula_chunk(factor.lower(), seed, c, rows, u.data());
    std::vector<double> best(rows);
    // the quantile is increasing, so one inversion of the largest uniform suffices
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = &u[r * k];
      best[r] = marginal.quantile(std::min(*std::max_element(row, row + k), kBelowOne));
    }
    return best;
  });
}

std::vector<McEstimate> jakes_direct_best_port_cdf(const CorrelationMatrix& corr, double m,
                                                   double mu, std::span<const double> thresholds,
                                                   std::size_t n, std::uint64_t seed,
                                                   unsigned threads) {
  const int components = gaussian_components(m);
  if (!(mu > 0.0) || std::isinf(mu)) throw DomainError("spread mu must be positive");
  const CholeskyFactor factor = cholesky(corr, true);
  const double scale = std::sqrt(mu / (2.0 * m));
  const auto k = static_cast<std::size_t>(corr.dim());
  return streamed_cdf(thresholds, n, threads, [&](std::size_t c, std::size_t rows) {
    std::vector<double> gains(rows * k);
    jakes_chunk(factor.lower(), components, scale, seed, c, rows, gains.data());
    return row_max(gains.data(), rows, k);
  });
}

std::vector<std::array<double, 2>> scatter_pairs(const CorrelationMatrix& corr, PairScale scale,
                                                 const NakagamiMarginal& marginal, std::size_t n,
                                                 std::uint64_t seed, PairSource source,
                                                 unsigned threads) {
  if (corr.dim() != 2) throw DimensionMismatch("scatter_pairs needs a 2 x 2 matrix");
  SampleBatch batch;
  if (source == PairSource::copula) {
    batch = scale == PairScale::uniform
                ? sample_copula(corr, n, seed, threads)
                : sample_fas_gains(corr, marginal, n, seed, threads).gains;
  } else {
    batch = sample_jakes_direct(corr, marginal.m(), marginal.mu(), n, seed, threads).gains;
    if (scale == PairScale::uniform) {
      for (double& v : batch.values) v = marginal.cdf(v);
    }
  }
  std::vector<std::array<double, 2>> pairs(n);
  for (std::size_t r = 0; r < n; ++r) pairs[r] = {batch(r, 0), batch(r, 1)};
  return pairs;
}

std::vector<std::array<double, 2>> scatter_pairs(const FasConfig& config, PairScale scale,
                                                 const NakagamiMarginal& marginal, std::size_t n,
                                                 std::uint64_t seed, PairSource source,
                                                 unsigned threads) {
  return scatter_pairs(two_port_matrix(config), scale, marginal, n, seed, source, threads);
}

}  // namespace fascopula
