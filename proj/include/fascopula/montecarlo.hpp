#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fascopula/copula.hpp"
#include "fascopula/fas.hpp"

namespace fascopula {

/// Binomial proportion with std_err = sqrt(value (1 - value) / n).
struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
};

/// Per-port gains (gain kind) plus the best-port gain of every row.
struct GainSamples {
  SampleBatch gains;
  std::vector<double> best;
};

/// Copula draws mapped column-wise through marginal.quantile.
GainSamples sample_fas_gains(const CorrelationMatrix& corr, const Marginal& marginal,
                             std::size_t n, std::uint64_t seed, unsigned threads = 0);
GainSamples sample_fas_gains(const FasConfig& config, const Marginal& marginal, std::size_t n,
                             std::uint64_t seed, unsigned threads = 0);

/// Nakagami gains built directly from Gaussians: 2m independent real vectors
/// with covariance corr * mu / (2m), gain = root of the sum of squares. Not
/// routed through the copula. Throws UnsupportedShape unless 2m is a
/// positive integer.
GainSamples sample_jakes_direct(const CorrelationMatrix& corr, double m, double mu, std::size_t n,
                                std::uint64_t seed, unsigned threads = 0);
GainSamples sample_jakes_direct(const FasConfig& config, double m, double mu, std::size_t n,
                                std::uint64_t seed, unsigned threads = 0);

/// Fraction of samples <= threshold. Throws DomainError for fewer than 100.
McEstimate estimate_exceedance(std::span<const double> samples, double threshold);

// Streaming versions of sample-then-estimate for large n: one estimate per
// threshold, same draws as the samplers above for equal (n, seed), with
// memory independent of n.
std::vector<McEstimate> copula_best_port_cdf(const CorrelationMatrix& corr,
                                             const Marginal& marginal,
                                             std::span<const double> thresholds, std::size_t n,
                                             std::uint64_t seed, unsigned threads = 0);
std::vector<McEstimate> jakes_direct_best_port_cdf(const CorrelationMatrix& corr, double m,
                                                   double mu, std::span<const double> thresholds,
                                                   std::size_t n, std::uint64_t seed,
                                                   unsigned threads = 0);

enum class PairSource { copula, jakes_direct };
enum class PairScale { uniform, gain };

/// n (port 1, port 2) pairs of a two-port system, either as uniforms or as
/// Nakagami gains. The jakes_direct source needs 2m integral; its uniform
/// scale applies the analytic marginal cdf to the gains.
std::vector<std::array<double, 2>> scatter_pairs(const CorrelationMatrix& corr, PairScale scale,
                                                 const NakagamiMarginal& marginal, std::size_t n,
                                                 std::uint64_t seed, PairSource source,
                                                 unsigned threads = 0);
std::vector<std::array<double, 2>> scatter_pairs(const FasConfig& config, PairScale scale,
                                                 const NakagamiMarginal& marginal, std::size_t n,
                                                 std::uint64_t seed, PairSource source,
                                                 unsigned threads = 0);

}  // namespace fascopula
