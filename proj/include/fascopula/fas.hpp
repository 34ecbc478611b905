#pragma once

#include "fascopula/copula.hpp"
#include "fascopula/linalg.hpp"
#include "fascopula/mvn.hpp"

namespace fascopula {

/// K ports spread evenly over a linear aperture of W wavelengths.
struct FasConfig {
  int num_ports = 1;
  double width = 1.0;

  /// Throws DomainError unless K >= 1 and W is positive and finite.
  void validate() const;
};

/// Single-port fading amplitude law.
class Marginal {
 public:
  virtual ~Marginal() = default;

  virtual double cdf(double r) const = 0;
  /// 1 - cdf(r) without cancellation in the upper tail.
  virtual double survival(double r) const = 0;
  virtual double pdf(double r) const = 0;
  /// Generalized inverse of cdf on [0, 1).
  virtual double quantile(double u) const = 0;
};

/// Nakagami-m amplitude: F(r) = P(m, m r^2 / mu).
class NakagamiMarginal final : public Marginal {
 public:
  /// Throws DomainError unless m >= 0.5 and mu > 0.
  NakagamiMarginal(double m, double mu);

  double m() const { return m_; }
  double mu() const { return mu_; }

  double cdf(double r) const override;
  double survival(double r) const override;
  double pdf(double r) const override;
  double quantile(double u) const override;

 private:
  double m_;
  double mu_;
  double log_norm_;
};

/// Jakes correlation J0(2 pi |k - l| W / (K - 1)) without any repair.
CorrelationMatrix jakes_raw(const FasConfig& config);

struct JakesCorrelation {
  CorrelationMatrix matrix;  ///< PSD-repaired when needed
  bool repaired = false;
};

JakesCorrelation jakes_correlation(const FasConfig& config);

/// Normal score of F(r) for the MVN limit, with F clamped to
/// [1e-15, 1 - 1e-15]; the upper half goes through the survival function.
double normal_score(const Marginal& marginal, double r);

/// P(max_k |h_k| <= r) under the Gaussian copula with matrix corr and
/// identical marginals. F(r) = 0 gives 0 and F(r) = 1 gives 1 without
/// touching the MVN engine; a 1 x 1 matrix returns F(r) exactly.
double fas_cdf(double r, const CorrelationMatrix& corr, const Marginal& marginal,
               const MvnOptions& options = {});
double fas_cdf(double r, const FasConfig& config, const Marginal& marginal,
               const MvnOptions& options = {});

/// Density of the best-port gain: f(r)^K times the copula density at the
/// constant vector F(r). Throws DomainError when F(r) is 0 or 1.
double fas_pdf(double r, const Marginal& marginal, const GaussianCopulaDensity& density);
double fas_pdf(double r, const CholeskyFactor& factor, const Marginal& marginal);
double fas_pdf(double r, const FasConfig& config, const Marginal& marginal);

/// Linear average SNR and linear threshold.
struct SnrParams {
  double gamma_bar = 1.0;
  double gamma_th = 1.0;

  /// sqrt(gamma_th / gamma_bar)
  double threshold() const;
};

/// Delay-outage inputs in SI units: bits, Hz, seconds.
struct DorParams {
  double data_bits = 1.0;
  double bandwidth_hz = 1.0;
  double deadline_s = 1.0;

  /// exp(R ln 2 / (B T)) - 1, the SNR below which delivery misses the deadline.
  double snr_threshold() const;
  /// sqrt(snr_threshold() / gamma_bar)
  double threshold(double gamma_bar) const;
};

double outage_probability(const SnrParams& snr, const CorrelationMatrix& corr,
                          const Marginal& marginal, const MvnOptions& options = {});
double outage_probability(const SnrParams& snr, const FasConfig& config,
                          const Marginal& marginal, const MvnOptions& options = {});

/// Same code path as outage_probability with gamma_th = dor.snr_threshold().
double delay_outage_rate(const DorParams& dor, double gamma_bar, const CorrelationMatrix& corr,
                         const Marginal& marginal, const MvnOptions& options = {});
double delay_outage_rate(const DorParams& dor, double gamma_bar, const FasConfig& config,
                         const Marginal& marginal, const MvnOptions& options = {});

}  // namespace fascopula
