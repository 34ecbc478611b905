#include "fascopula/fas.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fascopula/errors.hpp"
#include "fascopula/specfun.hpp"

namespace fascopula {

namespace {

constexpr double kClamp = 1e-15;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isinf(v))
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
}

}  // namespace

void FasConfig::validate() const {
  if (num_ports < 1) throw DomainError("FasConfig: num_ports must be >= 1");
  require_positive(width, "FasConfig: width");
}

NakagamiMarginal::NakagamiMarginal(double m, double mu) : m_(m), mu_(mu) {
  if (!(m >= 0.5) || std::isinf(m))
    throw DomainError("Nakagami shape m must be >= 0.5, got " + std::to_string(m));
  require_positive(mu, "Nakagami spread mu");
  log_norm_ = std::log(2.0) + m * std::log(m) - std::lgamma(m) - m * std::log(mu);
}

double NakagamiMarginal::cdf(double r) const {
  if (std::isnan(r)) throw DomainError("Nakagami cdf: NaN argument");
  if (r <= 0.0) return 0.0;
  return specfun::reg_lower_inc_gamma(m_, m_ * r * r / mu_);
}

double NakagamiMarginal::survival(double r) const {
  if (std::isnan(r)) throw DomainError("Nakagami survival: NaN argument");
  if (r <= 0.0) return 1.0;
  return specfun::reg_upper_inc_gamma(m_, m_ * r * r / mu_);
}

double NakagamiMarginal::pdf(double r) const {
  if (std::isnan(r)) throw DomainError("Nakagami pdf: NaN argument");
  if (r < 0.0 || std::isinf(r)) return 0.0;
  if (r == 0.0) return m_ == 0.5 ? std::exp(log_norm_) : 0.0;
  return std::exp(log_norm_ + (2.0 * m_ - 1.0) * std::log(r) - m_ * r * r / mu_);
}

double NakagamiMarginal::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0))
    throw DomainError("Nakagami quantile: u must lie in [0, 1), got " + std::to_string(u));
  if (u == 0.0) return 0.0;
  return std::sqrt(mu_ / m_ * specfun::inv_reg_lower_inc_gamma(m_, u));
}

CorrelationMatrix jakes_raw(const FasConfig& config) {
  config.validate();
  const int k = config.num_ports;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
  if (k == 1) return CorrelationMatrix(std::move(m));
  const double step = 2.0 * specfun::kPi * config.width / (k - 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      const double v = specfun::bessel_j0(step * (i - j));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return CorrelationMatrix(std::move(m));
}

JakesCorrelation jakes_correlation(const FasConfig& config) {
  CorrelationMatrix raw = jakes_raw(config);
  CorrelationMatrix fixed = psd_repair(raw);
  const bool repaired = !(fixed == raw);
  return {std::move(fixed), repaired};
}

double normal_score(const Marginal& marginal, double r) {
  const double f = marginal.cdf(r);
  if (f <= 0.5) return specfun::std_normal_quantile(std::max(f, kClamp));
  return -specfun::std_normal_quantile(std::max(marginal.survival(r), kClamp));
}

double fas_cdf(double r, const CorrelationMatrix& corr, const Marginal& marginal,
               const MvnOptions& options) {
  if (!(r >= 0.0)) throw DomainError("fas_cdf: r must be non-negative, got " + std::to_string(r));
  const double f = marginal.cdf(r);
  if (f <= 0.0) return 0.0;
  if (f >= 1.0 || marginal.survival(r) <= 0.0) return 1.0;
  if (corr.dim() == 1) return f;
  const std::vector<double> limits(static_cast<std::size_t>(corr.dim()), normal_score(marginal, r));
  return mvn_cdf(limits, corr, options).value;
}

double fas_cdf(double r, const FasConfig& config, const Marginal& marginal,
               const MvnOptions& options) {
  return fas_cdf(r, jakes_correlation(config).matrix, marginal, options);
}

double fas_pdf(double r, const Marginal& marginal, const GaussianCopulaDensity& density) {
  if (!(r > 0.0) || std::isinf(r))
    throw DomainError("fas_pdf: r must be positive and finite, got " + std::to_string(r));
  if (marginal.cdf(r) <= 0.0 || marginal.survival(r) <= 0.0)
    throw DomainError("fas_pdf: marginal cdf is 0 or 1 at r = " + std::to_string(r));
  const double f = marginal.pdf(r);
  if (f <= 0.0) return 0.0;
  const auto k = density.dim();
  if (k == 1) return f;
  const Eigen::VectorXd scores = Eigen::VectorXd::Constant(k, normal_score(marginal, r));
  return std::exp(static_cast<double>(k) * std::log(f) + density.log_density_scores(scores));
}

double fas_pdf(double r, const CholeskyFactor& factor, const Marginal& marginal) {
  return fas_pdf(r, marginal, GaussianCopulaDensity(factor));
}

double fas_pdf(double r, const FasConfig& config, const Marginal& marginal) {
  return fas_pdf(r, cholesky(jakes_correlation(config).matrix), marginal);
}

double SnrParams::threshold() const {
  require_positive(gamma_bar, "average SNR");
  if (!(gamma_th >= 0.0) || std::isinf(gamma_th))
    throw DomainError("SNR threshold must be non-negative and finite, got " + std::to_string(gamma_th));
  return std::sqrt(gamma_th / gamma_bar);
}

double DorParams::snr_threshold() const {
  require_positive(data_bits, "data size");
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  require_positive(deadline_s, "deadline");
  return std::expm1(data_bits * std::log(2.0) / (bandwidth_hz * deadline_s));
}

double DorParams::threshold(double gamma_bar) const {
  return SnrParams{gamma_bar, snr_threshold()}.threshold();
}

double outage_probability(const SnrParams& snr, const CorrelationMatrix& corr,
                          const Marginal& marginal, const MvnOptions& options) {
  return fas_cdf(snr.threshold(), corr, marginal, options);
}

double outage_probability(const SnrParams& snr, const FasConfig& config,
                          const Marginal& marginal, const MvnOptions& options) {
  return outage_probability(snr, jakes_correlation(config).matrix, marginal, options);
}

double delay_outage_rate(const DorParams& dor, double gamma_bar, const CorrelationMatrix& corr,
                         const Marginal& marginal, const MvnOptions& options) {
  return outage_probability(SnrParams{gamma_bar, dor.snr_threshold()}, corr, marginal, options);
}

double delay_outage_rate(const DorParams& dor, double gamma_bar, const FasConfig& config,
                         const Marginal& marginal, const MvnOptions& options) {
  return delay_outage_rate(dor, gamma_bar, jakes_correlation(config).matrix, marginal, options);
}

}  // namespace fascopula
