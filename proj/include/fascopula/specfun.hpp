#pragma once

// Scalar special functions used by the copula and fading-channel formulas.
// All functions are pure and safe to call concurrently.

namespace fascopula::specfun {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kPi = 3.14159265358979323846;

double erf(double x);
double erfc(double x);

/// Inverse error function on (-1, 1). Throws DomainError for |p| >= 1.
double erfinv(double p);

/// Phi(x) = (1 + erf(x / sqrt 2)) / 2, evaluated through erfc so the lower
/// tail keeps relative precision.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

enum class QuantileMode {
  strict,    ///< u must lie strictly inside (0, 1)
  extended,  ///< u = 0 maps to -inf and u = 1 to +inf
};

/// Standard normal quantile, sqrt(2) * erfinv(2u - 1).
double std_normal_quantile(double u, QuantileMode mode = QuantileMode::strict);

/// Zero-order Bessel function of the first kind.
double bessel_j0(double x);

/// P(a, x) = gamma(a, x) / Gamma(a). Requires a > 0 and x >= 0.
double reg_lower_inc_gamma(double a, double x);

/// Q(a, x) = 1 - P(a, x), computed without cancellation.
double reg_upper_inc_gamma(double a, double x);

/// Solves P(a, x) = p for x. Requires a > 0 and 0 <= p < 1.
double inv_reg_lower_inc_gamma(double a, double p);

}  // namespace fascopula::specfun
