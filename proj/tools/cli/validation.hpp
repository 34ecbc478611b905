#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fascopula/fas.hpp"
#include "fascopula/mvn.hpp"

namespace fascopula::cli {

/// Deliberate model defects for mutation smoke tests.
enum class Fault { none, j0_sign };

/// Jakes matrix as used by every command, after the optional fault (which
/// negates the off-diagonal Bessel values) and PSD repair.
JakesCorrelation model_correlation(const FasConfig& config, Fault fault);

struct ValidationSettings {
  bool quick = false;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  MvnOptions mvn;
  Fault fault = Fault::none;
};

struct CheckResult {
  std::string name;
  std::string detail;
  double measured = 0.0;  ///< the statistic compared against the bound
  double bound = 0.0;
  bool passed = false;
};

/// Copula-sampled best-port cdf against fas_cdf on `points` radii spread
/// between F(r)^K = 0.01 and F(r) = 0.99. measured = max |mc - exact| / se.
CheckResult check_copula_consistency(const FasConfig& config, double m, std::size_t n,
                                     std::size_t points, std::uint64_t seed,
                                     const ValidationSettings& settings);

/// Direct Jakes Monte Carlo OP (Rayleigh, mu = 1, 10 dB threshold) against the
/// analytic copula OP over 0..25 dB in 5 dB steps. measured = worst relative
/// error among points with analytic OP >= 1e-3.
CheckResult check_jakes_approximation(const FasConfig& config, std::size_t n,
                                      std::uint64_t seed, const ValidationSettings& settings);

/// Runs the dual-oracle consistency suite. `progress` is called after each
/// check completes.
std::vector<CheckResult> run_validation(const ValidationSettings& settings,
                                        const std::function<void(const CheckResult&)>& progress = {});

std::string validation_text(const std::vector<CheckResult>& checks);

}  // namespace fascopula::cli
