#include "cli/validation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "fascopula/copula.hpp"
#include "fascopula/montecarlo.hpp"
#include "fascopula/rng.hpp"

namespace fascopula::cli {

namespace {

constexpr std::uint64_t kValidateStream = 0x7a11da7e;

double ks_statistic(std::vector<double> v, const Marginal& marginal) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = marginal.cdf(v[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

CheckResult make(std::string name, std::string detail, double measured, double bound) {
  return {std::move(name), std::move(detail), measured, bound, measured <= bound};
}

MvnOptions mvn_options(const ValidationSettings& s) {
  MvnOptions o = s.mvn;
  o.threads = s.threads;
  return o;
}

}  // namespace

JakesCorrelation model_correlation(const FasConfig& config, Fault fault) {
  if (fault == Fault::none) return jakes_correlation(config);
  Eigen::MatrixXd raw = jakes_raw(config).matrix();
  raw = -raw;
  raw.diagonal().setOnes();
  const CorrelationMatrix flipped(raw);
  CorrelationMatrix fixed = psd_repair(flipped);
  const bool repaired = !(fixed == flipped);
  return {std::move(fixed), repaired};
}

CheckResult check_copula_consistency(const FasConfig& config, double m, std::size_t n,
                                     std::size_t points, std::uint64_t seed,
                                     const ValidationSettings& s) {
  const NakagamiMarginal marginal(m, 1.0);
  const CorrelationMatrix corr = model_correlation(config, s.fault).matrix;
  const double lo = marginal.quantile(std::pow(0.01, 1.0 / config.num_ports));
  const double hi = marginal.quantile(0.99);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);

  const auto mc = copula_best_port_cdf(corr, marginal, grid, n, seed, s.threads);
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double exact = fas_cdf(grid[i], corr, marginal, mvn_options(s));
    worst = std::max(worst, std::fabs(mc[i].value - exact) / mc[i].std_err);
  }
  return make(fmt::format("copula-consistency K={} W={} m={}", config.num_ports, config.width, m),
              fmt::format("{} radii, n={}, max |mc - exact| in standard errors", points, n), worst,
              3.0);
}

CheckResult check_jakes_approximation(const FasConfig& config, std::size_t n, std::uint64_t seed,
                                      const ValidationSettings& s) {
  const NakagamiMarginal rayleigh(1.0, 1.0);
  const CorrelationMatrix corr = model_correlation(config, s.fault).matrix;
  const double gamma_th = 10.0;
  std::vector<double> thresholds;
  for (int db = 0; db <= 25; db += 5)
    thresholds.push_back(SnrParams{std::pow(10.0, db / 10.0), gamma_th}.threshold());
  const auto mc = jakes_direct_best_port_cdf(corr, 1.0, 1.0, thresholds, n, seed, s.threads);
  double worst = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double exact = fas_cdf(thresholds[i], corr, rayleigh, mvn_options(s));
    if (exact < 1e-3) continue;
    ++used;
    worst = std::max(worst, std::fabs(mc[i].value - exact) / exact);
  }
  return make(fmt::format("jakes-approximation K={} W={}", config.num_ports, config.width),
              fmt::format("{} SNR points with OP >= 1e-3, n={}, max relative OP error", used, n),
              worst, 0.15);
}

std::vector<CheckResult> run_validation(const ValidationSettings& s,
                                        const std::function<void(const CheckResult&)>& progress) {
  const std::size_t n_small = s.quick ? 20000 : 100000;
  const std::size_t n_cdf = s.quick ? 100000 : 1000000;
  const std::size_t n_tail = s.quick ? 1000000 : 10000000;
  const std::size_t points = s.quick ? 8 : 20;
  std::uint64_t index = 0;
  auto next_seed = [&] { return rng::derive_seed(s.seed, kValidateStream, index++); };

  std::vector<CheckResult> out;
  auto record = [&](CheckResult r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };

  {
    const NakagamiMarginal marginal(2.5, 1.4);
    const auto g = sample_fas_gains(model_correlation({1, 1.0}, s.fault).matrix, marginal, n_small,
                                    next_seed(), s.threads);
    record(make("copula-marginal", fmt::format("K=1 m=2.5 mu=1.4, n={}, KS statistic", n_small),
                ks_statistic(g.best, marginal), 1.95 / std::sqrt(static_cast<double>(n_small))));
  }

  const FasConfig close{2, 0.1};
  const JakesCorrelation close_corr = model_correlation(close, s.fault);
  const double eta = close_corr.matrix(0, 1);
  {
    const auto u = sample_copula(close_corr.matrix, n_small, next_seed(), s.threads);
    const double rho = empirical_spearman(u, 0, 1);
    record(make("copula-spearman",
                fmt::format("K=2 W=0.1, n={}, |empirical - analytic| (analytic {:.4f})", n_small,
                            spearman_from_eta(eta)),
                std::fabs(rho - spearman_from_eta(eta)), 0.01));
  }
  {
    const auto g = sample_jakes_direct(model_correlation({1, 1.0}, s.fault).matrix, 1.0, 1.0,
                                       n_small, next_seed(), s.threads);
    double mean = 0.0, sq = 0.0;
    for (double v : g.best) {
      mean += v * v;
      sq += v * v * v * v;
    }
    const double n = static_cast<double>(n_small);
    mean /= n;
    const double sd = std::sqrt(sq / n - mean * mean);
    record(make("jakes-marginal", fmt::format("K=1 m=1 mu=1, n={}, |mean power - mu|", n_small),
                std::fabs(mean - 1.0), 3.0 * sd / std::sqrt(n)));
  }
  {
    const auto g = sample_jakes_direct(close_corr.matrix, 1.0, 1.0, n_small, next_seed(), s.threads);
    std::vector<double> a = g.gains.column(0), b = g.gains.column(1);
    for (double& v : a) v *= v;
    for (double& v : b) v *= v;
    record(make("jakes-power-correlation",
                fmt::format("K=2 W=0.1 m=1, n={}, |pearson(power) - eta^2|", n_small),
                std::fabs(pearson(a, b) - eta * eta), 0.02));
  }
  {
    const NakagamiMarginal rayleigh(1.0, 1.0);
    const std::uint64_t seed = next_seed();
    const auto cop = scatter_pairs(close_corr.matrix, PairScale::gain, rayleigh, n_small, seed,
                                   PairSource::copula, s.threads);
    const auto jak = scatter_pairs(close_corr.matrix, PairScale::gain, rayleigh, n_small, seed,
                                   PairSource::jakes_direct, s.threads);
    auto tau = [](const std::vector<std::array<double, 2>>& p) {
      std::vector<double> x(p.size()), y(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        x[i] = p[i][0];
        y[i] = p[i][1];
      }
      return empirical_kendall(x, y);
    };
    const double tc = tau(cop);
    const double tj = tau(jak);
    record(make("jakes-copula-kendall",
                fmt::format("K=2 W=0.1 m=1, n={}, copula tau {:.4f} vs Jakes tau {:.4f}", n_small,
                            tc, tj),
                std::fabs(tc - tj), 0.03));
  }

  for (const auto& [k, w, m] : {std::tuple{2, 0.5, 1.0}, {4, 2.0, 1.0}, {3, 2.5, 3.0}})
    record(check_copula_consistency({k, w}, m, n_cdf, points, next_seed(), s));
  for (const auto& [k, w] : {std::pair{2, 0.5}, {2, 2.0}, {4, 2.0}})
    record(check_jakes_approximation({k, w}, n_tail, next_seed(), s));
  return out;
}

std::string validation_text(const std::vector<CheckResult>& checks) {
  std::string out;
  int failed = 0;
  for (const auto& c : checks) {
    out += fmt::format("{} {}: {} = {:.6g} (bound {:.6g})\n", c.passed ? "PASS" : "FAIL", c.name,
                       c.detail, c.measured, c.bound);
    failed += c.passed ? 0 : 1;
  }
  out += fmt::format("{} of {} checks passed\n", checks.size() - failed, checks.size());
  return out;
}

}  // namespace fascopula::cli
