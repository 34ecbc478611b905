#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fascopula/copula.hpp"
#include "fascopula/errors.hpp"
#include "fascopula/specfun.hpp"

using fascopula::CorrelationMatrix;
using fascopula::gaussian_copula_cdf;
using fascopula::SampleBatch;
namespace sf = fascopula::specfun;

namespace {

CorrelationMatrix pair_matrix(double rho) { return CorrelationMatrix::equicorrelated(2, rho); }

// O(n^2) tau-b straight from the definition.
double kendall_brute(const std::vector<double>& x, const std::vector<double>& y) {
  long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ++tie_x;
      } else if (dy == 0.0) {
        ++tie_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n1 = static_cast<double>(concordant + discordant + tie_x);
  const double n2 = static_cast<double>(concordant + discordant + tie_y);
  return static_cast<double>(concordant - discordant) / std::sqrt(n1 * n2);
}

// Mid-ranks by counting, then Pearson.
double spearman_brute(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max(d, std::max((i + 1) / n - v[i], v[i] - i / n));
  }
  return d;
}

}  // namespace

TEST_SUITE("copula") {

TEST_CASE("copula cdf examples") {
  for (double rho : {-0.8, 0.0, 0.5, 0.99}) {
    const double u[] = {0.3, 1.0};
    CHECK(gaussian_copula_cdf(u, pair_matrix(rho)) == doctest::Approx(0.3).epsilon(1e-14));
    const double z[] = {0.0, 0.6};
    CHECK(gaussian_copula_cdf(z, pair_matrix(rho)) == 0.0);
  }
  const double u[] = {0.3, 0.7};
  CHECK(std::fabs(gaussian_copula_cdf(u, CorrelationMatrix::identity(2)) - 0.21) < 1e-12);
  const double half[] = {0.5, 0.5};
  CHECK(std::fabs(gaussian_copula_cdf(half, pair_matrix(0.5)) - 1.0 / 3.0) < 5e-5);
  const double all_one[] = {1.0, 1.0, 1.0};
  CHECK(gaussian_copula_cdf(all_one, CorrelationMatrix::equicorrelated(3, 0.4)) == 1.0);
}

TEST_CASE("copula cdf respects Frechet bounds and is monotone") {
  for (double rho : {-0.95, -0.4, 0.0, 0.3, 0.9037, 0.999}) {
    const CorrelationMatrix r = pair_matrix(rho);
    for (double u1 = 0.05; u1 < 1.0; u1 += 0.15) {
      double prev = 0.0;
      for (double u2 = 0.05; u2 < 1.0; u2 += 0.15) {
        const double u[] = {u1, u2};
        const double c = gaussian_copula_cdf(u, r);
        CHECK(c >= std::max(u1 + u2 - 1.0, 0.0) - 1e-12);
        CHECK(c <= std::min(u1, u2) + 1e-12);
        CHECK(c >= prev - 1e-14);  // saturated values may differ in the last bit
        prev = c;
      }
    }
  }
}

TEST_CASE("copula cdf argument errors") {
  const double bad[] = {0.2, 1.2};
  CHECK_THROWS_AS(gaussian_copula_cdf(bad, pair_matrix(0.1)), fascopula::DomainError);
  const double three[] = {0.2, 0.3, 0.4};
  CHECK_THROWS_AS(gaussian_copula_cdf(three, pair_matrix(0.1)), fascopula::DimensionMismatch);
}

TEST_CASE("copula density examples") {
  const auto indep = fascopula::cholesky(CorrelationMatrix::identity(3));
  const fascopula::GaussianCopulaDensity c_indep(indep);
  for (double a : {0.01, 0.4, 0.93}) {
    const double u[] = {a, 0.5, 1.0 - a};
    CHECK(c_indep(u) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const double half[] = {0.5, 0.5};
  CHECK(std::fabs(fascopula::gaussian_copula_density(half, fascopula::cholesky(pair_matrix(0.5))) -
                  1.0 / std::sqrt(0.75)) < 1e-9);
}

TEST_CASE("copula density integrates to one") {
  // Over normal scores: int int c(Phi(x), Phi(y)) phi(x) phi(y) dx dy.
  for (double rho : {-0.6, 0.5, 0.9}) {
    const fascopula::GaussianCopulaDensity c(fascopula::cholesky(pair_matrix(rho)));
    const int n = 600;
    const double lo = -9.0;
    const double h = 18.0 / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo + (i + 0.5) * h;
      for (int j = 0; j < n; ++j) {
        const double y = lo + (j + 0.5) * h;
        const double u[] = {sf::std_normal_cdf(x), sf::std_normal_cdf(y)};
        if (u[0] <= 0.0 || u[0] >= 1.0 || u[1] <= 0.0 || u[1] >= 1.0) continue;
        total += c(u) * sf::std_normal_pdf(x) * sf::std_normal_pdf(y);
      }
    }
    CHECK(std::fabs(total * h * h - 1.0) < 1e-3);
  }
}

TEST_CASE("copula density matches mixed difference of the cdf") {
  const double h = 1e-4;
  for (double rho : {-0.5, 0.3, 0.8}) {
    const CorrelationMatrix r = pair_matrix(rho);
    const fascopula::GaussianCopulaDensity c(fascopula::cholesky(r));
    for (double a : {0.2, 0.45, 0.7}) {
      for (double b : {0.15, 0.6, 0.85}) {
        auto cdf = [&](double x, double y) {
          const double u[] = {x, y};
          return gaussian_copula_cdf(u, r);
        };
        const double fd =
            (cdf(a + h, b + h) - cdf(a + h, b - h) - cdf(a - h, b + h) + cdf(a - h, b - h)) /
            (4.0 * h * h);
        const double u[] = {a, b};
        CHECK(fd == doctest::Approx(c(u)).epsilon(1e-3));
      }
    }
  }
}

TEST_CASE("copula density errors") {
  const fascopula::GaussianCopulaDensity c(fascopula::cholesky(pair_matrix(0.2)));
  const double edge[] = {0.0, 0.5};
  CHECK_THROWS_AS(c(edge), fascopula::DomainError);
  const double top[] = {0.5, 1.0};
  CHECK_THROWS_AS(c(top), fascopula::DomainError);
  const double tiny[] = {1e-300, 0.5};
  CHECK(std::isfinite(c(tiny)));
  CHECK_THROWS_AS(fascopula::GaussianCopulaDensity(fascopula::cholesky(pair_matrix(1.0), false)),
                  fascopula::SingularMatrix);
}

TEST_CASE("rank correlation transforms") {
  CHECK(std::fabs(fascopula::spearman_from_eta(0.90) - 0.8915) < 1e-4);
  CHECK(std::fabs(fascopula::kendall_from_eta(0.90) - 0.7129) < 1e-4);
  // two-decimal printed values
  CHECK(std::fabs(fascopula::spearman_from_eta(0.90) - 0.89) < 0.015);
  CHECK(std::fabs(fascopula::kendall_from_eta(0.90) - 0.72) < 0.015);
  CHECK(fascopula::spearman_from_eta(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fascopula::kendall_from_eta(1.0) == 1.0);
  CHECK(fascopula::spearman_from_eta(0.0) == 0.0);
  CHECK(fascopula::kendall_from_eta(0.0) == 0.0);
  for (double eta = -1.0; eta <= 1.0; eta += 0.01) {
    CHECK(std::fabs(fascopula::eta_from_spearman(fascopula::spearman_from_eta(eta)) - eta) < 1e-12);
    CHECK(std::fabs(fascopula::eta_from_kendall(fascopula::kendall_from_eta(eta)) - eta) < 1e-12);
    CHECK(fascopula::spearman_from_eta(-eta) == -fascopula::spearman_from_eta(eta));
    CHECK(fascopula::kendall_from_eta(-eta) == -fascopula::kendall_from_eta(eta));
  }
  CHECK_THROWS_AS(fascopula::spearman_from_eta(1.1), fascopula::DomainError);
  CHECK_THROWS_AS(fascopula::kendall_from_eta(-1.01), fascopula::DomainError);
  CHECK_THROWS_AS(fascopula::eta_from_spearman(2.0), fascopula::DomainError);
  CHECK_THROWS_AS(fascopula::eta_from_kendall(std::nan("")), fascopula::DomainError);
}

TEST_CASE("empirical rank statistics") {
  std::vector<double> x(50), rev(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = i * 0.37;
    rev[i] = -x[i];
  }
  CHECK(fascopula::empirical_spearman(x, x) == doctest::Approx(1.0));
  CHECK(fascopula::empirical_kendall(x, x) == doctest::Approx(1.0));
  CHECK(fascopula::empirical_spearman(x, rev) == doctest::Approx(-1.0));
  CHECK(fascopula::empirical_kendall(x, rev) == doctest::Approx(-1.0));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coarse(0, 6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(300), b(300);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = trial % 2 ? coarse(rng) : normal(rng);
      b[i] = coarse(rng) + 0.3 * a[i];
    }
    CHECK(fascopula::empirical_kendall(a, b) == doctest::Approx(kendall_brute(a, b)).epsilon(1e-12));
    CHECK(fascopula::empirical_spearman(a, b) == doctest::Approx(spearman_brute(a, b)).epsilon(1e-12));
  }

  const std::vector<double> flat(10, 2.0);
  const std::vector<double> head(x.begin(), x.begin() + 10);
  CHECK_THROWS_AS(fascopula::empirical_kendall(head, flat), fascopula::DegenerateColumn);
  CHECK_THROWS_AS(fascopula::empirical_spearman(flat, head), fascopula::DegenerateColumn);
  CHECK_THROWS_AS(fascopula::empirical_kendall(std::vector<double>{1.0}, std::vector<double>{1.0}),
                  fascopula::DomainError);
}

TEST_CASE("copula sampler margins are uniform") {
  const std::size_t n = 100000;
  const SampleBatch batch = fascopula::sample_copula(CorrelationMatrix::identity(3), n, 2024);
  CHECK(batch.rows == n);
  CHECK(batch.cols == 3);
  CHECK(batch.kind == fascopula::SampleKind::uniform);
  for (double v : batch.values) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
  for (std::size_t c = 0; c < 3; ++c) CHECK(ks_uniform(batch.column(c)) < 1.95 / std::sqrt(double(n)));
}

TEST_CASE("copula sampler rank correlation") {
  const std::size_t n = 100000;
  const SampleBatch strong = fascopula::sample_copula(pair_matrix(0.90), n, 7);
  CHECK(std::fabs(fascopula::empirical_spearman(strong, 0, 1) - 0.8915) < 0.01);
  const SampleBatch indep = fascopula::sample_copula(pair_matrix(0.0), n, 8);
  CHECK(std::fabs(fascopula::empirical_kendall(indep, 0, 1)) < 0.01);
  const SampleBatch mild = fascopula::sample_copula(pair_matrix(0.3), n, 9);
  CHECK(std::fabs(fascopula::empirical_kendall(mild, 0, 1) - 0.1940) < 0.01);
}

TEST_CASE("rank statistics survive a monotone marginal map") {
  const SampleBatch batch = fascopula::sample_copula(pair_matrix(0.6), 20000, 5);
  std::vector<double> a = batch.column(0), b = batch.column(1);
  const double s0 = fascopula::empirical_spearman(a, b);
  const double k0 = fascopula::empirical_kendall(a, b);
  // Nakagami(m = 2.5, mu = 1.7) quantile
  for (auto* col : {&a, &b}) {
    for (double& v : *col) v = std::sqrt(1.7 / 2.5 * sf::inv_reg_lower_inc_gamma(2.5, v));
  }
  CHECK(fascopula::empirical_spearman(a, b) == doctest::Approx(s0).epsilon(1e-12));
  CHECK(fascopula::empirical_kendall(a, b) == doctest::Approx(k0).epsilon(1e-12));
}

TEST_CASE("copula sampler is deterministic across thread counts") {
  const CorrelationMatrix r = CorrelationMatrix::equicorrelated(4, 0.35);
  const SampleBatch one = fascopula::sample_copula(r, 30000, 99, 1);
  const SampleBatch many = fascopula::sample_copula(r, 30000, 99, 4);
  CHECK(one.values == many.values);
  CHECK(one.seed == 99);
  const SampleBatch other = fascopula::sample_copula(r, 30000, 100, 1);
  CHECK(one.values != other.values);
  // a shorter run is a prefix of a longer one
  const SampleBatch prefix = fascopula::sample_copula(r, 10000, 99, 2);
  CHECK(std::equal(prefix.values.begin(), prefix.values.end(), one.values.begin()));
  CHECK_THROWS_AS(fascopula::sample_copula(r, 0, 1), fascopula::DomainError);
}

}  // TEST_SUITE
