#include "fascopula/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fascopula/errors.hpp"

namespace fascopula {

namespace {

constexpr double kSnapTol = 1e-12;
constexpr double kNegativePivotTol = 1e-10;
// Pivots at or below this trigger repair when it is enabled.
constexpr double kRepairPivot = 1e-10;

enum class FactorStatus { ok, semidefinite, indefinite };

FactorStatus factor_lower(const Eigen::MatrixXd& m, Eigen::MatrixXd& lower) {
  const Eigen::Index n = m.rows();
  lower.setZero(n, n);
  FactorStatus status = FactorStatus::ok;
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (pivot < -kNegativePivotTol) return FactorStatus::indefinite;
    if (pivot <= kRepairPivot) status = FactorStatus::semidefinite;
    if (pivot <= 0.0) continue;  // zero column
    const double d = std::sqrt(pivot);
    lower(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / d;
    }
  }
  return status;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n)
    throw DimensionMismatch("correlation matrix must be square and non-empty");
  if (!entries_.allFinite()) throw DomainError("correlation matrix has non-finite entries");
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::fabs(entries_(k, k) - 1.0) > kSnapTol)
      throw DomainError("correlation matrix diagonal must be 1 (entry " + std::to_string(k) + ")");
    entries_(k, k) = 1.0;
    for (Eigen::Index l = 0; l < k; ++l) {
      const double a = entries_(k, l);
      const double b = entries_(l, k);
      if (std::fabs(a - b) > kSnapTol) throw DomainError("correlation matrix is not symmetric");
      double v = 0.5 * (a + b);
      if (std::fabs(v) > 1.0 + kSnapTol) throw DomainError("correlation entry outside [-1, 1]");
      v = std::clamp(v, -1.0, 1.0);
      entries_(k, l) = v;
      entries_(l, k) = v;
    }
  }
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index dim) {
  return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

CorrelationMatrix CorrelationMatrix::equicorrelated(Eigen::Index dim, double rho) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, rho);
  m.diagonal().setOnes();
  return CorrelationMatrix(std::move(m));
}

CorrelationMatrix CorrelationMatrix::submatrix(std::span<const Eigen::Index> indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) sub(a, b) = entries_(indices[a], indices[b]);
  }
  return CorrelationMatrix(std::move(sub));
}

CorrelationMatrix psd_repair(const CorrelationMatrix& m, double eigen_floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.matrix());
  Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() >= eigen_floor) return m;

  values = values.cwiseMax(eigen_floor);
  const Eigen::MatrixXd& vectors = eig.eigenvectors();
  Eigen::MatrixXd rebuilt = vectors * values.asDiagonal() * vectors.transpose();
  const Eigen::VectorXd scale = rebuilt.diagonal().cwiseSqrt().cwiseInverse();
  rebuilt = scale.asDiagonal() * rebuilt * scale.asDiagonal();
  rebuilt = 0.5 * (rebuilt + rebuilt.transpose()).eval();
  rebuilt.diagonal().setOnes();
  rebuilt = rebuilt.cwiseMax(-1.0).cwiseMin(1.0);
  return CorrelationMatrix(std::move(rebuilt));
}

CholeskyFactor cholesky(const CorrelationMatrix& m, bool repair) {
  Eigen::MatrixXd lower;
  const FactorStatus status = factor_lower(m.matrix(), lower);
  if (status == FactorStatus::ok) return CholeskyFactor(std::move(lower), m, false);
  if (!repair) {
    if (status == FactorStatus::indefinite)
      throw NotPositiveSemidefinite("cholesky: pivot below -1e-10 and repair disabled");
    return CholeskyFactor(std::move(lower), m, false);
  }
  CorrelationMatrix fixed = psd_repair(m);
  if (factor_lower(fixed.matrix(), lower) == FactorStatus::indefinite)
    throw NotPositiveSemidefinite("cholesky: matrix still indefinite after repair");
  // psd_repair leaves an already-PSD matrix untouched; that is not a repair.
  const bool changed = !(fixed == m);
  return CholeskyFactor(std::move(lower), std::move(fixed), changed);
}

InverseAndLogDet inverse_and_logdet(const CholeskyFactor& factor) {
  const Eigen::MatrixXd& lower = factor.lower();
  const Eigen::Index n = lower.rows();
  double log_det = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lower(k, k) < 1e-12) throw SingularMatrix("inverse_and_logdet: factor diagonal below 1e-12");
    log_det += 2.0 * std::log(lower(k, k));
  }
  const auto tri = lower.triangularView<Eigen::Lower>();
  Eigen::MatrixXd linv = tri.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd inverse = linv.transpose() * linv;
  inverse = 0.5 * (inverse + inverse.transpose()).eval();
  return {std::move(inverse), log_det};
}

}  // namespace fascopula
