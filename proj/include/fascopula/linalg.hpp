#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>

namespace fascopula {

/// Symmetric, unit-diagonal matrix with off-diagonal entries in [-1, 1].
///
/// Construction validates the shape and entries and snaps round-off level
/// asymmetry (<= 1e-12) so the stored matrix is exactly symmetric. Positive
/// semidefiniteness is not checked here; see psd_repair() and cholesky().
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Eigen::MatrixXd entries);

  static CorrelationMatrix identity(Eigen::Index dim);
  /// All off-diagonal entries equal to rho.
  static CorrelationMatrix equicorrelated(Eigen::Index dim, double rho);

  Eigen::Index dim() const { return entries_.rows(); }
  double operator()(Eigen::Index k, Eigen::Index l) const { return entries_(k, l); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  /// Principal submatrix over the given (distinct) indices.
  CorrelationMatrix submatrix(std::span<const Eigen::Index> indices) const;

  friend bool operator==(const CorrelationMatrix& a, const CorrelationMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Eigen::MatrixXd entries_;
};

/// Lower-triangular A with A * A^T equal to the (possibly repaired) source.
class CholeskyFactor {
 public:
  CholeskyFactor(Eigen::MatrixXd lower, CorrelationMatrix source, bool repaired)
      : lower_(std::move(lower)), source_(std::move(source)), repaired_(repaired) {}

  Eigen::Index dim() const { return lower_.rows(); }
  const Eigen::MatrixXd& lower() const { return lower_; }
  /// The matrix that was actually factored (post-repair when repaired()).
  const CorrelationMatrix& source() const { return source_; }
  bool repaired() const { return repaired_; }

 private:
  Eigen::MatrixXd lower_;
  CorrelationMatrix source_;
  bool repaired_;
};

inline constexpr double kDefaultEigenFloor = 1e-10;

/// Clips eigenvalues below `eigen_floor`, reassembles and rescales to unit
/// diagonal. Returns the input unchanged when its smallest eigenvalue is
/// already >= eigen_floor.
CorrelationMatrix psd_repair(const CorrelationMatrix& m, double eigen_floor = kDefaultEigenFloor);

/// Cholesky factorization. With `repair` set, a numerically semidefinite or
/// indefinite input is passed through psd_repair() first and the returned
/// factor reports repaired() == true. Without it, a pivot below -1e-10
/// throws NotPositiveSemidefinite; pivots in [-1e-10, 0] give a zero column.
CholeskyFactor cholesky(const CorrelationMatrix& m, bool repair = true);

struct InverseAndLogDet {
  Eigen::MatrixXd inverse;
  double log_det;
};

/// R^{-1} and log det R from a factor of R. Throws SingularMatrix if any
/// diagonal entry of the factor is below 1e-12.
InverseAndLogDet inverse_and_logdet(const CholeskyFactor& factor);

}  // namespace fascopula
