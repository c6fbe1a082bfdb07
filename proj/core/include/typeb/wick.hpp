#pragma once

// Limit moment formulas: the type-B Wick sum over colored pairings, in its
// scalar (polynomial in q, rho) and vector (covariance data) forms, and the
// q-Gaussian / (q,t)-Gaussian comparison sums.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "typeb/polynomial.hpp"

namespace typeb {

inline constexpr int kDefaultOrderCap = 16;

/// Sum over all colored pairings (pi, f) of [order] of
/// rho^NB * q^(Cr + 2 CNB), as an exact polynomial in (q, rho).
/// Odd order gives the zero polynomial; order > cap throws CapacityError.
BivariatePoly typeB_moment_scalar(int order, int cap = kDefaultOrderCap);

/// Sum over pairings of q^Cr (the q-Gaussian moment), univariate in q.
BivariatePoly q_moment(int order, int cap = kDefaultOrderCap);

/// Sum over pairings of q^Cr t^Nest, bivariate in (q, t).
BivariatePoly qt_moment(int order, int cap = kDefaultOrderCap);

/// Second-moment data for the vector Wick formula: the Gram matrix
/// <x_i, x_j> and the twisted Gram matrix <x_i, Pi0 x_j> of m test vectors,
/// together with the deformation parameters.
class CovarianceData {
 public:
  /// `vectors` holds the test vectors as columns (d x m); `pi0` is d x d.
  /// Throws InputError unless pi0 is a symmetric involution (1e-12) and the
  /// parameters satisfy |alpha| <= 1, |q| < 1.
  static CovarianceData from_vectors(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& pi0,
                                     double alpha, double q);

  /// Direct Gram data. `gram` must be symmetric positive semidefinite.
  static CovarianceData from_gram(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& twisted,
                                  double alpha, double q);

  int count() const noexcept { return static_cast<int>(gram_.rows()); }
  double alpha() const noexcept { return alpha_; }
  double q() const noexcept { return q_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const Eigen::MatrixXd& twisted() const noexcept { return twisted_; }

 private:
  CovarianceData(Eigen::MatrixXd gram, Eigen::MatrixXd twisted, double alpha, double q);

  Eigen::MatrixXd gram_;
  Eigen::MatrixXd twisted_;
  double alpha_ = 0.0;
  double q_ = 0.0;
};

/// Vacuum moment predicted by the type-B Wick formula for the word whose
/// p-th applied operator has test vector `positions[p]` (an index into the
/// covariance data). Odd length gives 0.
double typeB_moment_vector(std::span<const int> positions, const CovarianceData& cov);

/// Boundary limits of the CLT at rho -> +1 (2^n times the q-Gaussian moment)
/// and rho -> -1 (identically 0). `which` must be +1 or -1.
double boundary_moment(int order, double q, int which);

/// Throws InputError unless `pi0` is square, symmetric, and squares to the
/// identity within `tol`.
void require_involution(const Eigen::MatrixXd& pi0, double tol = 1e-12);

}  // namespace typeb
