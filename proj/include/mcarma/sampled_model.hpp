#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mcarma/matrix_core.hpp"

namespace mcarma {

/// Continuous-time linear state space system
///   dX = A X dt + B dL,  Y = C X,
/// with driver covariance Sigma_L = Cov(L(1)).
struct ContinuousModel {
  Eigen::MatrixXd A;       ///< N x N
  Eigen::MatrixXd B;       ///< N x d
  Eigen::MatrixXd C;       ///< m x N
  Eigen::MatrixXd sigma_L; ///< d x d symmetric positive definite

  int N() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(C.rows()); }
  int d() const { return static_cast<int>(B.cols()); }
  void validate() const;
};

/// Discrete-time objects of the sampled process Y_k = Y(k delta):
/// transition e^{A delta}, state-noise covariance Sigma_N, Riccati solution
/// Omega, Kalman gain K, innovation covariance V = C Omega C^T, and the
/// innovation-filter transition F = eAD - K C.
struct SampledModel {
  ContinuousModel model;
  double delta = 0.0;
  Eigen::MatrixXd eAD;
  Eigen::MatrixXd sigma_N;
  Eigen::MatrixXd omega;
  Eigen::MatrixXd K;
  Eigen::MatrixXd V;
  Eigen::MatrixXd F;

  int N() const { return static_cast<int>(eAD.rows()); }
  int m() const { return static_cast<int>(V.rows()); }
};

SampledModel build_sampled(const ContinuousModel& model, double delta);

/// Transfer function Phi(z) = C (I - eAD z)^{-1} of the sampled MA(infinity)
/// representation, evaluated in closed form; |z| = 1.
Eigen::MatrixXcd transfer_phi(const SampledModel& sm, std::complex<double> z);

/// Pi(z) = I_m - C (I_N - F z)^{-1} K z, |z| <= 1.
Eigen::MatrixXcd pi_polynomial(const SampledModel& sm, std::complex<double> z);

/// Pi^{-1}(z) = I_m + C (I_N - eAD z)^{-1} K z, |z| <= 1.
Eigen::MatrixXcd pi_inverse(const SampledModel& sm, std::complex<double> z);

} // namespace mcarma
