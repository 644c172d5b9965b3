#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mcarma {

/// Verdicts for the stationarity / identifiability assumptions of a
/// continuous-time system (A, C, Sigma_L) sampled at spacing delta.
struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  bool stable = false;      ///< all eigenvalues of A have real part < 0
  bool strip_ok = false;    ///< all |Im lambda| < pi/delta for the given delta
  bool c_full_rank = false; ///< C has full row rank
  bool sigma_l_pd = false;  ///< Sigma_L symmetric positive definite
  bool ok() const { return stable && strip_ok && c_full_rank && sigma_l_pd; }
};

/// e^{At} by scaling-and-squaring with diagonal Pade approximants.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A, double t = 1.0);

/// Sigma_N = int_0^delta e^{Au} B Sigma_L B^T e^{A^T u} du via the Van Loan
/// augmented-block exponential; exact up to expm error, result symmetrized.
Eigen::MatrixXd noise_covariance(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& sigma_L, double delta);

/// Unique PSD solution of the sampled-model Riccati equation
///   Omega = eAD Omega eAD^T + Sigma_N
///           - (eAD Omega C^T)(C Omega C^T)^{-1}(eAD Omega C^T)^T
/// by fixed-point iteration from Omega_0 = Sigma_N.
Eigen::MatrixXd solve_riccati(const Eigen::MatrixXd& eAD,
                              const Eigen::MatrixXd& sigma_N,
                              const Eigen::MatrixXd& C);

/// Frobenius norm of the Riccati-equation residual at Omega.
double riccati_residual(const Eigen::MatrixXd& eAD,
                        const Eigen::MatrixXd& sigma_N,
                        const Eigen::MatrixXd& C,
                        const Eigen::MatrixXd& omega);

/// K = (eAD Omega C^T)(C Omega C^T)^{-1}; verifies the filter matrix
/// eAD - K C has spectral radius < 1 and throws otherwise.
Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& eAD,
                            const Eigen::MatrixXd& omega,
                            const Eigen::MatrixXd& C);

SpectrumReport check_assumptions(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& C,
                                 const Eigen::MatrixXd& sigma_L, double delta);

double spectral_radius(const Eigen::MatrixXd& M);

/// Solve X = A X A^T + Q (discrete Lyapunov) for stable A.
Eigen::MatrixXd discrete_lyapunov(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Q);

bool is_symmetric_positive_definite(const Eigen::MatrixXd& M,
                                    double tol = 1e-12);

} // namespace mcarma
