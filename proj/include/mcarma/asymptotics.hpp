#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mcarma/estimators.hpp"
#include "mcarma/levy_sim.hpp"

namespace mcarma {

/// E[N_1 N_1^T (x) N_1 N_1^T] of the sampled state noise, either as the
/// Gaussian-driver flag (the score correction is identically zero) or as a
/// Monte-Carlo estimate from fine-grid stochastic integration.
struct FourthMomentMatrix {
  enum class Method { GaussianAnalytic, MonteCarlo };

  Method method = Method::GaussianAnalytic;
  Eigen::MatrixXd value;      ///< N^2 x N^2 raw moment matrix
  long mc_samples = 0;
  Eigen::MatrixXd sigma_N;    ///< the Sigma_N the moment refers to
  std::vector<Eigen::MatrixXd> blocks; ///< per-block MC means for std errors
};

struct AsymptoticCovariances {
  Eigen::MatrixXd sigma_hessian; ///< Sigma_{grad^2 W}
  Eigen::MatrixXd sigma_score;   ///< Sigma_{grad W}
  Eigen::MatrixXd sigma_W;       ///< sandwich
  int quadrature_nodes = 0;
  double fd_step = 0.0;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Jacobian of vec(f(omega, .)) at theta, m^2 x r, central differences with
/// step h_i = fd_scale * max(1, |theta_i|).
Eigen::MatrixXcd grad_spectral_density(const ParamSpace& space,
                                       const Eigen::VectorXd& theta,
                                       double omega, double delta = 1.0,
                                       double fd_scale = 1e-6);

/// Sigma_{grad^2 W} = (1/2pi) Int grad f(-w)^T [f(-w)^{-1} (x) f(w)^{-1}]
/// grad f(w) dw, trapezoid quadrature.
Eigen::MatrixXd sigma_hessian(const ParamSpace& space,
                              const Eigen::VectorXd& theta0,
                              double delta = 1.0, int nodes = 4096);

FourthMomentMatrix fourth_moment(const SampledModel& sm, const LevySpec& spec,
                                 FourthMomentMatrix::Method method,
                                 long mc_samples = 1000000,
                                 std::uint64_t seed = 0, int threads = 1);

/// Contraction basis of the score correction: column t is
/// Int vec( Phi(e^{iw})^T f^{-1} d_t f f^{-1} Phi(e^{-iw}) ) dw, an N^2 x r
/// real matrix (the integral is real although the integrand is not).
Eigen::MatrixXd score_basis(const ParamSpace& space,
                            const Eigen::VectorXd& theta0, double delta = 1.0,
                            int nodes = 4096);

/// Sigma_{grad W}: 2 Sigma_{grad^2 W} plus the fourth-moment correction
/// (zero for the Gaussian flag).
Eigen::MatrixXd sigma_score(const ParamSpace& space,
                            const Eigen::VectorXd& theta0,
                            const FourthMomentMatrix& fm, double delta = 1.0,
                            int nodes = 4096);

/// Monte-Carlo standard error of each sigma_score entry induced by the
/// fourth-moment estimate (zero matrix for the Gaussian flag).
Eigen::MatrixXd sigma_score_std_error(const ParamSpace& space,
                                      const Eigen::VectorXd& theta0,
                                      const FourthMomentMatrix& fm,
                                      double delta = 1.0, int nodes = 4096);

/// Full sandwich Sigma_W = H^{-1} S H^{-1}.
AsymptoticCovariances sigma_W(const ParamSpace& space,
                              const Eigen::VectorXd& theta0,
                              const FourthMomentMatrix& fm, double delta = 1.0,
                              int nodes = 4096);

/// Adjusted-Whittle sandwich (univariate output only).
Eigen::MatrixXd sigma_W_adjusted(const ParamSpace& space,
                                 const Eigen::VectorXd& theta0,
                                 const FourthMomentMatrix& fm,
                                 double delta = 1.0, int nodes = 4096);

/// Integrated-periodogram CLT variance for a weight function eta given on
/// the trapezoid grid w_k = -pi + 2 pi k / nodes, k = 0..nodes.
double sigma_eta(const SampledModel& sm,
                 const std::vector<Eigen::MatrixXcd>& eta,
                 const FourthMomentMatrix& fm);

std::vector<ConfidenceInterval> confidence_intervals(
    const EstimationResult& result, const Eigen::MatrixXd& cov, long n,
    double level);

/// Inverse standard normal CDF (rational approximation, |err| < 1e-9).
double normal_quantile(double p);

} // namespace mcarma
