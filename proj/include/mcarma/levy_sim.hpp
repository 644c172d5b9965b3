#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mcarma/sampled_model.hpp"

namespace mcarma {

/// Driving Levy process: Brownian motion with covariance sigma_L, or a
/// centered normal-inverse Gaussian process with parameters
/// (alpha, beta, delta_nig, Delta_nig) and forced centering drift
/// mu = -delta_nig * Delta_nig * beta / kappa, kappa^2 = alpha^2 - beta^T Delta_nig beta.
struct LevySpec {
  enum class Kind { Brownian, NIG };

  Kind kind = Kind::Brownian;
  Eigen::MatrixXd sigma_L; ///< Brownian covariance (d x d)

  double nig_alpha = 0.0;
  Eigen::VectorXd nig_beta;
  double nig_delta = 0.0;
  Eigen::MatrixXd nig_Delta;
  Eigen::VectorXd mu; ///< derived centering drift (NIG)

  static LevySpec brownian(const Eigen::MatrixXd& sigma_L);
  static LevySpec nig(double alpha, const Eigen::VectorXd& beta, double delta,
                      const Eigen::MatrixXd& Delta);

  int dim() const;
  double kappa() const;

  /// Covariance of the unit-time increment L(1); for NIG this is
  /// (delta/kappa) * (Delta + Delta beta beta^T Delta / kappa^2).
  Eigen::MatrixXd covariance() const;
};

struct SimulationConfig {
  double delta = 1.0;      ///< sampling distance
  double euler_step = 0.01;
  double horizon = 0.0;    ///< T; the path has n = T/delta observations
  std::uint64_t seed = 0;
  double burn_in = -1.0;   ///< time discarded before recording; < 0 = auto (100 delta)
};

struct SamplePath {
  Eigen::MatrixXd observations; ///< n x m, row k-1 = Y(k delta)
  double delta = 1.0;

  int n() const { return static_cast<int>(observations.rows()); }
  int m() const { return static_cast<int>(observations.cols()); }
};

/// count i.i.d. increments of L over steps of length dt.
std::vector<Eigen::VectorXd> sample_increments(const LevySpec& spec, double dt,
                                               int count, std::uint64_t seed);

/// Euler-Maruyama path of dX = A X dt + B dL from X(0) = 0, observed at
/// spacing cfg.delta after discarding cfg.burn_in.
SamplePath euler_maruyama(const ContinuousModel& model, const LevySpec& spec,
                          const SimulationConfig& cfg);

/// Euler core on caller-supplied driver increments (one per step of length
/// cfg.euler_step): X <- X + euler_step * A X + B dL from X(0) = 0.
SamplePath euler_recursion(const ContinuousModel& model,
                           const std::vector<Eigen::VectorXd>& increments,
                           const SimulationConfig& cfg);

/// Exact-in-law Gaussian sampling of the discrete recursion
/// X_k = e^{A delta} X_{k-1} + N_k, N_k ~ N(0, Sigma_N), X_0 stationary.
SamplePath exact_gaussian_sample(const ContinuousModel& model,
                                 const Eigen::MatrixXd& sigma_L, double delta,
                                 int n, std::uint64_t seed);

/// Same, dispatching on a driver spec; rejects non-Brownian drivers.
SamplePath exact_gaussian_sample(const ContinuousModel& model,
                                 const LevySpec& spec, double delta, int n,
                                 std::uint64_t seed);

} // namespace mcarma
