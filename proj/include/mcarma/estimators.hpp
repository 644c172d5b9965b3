#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "mcarma/spectral.hpp"

namespace mcarma {

/// Compact parameter box Theta together with the map theta -> model.
struct ParamSpace {
  int r = 0;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::function<ContinuousModel(const Eigen::VectorXd&)> model_builder;

  bool in_bounds(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd clip(const Eigen::VectorXd& theta) const;
};

enum class EstimatorKind { Whittle, AdjustedWhittle, QMLE };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct EstimationResult {
  Eigen::VectorXd theta_hat;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  EstimatorKind kind = EstimatorKind::Whittle;
  int restarts_used = 0;
};

/// W_n(theta) = (1/2n) sum_j [ tr(f(omega_j)^{-1} I_n(omega_j))
///                             + log det f(omega_j) ].
/// Returns +infinity (sentinel) when the model cannot be built at theta.
double whittle_objective(const PeriodogramGrid& grid,
                         const Eigen::VectorXd& theta,
                         const ParamSpace& space, double delta = 1.0);

/// W^(A)_n(theta) = (pi/n) sum_j |Pi(e^{i omega_j})|^2 I_n(omega_j),
/// univariate output only; independent of the driver variance.
double adjusted_whittle_objective(const PeriodogramGrid& grid,
                                  const Eigen::VectorXd& theta,
                                  const ParamSpace& space, double delta = 1.0);

/// (1/n) sum_k [ xi_k^T V^{-1} xi_k + log det V ] - m log 2pi with the
/// pseudo-innovations xi_k from the steady-state Kalman recursion, x_hat_1 = 0.
double qmle_objective(const SamplePath& path, const Eigen::VectorXd& theta,
                      const ParamSpace& space);

/// Bounded derivative-free Nelder-Mead over the box, best of all starts.
EstimationResult minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const ParamSpace& space,
                          const std::vector<Eigen::VectorXd>& starts,
                          double tol = 1e-8, int max_iter = 20000);

/// The user-supplied start plus count-1 deterministic perturbations of it,
/// all clipped to the box.
std::vector<Eigen::VectorXd> default_multistarts(const ParamSpace& space,
                                                 const Eigen::VectorXd& start,
                                                 int count = 5);

/// Convenience: run the requested estimator on a path.
EstimationResult estimate(const SamplePath& path, const ParamSpace& space,
                          EstimatorKind kind,
                          const std::vector<Eigen::VectorXd>& starts,
                          double tol = 1e-8);

} // namespace mcarma
