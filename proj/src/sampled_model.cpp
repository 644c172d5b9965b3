#include "mcarma/sampled_model.hpp"

#include "mcarma/errors.hpp"

namespace mcarma {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cd = std::complex<double>;

void ContinuousModel::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw InvalidInputError("ContinuousModel: A must be square and non-empty");
  if (B.rows() != A.rows() || B.cols() == 0)
    throw InvalidInputError("ContinuousModel: B must be N x d");
  if (C.cols() != A.rows() || C.rows() == 0 || C.rows() > A.rows())
    throw InvalidInputError("ContinuousModel: C must be m x N with m <= N");
  if (sigma_L.rows() != B.cols() || sigma_L.cols() != B.cols())
    throw InvalidInputError("ContinuousModel: Sigma_L must be d x d");
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() ||
      !sigma_L.allFinite())
    throw InvalidInputError("ContinuousModel: non-finite entries");
  if (!is_symmetric_positive_definite(sigma_L))
    throw InvalidInputError(
        "ContinuousModel: Sigma_L must be symmetric positive definite");
}

SampledModel build_sampled(const ContinuousModel& model, double delta) {
  if (!(delta > 0.0))
    throw InvalidInputError("build_sampled: delta must be > 0");
  model.validate();

  SampledModel sm;
  sm.model = model;
  sm.delta = delta;
  sm.eAD = matrix_exp(model.A, delta);
  sm.sigma_N = noise_covariance(model.A, model.B, model.sigma_L, delta);
  sm.omega = solve_riccati(sm.eAD, sm.sigma_N, model.C);
  sm.K = kalman_gain(sm.eAD, sm.omega, model.C);
  const MatrixXd V = model.C * sm.omega * model.C.transpose();
  sm.V = 0.5 * (V + V.transpose());
  sm.F = sm.eAD - sm.K * model.C;
  return sm;
}

Eigen::MatrixXcd transfer_phi(const SampledModel& sm, cd z) {
  const long N = sm.N();
  const MatrixXcd lhs =
      MatrixXcd::Identity(N, N) - sm.eAD.cast<cd>() * z;
  return sm.model.C.cast<cd>() * lhs.inverse();
}

Eigen::MatrixXcd pi_polynomial(const SampledModel& sm, cd z) {
  const long N = sm.N();
  const long m = sm.m();
  const MatrixXcd lhs = MatrixXcd::Identity(N, N) - sm.F.cast<cd>() * z;
  const MatrixXcd core = lhs.partialPivLu().solve(sm.K.cast<cd>() * z);
  return MatrixXcd::Identity(m, m) - sm.model.C.cast<cd>() * core;
}

Eigen::MatrixXcd pi_inverse(const SampledModel& sm, cd z) {
  const long N = sm.N();
  const long m = sm.m();
  const MatrixXcd lhs = MatrixXcd::Identity(N, N) - sm.eAD.cast<cd>() * z;
  const MatrixXcd core = lhs.partialPivLu().solve(sm.K.cast<cd>() * z);
  return MatrixXcd::Identity(m, m) + sm.model.C.cast<cd>() * core;
}

} // namespace mcarma
