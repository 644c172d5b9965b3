#include "mcarma/levy_sim.hpp"

#include <cmath>

#include "mcarma/errors.hpp"
#include "mcarma/rng.hpp"

namespace mcarma {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd psd_sqrt(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  VectorXd ev = es.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

void require_psd(const MatrixXd& S, const char* what) {
  if (S.rows() != S.cols() || !S.allFinite())
    throw InvalidInputError(std::string(what) + ": must be a finite square matrix");
  if ((S - S.transpose()).norm() > 1e-10 * std::max(1.0, S.norm()))
    throw InvalidInputError(std::string(what) + ": must be symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, S.norm()))
    throw InvalidInputError(std::string(what) + ": must be positive semidefinite");
}

VectorXd standard_normal(CounterRng& rng, long d) {
  VectorXd eps(d);
  for (long i = 0; i < d; ++i) eps(i) = rng.next_gauss();
  return eps;
}

double resolved_burn_in(const SimulationConfig& cfg) {
  return cfg.burn_in < 0.0 ? 100.0 * cfg.delta : cfg.burn_in;
}

long aligned_count(double total, double step, const char* what) {
  const double ratio = total / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)))
    throw InvalidInputError(std::string(what) +
                            ": interval is not a multiple of the step size");
  return static_cast<long>(rounded);
}

} // namespace

LevySpec LevySpec::brownian(const MatrixXd& sigma_L) {
  require_psd(sigma_L, "LevySpec::brownian: sigma_L");
  LevySpec spec;
  spec.kind = Kind::Brownian;
  spec.sigma_L = sigma_L;
  return spec;
}

LevySpec LevySpec::nig(double alpha, const VectorXd& beta, double delta,
                       const MatrixXd& Delta) {
  if (!(alpha > 0.0))
    throw InvalidInputError("LevySpec::nig: alpha must be > 0");
  if (!(delta >= 0.0))
    throw InvalidInputError("LevySpec::nig: delta must be >= 0");
  if (Delta.rows() != Delta.cols() || Delta.rows() != beta.size())
    throw InvalidInputError("LevySpec::nig: Delta must be d x d matching beta");
  if (!is_symmetric_positive_definite(Delta, 1e-10))
    throw InvalidInputError("LevySpec::nig: Delta must be symmetric positive definite");
  const double kappa_sq = alpha * alpha - beta.dot(Delta * beta);
  if (!(kappa_sq > 0.0))
    throw InvalidInputError(
        "LevySpec::nig: kappa^2 = alpha^2 - beta' Delta beta must be > 0");
  LevySpec spec;
  spec.kind = Kind::NIG;
  spec.nig_alpha = alpha;
  spec.nig_beta = beta;
  spec.nig_delta = delta;
  spec.nig_Delta = Delta;
  spec.mu = -delta * (Delta * beta) / std::sqrt(kappa_sq);
  spec.sigma_L = spec.covariance();
  return spec;
}

int LevySpec::dim() const {
  return static_cast<int>(kind == Kind::Brownian ? sigma_L.rows()
                                                 : nig_Delta.rows());
}

double LevySpec::kappa() const {
  if (kind != Kind::NIG)
    throw InvalidInputError("LevySpec::kappa: only defined for NIG drivers");
  return std::sqrt(nig_alpha * nig_alpha - nig_beta.dot(nig_Delta * nig_beta));
}

MatrixXd LevySpec::covariance() const {
  if (kind == Kind::Brownian) return sigma_L;
  const double k = kappa();
  const VectorXd db = nig_Delta * nig_beta;
  return (nig_delta / k) * (nig_Delta + db * db.transpose() / (k * k));
}

std::vector<VectorXd> sample_increments(const LevySpec& spec, double dt,
                                        int count, std::uint64_t seed) {
  if (!(dt > 0.0))
    throw InvalidInputError("sample_increments: dt must be > 0");
  if (count < 1)
    throw InvalidInputError("sample_increments: count must be >= 1");

  const long d = spec.dim();
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  CounterRng rng(seed, 0);

  if (spec.kind == LevySpec::Kind::Brownian) {
    const MatrixXd root = std::sqrt(dt) * psd_sqrt(spec.sigma_L);
    for (int k = 0; k < count; ++k)
      out.push_back(root * standard_normal(rng, d));
    return out;
  }

  const double kap = spec.kappa();
  const double shape = std::pow(spec.nig_delta * dt, 2);
  const double mean = spec.nig_delta * dt / kap;
  const VectorXd drift = spec.mu * dt;
  const VectorXd skew = spec.nig_Delta * spec.nig_beta;
  const MatrixXd root = Eigen::LLT<MatrixXd>(spec.nig_Delta).matrixL();
  for (int k = 0; k < count; ++k) {
    const double z = shape > 0.0 ? rng.next_inverse_gaussian(mean, shape) : 0.0;
    out.push_back(drift + z * skew +
                  std::sqrt(z) * (root * standard_normal(rng, d)));
  }
  return out;
}

SamplePath euler_recursion(const ContinuousModel& model,
                           const std::vector<VectorXd>& increments,
                           const SimulationConfig& cfg) {
  model.validate();
  if (!(cfg.delta > 0.0) || !(cfg.euler_step > 0.0) || !(cfg.horizon > 0.0))
    throw InvalidInputError("euler_recursion: delta, euler_step, horizon must be > 0");
  const double h = cfg.euler_step;
  const long obs_every = aligned_count(cfg.delta, h, "euler_recursion: delta");
  const double burn = resolved_burn_in(cfg);
  const long burn_steps = aligned_count(burn, h, "euler_recursion: burn_in");
  const long n = static_cast<long>(std::llround(cfg.horizon / cfg.delta));
  if (n < 1)
    throw InvalidInputError("euler_recursion: horizon shorter than delta");
  const long total = burn_steps + n * obs_every;
  if (static_cast<long>(increments.size()) != total)
    throw InvalidInputError("euler_recursion: need " + std::to_string(total) +
                            " increments, got " +
                            std::to_string(increments.size()));

  SamplePath path;
  path.delta = cfg.delta;
  path.observations.resize(n, model.m());
  VectorXd x = VectorXd::Zero(model.N());
  long row = 0;
  for (long k = 1; k <= total; ++k) {
    x = x + h * (model.A * x) + model.B * increments[k - 1];
    if (!x.allFinite())
      throw SimulationBlowupError("euler_recursion: state diverged", k * h);
    if (k > burn_steps && (k - burn_steps) % obs_every == 0)
      path.observations.row(row++) = (model.C * x).transpose();
  }
  return path;
}

SamplePath euler_maruyama(const ContinuousModel& model, const LevySpec& spec,
                          const SimulationConfig& cfg) {
  model.validate();
  if (!(cfg.delta > 0.0) || !(cfg.euler_step > 0.0) || !(cfg.horizon > 0.0))
    throw InvalidInputError("euler_maruyama: delta, euler_step, horizon must be > 0");
  if (spec.dim() != model.d())
    throw InvalidInputError("euler_maruyama: driver dimension mismatch");
  const long obs_every =
      aligned_count(cfg.delta, cfg.euler_step, "euler_maruyama: delta");
  const long burn_steps = aligned_count(resolved_burn_in(cfg), cfg.euler_step,
                                        "euler_maruyama: burn_in");
  const long n = static_cast<long>(std::llround(cfg.horizon / cfg.delta));
  if (n < 1)
    throw InvalidInputError("euler_maruyama: horizon shorter than delta");
  const long total = burn_steps + n * obs_every;
  const std::vector<VectorXd> increments =
      sample_increments(spec, cfg.euler_step, static_cast<int>(total), cfg.seed);
  return euler_recursion(model, increments, cfg);
}

SamplePath exact_gaussian_sample(const ContinuousModel& model,
                                 const MatrixXd& sigma_L, double delta, int n,
                                 std::uint64_t seed) {
  model.validate();
  if (!(delta > 0.0))
    throw InvalidInputError("exact_gaussian_sample: delta must be > 0");
  if (n < 1)
    throw InvalidInputError("exact_gaussian_sample: n must be >= 1");
  require_psd(sigma_L, "exact_gaussian_sample: sigma_L");

  const long N = model.N();
  const MatrixXd eAD = matrix_exp(model.A, delta);
  MatrixXd sigma_N;
  if (sigma_L.norm() == 0.0) {
    sigma_N = MatrixXd::Zero(N, N);
  } else {
    sigma_N = noise_covariance(model.A, model.B, sigma_L, delta);
  }
  const MatrixXd stationary = discrete_lyapunov(eAD, sigma_N);
  const MatrixXd root_stat = psd_sqrt(stationary);
  const MatrixXd root_noise = psd_sqrt(sigma_N);

  SamplePath path;
  path.delta = delta;
  path.observations.resize(n, model.m());
  CounterRng rng(seed, 1);
  VectorXd x = root_stat * standard_normal(rng, N);
  for (int k = 0; k < n; ++k) {
    x = eAD * x + root_noise * standard_normal(rng, N);
    path.observations.row(k) = (model.C * x).transpose();
  }
  return path;
}

SamplePath exact_gaussian_sample(const ContinuousModel& model,
                                 const LevySpec& spec, double delta, int n,
                                 std::uint64_t seed) {
  if (spec.kind != LevySpec::Kind::Brownian)
    throw UnsupportedError(
        "exact_gaussian_sample: only Brownian drivers are exact in law");
  return exact_gaussian_sample(model, spec.sigma_L, delta, n, seed);
}

} // namespace mcarma
