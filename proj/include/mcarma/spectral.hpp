#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mcarma/levy_sim.hpp"
#include "mcarma/sampled_model.hpp"

namespace mcarma {

/// Periodogram values I_n(omega_j) on the 2n Fourier frequencies
/// omega_j = pi j / n, j = -n+1, ..., n.
struct PeriodogramGrid {
  int n = 0;
  int m = 0;
  std::vector<Eigen::MatrixXcd> values; ///< index j + n - 1 holds I_n(pi j/n)

  double omega(int j) const;
  const Eigen::MatrixXcd& value(int j) const; ///< j in [-n+1, n]
};

/// Empirical autocovariances Gamma_bar(h), h = 0..max_lag, divisor n.
struct AutocovarianceSet {
  std::vector<Eigen::MatrixXd> values;
  const Eigen::MatrixXd& at(int h) const { return values.at(h); }
  int max_lag() const { return static_cast<int>(values.size()) - 1; }
};

/// Spectral density of the sampled process,
/// f(omega) = (1/2pi) C (e^{i omega} I - eAD)^{-1} Sigma_N
///            (e^{-i omega} I - eAD^T)^{-1} C^T.
Eigen::MatrixXcd spectral_density(const SampledModel& sm, double omega);

AutocovarianceSet sample_autocovariance(const SamplePath& path, int max_lag);

/// FFT periodogram on the pi j / n grid (length-2n zero-padded transform).
PeriodogramGrid periodogram(const SamplePath& path);

/// Precomputed spectral evaluator: diagonalizes eAD once so that f(omega)
/// costs O(N^2 m) per frequency instead of an N x N solve. Falls back to
/// direct solves when eAD is not diagonalizable to working precision.
class SpectralEvaluator {
public:
  explicit SpectralEvaluator(const SampledModel& sm);
  Eigen::MatrixXcd operator()(double omega) const;
  const SampledModel& model() const { return sm_; }

private:
  SampledModel sm_;
  bool diagonalized_ = false;
  Eigen::MatrixXcd CS_;  ///< C * S
  Eigen::MatrixXcd M_;   ///< S^{-1} Sigma_N S^{-H}
  Eigen::VectorXcd lam_; ///< eigenvalues of eAD
};

} // namespace mcarma
