#include "mcarma/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "mcarma/errors.hpp"

namespace mcarma {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using cd = std::complex<double>;

namespace {

// FFTW's planner is not thread-safe; executions on private buffers are.
std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

} // namespace

double PeriodogramGrid::omega(int j) const {
  if (j < -n + 1 || j > n)
    throw RangeError("PeriodogramGrid::omega: index out of range");
  return M_PI * static_cast<double>(j) / static_cast<double>(n);
}

const MatrixXcd& PeriodogramGrid::value(int j) const {
  if (j < -n + 1 || j > n)
    throw RangeError("PeriodogramGrid::value: index out of range");
  return values[static_cast<std::size_t>(j + n - 1)];
}

MatrixXcd spectral_density(const SampledModel& sm, double omega) {
  const long N = sm.N();
  const cd z = std::exp(cd(0.0, omega));
  const MatrixXcd lhs = z * MatrixXcd::Identity(N, N) - sm.eAD.cast<cd>();
  const MatrixXcd Q = lhs.inverse();
  MatrixXcd f = sm.model.C.cast<cd>() * Q * sm.sigma_N.cast<cd>() *
                Q.adjoint() * sm.model.C.cast<cd>().transpose() /
                (2.0 * M_PI);
  return 0.5 * (f + f.adjoint().eval());
}

AutocovarianceSet sample_autocovariance(const SamplePath& path, int max_lag) {
  const long n = path.n();
  const long m = path.m();
  if (max_lag < 0 || max_lag >= n)
    throw RangeError("sample_autocovariance: need 0 <= max_lag < n");
  AutocovarianceSet acvf;
  acvf.values.reserve(static_cast<std::size_t>(max_lag) + 1);
  for (int h = 0; h <= max_lag; ++h) {
    MatrixXd g = MatrixXd::Zero(m, m);
    for (long k = 0; k + h < n; ++k)
      g += path.observations.row(k + h).transpose() * path.observations.row(k);
    acvf.values.push_back(g / static_cast<double>(n));
  }
  return acvf;
}

PeriodogramGrid periodogram(const SamplePath& path) {
  const long n = path.n();
  const long m = path.m();
  if (n < 2) throw RangeError("periodogram: need at least two observations");
  if (!path.observations.allFinite())
    throw InvalidInputError("periodogram: path has non-finite entries");

  const long len = 2 * n;
  fftw_complex* buf_in = fftw_alloc_complex(static_cast<std::size_t>(len));
  fftw_complex* buf_out = fftw_alloc_complex(static_cast<std::size_t>(len));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(len), buf_in, buf_out,
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }

  // dft(j, a) = sum_{k=1}^{n} Y_k[a] e^{-i pi j k / n}, computed as a
  // length-2n transform of the zero-padded series placed at positions 1..n.
  MatrixXcd dft(len, m);
  for (long a = 0; a < m; ++a) {
    for (long t = 0; t < len; ++t) {
      buf_in[t][0] = (t >= 1 && t <= n) ? path.observations(t - 1, a) : 0.0;
      buf_in[t][1] = 0.0;
    }
    fftw_execute(plan);
    for (long t = 0; t < len; ++t) dft(t, a) = cd(buf_out[t][0], buf_out[t][1]);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf_in);
  fftw_free(buf_out);

  PeriodogramGrid grid;
  grid.n = static_cast<int>(n);
  grid.m = static_cast<int>(m);
  grid.values.resize(static_cast<std::size_t>(len));
  const double scale = 1.0 / (2.0 * M_PI * static_cast<double>(n));
  for (long j = -n + 1; j <= n; ++j) {
    const long bin = j >= 0 ? j : j + len;
    const VectorXcd d = dft.row(bin).transpose();
    grid.values[static_cast<std::size_t>(j + n - 1)] =
        scale * (d * d.adjoint());
  }
  return grid;
}

SpectralEvaluator::SpectralEvaluator(const SampledModel& sm) : sm_(sm) {
  const long N = sm.N();
  const Eigen::EigenSolver<MatrixXd> es(sm.eAD);
  if (es.info() != Eigen::Success) return;
  const MatrixXcd S = es.eigenvectors();
  const Eigen::FullPivLU<MatrixXcd> lu(S);
  if (!lu.isInvertible()) return;
  const MatrixXcd Sinv = lu.inverse();
  const MatrixXcd recon =
      S * es.eigenvalues().asDiagonal() * Sinv;
  if ((recon - sm.eAD.cast<cd>()).norm() >
      1e-10 * std::max(1.0, sm.eAD.norm()))
    return;
  lam_ = es.eigenvalues();
  CS_ = sm.model.C.cast<cd>() * S;
  M_ = Sinv * sm.sigma_N.cast<cd>() * Sinv.adjoint();
  diagonalized_ = true;
}

MatrixXcd SpectralEvaluator::operator()(double omega) const {
  if (!diagonalized_) return spectral_density(sm_, omega);
  const long N = lam_.size();
  const cd z = std::exp(cd(0.0, omega));
  VectorXcd dinv(N);
  for (long i = 0; i < N; ++i) dinv(i) = 1.0 / (z - lam_(i));
  const MatrixXcd core = M_.cwiseProduct(dinv * dinv.adjoint());
  MatrixXcd f = CS_ * core * CS_.adjoint() / (2.0 * M_PI);
  return 0.5 * (f + f.adjoint().eval());
}

} // namespace mcarma
