#include "mcarma/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "mcarma/errors.hpp"
#include "mcarma/matrix_core.hpp"
#include "mcarma/rng.hpp"

namespace mcarma {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

constexpr double kFdScale = 1e-6;
constexpr std::uint64_t kFourthMomentStream = 0x34746873u;
constexpr int kIntegrationSteps = 1000;
constexpr int kChunks = 200;

void check_space_theta(const ParamSpace& space, const VectorXd& theta,
                       const char* what) {
  if (space.r < 1 || !space.model_builder || space.lower.size() != space.r ||
      space.upper.size() != space.r)
    throw InvalidInputError(std::string(what) +
                            ": parameter space is incomplete");
  if (theta.size() != space.r || !theta.allFinite())
    throw InvalidInputError(std::string(what) +
                            ": theta does not match the parameter space");
}

void check_nodes(int nodes, const char* what) {
  if (nodes < 8 || nodes % 2 != 0)
    throw InvalidInputError(std::string(what) +
                            ": nodes must be an even number >= 8");
}

VectorXd fd_steps(const VectorXd& theta, double scale) {
  VectorXd h(theta.size());
  for (long i = 0; i < theta.size(); ++i)
    h(i) = scale * std::max(1.0, std::abs(theta(i)));
  return h;
}

void require_interior(const ParamSpace& space, const VectorXd& theta,
                      const VectorXd& h, const char* what) {
  for (int i = 0; i < space.r; ++i)
    if (theta(i) - h(i) < space.lower(i) || theta(i) + h(i) > space.upper(i))
      throw RangeError(std::string(what) +
                       ": theta must be interior to the parameter box by at "
                       "least the difference step");
}

/// The model at theta plus the 2r perturbed models of the central stencil.
struct FdModels {
  SampledModel base;
  std::vector<SampledModel> up, down;
  VectorXd h;
};

FdModels build_fd_models(const ParamSpace& space, const VectorXd& theta,
                         double delta, double scale, const char* what) {
  check_space_theta(space, theta, what);
  if (!(delta > 0.0))
    throw InvalidInputError(std::string(what) + ": delta must be > 0");
  if (!(scale > 0.0))
    throw InvalidInputError(std::string(what) + ": fd scale must be > 0");
  FdModels out;
  out.h = fd_steps(theta, scale);
  require_interior(space, theta, out.h, what);
  out.base = build_sampled(space.model_builder(theta), delta);
  out.up.reserve(space.r);
  out.down.reserve(space.r);
  for (int i = 0; i < space.r; ++i) {
    VectorXd tu = theta, td = theta;
    tu(i) += out.h(i);
    td(i) -= out.h(i);
    out.up.push_back(build_sampled(space.model_builder(tu), delta));
    out.down.push_back(build_sampled(space.model_builder(td), delta));
  }
  return out;
}

MatrixXd kron_dense(const MatrixXd& A, const MatrixXd& B) {
  MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

MatrixXd commutation(int n) {
  MatrixXd K = MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(j + i * n, i + j * n) = 1.0;
  return K;
}

MatrixXd psd_sqrt(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  VectorXd ev = es.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

/// E[N N^T (x) N N^T] - vec(Sigma) vec(Sigma)^T - 2 Sigma (x) Sigma, the
/// fourth-cumulant contraction kernel of the score correction.
MatrixXd correction_kernel(const FourthMomentMatrix& fm) {
  const int n2 = static_cast<int>(fm.sigma_N.rows() * fm.sigma_N.rows());
  if (fm.value.rows() != n2 || fm.value.cols() != n2)
    throw InvalidInputError(
        "correction kernel: fourth moment has inconsistent dimensions");
  const VectorXd v = Eigen::Map<const VectorXd>(fm.sigma_N.data(), n2);
  return fm.value - v * v.transpose() -
         2.0 * kron_dense(fm.sigma_N, fm.sigma_N);
}

void check_same_model(const FourthMomentMatrix& fm, const SampledModel& sm,
                      const char* what) {
  const double scale = std::max(1.0, sm.sigma_N.cwiseAbs().maxCoeff());
  if (fm.sigma_N.rows() != sm.sigma_N.rows() ||
      (fm.sigma_N - sm.sigma_N).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidInputError(std::string(what) +
                            ": fourth moment belongs to a different sampled "
                            "model");
}

} // namespace

MatrixXcd grad_spectral_density(const ParamSpace& space, const VectorXd& theta,
                                double omega, double delta, double fd_scale) {
  const FdModels fd =
      build_fd_models(space, theta, delta, fd_scale, "grad_spectral_density");
  const int m = fd.base.m();
  MatrixXcd G(m * m, space.r);
  for (int t = 0; t < space.r; ++t) {
    const MatrixXcd df = (spectral_density(fd.up[t], omega) -
                          spectral_density(fd.down[t], omega)) /
                         (2.0 * fd.h(t));
    G.col(t) = Eigen::Map<const VectorXcd>(df.data(), m * m);
  }
  return G;
}

MatrixXd sigma_hessian(const ParamSpace& space, const VectorXd& theta0,
                       double delta, int nodes) {
  check_nodes(nodes, "sigma_hessian");
  const FdModels fd =
      build_fd_models(space, theta0, delta, kFdScale, "sigma_hessian");
  const int r = space.r;
  const int m = fd.base.m();

  const SpectralEvaluator ev0(fd.base);
  std::vector<SpectralEvaluator> evu, evd;
  evu.reserve(r);
  evd.reserve(r);
  for (int t = 0; t < r; ++t) {
    evu.emplace_back(fd.up[t]);
    evd.emplace_back(fd.down[t]);
  }

  // The integrand tr(d_t f f^{-1} d_l f f^{-1}) is real and even in omega,
  // so the full circle collapses to [0, pi] with doubled interior weights.
  const int half = nodes / 2;
  MatrixXd H = MatrixXd::Zero(r, r);
  double imag_acc = 0.0, scale_acc = 0.0;
  std::vector<MatrixXcd> P(r);
  for (int k = 0; k <= half; ++k) {
    const double w = M_PI * k / half;
    const double c = (k == 0 || k == half) ? 1.0 : 2.0;
    const MatrixXcd finv = ev0(w).inverse();
    for (int t = 0; t < r; ++t)
      P[t] = ((evu[t](w) - evd[t](w)) / (2.0 * fd.h(t))) * finv;
    for (int t = 0; t < r; ++t)
      for (int l = t; l < r; ++l) {
        const cd tr = (P[t] * P[l]).trace();
        H(t, l) += c * tr.real();
        imag_acc += c * std::abs(tr.imag());
        scale_acc += c * std::abs(tr.real());
      }
  }
  if (imag_acc > 1e-8 * std::max(1.0, scale_acc))
    throw NumericIntegrityError(
        "sigma_hessian: quadrature lost Hermitian symmetry");
  H /= nodes;
  for (int t = 0; t < r; ++t)
    for (int l = 0; l < t; ++l) H(t, l) = H(l, t);

  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(0.0, H.trace()))
    throw DegeneracyError(
        "sigma_hessian: matrix is numerically singular; the parametrization "
        "is not identifiable at theta");
  (void)m;
  return H;
}

FourthMomentMatrix fourth_moment(const SampledModel& sm, const LevySpec& spec,
                                 FourthMomentMatrix::Method method,
                                 long mc_samples, std::uint64_t seed,
                                 int threads) {
  FourthMomentMatrix fm;
  fm.method = method;
  fm.sigma_N = sm.sigma_N;
  const int N = sm.N();
  const int n2 = N * N;

  if (method == FourthMomentMatrix::Method::GaussianAnalytic) {
    const MatrixXd SkS = kron_dense(sm.sigma_N, sm.sigma_N);
    const VectorXd v = Eigen::Map<const VectorXd>(sm.sigma_N.data(), n2);
    fm.value = SkS + v * v.transpose() + commutation(N) * SkS;
    return fm;
  }

  if (mc_samples < 10000)
    throw InvalidInputError(
        "fourth_moment: need at least 10^4 Monte-Carlo samples");
  if (spec.dim() != sm.model.d())
    throw InvalidInputError("fourth_moment: driver dimension mismatch");

  const int d = spec.dim();
  const long per = (mc_samples + kChunks - 1) / kChunks;
  const int steps = kIntegrationSteps;
  const double du = sm.delta / steps;

  // Midpoint propagators e^{A(delta - u)} B over the fine grid, folded with
  // the driver root (and skew/drift for NIG) once up front.
  std::vector<MatrixXd> prop(steps);
  for (int s = 0; s < steps; ++s)
    prop[s] = matrix_exp(sm.model.A, sm.delta - (s + 0.5) * du) * sm.model.B;

  const bool nig = spec.kind == LevySpec::Kind::NIG;
  double ig_mean = 0.0, ig_shape = 0.0;
  VectorXd base = VectorXd::Zero(N);
  std::vector<MatrixXd> prop_root(steps);
  std::vector<VectorXd> prop_skew;
  if (nig) {
    const double kap = spec.kappa();
    ig_shape = std::pow(spec.nig_delta * du, 2);
    ig_mean = spec.nig_delta * du / kap;
    const MatrixXd root = Eigen::LLT<MatrixXd>(spec.nig_Delta).matrixL();
    const VectorXd skew = spec.nig_Delta * spec.nig_beta;
    prop_skew.resize(steps);
    for (int s = 0; s < steps; ++s) {
      prop_root[s] = prop[s] * root;
      prop_skew[s] = prop[s] * skew;
      base += prop[s] * (spec.mu * du);
    }
  } else {
    const MatrixXd root = std::sqrt(du) * psd_sqrt(spec.sigma_L);
    for (int s = 0; s < steps; ++s) prop_root[s] = prop[s] * root;
  }

  std::vector<MatrixXd> chunk_mean(kChunks);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    VectorXd eps(d), x(N), v(n2);
    MatrixXd acc(n2, n2), outer(N, N);
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= kChunks) break;
      acc.setZero();
      for (long i = 0; i < per; ++i) {
        const std::uint64_t idx = static_cast<std::uint64_t>(c) * per + i;
        CounterRng rng(derive_seed(seed, idx, kFourthMomentStream));
        x = base;
        if (nig) {
          for (int s = 0; s < steps; ++s) {
            const double z =
                ig_shape > 0.0 ? rng.next_inverse_gaussian(ig_mean, ig_shape)
                               : 0.0;
            for (int q = 0; q < d; ++q) eps(q) = rng.next_gauss();
            x.noalias() += z * prop_skew[s];
            x.noalias() += std::sqrt(z) * (prop_root[s] * eps);
          }
        } else {
          for (int s = 0; s < steps; ++s) {
            for (int q = 0; q < d; ++q) eps(q) = rng.next_gauss();
            x.noalias() += prop_root[s] * eps;
          }
        }
        outer.noalias() = x * x.transpose();
        v = Eigen::Map<const VectorXd>(outer.data(), n2);
        acc.noalias() += v * v.transpose();
      }
      chunk_mean[c] = acc / static_cast<double>(per);
    }
  };

  const int nthreads = std::clamp(threads, 1, 64);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  MatrixXd value = MatrixXd::Zero(n2, n2);
  for (const MatrixXd& b : chunk_mean) value += b;
  fm.value = value / kChunks;
  fm.mc_samples = per * kChunks;
  fm.blocks = std::move(chunk_mean);
  return fm;
}

MatrixXd score_basis(const ParamSpace& space, const VectorXd& theta0,
                     double delta, int nodes) {
  check_nodes(nodes, "score_basis");
  const FdModels fd =
      build_fd_models(space, theta0, delta, kFdScale, "score_basis");
  const int r = space.r;
  const int N = fd.base.N();

  const SpectralEvaluator ev0(fd.base);
  std::vector<SpectralEvaluator> evu, evd;
  for (int t = 0; t < r; ++t) {
    evu.emplace_back(fd.up[t]);
    evd.emplace_back(fd.down[t]);
  }

  MatrixXcd J = MatrixXcd::Zero(N * N, r);
  const double step = 2.0 * M_PI / nodes;
  for (int k = 0; k < nodes; ++k) {
    const double w = -M_PI + step * k;
    const cd z = std::exp(cd(0.0, w));
    const MatrixXcd finv = ev0(w).inverse();
    const MatrixXcd left = transfer_phi(fd.base, z).transpose() * finv;
    const MatrixXcd right = finv * transfer_phi(fd.base, std::conj(z));
    for (int t = 0; t < r; ++t) {
      const MatrixXcd df = (evu[t](w) - evd[t](w)) / (2.0 * fd.h(t));
      const MatrixXcd g = left * df * right;
      J.col(t) += step * Eigen::Map<const VectorXcd>(g.data(), N * N);
    }
  }
  const double scale = std::max(1.0, J.real().cwiseAbs().maxCoeff());
  if (J.imag().cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NumericIntegrityError(
        "score_basis: integral failed to come out real");
  return J.real();
}

MatrixXd sigma_score(const ParamSpace& space, const VectorXd& theta0,
                     const FourthMomentMatrix& fm, double delta, int nodes) {
  const MatrixXd H = sigma_hessian(space, theta0, delta, nodes);
  MatrixXd S = 2.0 * H;
  if (fm.method == FourthMomentMatrix::Method::MonteCarlo) {
    const SampledModel sm =
        build_sampled(space.model_builder(theta0), delta);
    check_same_model(fm, sm, "sigma_score");
    const MatrixXd J = score_basis(space, theta0, delta, nodes);
    const MatrixXd kernel = correction_kernel(fm);
    const double c = 16.0 * std::pow(M_PI, 4);
    S += (J.transpose() * kernel * J) / c;
    S = 0.5 * (S + S.transpose());
  }
  return S;
}

MatrixXd sigma_score_std_error(const ParamSpace& space, const VectorXd& theta0,
                               const FourthMomentMatrix& fm, double delta,
                               int nodes) {
  if (fm.method == FourthMomentMatrix::Method::GaussianAnalytic)
    return MatrixXd::Zero(space.r, space.r);
  if (fm.blocks.size() < 2)
    throw InvalidInputError(
        "sigma_score_std_error: fourth moment carries no block means");
  const MatrixXd J = score_basis(space, theta0, delta, nodes);
  const double c = 16.0 * std::pow(M_PI, 4);
  const int B = static_cast<int>(fm.blocks.size());
  std::vector<MatrixXd> terms;
  terms.reserve(B);
  MatrixXd mean = MatrixXd::Zero(space.r, space.r);
  for (const MatrixXd& block : fm.blocks) {
    terms.push_back((J.transpose() * block * J) / c);
    mean += terms.back();
  }
  mean /= B;
  MatrixXd var = MatrixXd::Zero(space.r, space.r);
  for (const MatrixXd& t : terms) var += (t - mean).cwiseAbs2();
  var /= (B - 1);
  return (var / B).cwiseSqrt();
}

AsymptoticCovariances sigma_W(const ParamSpace& space, const VectorXd& theta0,
                              const FourthMomentMatrix& fm, double delta,
                              int nodes) {
  AsymptoticCovariances out;
  out.sigma_hessian = sigma_hessian(space, theta0, delta, nodes);
  out.sigma_score = sigma_score(space, theta0, fm, delta, nodes);
  const MatrixXd Hinv = out.sigma_hessian.inverse();
  const MatrixXd W = Hinv * out.sigma_score * Hinv;
  out.sigma_W = 0.5 * (W + W.transpose());
  out.quadrature_nodes = nodes;
  out.fd_step = kFdScale;
  return out;
}

MatrixXd sigma_W_adjusted(const ParamSpace& space, const VectorXd& theta0,
                          const FourthMomentMatrix& fm, double delta,
                          int nodes) {
  check_nodes(nodes, "sigma_W_adjusted");
  const FdModels fd =
      build_fd_models(space, theta0, delta, kFdScale, "sigma_W_adjusted");
  if (fd.base.m() != 1)
    throw UnsupportedError(
        "sigma_W_adjusted: the adjusted objective needs univariate output");
  const int r = space.r;
  const int N = fd.base.N();
  const double V = fd.base.V(0, 0);
  const bool mc = fm.method == FourthMomentMatrix::Method::MonteCarlo;
  if (mc) check_same_model(fm, fd.base, "sigma_W_adjusted");

  MatrixXd M = MatrixXd::Zero(r, r);
  MatrixXcd U = MatrixXcd::Zero(r, N * N);
  MatrixXcd Ut = MatrixXcd::Zero(r, N * N);
  const double step = 2.0 * M_PI / nodes;
  VectorXd dp(r);
  for (int k = 0; k < nodes; ++k) {
    const double w = -M_PI + step * k;
    const cd z = std::exp(cd(0.0, w));
    const double p0 = std::norm(pi_polynomial(fd.base, z)(0, 0));
    for (int t = 0; t < r; ++t)
      dp(t) = (std::norm(pi_polynomial(fd.up[t], z)(0, 0)) -
               std::norm(pi_polynomial(fd.down[t], z)(0, 0))) /
              (2.0 * fd.h(t));
    const VectorXd G = -dp / p0;
    M.noalias() += step * (G * G.transpose());
    if (mc) {
      const MatrixXcd phi_p = transfer_phi(fd.base, z);
      const MatrixXcd phi_m = transfer_phi(fd.base, std::conj(z));
      Eigen::RowVectorXcd row(N * N), row_t(N * N);
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          row(a * N + b) = phi_p(0, a) * phi_m(0, b);
          row_t(a * N + b) = phi_m(0, a) * phi_p(0, b);
        }
      U.noalias() += step * (dp.cast<cd>() * row);
      Ut.noalias() += step * (dp.cast<cd>() * row_t);
    }
  }

  const MatrixXd HA = (V / (2.0 * M_PI)) * M;
  MatrixXd SA = (V * V / M_PI) * M;
  if (mc) {
    const double scale =
        std::max(1.0, std::max(U.real().cwiseAbs().maxCoeff(),
                               Ut.real().cwiseAbs().maxCoeff()));
    if (std::max(U.imag().cwiseAbs().maxCoeff(),
                 Ut.imag().cwiseAbs().maxCoeff()) > 1e-8 * scale)
      throw NumericIntegrityError(
          "sigma_W_adjusted: contraction integrals failed to come out real");
    const MatrixXd kernel = correction_kernel(fm);
    SA += (U.real() * kernel * Ut.real().transpose()) /
          (4.0 * M_PI * M_PI);
    SA = 0.5 * (SA + SA.transpose());
  }

  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(HA);
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(0.0, HA.trace()))
    throw DegeneracyError(
        "sigma_W_adjusted: hessian is numerically singular; the "
        "parametrization is not identifiable at theta");
  const MatrixXd Hinv = HA.inverse();
  const MatrixXd W = Hinv * SA * Hinv;
  return 0.5 * (W + W.transpose());
}

double sigma_eta(const SampledModel& sm, const std::vector<MatrixXcd>& eta,
                 const FourthMomentMatrix& fm) {
  const int K = static_cast<int>(eta.size()) - 1;
  if (K < 8 || K % 2 != 0)
    throw InvalidInputError(
        "sigma_eta: eta must be given on an even grid with >= 9 points");
  const int m = sm.m();
  const int N = sm.N();
  double eta_scale = 0.0;
  for (const MatrixXcd& e : eta) {
    if (e.rows() != m || e.cols() != m)
      throw InvalidInputError("sigma_eta: eta dimension mismatch");
    eta_scale = std::max(eta_scale, e.cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12 * (1.0 + eta_scale);
  for (int k = 0; k <= K; ++k) {
    if ((eta[k] - eta[k].transpose()).cwiseAbs().maxCoeff() > tol)
      throw InvalidInputError("sigma_eta: eta must be pointwise symmetric");
    if ((eta[K - k] - eta[k].conjugate()).cwiseAbs().maxCoeff() > tol)
      throw InvalidInputError(
          "sigma_eta: eta(-w) must equal the conjugate of eta(w)");
  }
  const bool mc = fm.method == FourthMomentMatrix::Method::MonteCarlo;
  if (mc) check_same_model(fm, sm, "sigma_eta");

  const SpectralEvaluator ev(sm);
  const double step = 2.0 * M_PI / K;
  cd first(0.0, 0.0);
  VectorXcd u = VectorXcd::Zero(N * N), ut = VectorXcd::Zero(N * N);
  for (int k = 0; k <= K; ++k) {
    const double w = -M_PI + step * k;
    const double weight = (k == 0 || k == K) ? 0.5 : 1.0;
    const MatrixXcd f = ev(w);
    first += weight * (eta[k] * f * eta[k] * f).trace();
    if (mc) {
      const cd z = std::exp(cd(0.0, w));
      const MatrixXcd phi_p = transfer_phi(sm, z);
      const MatrixXcd phi_m = transfer_phi(sm, std::conj(z));
      const MatrixXcd gu = phi_p.transpose() * eta[k] * phi_m;
      const MatrixXcd gt = phi_m.transpose() * eta[k] * phi_p;
      u += weight * step * Eigen::Map<const VectorXcd>(gu.data(), N * N);
      ut += weight * step * Eigen::Map<const VectorXcd>(gt.data(), N * N);
    }
  }
  if (std::abs(first.imag()) > 1e-8 * std::max(1.0, std::abs(first.real())))
    throw NumericIntegrityError(
        "sigma_eta: trace integral failed to come out real");
  double total = first.real() * step / M_PI;

  if (mc) {
    const MatrixXd kernel = correction_kernel(fm);
    VectorXcd ku = (kernel * u.real()).cast<cd>();
    ku += cd(0.0, 1.0) * (kernel * u.imag()).cast<cd>();
    const cd corr = (ut.transpose() * ku)(0, 0);
    if (std::abs(corr.imag()) >
        1e-8 * std::max(1.0, std::abs(total) + std::abs(corr.real())))
      throw NumericIntegrityError(
          "sigma_eta: correction failed to come out real");
    total += corr.real() / (16.0 * std::pow(M_PI, 4));
  }
  return total;
}

std::vector<ConfidenceInterval> confidence_intervals(
    const EstimationResult& result, const MatrixXd& cov, long n, double level) {
  const long r = result.theta_hat.size();
  if (r < 1)
    throw InvalidInputError("confidence_intervals: empty estimate");
  if (cov.rows() != r || cov.cols() != r)
    throw InvalidInputError(
        "confidence_intervals: covariance does not match the estimate");
  if (n < 1) throw InvalidInputError("confidence_intervals: n must be >= 1");
  if (!(level > 0.0 && level < 1.0))
    throw RangeError("confidence_intervals: level must be in (0, 1)");

  const double z = normal_quantile(0.5 + level / 2.0);
  const double floor = -1e-12 * std::max(1.0, std::abs(cov.trace()));
  std::vector<ConfidenceInterval> out(static_cast<std::size_t>(r));
  for (long i = 0; i < r; ++i) {
    const double var = cov(i, i);
    if (var < floor)
      throw InvalidInputError(
          "confidence_intervals: negative variance on the diagonal");
    const double half = z * std::sqrt(std::max(var, 0.0) / n);
    out[i].lower = result.theta_hat(i) - half;
    out[i].upper = result.theta_hat(i) + half;
  }
  return out;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw RangeError("normal_quantile: p must be in (0, 1)");

  // Acklam's rational approximation, then one Halley step through erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double s = q * q;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) *
        q /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double uu = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - uu / (1.0 + x * uu / 2.0);
}

} // namespace mcarma
