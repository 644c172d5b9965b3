#include "mcarma/matrix_core.hpp"

#include <cmath>

#include "mcarma/errors.hpp"

namespace mcarma {

namespace {

using Eigen::MatrixXd;

void pade3(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {120.0, 60.0, 12.0, 1.0};
  const MatrixXd I = MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd A2 = A * A;
  U.noalias() = A * (b[3] * A2 + b[1] * I);
  V = b[2] * A2 + b[0] * I;
}

void pade5(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  const MatrixXd I = MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd A2 = A * A;
  const MatrixXd A4 = A2 * A2;
  U.noalias() = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade7(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                             25200.0,    1512.0,    56.0,      1.0};
  const MatrixXd I = MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd A2 = A * A;
  const MatrixXd A4 = A2 * A2;
  const MatrixXd A6 = A4 * A2;
  U.noalias() = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade9(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {17643225600.0, 8821612800.0, 2075673600.0,
                             302702400.0,   30270240.0,   2162160.0,
                             110880.0,      3960.0,       90.0,
                             1.0};
  const MatrixXd I = MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd A2 = A * A;
  const MatrixXd A4 = A2 * A2;
  const MatrixXd A6 = A4 * A2;
  const MatrixXd A8 = A6 * A2;
  U.noalias() = A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade13(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const MatrixXd I = MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd A2 = A * A;
  const MatrixXd A4 = A2 * A2;
  const MatrixXd A6 = A4 * A2;
  MatrixXd tmp = A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2);
  tmp += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
  U.noalias() = A * tmp;
  V.noalias() = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2);
  V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

} // namespace

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A, double t) {
  if (!A.allFinite() || !std::isfinite(t))
    throw InvalidInputError("matrix_exp: non-finite input");
  if (A.rows() != A.cols())
    throw InvalidInputError("matrix_exp: matrix must be square");

  MatrixXd At = A * t;
  const double l1norm = At.cwiseAbs().colwise().sum().maxCoeff();
  MatrixXd U, V;
  int squarings = 0;
  if (l1norm < 1.495585217958292e-2) {
    pade3(At, U, V);
  } else if (l1norm < 2.539398330063230e-1) {
    pade5(At, U, V);
  } else if (l1norm < 9.504178996162932e-1) {
    pade7(At, U, V);
  } else if (l1norm < 2.097847961257068) {
    pade9(At, U, V);
  } else {
    const double maxnorm = 5.371920351148152;
    std::frexp(l1norm / maxnorm, &squarings);
    if (squarings < 0) squarings = 0;
    At *= std::ldexp(1.0, -squarings);
    pade13(At, U, V);
  }
  MatrixXd result = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::MatrixXd noise_covariance(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& sigma_L,
                                 double delta) {
  if (!(delta > 0.0)) throw InvalidInputError("noise_covariance: delta must be > 0");
  if (!A.allFinite() || !B.allFinite())
    throw InvalidInputError("noise_covariance: non-finite input");
  if (!is_symmetric_positive_definite(sigma_L))
    throw InvalidInputError("noise_covariance: Sigma_L must be symmetric positive definite");
  const long N = A.rows();
  if (B.rows() != N || sigma_L.rows() != B.cols())
    throw InvalidInputError("noise_covariance: inconsistent shapes");

  // Van Loan block construction:
  //   exp([[-A, B Sigma_L B^T], [0, A^T]] delta) = [[X, Y], [0, Z]]
  // with Z = e^{A^T delta} and Z^T Y = Sigma_N.
  MatrixXd M = MatrixXd::Zero(2 * N, 2 * N);
  M.topLeftCorner(N, N) = -A;
  M.topRightCorner(N, N) = B * sigma_L * B.transpose();
  M.bottomRightCorner(N, N) = A.transpose();
  const MatrixXd E = matrix_exp(M, delta);
  MatrixXd S = E.bottomRightCorner(N, N).transpose() * E.topRightCorner(N, N);
  return 0.5 * (S + S.transpose());
}

Eigen::MatrixXd solve_riccati(const Eigen::MatrixXd& eAD,
                              const Eigen::MatrixXd& sigma_N,
                              const Eigen::MatrixXd& C) {
  const long N = eAD.rows();
  const long m = C.rows();
  if (sigma_N.rows() != N || C.cols() != N)
    throw InvalidInputError("solve_riccati: inconsistent shapes");

  const double tol = 1e-12;
  const long budget = 100000;
  MatrixXd omega = sigma_N;
  double diff = 0.0;
  for (long it = 0; it < budget; ++it) {
    const MatrixXd CO = C * omega;                       // m x N
    const MatrixXd V = CO * C.transpose();               // m x m
    Eigen::LDLT<MatrixXd> ldlt(0.5 * (V + V.transpose()));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw DegeneracyError("solve_riccati: C Omega C^T not positive definite");
    const MatrixXd G = eAD * omega * C.transpose();      // N x m
    MatrixXd next = eAD * omega * eAD.transpose() + sigma_N -
                    G * ldlt.solve(G.transpose());
    next = 0.5 * (next + next.transpose()).eval();
    diff = (next - omega).norm();
    omega = next;
    if (diff <= tol) return omega;
  }
  throw ConvergenceError("solve_riccati: fixed point did not converge", diff);
}

double riccati_residual(const Eigen::MatrixXd& eAD,
                        const Eigen::MatrixXd& sigma_N,
                        const Eigen::MatrixXd& C,
                        const Eigen::MatrixXd& omega) {
  const MatrixXd V = C * omega * C.transpose();
  const MatrixXd G = eAD * omega * C.transpose();
  const MatrixXd rhs = eAD * omega * eAD.transpose() + sigma_N -
                       G * V.ldlt().solve(G.transpose());
  return (omega - rhs).norm();
}

Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& eAD,
                            const Eigen::MatrixXd& omega,
                            const Eigen::MatrixXd& C) {
  const MatrixXd V = 0.5 * ((C * omega * C.transpose()).eval() +
                            (C * omega * C.transpose()).transpose().eval());
  Eigen::JacobiSVD<MatrixXd> svd(V);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12)
    throw DegeneracyError("kalman_gain: C Omega C^T numerically singular");
  const MatrixXd K = (eAD * omega * C.transpose()) * V.ldlt().solve(
                         MatrixXd::Identity(V.rows(), V.cols()));
  const double rho = spectral_radius(eAD - K * C);
  if (rho >= 1.0)
    throw NumericalError("kalman_gain: filter matrix eAD - K C is not stable");
  return K;
}

SpectrumReport check_assumptions(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& C,
                                 const Eigen::MatrixXd& sigma_L,
                                 double delta) {
  if (A.rows() != A.cols() || C.cols() != A.rows())
    throw InvalidInputError("check_assumptions: inconsistent shapes");
  SpectrumReport rep;
  const Eigen::EigenSolver<MatrixXd> es(A);
  const double pi = 3.14159265358979323846;
  rep.stable = true;
  rep.strip_ok = true;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    rep.eigenvalues.push_back(ev);
    if (!(ev.real() < -1e-12)) rep.stable = false;
    if (!(std::abs(ev.imag()) < pi / delta)) rep.strip_ok = false;
  }
  rep.c_full_rank =
      Eigen::FullPivLU<MatrixXd>(C).rank() == std::min(C.rows(), C.cols()) &&
      C.rows() <= C.cols();
  rep.sigma_l_pd = is_symmetric_positive_definite(sigma_L);
  return rep;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  return Eigen::EigenSolver<MatrixXd>(M, false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

Eigen::MatrixXd discrete_lyapunov(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Q) {
  // vec(X) = (I - A (x) A)^{-1} vec(Q), column-major vec
  const long n = A.rows();
  MatrixXd Kron(n * n, n * n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i)
      Kron.block(i * n, j * n, n, n) = A(i, j) * A;
  const MatrixXd lhs = MatrixXd::Identity(n * n, n * n) - Kron;
  Eigen::VectorXd q(n * n);
  for (long j = 0; j < n; ++j) q.segment(j * n, n) = Q.col(j);
  const Eigen::VectorXd x = lhs.partialPivLu().solve(q);
  MatrixXd X(n, n);
  for (long j = 0; j < n; ++j) X.col(j) = x.segment(j * n, n);
  return 0.5 * (X + X.transpose()).eval();
}

bool is_symmetric_positive_definite(const Eigen::MatrixXd& M, double tol) {
  if (M.rows() != M.cols() || !M.allFinite()) return false;
  if ((M - M.transpose()).norm() > tol * std::max(1.0, M.norm())) return false;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  return es.eigenvalues().minCoeff() > 0.0;
}

} // namespace mcarma
