#include <cmath>
#include <complex>

#include "doctest.h"
#include "mcarma/errors.hpp"
#include "mcarma/levy_sim.hpp"
#include "mcarma/model_zoo.hpp"
#include "mcarma/rng.hpp"
#include "mcarma/spectral.hpp"

using namespace mcarma;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

ContinuousModel scalar_ou() {
  ContinuousModel md;
  md.A = MatrixXd::Constant(1, 1, -1.0);
  md.B = MatrixXd::Identity(1, 1);
  md.C = MatrixXd::Identity(1, 1);
  md.sigma_L = MatrixXd::Identity(1, 1);
  return md;
}

SamplePath path_from(const std::vector<double>& ys) {
  SamplePath path;
  path.delta = 1.0;
  path.observations.resize(static_cast<long>(ys.size()), 1);
  for (std::size_t k = 0; k < ys.size(); ++k)
    path.observations(static_cast<long>(k), 0) = ys[k];
  return path;
}

// Direct O(n^2) periodogram oracle at one frequency.
MatrixXcd direct_periodogram(const SamplePath& path, double omega) {
  const long n = path.n();
  const long m = path.m();
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(m);
  for (long k = 1; k <= n; ++k)
    d += path.observations.row(k - 1).transpose().cast<cd>() *
         std::exp(cd(0.0, -omega * static_cast<double>(k)));
  return d * d.adjoint() / (2.0 * M_PI * static_cast<double>(n));
}

MatrixXd stationary_acvf(const SampledModel& sm, int h) {
  const MatrixXd xi = discrete_lyapunov(sm.eAD, sm.sigma_N);
  MatrixXd pw = MatrixXd::Identity(sm.N(), sm.N());
  for (int i = 0; i < h; ++i) pw = sm.eAD * pw;
  return sm.model.C * pw * xi * sm.model.C.transpose();
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("spectral density integrates to the lag-zero covariance") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    const MatrixXd target = stationary_acvf(sm, 0);
    const int nodes = 8192;
    MatrixXcd acc = MatrixXcd::Zero(sm.m(), sm.m());
    for (int k = 0; k <= nodes; ++k) {
      const double omega = -M_PI + 2.0 * M_PI * k / nodes;
      const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
      acc += w * spectral_density(sm, omega);
    }
    acc *= 2.0 * M_PI / nodes;
    CHECK((acc.real() - target).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(acc.imag().cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("frequency reflection transposes the density") {
  const ModelFamily& fam = family_by_name("MCARMA21_biv");
  const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
  CounterRng rng(2024u, 0);
  for (int k = 0; k < 100; ++k) {
    const double omega = M_PI * (2.0 * rng.next_uniform() - 1.0);
    const MatrixXcd fp = spectral_density(sm, omega);
    const MatrixXcd fm = spectral_density(sm, -omega);
    CHECK((fm - fp.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scalar OU density at zero frequency by hand") {
  const SampledModel sm = build_sampled(scalar_ou(), 1.0);
  const double expected =
      sm.sigma_N(0, 0) / (2.0 * M_PI * std::pow(1.0 - std::exp(-1.0), 2));
  const MatrixXcd f0 = spectral_density(sm, 0.0);
  CHECK(std::abs(f0(0, 0).real() - expected) <= 1e-12);
  CHECK(std::abs(f0(0, 0).imag()) <= 1e-14);
}

TEST_CASE("density is Hermitian positive semidefinite") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    for (int k = 0; k < 64; ++k) {
      const double omega = -M_PI + 2.0 * M_PI * (k + 0.5) / 64.0;
      const MatrixXcd f = spectral_density(sm, omega);
      CHECK((f - f.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(f);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("evaluator agrees with the direct density") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    const SpectralEvaluator eval(sm);
    for (int k = 0; k < 128; ++k) {
      const double omega = -M_PI + 2.0 * M_PI * k / 128.0;
      CHECK((eval(omega) - spectral_density(sm, omega)).cwiseAbs().maxCoeff() <=
            1e-10);
    }
  }
}

TEST_CASE("autocovariance of a zero path vanishes") {
  const SamplePath path = path_from({0, 0, 0, 0, 0});
  const AutocovarianceSet acvf = sample_autocovariance(path, 3);
  for (int h = 0; h <= 3; ++h) CHECK(acvf.at(h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("autocovariance hand values on (1, 2, 3)") {
  const SamplePath path = path_from({1, 2, 3});
  const AutocovarianceSet acvf = sample_autocovariance(path, 2);
  CHECK(acvf.at(0)(0, 0) == doctest::Approx(14.0 / 3.0).epsilon(1e-14));
  CHECK(acvf.at(1)(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(acvf.at(2)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("autocovariance lag out of range is rejected") {
  const SamplePath path = path_from({1, 2, 3});
  CHECK_THROWS_AS(sample_autocovariance(path, 3), RangeError);
  CHECK_THROWS_AS(sample_autocovariance(path, -1), RangeError);
}

TEST_CASE("long OU path autocovariance is consistent") {
  const ContinuousModel md = scalar_ou();
  const SampledModel sm = build_sampled(md, 1.0);
  const int n = 100000;
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, n, 83u);
  const AutocovarianceSet acvf = sample_autocovariance(path, 1);
  const double target = stationary_acvf(sm, 1)(0, 0);
  double band = 0.0;
  for (int h = -50; h <= 50; ++h)
    band += 2.0 * std::pow(stationary_acvf(sm, std::abs(h))(0, 0), 2);
  CHECK(std::abs(acvf.at(1)(0, 0) - target) <= 3.0 * std::sqrt(band / n));
}

TEST_CASE("periodogram of a zero path vanishes") {
  SamplePath path;
  path.delta = 1.0;
  path.observations = MatrixXd::Zero(6, 2);
  const PeriodogramGrid grid = periodogram(path);
  CHECK(grid.n == 6);
  CHECK(grid.m == 2);
  CHECK(static_cast<int>(grid.values.size()) == 12);
  for (const MatrixXcd& v : grid.values)
    CHECK(v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fft periodogram equals the direct sum") {
  CounterRng rng(5u, 0);
  SamplePath path;
  path.delta = 1.0;
  path.observations.resize(8, 1);
  for (int k = 0; k < 8; ++k) path.observations(k, 0) = rng.next_gauss();
  const PeriodogramGrid grid = periodogram(path);
  for (int j = -7; j <= 8; ++j) {
    const double omega = grid.omega(j);
    CHECK(omega == doctest::Approx(M_PI * j / 8.0).epsilon(1e-15));
    CHECK((grid.value(j) - direct_periodogram(path, omega)).cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("fft periodogram equals the direct sum for a bivariate path") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 16, 7u);
  const PeriodogramGrid grid = periodogram(path);
  for (int j = -15; j <= 16; ++j)
    CHECK((grid.value(j) - direct_periodogram(path, grid.omega(j))).cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("grid sum recovers the lag-zero autocovariance") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 128, 13u);
  const PeriodogramGrid grid = periodogram(path);
  MatrixXcd acc = MatrixXcd::Zero(1, 1);
  for (int j = -127; j <= 128; ++j) acc += grid.value(j);
  acc *= M_PI / 128.0;
  const AutocovarianceSet acvf = sample_autocovariance(path, 0);
  CHECK((acc.real() - acvf.at(0)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(acc.imag().cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("periodogram is the fourier series of the autocovariances") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const int n = 64;
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, n, 19u);
  const PeriodogramGrid grid = periodogram(path);
  const AutocovarianceSet acvf = sample_autocovariance(path, n - 1);
  for (int j = -n + 1; j <= n; j += 7) {
    const double omega = grid.omega(j);
    MatrixXcd acc = MatrixXcd::Zero(2, 2);
    for (int h = -(n - 1); h <= n - 1; ++h) {
      const MatrixXd g =
          h >= 0 ? acvf.at(h) : MatrixXd(acvf.at(-h).transpose());
      acc += g.cast<cd>() * std::exp(cd(0.0, -omega * h));
    }
    acc /= 2.0 * M_PI;
    CHECK((grid.value(j) - acc).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("periodogram grid values are Hermitian PSD and reflect") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 32, 37u);
  const PeriodogramGrid grid = periodogram(path);
  for (int j = -31; j <= 32; ++j) {
    const MatrixXcd& v = grid.value(j);
    CHECK((v - v.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(v);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    if (j > -31 && j < 32)
      CHECK((grid.value(-j) - MatrixXcd(v.transpose())).cwiseAbs()
                .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("short paths are rejected") {
  SamplePath path;
  path.delta = 1.0;
  path.observations = MatrixXd::Zero(1, 1);
  CHECK_THROWS_AS(periodogram(path), RangeError);
}

TEST_CASE("mean periodogram approximates the spectral density") {
  const ContinuousModel md = scalar_ou();
  const SampledModel sm = build_sampled(md, 1.0);
  const int n = 256;
  const int reps = 200;
  const int j = 64; // omega = pi/4, interior grid point
  cd acc(0.0, 0.0);
  std::vector<double> draws;
  for (int r = 0; r < reps; ++r) {
    const SamplePath path = exact_gaussian_sample(
        md, md.sigma_L, 1.0, n, derive_seed(401u, r, 0));
    const PeriodogramGrid grid = periodogram(path);
    acc += grid.value(j)(0, 0);
    draws.push_back(grid.value(j)(0, 0).real());
  }
  const double mean = acc.real() / reps;
  double var = 0.0;
  for (double x : draws) var += (x - mean) * (x - mean);
  var /= reps - 1;
  const double target = spectral_density(sm, M_PI * j / n)(0, 0).real();
  CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(var / reps));
}

} // TEST_SUITE
