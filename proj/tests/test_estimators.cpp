#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "mcarma/errors.hpp"
#include "mcarma/estimators.hpp"
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

ContinuousModel build_scalar_ou(const VectorXd& theta) {
  ContinuousModel md;
  md.A = MatrixXd::Constant(1, 1, theta(0));
  md.B = MatrixXd::Identity(1, 1);
  md.C = MatrixXd::Identity(1, 1);
  md.sigma_L = MatrixXd::Identity(1, 1);
  return md;
}

ParamSpace scalar_ou_space() {
  ParamSpace sp;
  sp.r = 1;
  sp.lower = VectorXd::Constant(1, -3.0);
  sp.upper = VectorXd::Constant(1, -0.2);
  sp.model_builder = &build_scalar_ou;
  return sp;
}

VectorXd vec1(double x) { return VectorXd::Constant(1, x); }

// Literal term-by-term evaluation of the frequency-domain objective.
double whittle_oracle(const PeriodogramGrid& grid, const SampledModel& sm,
                      bool descending) {
  const int n = grid.n;
  double acc = 0.0;
  for (int s = 0; s < 2 * n; ++s) {
    const int j = descending ? n - s : -n + 1 + s;
    const double omega = M_PI * j / n;
    const cd z = std::exp(cd(0.0, omega));
    const MatrixXcd Q =
        (z * MatrixXcd::Identity(sm.N(), sm.N()) - sm.eAD.cast<cd>()).inverse();
    const MatrixXcd f = sm.model.C.cast<cd>() * Q * sm.sigma_N.cast<cd>() *
                        Q.adjoint() * sm.model.C.cast<cd>().transpose() /
                        (2.0 * M_PI);
    acc += (f.inverse() * grid.value(j)).trace().real() +
           std::log(f.determinant().real());
  }
  return acc / (2.0 * n);
}

double adjusted_oracle(const PeriodogramGrid& grid, const SampledModel& sm) {
  const int n = grid.n;
  double acc = 0.0;
  for (int j = -n + 1; j <= n; ++j) {
    const cd z = std::exp(cd(0.0, M_PI * j / n));
    const MatrixXcd core =
        (MatrixXcd::Identity(sm.N(), sm.N()) - sm.F.cast<cd>() * z)
            .inverse() * sm.K.cast<cd>() * z;
    const cd pi_val = (MatrixXcd::Identity(1, 1) -
                       sm.model.C.cast<cd>() * core)(0, 0);
    acc += std::norm(pi_val) * grid.value(j)(0, 0).real();
  }
  return acc * M_PI / n;
}

} // namespace

TEST_SUITE("estimators") {

TEST_CASE("whittle objective equals the direct-sum oracle") {
  const ParamSpace space = scalar_ou_space();
  const ContinuousModel md = build_scalar_ou(vec1(-1.0));
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 8, 3u);
  const PeriodogramGrid grid = periodogram(path);
  for (double theta : {-1.0, -0.7, -2.2}) {
    const SampledModel sm = build_sampled(build_scalar_ou(vec1(theta)), 1.0);
    const double expected = whittle_oracle(grid, sm, false);
    const double reversed = whittle_oracle(grid, sm, true);
    const double got = whittle_objective(grid, vec1(theta), space);
    CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    CHECK(std::abs(expected - reversed) <= 1e-12);
  }
}

TEST_CASE("whittle objective on a bivariate model matches the oracle") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 16, 5u);
  const PeriodogramGrid grid = periodogram(path);
  const ParamSpace space = fam.space();
  const SampledModel sm = build_sampled(md, 1.0);
  const double expected = whittle_oracle(grid, sm, false);
  const double got = whittle_objective(grid, fam.default_theta0, space);
  CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("whittle returns the infinity sentinel off the validity domain") {
  const ModelFamily& fam = family_by_name("MCARMA21_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 32, 9u);
  const PeriodogramGrid grid = periodogram(path);
  VectorXd bad = fam.default_theta0;
  bad(7) = -1.0; // Sigma_L loses positive definiteness
  CHECK(std::isinf(whittle_objective(grid, bad, fam.space())));
  VectorXd outside = fam.default_theta0;
  outside(0) = fam.upper(0) + 1.0;
  CHECK(std::isinf(whittle_objective(grid, outside, fam.space())));
}

TEST_CASE("whittle concentrates at the truth across replicates") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const ParamSpace space = fam.space();
  const int reps = 100;
  int wins = 0;
  for (int r = 0; r < reps; ++r) {
    const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 5000,
                                                  derive_seed(1101u, r, 0));
    const PeriodogramGrid grid = periodogram(path);
    const double at_truth = whittle_objective(grid, fam.default_theta0, space);
    bool all_larger = true;
    for (int i = 0; i < 3; ++i) {
      VectorXd shifted = fam.default_theta0;
      shifted(i) += 0.5;
      all_larger =
          all_larger && whittle_objective(grid, shifted, space) > at_truth;
    }
    wins += all_larger ? 1 : 0;
  }
  CHECK(wins >= 95);
}

TEST_CASE("whittle objective variance shrinks at the CLT rate") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const ParamSpace space = fam.space();
  auto variance_at = [&](int n, std::uint64_t seed) {
    std::vector<double> vals;
    for (int r = 0; r < 100; ++r) {
      const SamplePath path =
          exact_gaussian_sample(md, md.sigma_L, 1.0, n, derive_seed(seed, r, 0));
      vals.push_back(
          whittle_objective(periodogram(path), fam.default_theta0, space));
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    return var / (vals.size() - 1);
  };
  // 1/n decay: quadrupling n should shrink the variance by about 4.
  const double ratio = variance_at(1000, 2201u) / variance_at(4000, 2202u);
  CHECK(ratio >= 2.0);
  CHECK(ratio <= 6.0);
}

TEST_CASE("adjusted whittle matches its direct-sum oracle") {
  const ParamSpace space = scalar_ou_space();
  const ContinuousModel md = build_scalar_ou(vec1(-1.0));
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 8, 13u);
  const PeriodogramGrid grid = periodogram(path);
  for (double theta : {-1.0, -0.6}) {
    const SampledModel sm = build_sampled(build_scalar_ou(vec1(theta)), 1.0);
    const double expected = adjusted_oracle(grid, sm);
    const double got = adjusted_whittle_objective(grid, vec1(theta), space);
    CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, expected));
  }
}

TEST_CASE("adjusted whittle equals its innovation-variance form") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 64, 17u);
  const PeriodogramGrid grid = periodogram(path);
  const ParamSpace space = fam.space();
  const VectorXd theta = fam.default_theta0;
  const SampledModel sm = build_sampled(fam.build(theta), 1.0);
  double acc = 0.0;
  for (int j = -63; j <= 64; ++j)
    acc += (spectral_density(sm, grid.omega(j)).inverse() * grid.value(j))(0, 0)
               .real();
  const double alt = sm.V(0, 0) * acc / (2.0 * grid.n);
  const double got = adjusted_whittle_objective(grid, theta, space);
  CHECK(std::abs(got - alt) <= 1e-10 * std::max(1.0, std::abs(alt)));
}

TEST_CASE("adjusted whittle ignores the driver variance") {
  const SamplePath path = exact_gaussian_sample(
      build_scalar_ou(vec1(-1.0)), MatrixXd::Identity(1, 1), 1.0, 64, 19u);
  const PeriodogramGrid grid = periodogram(path);
  ParamSpace scaled = scalar_ou_space();
  scaled.model_builder = [](const VectorXd& theta) {
    ContinuousModel md = build_scalar_ou(theta);
    md.sigma_L *= 7.0;
    return md;
  };
  const double base =
      adjusted_whittle_objective(grid, vec1(-0.8), scalar_ou_space());
  const double rescaled = adjusted_whittle_objective(grid, vec1(-0.8), scaled);
  CHECK(std::abs(base - rescaled) <= 1e-12 * std::max(1.0, std::abs(base)));
}

TEST_CASE("adjusted whittle rejects multivariate output") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 16, 23u);
  const PeriodogramGrid grid = periodogram(path);
  CHECK_THROWS_AS(
      adjusted_whittle_objective(grid, fam.default_theta0, fam.space()),
      UnsupportedError);
}

TEST_CASE("qmle reproduces a hand-rolled scalar filter") {
  const ParamSpace space = scalar_ou_space();
  SamplePath path;
  path.delta = 1.0;
  path.observations.resize(5, 1);
  path.observations << 0.3, -0.7, 1.1, 0.2, -0.4;

  // C = 1 collapses the filter: K = e^{-1}, F = 0, so
  // xi_1 = y_1 and xi_k = y_k - e^{-1} y_{k-1}.
  const double ead = std::exp(-1.0);
  const double V = (1.0 - std::exp(-2.0)) / 2.0;
  double quad = path.observations(0, 0) * path.observations(0, 0);
  for (int k = 1; k < 5; ++k) {
    const double xi = path.observations(k, 0) - ead * path.observations(k - 1, 0);
    quad += xi * xi;
  }
  const double expected =
      quad / (5.0 * V) + std::log(V) - std::log(2.0 * M_PI);
  const double got = qmle_objective(path, vec1(-1.0), space);
  CHECK(std::abs(got - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("qmle reproduces an independent matrix filter loop") {
  const ModelFamily& fam = family_by_name("CAR3");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 40, 27u);
  const SampledModel sm = build_sampled(md, 1.0);

  VectorXd xhat = VectorXd::Zero(3);
  double quad = 0.0;
  for (int k = 0; k < 40; ++k) {
    if (k > 0)
      xhat = (sm.F * xhat + sm.K * path.observations.row(k - 1).transpose())
                 .eval();
    const VectorXd xi =
        path.observations.row(k).transpose() - sm.model.C * xhat;
    quad += xi.dot(sm.V.ldlt().solve(xi));
  }
  const double expected = quad / 40.0 +
                          std::log(sm.V.determinant()) -
                          1.0 * std::log(2.0 * M_PI);
  const double got = qmle_objective(path, fam.default_theta0, fam.space());
  CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("qmle on a zero path is the normalizing constant") {
  const ModelFamily& fam = family_by_name("MCAR1_biv");
  SamplePath path;
  path.delta = 1.0;
  path.observations = MatrixXd::Zero(25, 2);
  const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
  const double expected =
      std::log(sm.V.determinant()) - 2.0 * std::log(2.0 * M_PI);
  const double got = qmle_objective(path, fam.default_theta0, fam.space());
  CHECK(std::abs(got - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("whittle and qmle objectives share their population limit") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const ParamSpace space = fam.space();
  const int n = 5000;
  const int reps = 30;
  std::vector<double> diffs;
  for (int r = 0; r < reps; ++r) {
    const SamplePath path =
        exact_gaussian_sample(md, md.sigma_L, 1.0, n, derive_seed(3301u, r, 0));
    const double w =
        whittle_objective(periodogram(path), fam.default_theta0, space);
    const double q = qmle_objective(path, fam.default_theta0, space);
    diffs.push_back(w - q);
  }
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= reps;
  double var = 0.0;
  for (double d : diffs) var += (d - mean) * (d - mean);
  var /= reps - 1;
  const SampledModel sm = build_sampled(md, 1.0);
  const double gamma0 = discrete_lyapunov(sm.eAD, sm.sigma_N)(0, 0);
  // 3 sigma Monte-Carlo band plus an O(1/n) filter-transient allowance.
  CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / reps) + 10.0 * gamma0 / n);
}

TEST_CASE("minimizer recovers a quadratic optimum") {
  ParamSpace space;
  space.r = 2;
  space.lower = VectorXd::Constant(2, -3.0);
  space.upper = VectorXd::Constant(2, 3.0);
  VectorXd a(2);
  a << 0.3, -1.2;
  auto objective = [&](const VectorXd& x) { return (x - a).squaredNorm(); };
  for (double s : {2.0, -2.5, 0.0}) {
    const EstimationResult res =
        minimize(objective, space, {VectorXd::Constant(2, s)});
    CHECK(res.converged);
    CHECK((res.theta_hat - a).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(res.objective_value <= 1e-10);
  }
}

TEST_CASE("minimizer is deterministic and respects bounds") {
  ParamSpace space;
  space.r = 2;
  space.lower = VectorXd::Constant(2, -1.0);
  space.upper = VectorXd::Constant(2, 1.0);
  VectorXd a(2);
  a << 2.0, -2.0; // optimum outside the box; solution pinned at a corner
  auto objective = [&](const VectorXd& x) { return (x - a).squaredNorm(); };
  const std::vector<VectorXd> starts = {VectorXd::Zero(2),
                                        VectorXd::Constant(2, 0.5)};
  const EstimationResult r1 = minimize(objective, space, starts);
  const EstimationResult r2 = minimize(objective, space, starts);
  CHECK((r1.theta_hat - r2.theta_hat).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r1.objective_value == r2.objective_value);
  CHECK(r1.restarts_used == 2);
  CHECK((r1.theta_hat.array() >= space.lower.array() - 1e-15).all());
  CHECK((r1.theta_hat.array() <= space.upper.array() + 1e-15).all());
  CHECK((r1.theta_hat - VectorXd::Constant(2, 1.0).cwiseProduct(a.cwiseSign()))
            .cwiseAbs()
            .maxCoeff() <= 1e-6);
}

TEST_CASE("minimizer reports infeasible problems") {
  ParamSpace space;
  space.r = 1;
  space.lower = VectorXd::Constant(1, -1.0);
  space.upper = VectorXd::Constant(1, 1.0);
  auto objective = [](const VectorXd&) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(minimize(objective, space, {VectorXd::Zero(1)}),
                  InvalidInputError);
  auto fine = [](const VectorXd& x) { return x.squaredNorm(); };
  CHECK_THROWS_AS(minimize(fine, space, {VectorXd::Constant(1, 5.0)}),
                  InvalidInputError);
  CHECK_THROWS_AS(minimize(fine, space, {}), InvalidInputError);
}

TEST_CASE("default multistarts are deterministic and in bounds") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ParamSpace space = fam.space();
  const auto s1 = default_multistarts(space, fam.default_theta0, 5);
  const auto s2 = default_multistarts(space, fam.default_theta0, 5);
  REQUIRE(s1.size() == 5);
  CHECK((s1[0] - fam.default_theta0).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK((s1[i] - s2[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(space.in_bounds(s1[i]));
  }
}

TEST_CASE("whittle estimation lands near the truth") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const ParamSpace space = fam.space();
  const VectorXd table_std = (VectorXd(3) << 0.0117, 0.0149, 0.0153).finished();
  const int reps = 50;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 5000,
                                                  derive_seed(4411u, r, 0));
    const PeriodogramGrid grid = periodogram(path);
    auto objective = [&](const VectorXd& theta) {
      return whittle_objective(grid, theta, space);
    };
    const VectorXd start = fam.default_theta0.array() + 0.3;
    const EstimationResult res = minimize(objective, space, {start}, 1e-8);
    bool ok = true;
    for (int i = 0; i < 3; ++i)
      ok = ok && std::abs(res.theta_hat(i) - fam.default_theta0(i)) <=
                     3.0 * table_std(i);
    hits += ok ? 1 : 0;
  }
  CHECK(hits >= 45);
}

TEST_CASE("whittle and qmle estimates track each other") {
  const ModelFamily& fam = family_by_name("CARMA21");
  const ContinuousModel md = fam.build(fam.default_theta0);
  const ParamSpace space = fam.space();
  const VectorXd whittle_std =
      (VectorXd(3) << 0.0755, 0.0637, 0.0547).finished();
  const VectorXd qmle_std = (VectorXd(3) << 0.1926, 0.1466, 0.0674).finished();
  for (int r = 0; r < 10; ++r) {
    const SamplePath path = exact_gaussian_sample(md, md.sigma_L, 1.0, 2000,
                                                  derive_seed(5511u, r, 0));
    const EstimationResult w =
        estimate(path, space, EstimatorKind::Whittle, {fam.default_theta0});
    const EstimationResult q =
        estimate(path, space, EstimatorKind::QMLE, {fam.default_theta0});
    for (int i = 0; i < 3; ++i) {
      const double band = 3.0 * std::hypot(whittle_std(i), qmle_std(i));
      CHECK(std::abs(w.theta_hat(i) - q.theta_hat(i)) <= band);
    }
  }
}

TEST_CASE("estimator kinds round-trip through names") {
  for (EstimatorKind kind : {EstimatorKind::Whittle, EstimatorKind::AdjustedWhittle,
                             EstimatorKind::QMLE})
    CHECK(estimator_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(estimator_from_string("nonsense"), InvalidInputError);
}

} // TEST_SUITE
