#include <complex>

#include "doctest.h"
#include "mcarma/errors.hpp"
#include "mcarma/model_zoo.hpp"
#include "mcarma/sampled_model.hpp"

using namespace mcarma;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cd = std::complex<double>;

namespace {

// Truncated MA(infinity) series Phi(z) ~ C sum_{j=0}^{J} (eAD z)^j.
MatrixXcd phi_series_oracle(const SampledModel& sm, cd z, int J) {
  MatrixXcd term = MatrixXcd::Identity(sm.N(), sm.N());
  MatrixXcd acc = term;
  const MatrixXcd step = sm.eAD.cast<cd>() * z;
  for (int j = 1; j <= J; ++j) {
    term = step * term;
    acc += term;
  }
  return sm.model.C.cast<cd>() * acc;
}

// Truncated series Pi^{-1}(z) ~ I + C sum_{j=1}^{J} eAD^{j-1} K z^j.
MatrixXcd pi_inverse_series_oracle(const SampledModel& sm, cd z, int J) {
  MatrixXcd acc = MatrixXcd::Identity(sm.m(), sm.m());
  MatrixXcd pw = MatrixXcd::Identity(sm.N(), sm.N());
  const MatrixXcd eAD = sm.eAD.cast<cd>();
  const MatrixXcd CK = sm.K.cast<cd>();
  cd zj = z;
  for (int j = 1; j <= J; ++j) {
    acc += sm.model.C.cast<cd>() * pw * CK * zj;
    pw = eAD * pw;
    zj *= z;
  }
  return acc;
}

MatrixXcd spectral_via_phi(const SampledModel& sm, double omega) {
  const cd zm = std::exp(cd(0.0, -omega));
  const cd zp = std::exp(cd(0.0, omega));
  const MatrixXcd lhs = transfer_phi(sm, zm);
  const MatrixXcd rhs = transfer_phi(sm, zp).transpose();
  return lhs * sm.sigma_N.cast<cd>() * rhs / (2.0 * M_PI);
}

MatrixXcd spectral_via_pi(const SampledModel& sm, double omega) {
  const cd zm = std::exp(cd(0.0, -omega));
  const cd zp = std::exp(cd(0.0, omega));
  const MatrixXcd lhs = pi_inverse(sm, zm);
  const MatrixXcd rhs = pi_inverse(sm, zp).transpose();
  return lhs * (sm.V.cast<cd>() / (2.0 * M_PI)) * rhs;
}

ContinuousModel scalar_ou() {
  ContinuousModel md;
  md.A = MatrixXd::Constant(1, 1, -1.0);
  md.B = MatrixXd::Identity(1, 1);
  md.C = MatrixXd::Identity(1, 1);
  md.sigma_L = MatrixXd::Identity(1, 1);
  return md;
}

} // namespace

TEST_SUITE("sampled_model") {

TEST_CASE("identity observation collapses the filter") {
  const ModelFamily& fam = family_by_name("mcar1_biv");
  const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
  CHECK((sm.omega - sm.sigma_N).norm() <= 1e-10);
  CHECK((sm.K - sm.eAD).norm() <= 1e-10);
  CHECK((sm.V - sm.sigma_N).norm() <= 1e-10);
  CHECK(sm.F.norm() <= 1e-10);
}

TEST_CASE("scalar OU fields match closed forms") {
  const SampledModel sm = build_sampled(scalar_ou(), 1.0);
  const double ead = std::exp(-1.0);
  const double sn = (1.0 - std::exp(-2.0)) / 2.0;
  CHECK(sm.eAD(0, 0) == doctest::Approx(ead).epsilon(1e-10));
  CHECK(sm.sigma_N(0, 0) == doctest::Approx(sn).epsilon(1e-10));
  CHECK(sm.omega(0, 0) == doctest::Approx(sn).epsilon(1e-10));
  CHECK(sm.K(0, 0) == doctest::Approx(ead).epsilon(1e-10));
  CHECK(sm.V(0, 0) == doctest::Approx(sn).epsilon(1e-10));
  CHECK(std::abs(sm.F(0, 0)) <= 1e-12);
}

TEST_CASE("every family builds with a stable filter") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    CHECK(spectral_radius(sm.F) < 1.0);
    CHECK(is_symmetric_positive_definite(sm.V, 1e-9));
    CHECK(is_symmetric_positive_definite(sm.sigma_N, 1e-9));
  }
}

TEST_CASE("transfer_phi equals the truncated series") {
  const SampledModel ou = build_sampled(scalar_ou(), 1.0);
  const ModelFamily& fam = family_by_name("mcarma21_biv");
  const SampledModel big = build_sampled(fam.build(fam.default_theta0), 1.0);
  for (double omega : {0.0, 0.3, 1.1, 2.7, -2.0}) {
    const cd z = std::exp(cd(0.0, omega));
    CHECK((transfer_phi(ou, z) - phi_series_oracle(ou, z, 2000)).norm() <=
          1e-10);
    CHECK((transfer_phi(big, z) - phi_series_oracle(big, z, 2000)).norm() <=
          1e-10);
  }
}

TEST_CASE("transfer_phi geometric-series spot value") {
  ContinuousModel md = scalar_ou();
  md.A(0, 0) = -std::log(2.0);
  const SampledModel sm = build_sampled(md, 1.0);
  const MatrixXcd phi1 = transfer_phi(sm, cd(1.0, 0.0));
  CHECK(std::abs(phi1(0, 0) - cd(2.0, 0.0)) <= 1e-12);
}

TEST_CASE("identity observation makes transfer_phi the inverse filter") {
  const ModelFamily& fam = family_by_name("mcar1_biv");
  const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
  for (int k = 0; k < 64; ++k) {
    const double omega = -M_PI + 2.0 * M_PI * (k + 0.5) / 64.0;
    const cd z = std::exp(cd(0.0, omega));
    CHECK((transfer_phi(sm, z) - pi_inverse(sm, z)).norm() <= 1e-10);
  }
}

TEST_CASE("pi_polynomial at zero is the identity") {
  for (const std::string& name : family_names()) {
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    const MatrixXcd p0 = pi_polynomial(sm, cd(0.0, 0.0));
    CHECK((p0 - MatrixXcd::Identity(sm.m(), sm.m())).norm() <= 1e-14);
  }
}

TEST_CASE("pi_polynomial times pi_inverse is the identity on the circle") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    const MatrixXcd I = MatrixXcd::Identity(sm.m(), sm.m());
    for (int k = 0; k < 64; ++k) {
      const double omega = -M_PI + 2.0 * M_PI * k / 64.0;
      const cd z = std::exp(cd(0.0, omega));
      CHECK((pi_polynomial(sm, z) * pi_inverse(sm, z) - I).norm() <= 1e-10);
    }
  }
}

TEST_CASE("pi_inverse equals its truncated moving-average series") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    for (double omega : {0.4, -1.3, 2.9}) {
      const cd z = std::exp(cd(0.0, omega));
      CHECK((pi_inverse(sm, z) - pi_inverse_series_oracle(sm, z, 3000)).norm() <=
            1e-10);
    }
  }
}

TEST_CASE("scalar OU filter polynomial by hand") {
  const SampledModel sm = build_sampled(scalar_ou(), 1.0);
  for (double omega : {0.0, 0.7, -2.1}) {
    const cd z = std::exp(cd(0.0, omega));
    const cd expected = 1.0 - std::exp(-1.0) * z;
    CHECK(std::abs(pi_polynomial(sm, z)(0, 0) - expected) <= 1e-12);
  }
}

TEST_CASE("both spectral-density routes agree") {
  for (const std::string& name : family_names()) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    const SampledModel sm = build_sampled(fam.build(fam.default_theta0), 1.0);
    for (int k = 0; k < 256; ++k) {
      const double omega = -M_PI + 2.0 * M_PI * (k + 0.5) / 256.0;
      CHECK((spectral_via_phi(sm, omega) - spectral_via_pi(sm, omega)).norm() <=
            1e-8);
    }
  }
}

TEST_CASE("driver-covariance scale flows through linearly") {
  const double c = 3.7;
  for (const std::string& name : {std::string("mcarma21_biv"),
                                  std::string("carma21")}) {
    CAPTURE(name);
    const ModelFamily& fam = family_by_name(name);
    ContinuousModel base = fam.build(fam.default_theta0);
    ContinuousModel scaled = base;
    scaled.sigma_L *= c;
    const SampledModel sm0 = build_sampled(base, 1.0);
    const SampledModel sm1 = build_sampled(scaled, 1.0);
    CHECK((sm1.sigma_N - c * sm0.sigma_N).norm() <= 1e-10 * c);
    CHECK((sm1.omega - c * sm0.omega).norm() <= 1e-10 * c);
    CHECK((sm1.V - c * sm0.V).norm() <= 1e-10 * c);
    CHECK((sm1.K - sm0.K).norm() <= 1e-10);
    CHECK((sm1.F - sm0.F).norm() <= 1e-10);
    for (double omega : {0.5, -1.9}) {
      const cd z = std::exp(cd(0.0, omega));
      CHECK((pi_polynomial(sm1, z) - pi_polynomial(sm0, z)).norm() <= 1e-10);
    }
  }
}

TEST_CASE("invalid inputs are rejected") {
  ContinuousModel md = scalar_ou();
  CHECK_THROWS_AS(build_sampled(md, 0.0), InvalidInputError);
  CHECK_THROWS_AS(build_sampled(md, -1.0), InvalidInputError);

  ContinuousModel bad_shape = scalar_ou();
  bad_shape.C = MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(bad_shape.validate(), InvalidInputError);

  ContinuousModel bad_sigma = scalar_ou();
  bad_sigma.sigma_L(0, 0) = -1.0;
  CHECK_THROWS_AS(bad_sigma.validate(), InvalidInputError);
}

} // TEST_SUITE
