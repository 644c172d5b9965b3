#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mcarma/estimators.hpp"
#include "mcarma/sampled_model.hpp"

namespace mcarma {

/// One of the four Echelon-canonical parametrizations shipped with the
/// library, with its true parameter vector and default box bounds.
struct ModelFamily {
  std::string name;
  int r = 0;
  int N = 0, m = 0, d = 0;
  Eigen::VectorXd default_theta0;
  Eigen::VectorXd lower, upper;
  ContinuousModel (*builder)(const Eigen::VectorXd&) = nullptr;

  ContinuousModel build(const Eigen::VectorXd& theta) const;
  ParamSpace space() const;
};

/// Bivariate MCARMA(2,1), theta in R^10:
///   A = [[t1, t2, 0], [0, 0, 1], [t3, t4, t5]],
///   B = [[t1, t2], [t6, t7], [t3 + t5 t6, t6 + t5 t7]],
///   C = [[1,0,0],[0,1,0]], Sigma_L = [[t8, t9], [t9, t10]].
ContinuousModel build_mcarma21_biv(const Eigen::VectorXd& theta);

/// Bivariate MCAR(1), theta in R^7:
///   A = B = [[t1, t2], [t3, t4]], C = I_2, Sigma_L = [[t5, t6], [t6, t7]].
ContinuousModel build_mcar1_biv(const Eigen::VectorXd& theta);

/// Univariate CARMA(2,1), theta in R^3:
///   A = [[0, 1], [t1, t2]], B = (t3, t1 + t2 t3)^T, C = (1, 0),
///   sigma_L^2 fixed at 1.
ContinuousModel build_carma21(const Eigen::VectorXd& theta);

/// Univariate CAR(3), theta in R^3: companion A with last row theta,
/// B = (0, 0, t1)^T, C = (1, 0, 0).
ContinuousModel build_car3(const Eigen::VectorXd& theta);

const ModelFamily& family_by_name(const std::string& name);
std::vector<std::string> family_names();

} // namespace mcarma
