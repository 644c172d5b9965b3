#include "mcarma/model_zoo.hpp"

#include <cctype>

#include "mcarma/errors.hpp"

namespace mcarma {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void require_size(const VectorXd& theta, int r, const char* name) {
  if (theta.size() != r)
    throw InvalidInputError(std::string(name) + ": theta must have length " +
                            std::to_string(r));
  if (!theta.allFinite())
    throw InvalidInputError(std::string(name) + ": theta has non-finite entries");
}

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<long>(xs.size()));
  long i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ModelFamily make_family(const std::string& name, int N, int m, int d,
                        VectorXd theta0,
                        ContinuousModel (*builder)(const VectorXd&),
                        const std::vector<std::pair<int, double>>& lower_caps,
                        const std::vector<std::pair<int, double>>& upper_caps) {
  ModelFamily fam;
  fam.name = name;
  fam.r = static_cast<int>(theta0.size());
  fam.N = N;
  fam.m = m;
  fam.d = d;
  fam.default_theta0 = theta0;
  fam.lower = theta0.array() - 5.0;
  fam.upper = theta0.array() + 5.0;
  for (auto [i, v] : lower_caps) fam.lower(i) = std::max(fam.lower(i), v);
  for (auto [i, v] : upper_caps) fam.upper(i) = std::min(fam.upper(i), v);
  fam.builder = builder;
  return fam;
}

const std::vector<ModelFamily>& families() {
  static const std::vector<ModelFamily> fams = {
      make_family("MCARMA21_biv", 3, 2, 2,
                  vec({-1, -2, 1, -2, -3, 1, 2, 0.4751, -0.1622, 0.3708}),
                  &build_mcarma21_biv, {{7, 1e-3}, {9, 1e-3}}, {}),
      make_family("MCAR1_biv", 2, 2, 2,
                  vec({1, -2, 3, -4, 0.7513, -0.3536, 0.3536}),
                  &build_mcar1_biv, {{4, 1e-3}, {6, 1e-3}}, {}),
      make_family("CARMA21", 2, 1, 1, vec({-2, -2, -1}), &build_carma21,
                  {}, {{0, -1e-3}, {1, -1e-3}}),
      make_family("CAR3", 3, 1, 1, vec({-6, -11, -6}), &build_car3,
                  {}, {{0, -1e-3}, {1, -1e-3}, {2, -1e-3}}),
  };
  return fams;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace

ContinuousModel ModelFamily::build(const VectorXd& theta) const {
  ContinuousModel model = builder(theta);
  model.validate();
  return model;
}

ParamSpace ModelFamily::space() const {
  ParamSpace sp;
  sp.r = r;
  sp.lower = lower;
  sp.upper = upper;
  sp.model_builder = builder;
  return sp;
}

ContinuousModel build_mcarma21_biv(const VectorXd& theta) {
  require_size(theta, 10, "build_mcarma21_biv");
  ContinuousModel md;
  md.A = MatrixXd{{theta(0), theta(1), 0.0},
                  {0.0, 0.0, 1.0},
                  {theta(2), theta(3), theta(4)}};
  md.B = MatrixXd{{theta(0), theta(1)},
                  {theta(5), theta(6)},
                  {theta(2) + theta(4) * theta(5),
                   theta(5) + theta(4) * theta(6)}};
  md.C = MatrixXd{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  md.sigma_L = MatrixXd{{theta(7), theta(8)}, {theta(8), theta(9)}};
  if (!is_symmetric_positive_definite(md.sigma_L))
    throw InvalidInputError(
        "build_mcarma21_biv: Sigma_L(theta) is not positive definite");
  return md;
}

ContinuousModel build_mcar1_biv(const VectorXd& theta) {
  require_size(theta, 7, "build_mcar1_biv");
  ContinuousModel md;
  md.A = MatrixXd{{theta(0), theta(1)}, {theta(2), theta(3)}};
  md.B = md.A;
  md.C = MatrixXd::Identity(2, 2);
  md.sigma_L = MatrixXd{{theta(4), theta(5)}, {theta(5), theta(6)}};
  if (!is_symmetric_positive_definite(md.sigma_L))
    throw InvalidInputError(
        "build_mcar1_biv: Sigma_L(theta) is not positive definite");
  if (std::abs(md.A.determinant()) < 1e-12)
    throw InvalidInputError("build_mcar1_biv: B(theta) = A(theta) is singular");
  return md;
}

ContinuousModel build_carma21(const VectorXd& theta) {
  require_size(theta, 3, "build_carma21");
  ContinuousModel md;
  md.A = MatrixXd{{0.0, 1.0}, {theta(0), theta(1)}};
  md.B = MatrixXd{{theta(2)}, {theta(0) + theta(1) * theta(2)}};
  md.C = MatrixXd{{1.0, 0.0}};
  md.sigma_L = MatrixXd::Identity(1, 1);
  if (md.B.norm() < 1e-12)
    throw InvalidInputError("build_carma21: B(theta) vanishes");
  return md;
}

ContinuousModel build_car3(const VectorXd& theta) {
  require_size(theta, 3, "build_car3");
  ContinuousModel md;
  md.A = MatrixXd{{0.0, 1.0, 0.0},
                  {0.0, 0.0, 1.0},
                  {theta(0), theta(1), theta(2)}};
  md.B = MatrixXd{{0.0}, {0.0}, {theta(0)}};
  md.C = MatrixXd{{1.0, 0.0, 0.0}};
  md.sigma_L = MatrixXd::Identity(1, 1);
  if (std::abs(theta(0)) < 1e-12)
    throw InvalidInputError("build_car3: theta_1 = 0 makes B vanish");
  return md;
}

const ModelFamily& family_by_name(const std::string& name) {
  for (const ModelFamily& fam : families())
    if (lower(fam.name) == lower(name)) return fam;
  std::string known;
  for (const ModelFamily& fam : families())
    known += (known.empty() ? "" : ", ") + fam.name;
  throw InvalidInputError("unknown model family '" + name + "' (known: " +
                          known + ")");
}

std::vector<std::string> family_names() {
  std::vector<std::string> names;
  for (const ModelFamily& fam : families()) names.push_back(fam.name);
  return names;
}

} // namespace mcarma
