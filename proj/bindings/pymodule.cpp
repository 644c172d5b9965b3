#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcarma/asymptotics.hpp"
#include "mcarma/config.hpp"
#include "mcarma/csv.hpp"
#include "mcarma/errors.hpp"
#include "mcarma/estimators.hpp"
#include "mcarma/levy_sim.hpp"
#include "mcarma/model_zoo.hpp"
#include "mcarma/sampled_model.hpp"
#include "mcarma/spectral.hpp"
#include "mcarma/study.hpp"

namespace py = pybind11;

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace mcarma;

LevySpec make_spec(const std::string& driver, const MatrixXd& model_sigma,
                   const std::optional<MatrixXd>& sigma_L, double nig_alpha,
                   const std::optional<VectorXd>& nig_beta, double nig_delta,
                   const std::optional<MatrixXd>& nig_Delta) {
  if (driver == "brownian")
    return LevySpec::brownian(sigma_L ? *sigma_L : model_sigma);
  if (driver == "nig") {
    if (!nig_beta || !nig_Delta)
      throw InvalidInputError(
          "nig driver needs nig_alpha, nig_beta, nig_delta and nig_Delta");
    return LevySpec::nig(nig_alpha, *nig_beta, nig_delta, *nig_Delta);
  }
  throw InvalidInputError("unknown driver '" + driver +
                          "' (expected brownian or nig)");
}

VectorXd resolve_theta(const ModelFamily& fam,
                       const std::optional<VectorXd>& theta0) {
  return theta0 ? *theta0 : fam.default_theta0;
}

py::dict family_info(const std::string& name) {
  const ModelFamily& fam = family_by_name(name);
  py::dict d;
  d["name"] = fam.name;
  d["r"] = fam.r;
  d["N"] = fam.N;
  d["m"] = fam.m;
  d["d"] = fam.d;
  d["default_theta0"] = fam.default_theta0;
  d["lower"] = fam.lower;
  d["upper"] = fam.upper;
  return d;
}

MatrixXd simulate(const std::string& family, int n,
                  const std::optional<VectorXd>& theta0, double delta,
                  std::uint64_t seed, const std::string& sampler,
                  double euler_step, double burn_in, const std::string& driver,
                  const std::optional<MatrixXd>& sigma_L, double nig_alpha,
                  const std::optional<VectorXd>& nig_beta, double nig_delta,
                  const std::optional<MatrixXd>& nig_Delta) {
  const ModelFamily& fam = family_by_name(family);
  const ContinuousModel model = fam.build(resolve_theta(fam, theta0));
  const LevySpec spec = make_spec(driver, model.sigma_L, sigma_L, nig_alpha,
                                  nig_beta, nig_delta, nig_Delta);
  SamplePath path;
  if (sampler == "euler") {
    SimulationConfig sim;
    sim.delta = delta;
    sim.euler_step = euler_step;
    sim.horizon = static_cast<double>(n) * delta;
    sim.seed = seed;
    sim.burn_in = burn_in;
    path = euler_maruyama(model, spec, sim);
  } else if (sampler == "exact") {
    path = exact_gaussian_sample(model, spec, delta, n, seed);
  } else {
    throw InvalidInputError("unknown sampler '" + sampler +
                            "' (expected euler or exact)");
  }
  return path.observations;
}

py::dict estimate_py(const MatrixXd& observations, const std::string& family,
                     double delta, const std::string& estimator,
                     const std::optional<VectorXd>& start, double level) {
  const ModelFamily& fam = family_by_name(family);
  SamplePath path;
  path.observations = observations;
  path.delta = delta;
  const EstimateReport report =
      estimate_once(path, fam, estimator_from_string(estimator),
                    resolve_theta(fam, start), level);
  MatrixXd intervals(report.intervals.size(), 2);
  for (std::size_t i = 0; i < report.intervals.size(); ++i) {
    intervals(static_cast<Eigen::Index>(i), 0) = report.intervals[i].lower;
    intervals(static_cast<Eigen::Index>(i), 1) = report.intervals[i].upper;
  }
  py::dict d;
  d["theta_hat"] = report.result.theta_hat;
  d["objective"] = report.result.objective_value;
  d["iterations"] = report.result.iterations;
  d["converged"] = report.result.converged;
  d["estimator"] = to_string(report.result.kind);
  d["covariance"] = report.covariance;
  d["intervals"] = intervals;
  return d;
}

py::dict study_py(const std::string& family,
                  const std::optional<VectorXd>& theta0,
                  const std::vector<int>& sizes, int replicates,
                  const std::vector<std::string>& estimators, double delta,
                  std::uint64_t seed, int threads, const std::string& sampler,
                  double euler_step, double burn_in, double start_spread,
                  const std::string& driver,
                  const std::optional<MatrixXd>& sigma_L, double nig_alpha,
                  const std::optional<VectorXd>& nig_beta, double nig_delta,
                  const std::optional<MatrixXd>& nig_Delta) {
  StudyConfig cfg;
  cfg.family = family;
  if (theta0) cfg.theta0 = *theta0;
  cfg.sample_sizes = sizes;
  cfg.replicates = replicates;
  cfg.estimators.clear();
  for (const std::string& name : estimators)
    cfg.estimators.push_back(estimator_from_string(name));
  cfg.delta = delta;
  cfg.seed = seed;
  cfg.threads = threads;
  if (sampler == "euler") {
    cfg.use_euler = true;
  } else if (sampler == "exact") {
    cfg.use_euler = false;
  } else {
    throw InvalidInputError("unknown sampler '" + sampler +
                            "' (expected euler or exact)");
  }
  cfg.euler_step = euler_step;
  cfg.burn_in = burn_in;
  cfg.start_spread = start_spread;
  const ModelFamily& fam = family_by_name(family);
  cfg.driver =
      make_spec(driver, fam.build(resolve_theta(fam, theta0)).sigma_L, sigma_L,
                nig_alpha, nig_beta, nig_delta, nig_Delta);

  const StudyReport report = run_study(cfg);
  py::list rows;
  for (const StudyRow& row : report.rows) {
    py::dict r;
    r["estimator"] = row.estimator;
    r["n"] = row.n;
    r["param_index"] = row.param_index;
    r["theta0"] = row.theta0;
    r["mean"] = row.mean;
    r["bias"] = row.bias;
    r["std"] = row.stddev;
    r["failures"] = row.failures;
    rows.append(r);
  }
  py::dict d;
  d["rows"] = rows;
  d["csv"] = study_csv_string(report);
  return d;
}

py::dict asymptotics_py(const std::string& family,
                        const std::optional<VectorXd>& theta0, double delta,
                        const std::string& estimator,
                        const std::string& driver, double nig_alpha,
                        const std::optional<VectorXd>& nig_beta,
                        double nig_delta,
                        const std::optional<MatrixXd>& nig_Delta,
                        long mc_samples, std::uint64_t seed, int threads,
                        int nodes) {
  const ModelFamily& fam = family_by_name(family);
  const VectorXd th = resolve_theta(fam, theta0);
  const ParamSpace space = fam.space();
  const ContinuousModel model = fam.build(th);
  const SampledModel sm = build_sampled(model, delta);

  FourthMomentMatrix fm;
  if (driver == "brownian") {
    fm = fourth_moment(sm, LevySpec::brownian(model.sigma_L),
                       FourthMomentMatrix::Method::GaussianAnalytic);
  } else {
    const LevySpec spec = make_spec(driver, model.sigma_L, std::nullopt,
                                    nig_alpha, nig_beta, nig_delta, nig_Delta);
    fm = fourth_moment(sm, spec, FourthMomentMatrix::Method::MonteCarlo,
                       mc_samples, seed, threads);
  }

  py::dict d;
  if (estimator_from_string(estimator) == EstimatorKind::AdjustedWhittle) {
    d["sigma_W_adjusted"] = sigma_W_adjusted(space, th, fm, delta, nodes);
  } else {
    const AsymptoticCovariances ac = sigma_W(space, th, fm, delta, nodes);
    d["sigma_hessian"] = ac.sigma_hessian;
    d["sigma_score"] = ac.sigma_score;
    d["sigma_W"] = ac.sigma_W;
  }
  return d;
}

Eigen::MatrixXcd spectral_density_py(const std::string& family,
                                     const std::optional<VectorXd>& theta0,
                                     double omega, double delta) {
  const ModelFamily& fam = family_by_name(family);
  const SampledModel sm =
      build_sampled(fam.build(resolve_theta(fam, theta0)), delta);
  return spectral_density(sm, omega);
}

} // namespace

PYBIND11_MODULE(_mcarma, m) {
  m.doc() = "Levy-driven continuous-time linear state space models";

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInputError>(m, "InvalidInputError",
                                            base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("family_names", &family_names, "Names of the shipped model families");
  m.def("family_info", &family_info, py::arg("family"),
        "Dimensions, default parameter and box bounds of a family");

  m.def("simulate", &simulate, py::arg("family"), py::arg("n"),
        py::arg("theta0") = std::nullopt, py::arg("delta") = 1.0,
        py::arg("seed") = 0, py::arg("sampler") = "euler",
        py::arg("euler_step") = 0.01, py::arg("burn_in") = 0.0,
        py::arg("driver") = "brownian", py::arg("sigma_L") = std::nullopt,
        py::arg("nig_alpha") = 0.0, py::arg("nig_beta") = std::nullopt,
        py::arg("nig_delta") = 0.0, py::arg("nig_Delta") = std::nullopt,
        "Simulate n observations; returns an n x m array");

  m.def("estimate", &estimate_py, py::arg("observations"), py::arg("family"),
        py::arg("delta") = 1.0, py::arg("estimator") = "whittle",
        py::arg("start") = std::nullopt, py::arg("level") = 0.95,
        "Fit a family to equidistant observations and attach confidence "
        "intervals");

  m.def("study", &study_py, py::arg("family"),
        py::arg("theta0") = std::nullopt,
        py::arg("sizes") = std::vector<int>{500, 2000, 5000},
        py::arg("replicates") = 500,
        py::arg("estimators") = std::vector<std::string>{"whittle"},
        py::arg("delta") = 1.0, py::arg("seed") = 0, py::arg("threads") = 1,
        py::arg("sampler") = "euler", py::arg("euler_step") = 0.01,
        py::arg("burn_in") = 0.0, py::arg("start_spread") = 0.25,
        py::arg("driver") = "brownian", py::arg("sigma_L") = std::nullopt,
        py::arg("nig_alpha") = 0.0, py::arg("nig_beta") = std::nullopt,
        py::arg("nig_delta") = 0.0, py::arg("nig_Delta") = std::nullopt,
        "Simulate-estimate-aggregate study; returns rows and the CSV text");

  m.def("asymptotics", &asymptotics_py, py::arg("family"),
        py::arg("theta0") = std::nullopt, py::arg("delta") = 1.0,
        py::arg("estimator") = "whittle", py::arg("driver") = "brownian",
        py::arg("nig_alpha") = 0.0, py::arg("nig_beta") = std::nullopt,
        py::arg("nig_delta") = 0.0, py::arg("nig_Delta") = std::nullopt,
        py::arg("mc_samples") = 1000000, py::arg("seed") = 0,
        py::arg("threads") = 1, py::arg("nodes") = 4096,
        "Asymptotic covariance matrices of the estimators");

  m.def("spectral_density", &spectral_density_py, py::arg("family"),
        py::arg("theta0") = std::nullopt, py::arg("omega") = 0.0,
        py::arg("delta") = 1.0,
        "Spectral density of the sampled process at omega");
}
