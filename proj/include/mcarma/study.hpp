#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcarma/asymptotics.hpp"
#include "mcarma/estimators.hpp"
#include "mcarma/levy_sim.hpp"
#include "mcarma/model_zoo.hpp"

namespace mcarma {

struct StudyConfig {
  std::string family;
  Eigen::VectorXd theta0;            ///< empty -> family default
  LevySpec driver;
  double delta = 1.0;
  std::vector<int> sample_sizes = {500, 2000, 5000};
  int replicates = 500;
  std::vector<EstimatorKind> estimators = {EstimatorKind::Whittle};
  std::uint64_t seed = 0;
  int threads = 1;
  bool use_euler = true;             ///< false -> exact Gaussian sampler
  double euler_step = 0.01;
  double burn_in = 0.0;
  double start_spread = 0.25;        ///< starts: theta0 + U(-spread, spread)
};

struct StudyRow {
  std::string estimator;
  int n = 0;
  int param_index = 0; ///< 1-based
  double theta0 = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double stddev = 0.0;
  int failures = 0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
};

/// Monte-Carlo study: simulate -> estimate -> aggregate, deterministic for a
/// fixed seed independently of the thread count.
StudyReport run_study(const StudyConfig& cfg);

/// CSV schema: estimator,n,param_index,theta0,mean,bias,std,failures
void write_study_csv(const StudyReport& report, std::ostream& os);
std::string study_csv_string(const StudyReport& report);

struct EstimateReport {
  EstimationResult result;
  Eigen::MatrixXd covariance; ///< asymptotic covariance used for the bands
  std::vector<ConfidenceInterval> intervals;
};

/// Single-dataset estimation with analytic confidence intervals evaluated at
/// the estimate.
EstimateReport estimate_once(const SamplePath& path, const ModelFamily& family,
                             EstimatorKind kind, const Eigen::VectorXd& start,
                             double level = 0.95);

} // namespace mcarma
