#include "mcarma/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "mcarma/csv.hpp"
#include "mcarma/errors.hpp"
#include "mcarma/rng.hpp"
#include "mcarma/sampled_model.hpp"

namespace mcarma {
namespace {

constexpr double kMaxFailureFraction = 0.2;

void validate_study(const StudyConfig& cfg, const ModelFamily& fam,
                    const Eigen::VectorXd& theta0) {
  if (cfg.replicates < 1)
    throw InvalidInputError("study: replicates must be at least 1");
  if (cfg.sample_sizes.empty())
    throw InvalidInputError("study: sample_sizes must not be empty");
  for (int n : cfg.sample_sizes)
    if (n < 16)
      throw InvalidInputError("study: every sample size must be at least 16");
  if (cfg.estimators.empty())
    throw InvalidInputError("study: estimators must not be empty");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta))
    throw InvalidInputError("study: delta must be positive");
  if (cfg.threads < 1)
    throw InvalidInputError("study: threads must be at least 1");
  if (cfg.start_spread < 0.0 || !std::isfinite(cfg.start_spread))
    throw InvalidInputError("study: start_spread must be non-negative");
  if (cfg.burn_in < 0.0 || !std::isfinite(cfg.burn_in))
    throw InvalidInputError("study: burn_in must be non-negative");
  if (theta0.size() != fam.r)
    throw InvalidInputError("study: theta0 must have length " +
                            std::to_string(fam.r) + " for " + fam.name);
  if (cfg.driver.dim() != fam.d)
    throw InvalidInputError("study: driver dimension does not match " +
                            fam.name);
  if (cfg.use_euler) {
    if (!(cfg.euler_step > 0.0))
      throw InvalidInputError("study: euler_step must be positive");
    const double ratio = cfg.delta / cfg.euler_step;
    if (std::abs(ratio - std::llround(ratio)) > 1e-8 * std::max(1.0, ratio) ||
        std::llround(ratio) < 1)
      throw InvalidInputError(
          "study: delta must be an integer multiple of euler_step");
  } else if (cfg.driver.kind != LevySpec::Kind::Brownian) {
    throw InvalidInputError("study: the exact sampler requires a Brownian driver");
  }
  for (EstimatorKind kind : cfg.estimators)
    if (kind == EstimatorKind::AdjustedWhittle && fam.m != 1)
      throw UnsupportedError(
          "study: adjusted_whittle requires univariate output");
}

struct ReplicateOutcome {
  std::vector<Eigen::VectorXd> theta; ///< per estimator
  std::vector<char> ok;
};

ReplicateOutcome run_replicate(const StudyConfig& cfg,
                               const ContinuousModel& model,
                               const ParamSpace& space,
                               const Eigen::VectorXd& theta0, int size_index,
                               int replicate) {
  const std::size_t n_est = cfg.estimators.size();
  ReplicateOutcome out;
  out.theta.resize(n_est);
  out.ok.assign(n_est, 0);

  const int n = cfg.sample_sizes[static_cast<std::size_t>(size_index)];
  const std::uint64_t path_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(replicate),
                  2 * static_cast<std::uint64_t>(size_index));
  SamplePath path;
  try {
    if (cfg.use_euler) {
      SimulationConfig sim;
      sim.delta = cfg.delta;
      sim.euler_step = cfg.euler_step;
      sim.horizon = static_cast<double>(n) * cfg.delta;
      sim.seed = path_seed;
      sim.burn_in = cfg.burn_in;
      path = euler_maruyama(model, cfg.driver, sim);
    } else {
      path = exact_gaussian_sample(model, cfg.driver, cfg.delta, n, path_seed);
    }
  } catch (const Error&) {
    return out;
  }

  CounterRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(replicate),
                             2 * static_cast<std::uint64_t>(size_index) + 1));
  Eigen::VectorXd start(space.r);
  for (int i = 0; i < space.r; ++i)
    start(i) = theta0(i) + cfg.start_spread * (2.0 * rng.next_uniform() - 1.0);
  const std::vector<Eigen::VectorXd> starts =
      default_multistarts(space, space.clip(start));

  for (std::size_t e = 0; e < n_est; ++e) {
    try {
      EstimationResult res = estimate(path, space, cfg.estimators[e], starts);
      if (res.theta_hat.allFinite()) {
        out.theta[e] = res.theta_hat;
        out.ok[e] = 1;
      }
    } catch (const Error&) {
    }
  }
  return out;
}

} // namespace

StudyReport run_study(const StudyConfig& cfg) {
  const ModelFamily& fam = family_by_name(cfg.family);
  const Eigen::VectorXd theta0 =
      cfg.theta0.size() > 0 ? cfg.theta0 : fam.default_theta0;
  validate_study(cfg, fam, theta0);
  const ContinuousModel model = fam.build(theta0);
  build_sampled(model, cfg.delta);
  const ParamSpace space = fam.space();

  const int n_sizes = static_cast<int>(cfg.sample_sizes.size());
  const long total = static_cast<long>(n_sizes) * cfg.replicates;
  std::vector<std::vector<ReplicateOutcome>> outcomes(
      static_cast<std::size_t>(n_sizes),
      std::vector<ReplicateOutcome>(static_cast<std::size_t>(cfg.replicates)));

  std::atomic<long> next{0};
  auto worker = [&] {
    for (long task; (task = next.fetch_add(1)) < total;) {
      const int s = static_cast<int>(task / cfg.replicates);
      const int rep = static_cast<int>(task % cfg.replicates);
      outcomes[static_cast<std::size_t>(s)][static_cast<std::size_t>(rep)] =
          run_replicate(cfg, model, space, theta0, s, rep);
    }
  };
  const int workers = static_cast<int>(
      std::min<long>(std::min(cfg.threads, 64), total));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  StudyReport report;
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    const std::string name = to_string(cfg.estimators[e]);
    for (int s = 0; s < n_sizes; ++s) {
      std::vector<const Eigen::VectorXd*> fits;
      for (int rep = 0; rep < cfg.replicates; ++rep) {
        const ReplicateOutcome& out =
            outcomes[static_cast<std::size_t>(s)][static_cast<std::size_t>(rep)];
        if (out.ok[e]) fits.push_back(&out.theta[e]);
      }
      const int failures = cfg.replicates - static_cast<int>(fits.size());
      if (failures > kMaxFailureFraction * cfg.replicates)
        throw ConvergenceError(
            "study: " + std::to_string(failures) + " of " +
                std::to_string(cfg.replicates) + " replicates failed (" +
                name + ", n = " +
                std::to_string(cfg.sample_sizes[static_cast<std::size_t>(s)]) +
                ")",
            static_cast<double>(failures) / cfg.replicates);

      for (int i = 0; i < fam.r; ++i) {
        double mean = 0.0;
        for (const Eigen::VectorXd* fit : fits) mean += (*fit)(i);
        mean /= static_cast<double>(fits.size());
        double ss = 0.0;
        for (const Eigen::VectorXd* fit : fits) {
          const double dev = (*fit)(i) - mean;
          ss += dev * dev;
        }
        StudyRow row;
        row.estimator = name;
        row.n = cfg.sample_sizes[static_cast<std::size_t>(s)];
        row.param_index = i + 1;
        row.theta0 = theta0(i);
        row.mean = mean;
        row.bias = std::abs(mean - theta0(i));
        row.stddev = fits.size() > 1
                         ? std::sqrt(ss / static_cast<double>(fits.size() - 1))
                         : 0.0;
        row.failures = failures;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

void write_study_csv(const StudyReport& report, std::ostream& os) {
  os << "estimator,n,param_index,theta0,mean,bias,std,failures\n";
  for (const StudyRow& row : report.rows)
    os << row.estimator << ',' << row.n << ',' << row.param_index << ','
       << format_double(row.theta0) << ',' << format_double(row.mean) << ','
       << format_double(row.bias) << ',' << format_double(row.stddev) << ','
       << row.failures << '\n';
}

std::string study_csv_string(const StudyReport& report) {
  std::ostringstream os;
  write_study_csv(report, os);
  return os.str();
}

EstimateReport estimate_once(const SamplePath& path, const ModelFamily& family,
                             EstimatorKind kind, const Eigen::VectorXd& start,
                             double level) {
  const ParamSpace space = family.space();
  const std::vector<Eigen::VectorXd> starts =
      default_multistarts(space, space.clip(start));

  EstimateReport report;
  report.result = estimate(path, space, kind, starts);

  const Eigen::VectorXd& th = report.result.theta_hat;
  for (int i = 0; i < space.r; ++i) {
    const double margin = 2e-6 * std::max(1.0, std::abs(th(i)));
    const double gap =
        std::min(th(i) - space.lower(i), space.upper(i) - th(i));
    if (gap < margin)
      throw ConvergenceError(
          "estimate_once: the fit landed on the parameter box boundary "
          "(coordinate " + std::to_string(i + 1) +
              "); no interior covariance is available",
          gap);
  }
  const ContinuousModel model = family.build(th);
  const SampledModel sm = build_sampled(model, path.delta);
  const FourthMomentMatrix fm =
      fourth_moment(sm, LevySpec::brownian(model.sigma_L),
                    FourthMomentMatrix::Method::GaussianAnalytic);
  if (kind == EstimatorKind::AdjustedWhittle)
    report.covariance = sigma_W_adjusted(space, th, fm, path.delta);
  else
    report.covariance = sigma_W(space, th, fm, path.delta).sigma_W;
  report.intervals =
      confidence_intervals(report.result, report.covariance, path.n(), level);
  return report;
}

} // namespace mcarma
