#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "mcarma/asymptotics.hpp"
#include "mcarma/config.hpp"
#include "mcarma/csv.hpp"
#include "mcarma/errors.hpp"
#include "mcarma/estimators.hpp"
#include "mcarma/levy_sim.hpp"
#include "mcarma/model_zoo.hpp"
#include "mcarma/sampled_model.hpp"
#include "mcarma/study.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace mcarma;

MatrixXd reshape_square(const VectorXd& v, int d, const std::string& what) {
  if (v.size() != static_cast<Eigen::Index>(d) * d)
    throw InvalidInputError(what + " must list " + std::to_string(d * d) +
                            " entries (row-major " + std::to_string(d) + "x" +
                            std::to_string(d) + ")");
  MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = v(i * d + j);
  return M;
}

LevySpec driver_from_config(const Config& cfg, int d,
                            const MatrixXd& model_sigma_L) {
  const std::string kind = cfg.get_string("driver", "brownian");
  if (kind == "brownian") {
    MatrixXd sigma = model_sigma_L;
    if (cfg.has("sigma_L"))
      sigma = reshape_square(cfg.get_vector("sigma_L"), d, "sigma_L");
    return LevySpec::brownian(sigma);
  }
  if (kind == "nig") {
    const double alpha = cfg.get_double("nig_alpha");
    const VectorXd beta = cfg.get_vector("nig_beta");
    const double delta_nig = cfg.get_double("nig_delta");
    const MatrixXd Delta =
        reshape_square(cfg.get_vector("nig_Delta"), d, "nig_Delta");
    return LevySpec::nig(alpha, beta, delta_nig, Delta);
  }
  throw InvalidInputError("unknown driver '" + kind +
                          "' (expected brownian or nig)");
}

std::vector<EstimatorKind> estimators_from(const std::vector<std::string>& names) {
  std::vector<EstimatorKind> kinds;
  for (const std::string& name : names)
    kinds.push_back(estimator_from_string(name));
  return kinds;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os)
    throw InvalidInputError("cannot open '" + path + "' for writing");
  return os;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  int replicates = 0;
  std::vector<int> sizes;
};

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const CommonFlags& flags) {
  const Config cfg = Config::parse_file(config_path);
  const ModelFamily& fam = family_by_name(cfg.get_string("family"));
  const VectorXd theta0 =
      cfg.has("theta0") ? cfg.get_vector("theta0") : fam.default_theta0;
  const ContinuousModel model = fam.build(theta0);
  const LevySpec driver = driver_from_config(cfg, fam.d, model.sigma_L);

  const double delta = cfg.get_double("delta", 1.0);
  const long n = cfg.get_int("n");
  if (n < 1) throw InvalidInputError("simulate: n must be at least 1");
  const std::uint64_t seed = flags.seed_set
                                 ? flags.seed
                                 : static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  const std::string sampler = cfg.get_string("sampler", "euler");

  SamplePath path;
  if (sampler == "euler") {
    SimulationConfig sim;
    sim.delta = delta;
    sim.euler_step = cfg.get_double("euler_step", 0.01);
    sim.horizon = static_cast<double>(n) * delta;
    sim.seed = seed;
    sim.burn_in = cfg.get_double("burn_in", 0.0);
    path = euler_maruyama(model, driver, sim);
  } else if (sampler == "exact") {
    path = exact_gaussian_sample(model, driver, delta, static_cast<int>(n), seed);
  } else {
    throw InvalidInputError("unknown sampler '" + sampler +
                            "' (expected euler or exact)");
  }
  write_path_csv(path, out_path);
  std::cerr << "wrote " << path.n() << " observations of dimension "
            << path.m() << " to " << out_path << "\n";
  return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& family_name,
                 const std::string& estimator, double delta,
                 const std::vector<double>& start_values, double level,
                 const std::string& out_path) {
  const ModelFamily& fam = family_by_name(family_name);
  const SamplePath path = read_path_csv(data_path, delta);
  VectorXd start = fam.default_theta0;
  if (!start_values.empty()) {
    start.resize(static_cast<Eigen::Index>(start_values.size()));
    for (std::size_t i = 0; i < start_values.size(); ++i)
      start(static_cast<Eigen::Index>(i)) = start_values[i];
  }
  const EstimateReport report = estimate_once(
      path, fam, estimator_from_string(estimator), start, level);

  std::ostringstream os;
  os << "param_index,estimate,lower,upper\n";
  for (std::size_t i = 0; i < report.intervals.size(); ++i)
    os << i + 1 << ',' << format_double(report.result.theta_hat(static_cast<Eigen::Index>(i)))
       << ',' << format_double(report.intervals[i].lower) << ','
       << format_double(report.intervals[i].upper) << '\n';
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f = open_output(out_path);
    f << os.str();
  }
  std::cerr << to_string(report.result.kind) << " objective "
            << format_double(report.result.objective_value) << " after "
            << report.result.iterations << " iterations ("
            << (report.result.converged ? "converged" : "not converged")
            << ")\n";
  return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_path,
              const CommonFlags& flags) {
  const Config file = Config::parse_file(config_path);
  StudyConfig sc;
  sc.family = file.get_string("family");
  if (file.has("theta0")) sc.theta0 = file.get_vector("theta0");
  const ModelFamily& fam = family_by_name(sc.family);
  const VectorXd theta0 = sc.theta0.size() > 0 ? sc.theta0 : fam.default_theta0;
  sc.delta = file.get_double("delta", 1.0);
  if (file.has("sizes")) {
    sc.sample_sizes.clear();
    for (long n : file.get_int_list("sizes"))
      sc.sample_sizes.push_back(static_cast<int>(n));
  }
  sc.replicates = static_cast<int>(file.get_int("replicates", 500));
  if (file.has("estimators"))
    sc.estimators = estimators_from(file.get_string_list("estimators"));
  sc.seed = static_cast<std::uint64_t>(file.get_int("seed", 0));
  sc.threads = static_cast<int>(file.get_int("threads", 1));
  const std::string sampler = file.get_string("sampler", "euler");
  if (sampler != "euler" && sampler != "exact")
    throw InvalidInputError("unknown sampler '" + sampler +
                            "' (expected euler or exact)");
  sc.use_euler = sampler == "euler";
  sc.euler_step = file.get_double("euler_step", 0.01);
  sc.burn_in = file.get_double("burn_in", 0.0);
  sc.start_spread = file.get_double("start_spread", 0.25);
  sc.driver = driver_from_config(file, fam.d, fam.build(theta0).sigma_L);

  if (flags.seed_set) sc.seed = flags.seed;
  if (flags.threads > 0) sc.threads = flags.threads;
  if (flags.replicates > 0) sc.replicates = flags.replicates;
  if (!flags.sizes.empty()) sc.sample_sizes = flags.sizes;

  const StudyReport report = run_study(sc);
  std::ofstream f = open_output(out_path);
  write_study_csv(report, f);
  std::cerr << "wrote " << report.rows.size() << " rows to " << out_path
            << "\n";
  return 0;
}

int cmd_asymptotics(const std::string& family_name,
                    const std::vector<double>& theta_values,
                    const std::string& driver, const std::string& estimator,
                    double delta, long mc_samples, const CommonFlags& flags,
                    const std::string& nig_config,
                    const std::string& out_path) {
  const ModelFamily& fam = family_by_name(family_name);
  VectorXd theta0 = fam.default_theta0;
  if (!theta_values.empty()) {
    theta0.resize(static_cast<Eigen::Index>(theta_values.size()));
    for (std::size_t i = 0; i < theta_values.size(); ++i)
      theta0(static_cast<Eigen::Index>(i)) = theta_values[i];
  }
  const ParamSpace space = fam.space();
  const ContinuousModel model = fam.build(theta0);
  const SampledModel sm = build_sampled(model, delta);

  FourthMomentMatrix fm;
  if (driver == "brownian") {
    fm = fourth_moment(sm, LevySpec::brownian(model.sigma_L),
                       FourthMomentMatrix::Method::GaussianAnalytic);
  } else if (driver == "nig") {
    if (nig_config.empty())
      throw InvalidInputError(
          "asymptotics: the nig driver needs --nig-config with nig_alpha, "
          "nig_beta, nig_delta, nig_Delta");
    const Config cfg = Config::parse_file(nig_config);
    const LevySpec spec = LevySpec::nig(
        cfg.get_double("nig_alpha"), cfg.get_vector("nig_beta"),
        cfg.get_double("nig_delta"),
        reshape_square(cfg.get_vector("nig_Delta"), fam.d, "nig_Delta"));
    fm = fourth_moment(sm, spec, FourthMomentMatrix::Method::MonteCarlo,
                       mc_samples, flags.seed,
                       flags.threads > 0 ? flags.threads : 1);
  } else {
    throw InvalidInputError("unknown driver '" + driver +
                            "' (expected brownian or nig)");
  }

  std::ostringstream os;
  if (estimator_from_string(estimator) == EstimatorKind::AdjustedWhittle) {
    os << "# sigma_W_adjusted\n";
    write_matrix_csv(sigma_W_adjusted(space, theta0, fm, delta), os);
  } else {
    const AsymptoticCovariances ac = sigma_W(space, theta0, fm, delta);
    os << "# sigma_hessian\n";
    write_matrix_csv(ac.sigma_hessian, os);
    os << "# sigma_score\n";
    write_matrix_csv(ac.sigma_score, os);
    os << "# sigma_W\n";
    write_matrix_csv(ac.sigma_W, os);
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f = open_output(out_path);
    f << os.str();
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy-driven continuous-time linear state space models: "
               "simulation, estimation, Monte-Carlo studies and asymptotic "
               "covariances"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "RNG seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  app.add_option("--threads", flags.threads, "worker thread count override");
  app.add_option("--replicates", flags.replicates,
                 "study replicate count override");
  app.add_option("--sizes", flags.sizes, "study sample sizes override")
      ->delimiter(',');

  std::string sim_config, sim_out;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Simulate a sample path and write it as CSV");
  sim->fallthrough();
  sim->add_option("--config", sim_config, "configuration file")->required();
  sim->add_option("--out", sim_out, "output CSV path")->required();

  std::string est_data, est_family, est_kind = "whittle", est_out;
  double est_delta = 1.0, est_level = 0.95;
  std::vector<double> est_start;
  CLI::App* est = app.add_subcommand(
      "estimate", "Estimate parameters from a CSV sample path");
  est->fallthrough();
  est->add_option("--data", est_data, "input CSV path")->required();
  est->add_option("--family", est_family, "model family name")->required();
  est->add_option("--estimator", est_kind,
                  "whittle, adjusted_whittle or qmle");
  est->add_option("--delta", est_delta, "sampling distance");
  est->add_option("--start", est_start, "optimizer start")->delimiter(',');
  est->add_option("--level", est_level, "confidence level");
  est->add_option("--out", est_out, "write the table here instead of stdout");

  std::string study_config, study_out;
  CLI::App* study = app.add_subcommand(
      "study", "Run a simulation study and write the aggregate CSV");
  study->fallthrough();
  study->add_option("--config", study_config, "configuration file")->required();
  study->add_option("--out", study_out, "output CSV path")->required();

  std::string asy_family, asy_driver = "brownian", asy_kind = "whittle";
  std::string asy_nig_config, asy_out;
  std::vector<double> asy_theta;
  double asy_delta = 1.0;
  long asy_mc = 1000000;
  CLI::App* asy = app.add_subcommand(
      "asymptotics", "Print analytic asymptotic covariance matrices");
  asy->fallthrough();
  asy->add_option("--family", asy_family, "model family name")->required();
  asy->add_option("--theta0", asy_theta, "evaluation point")->delimiter(',');
  asy->add_option("--driver", asy_driver, "brownian or nig");
  asy->add_option("--estimator", asy_kind, "whittle or adjusted_whittle");
  asy->add_option("--delta", asy_delta, "sampling distance");
  asy->add_option("--mc-samples", asy_mc,
                  "Monte-Carlo samples for the nig fourth moment");
  asy->add_option("--nig-config", asy_nig_config,
                  "configuration file with the nig driver parameters");
  asy->add_option("--out", asy_out, "write matrices here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_config, sim_out, flags);
    if (*est)
      return cmd_estimate(est_data, est_family, est_kind, est_delta, est_start,
                          est_level, est_out);
    if (*study) return cmd_study(study_config, study_out, flags);
    if (*asy)
      return cmd_asymptotics(asy_family, asy_theta, asy_driver, asy_kind,
                             asy_delta, asy_mc, flags, asy_nig_config, asy_out);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
