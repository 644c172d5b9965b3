#include "mcarma/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "mcarma/errors.hpp"
#include "mcarma/rng.hpp"

namespace mcarma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

void check_space(const ParamSpace& space) {
  if (space.r <= 0 || space.lower.size() != space.r ||
      space.upper.size() != space.r)
    throw InvalidInputError("parameter space has inconsistent dimensions");
  if (!space.model_builder)
    throw InvalidInputError("parameter space has no model builder");
  if ((space.upper.array() < space.lower.array()).any())
    throw InvalidInputError("parameter box has upper < lower");
}

/// Builds the sampled model at theta; empty optional means the sentinel +inf.
bool try_build(const ParamSpace& space, const Eigen::VectorXd& theta,
               double delta, SampledModel& out) {
  if (theta.size() != space.r)
    throw InvalidInputError("theta has wrong dimension");
  if (!space.in_bounds(theta)) return false;
  try {
    out = build_sampled(space.model_builder(theta), delta);
  } catch (const Error&) {
    return false;
  }
  return true;
}

double log_det_llt(const Eigen::LLT<Eigen::MatrixXcd>& llt) {
  double acc = 0.0;
  const auto& L = llt.matrixLLT();
  for (int i = 0; i < L.rows(); ++i) acc += std::log(L(i, i).real());
  return 2.0 * acc;
}

} // namespace

bool ParamSpace::in_bounds(const Eigen::VectorXd& theta) const {
  if (theta.size() != r) return false;
  return (theta.array() >= lower.array()).all() &&
         (theta.array() <= upper.array()).all();
}

Eigen::VectorXd ParamSpace::clip(const Eigen::VectorXd& theta) const {
  if (theta.size() != r)
    throw InvalidInputError("theta has wrong dimension");
  return theta.cwiseMax(lower).cwiseMin(upper);
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Whittle: return "whittle";
    case EstimatorKind::AdjustedWhittle: return "adjusted_whittle";
    case EstimatorKind::QMLE: return "qmle";
  }
  throw InvalidInputError("unknown estimator kind");
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "whittle") return EstimatorKind::Whittle;
  if (name == "adjusted_whittle") return EstimatorKind::AdjustedWhittle;
  if (name == "qmle") return EstimatorKind::QMLE;
  throw InvalidInputError("unknown estimator '" + name +
                          "' (expected whittle, adjusted_whittle or qmle)");
}

double whittle_objective(const PeriodogramGrid& grid,
                         const Eigen::VectorXd& theta, const ParamSpace& space,
                         double delta) {
  check_space(space);
  SampledModel sm;
  if (!try_build(space, theta, delta, sm)) return kInf;
  if (sm.m() != grid.m)
    throw InvalidInputError("model output dimension does not match the grid");

  SpectralEvaluator f_of(sm);
  const int n = grid.n;
  double acc = 0.0;
  double imag_acc = 0.0;
  for (int j = -n + 1; j <= n; ++j) {
    const Eigen::MatrixXcd f = f_of(grid.omega(j));
    Eigen::LLT<Eigen::MatrixXcd> llt(f);
    if (llt.info() != Eigen::Success) return kInf;
    const std::complex<double> tr = llt.solve(grid.value(j)).trace();
    acc += tr.real() + log_det_llt(llt);
    imag_acc += std::abs(tr.imag());
  }
  if (imag_acc > 1e-8 * std::max(1.0, std::abs(acc)))
    throw NumericIntegrityError("whittle objective lost Hermitian symmetry");
  return acc / (2.0 * n);
}

double adjusted_whittle_objective(const PeriodogramGrid& grid,
                                  const Eigen::VectorXd& theta,
                                  const ParamSpace& space, double delta) {
  check_space(space);
  if (grid.m != 1)
    throw UnsupportedError(
        "adjusted Whittle is defined for univariate output only");
  SampledModel sm;
  if (!try_build(space, theta, delta, sm)) return kInf;
  if (sm.m() != 1)
    throw UnsupportedError(
        "adjusted Whittle is defined for univariate output only");

  const int n = grid.n;
  double acc = 0.0;
  for (int j = -n + 1; j <= n; ++j) {
    const std::complex<double> z =
        std::exp(std::complex<double>(0.0, grid.omega(j)));
    const std::complex<double> pi_val = pi_polynomial(sm, z)(0, 0);
    acc += std::norm(pi_val) * grid.value(j)(0, 0).real();
  }
  return acc * M_PI / n;
}

double qmle_objective(const SamplePath& path, const Eigen::VectorXd& theta,
                      const ParamSpace& space) {
  check_space(space);
  if (path.n() < 1) throw InvalidInputError("qmle needs at least one observation");
  SampledModel sm;
  if (!try_build(space, theta, path.delta, sm)) return kInf;
  const int m = sm.m();
  if (m != path.m())
    throw InvalidInputError("model output dimension does not match the data");

  const Eigen::LLT<Eigen::MatrixXd> vllt(sm.V);
  if (vllt.info() != Eigen::Success) return kInf;
  double log_det_v = 0.0;
  for (int i = 0; i < m; ++i) log_det_v += std::log(vllt.matrixLLT()(i, i));
  log_det_v *= 2.0;

  const int n = path.n();
  Eigen::VectorXd xhat = Eigen::VectorXd::Zero(sm.N());
  double quad = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0)
      xhat = sm.F * xhat + sm.K * path.observations.row(k - 1).transpose();
    const Eigen::VectorXd xi =
        path.observations.row(k).transpose() - sm.model.C * xhat;
    quad += xi.dot(vllt.solve(xi));
  }
  return quad / n + log_det_v - m * std::log(2.0 * M_PI);
}

EstimationResult minimize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const ParamSpace& space, const std::vector<Eigen::VectorXd>& starts,
    double tol, int max_iter) {
  if (space.r <= 0 || space.lower.size() != space.r ||
      space.upper.size() != space.r)
    throw InvalidInputError("parameter space has inconsistent dimensions");
  if (starts.empty()) throw InvalidInputError("minimize needs at least one start");
  for (const Eigen::VectorXd& s : starts) {
    if (!space.in_bounds(s))
      throw InvalidInputError("start point lies outside the parameter box");
  }
  if (tol <= 0.0 || max_iter < 1)
    throw InvalidInputError("minimize needs tol > 0 and max_iter >= 1");

  const int r = space.r;
  struct Vertex {
    Eigen::VectorXd x;
    double f;
  };
  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = objective(x);
    return std::isnan(v) ? kInf : v;
  };
  auto vertex_less = [](const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    return lex_less(a.x, b.x);
  };

  EstimationResult best;
  best.objective_value = kInf;
  bool have_best = false;

  for (const Eigen::VectorXd& start : starts) {
    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (int i = 0; i < r; ++i) {
      const double step = 0.05 * (space.upper(i) - space.lower(i));
      Eigen::VectorXd x = start;
      x(i) += step;
      if (!space.in_bounds(x)) x(i) = start(i) - step;
      x = space.clip(x);
      simplex.push_back({x, eval(x)});
    }

    int iterations = 0;
    bool converged = false;
    while (iterations < max_iter) {
      ++iterations;
      std::sort(simplex.begin(), simplex.end(), vertex_less);
      const Vertex& lo = simplex.front();
      const Vertex& hi = simplex.back();

      double diameter = 0.0;
      for (const Vertex& v : simplex)
        diameter = std::max(diameter, (v.x - lo.x).cwiseAbs().maxCoeff());
      if (hi.f - lo.f < tol && diameter < tol) {
        converged = true;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(r);
      for (int i = 0; i < r; ++i) centroid += simplex[i].x;
      centroid /= r;

      const Eigen::VectorXd reflected =
          space.clip(centroid + (centroid - hi.x));
      const double f_reflected = eval(reflected);
      if (f_reflected < lo.f) {
        const Eigen::VectorXd expanded =
            space.clip(centroid + 2.0 * (centroid - hi.x));
        const double f_expanded = eval(expanded);
        simplex.back() = f_expanded < f_reflected
                             ? Vertex{expanded, f_expanded}
                             : Vertex{reflected, f_reflected};
        continue;
      }
      if (f_reflected < simplex[r - 1].f) {
        simplex.back() = {reflected, f_reflected};
        continue;
      }
      const bool outside = f_reflected < hi.f;
      const Eigen::VectorXd contracted = space.clip(
          outside ? centroid + 0.5 * (reflected - centroid)
                  : centroid + 0.5 * (hi.x - centroid));
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, hi.f)) {
        simplex.back() = {contracted, f_contracted};
        continue;
      }
      for (int i = 1; i <= r; ++i) {
        simplex[i].x = space.clip(lo.x + 0.5 * (simplex[i].x - lo.x));
        simplex[i].f = eval(simplex[i].x);
      }
    }

    std::sort(simplex.begin(), simplex.end(), vertex_less);
    const Vertex& winner = simplex.front();
    const bool better =
        !have_best || winner.f < best.objective_value ||
        (winner.f == best.objective_value && lex_less(winner.x, best.theta_hat));
    if (better) {
      best.theta_hat = winner.x;
      best.objective_value = winner.f;
      best.iterations = iterations;
      best.converged = converged;
    }
    have_best = true;
  }

  best.restarts_used = static_cast<int>(starts.size());
  if (!std::isfinite(best.objective_value))
    throw InvalidInputError(
        "objective is infinite at every point the optimizer visited");
  return best;
}

std::vector<Eigen::VectorXd> default_multistarts(const ParamSpace& space,
                                                 const Eigen::VectorXd& start,
                                                 int count) {
  if (count < 1) throw InvalidInputError("multistart count must be >= 1");
  if (start.size() != space.r)
    throw InvalidInputError("start has wrong dimension");
  std::vector<Eigen::VectorXd> out;
  out.push_back(space.clip(start));
  const Eigen::VectorXd width = space.upper - space.lower;
  for (int k = 1; k < count; ++k) {
    CounterRng rng(derive_seed(0x6d756c7469u, static_cast<std::uint64_t>(k), 0));
    Eigen::VectorXd x = out.front();
    for (int i = 0; i < space.r; ++i)
      x(i) += (rng.next_uniform() - 0.5) * 0.2 * width(i);
    out.push_back(space.clip(x));
  }
  return out;
}

EstimationResult estimate(const SamplePath& path, const ParamSpace& space,
                          EstimatorKind kind,
                          const std::vector<Eigen::VectorXd>& starts,
                          double tol) {
  std::function<double(const Eigen::VectorXd&)> objective;
  PeriodogramGrid grid;
  switch (kind) {
    case EstimatorKind::Whittle:
      grid = periodogram(path);
      objective = [grid, &space, &path](const Eigen::VectorXd& theta) {
        return whittle_objective(grid, theta, space, path.delta);
      };
      break;
    case EstimatorKind::AdjustedWhittle:
      grid = periodogram(path);
      objective = [grid, &space, &path](const Eigen::VectorXd& theta) {
        return adjusted_whittle_objective(grid, theta, space, path.delta);
      };
      break;
    case EstimatorKind::QMLE:
      objective = [&path, &space](const Eigen::VectorXd& theta) {
        return qmle_objective(path, theta, space);
      };
      break;
  }
  EstimationResult result = minimize(objective, space, starts, tol);
  result.kind = kind;
  return result;
}

} // namespace mcarma
