#include "pcrfle/experiments.hpp"

#include "pcrfle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace pcrfle {

TuningConfig ExperimentConfig::default_tuning() {
  TuningConfig t;
  t.mode = TuningMode::grid;
  t.rule = TuningRule{};
  t.K_grid.resize(80);
  std::iota(t.K_grid.begin(), t.K_grid.end(), std::size_t{1});
  t.eps_grid = {0.1, 0.2, 0.3};
  return t;
}

void ExperimentConfig::validate() const {
  if (!(design.low < design.high))
    throw InvalidInput("design.low must be below design.high");
  if (design.dim < 1)
    throw InvalidInput("design.dim must be >= 1");
  if (design.dim == 1 && (design.low < truth.lower() || design.high > truth.upper()))
    throw InvalidInput("design box [" + std::to_string(design.low) + ", " + std::to_string(design.high) +
                       "] leaves the domain of truth '" + truth.name() + "'");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
    throw InvalidInput("noise_sd must be non-negative");
  if (n_grid.empty())
    throw InvalidInput("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2)
      throw InvalidInput("n_grid entries must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw InvalidInput("n_grid must be strictly increasing");
  }
  if (repetitions < 1)
    throw InvalidInput("repetitions must be >= 1");
  tuning.rule.validate();
  if (tuning.rule.dim != design.dim)
    throw InvalidInput("tuning dimension must match design.dim");
  if (tuning.mode == TuningMode::grid) {
    if (tuning.K_grid.empty() || tuning.eps_grid.empty())
      throw InvalidInput("grid tuning needs non-empty K_grid and eps_grid");
    for (double e : tuning.eps_grid)
      if (!(e > 0.0))
        throw InvalidInput("eps_grid entries must be positive");
  }
  if (tuning.mode == TuningMode::fixed && !(tuning.epsilon > 0.0))
    throw InvalidInput("fixed epsilon must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace

std::uint64_t stream_key(std::uint64_t seed, std::size_t n, std::size_t rep, std::size_t attempt) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ static_cast<std::uint64_t>(n));
  k = splitmix64(k ^ static_cast<std::uint64_t>(rep));
  return splitmix64(k ^ static_cast<std::uint64_t>(attempt));
}

SampleSet draw_design(const ExperimentConfig &config, std::size_t n, std::size_t rep, std::size_t attempt) {
  std::mt19937_64 rng(stream_key(config.seed, n, rep, attempt));
  std::uniform_real_distribution<double> uniform(config.design.low, config.design.high);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(config.design.dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k)
      x(i, k) = uniform(rng);
  return SampleSet(std::move(x));
}

Eigen::VectorXd truth_values(const ExperimentConfig &config, const SampleSet &samples) {
  if (samples.dim() != 1)
    throw InvalidInput("regression truths are one-dimensional; design.dim must be 1");
  return config.truth.evaluate(samples.points().col(0));
}

SampleSet generate(const ExperimentConfig &config, std::size_t n, std::size_t rep, std::size_t attempt) {
  SampleSet design = draw_design(config, n, rep, attempt);
  Eigen::VectorXd y = truth_values(config, design);
  if (config.noise_sd > 0.0) {
    // Noise comes from its own stream so X does not depend on noise_sd.
    std::mt19937_64 rng(splitmix64(stream_key(config.seed, n, rep, attempt)));
    std::normal_distribution<double> normal(0.0, config.noise_sd);
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) += normal(rng);
  }
  return design.with_responses(std::move(y));
}

ReplicateFit fit_replicate(const ExperimentConfig &config, const SampleSet &samples,
                           const Eigen::VectorXd &truth) {
  const std::size_t n = samples.size();
  const auto &tuning = config.tuning;
  ReplicateFit out;
  switch (tuning.mode) {
  case TuningMode::grid: {
    std::vector<std::size_t> ks;
    for (std::size_t k : tuning.K_grid)
      if (k <= n)
        ks.push_back(k);
    if (ks.empty())
      throw InvalidInput("no K grid value fits n=" + std::to_string(n));
    const auto search = grid_search(samples, ks, tuning.eps_grid, config.kernel, truth);
    out.fit = fit_on(search.best_eig, samples.responses(), search.best_K, search.best_epsilon,
                     search.best_component_count);
    break;
  }
  case TuningMode::rule: {
    const std::size_t K = choose_K(tuning.rule, n);
    const double eps = choose_epsilon(tuning.rule, n, K);
    out.fit = fit(samples, K, eps, config.kernel);
    break;
  }
  case TuningMode::fixed: {
    const std::size_t K = tuning.K == K_all ? n : std::min(tuning.K, n);
    out.fit = fit(samples, K, tuning.epsilon, config.kernel);
    break;
  }
  }
  out.mse = norm_n_sq(out.fit.fitted - truth);
  return out;
}

LineFit ols(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("least squares needs at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw InvalidInput("least squares needs at least two distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double theoretical_rate(double s, std::size_t dim) {
  const double d = static_cast<double>(dim);
  return -2.0 * s / (2.0 * s + d);
}

ExperimentReport run_sweep(const ExperimentConfig &config) {
  config.validate();
  const std::size_t reps = config.repetitions;
  const std::size_t tasks = config.n_grid.size() * reps;

  struct Outcome {
    ExperimentRecord record;
    bool ok = false;
    std::string error;
  };
  std::vector<Outcome> outcomes(tasks);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks); ++t) {
    const auto task = static_cast<std::size_t>(t);
    const std::size_t n = config.n_grid[task / reps];
    const std::size_t rep = task % reps;
    auto &out = outcomes[task];
    for (std::size_t attempt = 0; attempt < 2 && !out.ok; ++attempt) {
      try {
        const SampleSet samples = generate(config, n, rep, attempt);
        const Eigen::VectorXd truth = truth_values(config, samples);
        const auto r = fit_replicate(config, samples, truth);
        out.record = {n, rep, r.fit.K, r.fit.epsilon, r.mse, r.fit.connected()};
        out.ok = true;
      } catch (const std::exception &e) {
        out.error = "n=" + std::to_string(n) + " rep=" + std::to_string(rep) + ": " + e.what();
      }
    }
  }

  ExperimentReport report;
  report.theoretical_slope = theoretical_rate(config.tuning.rule.s, config.design.dim);
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    double sum = 0.0;
    std::size_t count = 0, disconnected = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const auto &out = outcomes[i * reps + rep];
      if (!out.ok) {
        ++report.failures;
        report.failure_messages.push_back(out.error);
        continue;
      }
      report.records.push_back(out.record);
      sum += out.record.mse;
      ++count;
      if (!out.record.connected)
        ++disconnected;
    }
    if (count == 0)
      continue;
    report.n_values.push_back(config.n_grid[i]);
    report.mean_mse_per_n.push_back(sum / static_cast<double>(count));
    report.disconnected_fraction.push_back(static_cast<double>(disconnected) / static_cast<double>(count));
    report.used_in_slope.push_back(true);
  }

  // The smallest n leaves the slope fit when its graphs were often
  // disconnected, as long as two sizes remain.
  if (report.n_values.size() > 2 && report.disconnected_fraction.front() > 0.10)
    report.used_in_slope.front() = false;

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < report.n_values.size(); ++i) {
    if (!report.used_in_slope[i] || !(report.mean_mse_per_n[i] > 0.0))
      continue;
    lx.push_back(std::log(static_cast<double>(report.n_values[i])));
    ly.push_back(std::log(report.mean_mse_per_n[i]));
  }
  if (lx.size() >= 2) {
    const auto line = ols(lx, ly);
    report.fitted_slope = line.slope;
    report.slope_stderr = line.slope_stderr;
  } else {
    report.fitted_slope = std::numeric_limits<double>::quiet_NaN();
    report.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

EigenGrowth eigenvalue_growth_diagnostic(const ExperimentConfig &config, std::size_t n, std::size_t m) {
  if (m > n)
    throw InvalidInput("m must not exceed n");
  EigenGrowth out;
  const auto &tuning = config.tuning;
  if (tuning.mode == TuningMode::fixed) {
    out.epsilon = tuning.epsilon;
  } else {
    const std::size_t K = choose_K(tuning.rule, n);
    out.epsilon = choose_epsilon(tuning.rule, n, K);
  }
  const SampleSet design = draw_design(config, n, 0);
  const auto op = laplacian(build_graph(design, out.epsilon, config.kernel));
  const auto eig = eigensolve(op, m);
  out.values = eig.values;
  out.computed = eig.count();

  const double d = static_cast<double>(config.design.dim);
  const double cap = 1.0 / (out.epsilon * out.epsilon);
  std::vector<double> pre_x, pre_y, post_x, post_y, ratios;
  for (std::size_t k = 2; k <= out.computed; ++k) {
    const double lambda = eig.values(static_cast<Eigen::Index>(k - 1));
    const double growth = std::pow(static_cast<double>(k), 2.0 / d);
    out.cap_constant = std::max(out.cap_constant, lambda / cap);
    ratios.push_back(lambda / std::min(growth, cap));
    if (!(lambda > 0.0))
      continue;
    if (growth < cap) {
      pre_x.push_back(std::log(static_cast<double>(k)));
      pre_y.push_back(std::log(lambda));
    } else if (growth >= 4.0 * cap) {
      post_x.push_back(std::log(static_cast<double>(k)));
      post_y.push_back(std::log(lambda));
    }
  }
  out.pre_cap_points = pre_x.size();
  if (pre_x.size() >= 2) {
    out.exponent = ols(pre_x, pre_y).slope;
  } else {
    out.insufficient_range = true;
  }
  if (post_x.size() >= 2) {
    out.post_cap_exponent = ols(post_x, post_y).slope;
    // Growth well below the pre-cap prediction 2/d counts as a plateau.
    out.plateau = out.post_cap_exponent < 0.5 * (2.0 / d);
  }
  if (!ratios.empty()) {
    std::vector<double> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::size_t bad = 0;
    for (double r : ratios)
      if (r < median / out.sandwich_band || r > median * out.sandwich_band)
        ++bad;
    out.window_violations = static_cast<double>(bad) / static_cast<double>(ratios.size());
  }
  return out;
}

FitCurve mean_fit_curve(const ExperimentConfig &config, std::size_t n, const std::vector<double> &grid) {
  config.validate();
  if (config.design.dim != 1)
    throw InvalidInput("mean fit curves need a 1-D design");
  if (grid.empty())
    throw InvalidInput("evaluation grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InvalidInput("evaluation grid must be strictly increasing");

  // Bucket half-widths: half the distance to each neighbour.
  std::vector<double> left(grid.size()), right(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    left[g] = g > 0 ? 0.5 * (grid[g] - grid[g - 1]) : (grid.size() > 1 ? 0.5 * (grid[1] - grid[0]) : 0.0);
    right[g] = g + 1 < grid.size() ? 0.5 * (grid[g + 1] - grid[g]) : left[g];
  }

  const std::size_t reps = config.repetitions;
  std::vector<std::vector<double>> per_rep(reps, std::vector<double>(grid.size(), std::nan("")));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
    const auto rep = static_cast<std::size_t>(r);
    try {
      const SampleSet samples = generate(config, n, rep);
      const Eigen::VectorXd truth = truth_values(config, samples);
      const auto fit = fit_replicate(config, samples, truth).fit;
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      const auto &x = samples.points();
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x(static_cast<Eigen::Index>(a), 0) < x(static_cast<Eigen::Index>(b), 0);
      });
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto it = std::lower_bound(order.begin(), order.end(), grid[g], [&](std::size_t i, double v) {
          return x(static_cast<Eigen::Index>(i), 0) < v;
        });
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = n;
        for (auto cand : {it, it == order.begin() ? it : it - 1}) {
          if (cand == order.end())
            continue;
          const double dist = std::abs(x(static_cast<Eigen::Index>(*cand), 0) - grid[g]);
          if (dist < best) {
            best = dist;
            best_i = *cand;
          }
        }
        if (best_i == n)
          continue;
        const double xi = x(static_cast<Eigen::Index>(best_i), 0);
        if (xi >= grid[g] - left[g] && xi <= grid[g] + right[g])
          per_rep[rep][g] = fit.fitted(static_cast<Eigen::Index>(best_i));
      }
    } catch (const std::exception &) {
      // A failed repetition contributes nothing to any bucket.
    }
  }

  FitCurve curve;
  curve.x = grid;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t rep = 0; rep < reps; ++rep)
      if (!std::isnan(per_rep[rep][g])) {
        sum += per_rep[rep][g];
        ++count;
      }
    const bool inside = grid[g] >= config.truth.lower() && grid[g] <= config.truth.upper();
    curve.truth.push_back(inside ? config.truth(grid[g]) : std::nan(""));
    curve.missing.push_back(count == 0);
    curve.mean_fit.push_back(count == 0 ? std::nan("") : sum / static_cast<double>(count));
  }
  return curve;
}

} // namespace pcrfle
