#include "pcrfle/cli.hpp"

#include "pcrfle/config.hpp"
#include "pcrfle/csv_io.hpp"
#include "pcrfle/errors.hpp"
#include "pcrfle/kernels/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace pcrfle {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> subcommands = {"fit", "sweep", "seminorm", "eigen", "gridsearch", "zoo"};

void check_override(const std::string &spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidInput("malformed override '" + spec + "' (expected key=value)");
  const std::string key = spec.substr(0, eq);
  if (key.front() == '.' || key.back() == '.' || key.find("..") != std::string::npos)
    throw InvalidInput("malformed override key '" + key + "'");
}

AppConfig load_config(const CliCommand &cmd) {
  std::vector<std::string> overrides = cmd.overrides;
  if (cmd.seed)
    overrides.push_back("seed=" + std::to_string(*cmd.seed));
  if (cmd.config_path.empty())
    return parse_config_text("{}", overrides);
  if (!fs::exists(cmd.config_path))
    throw IoError("config file not found: " + cmd.config_path.string());
  return parse_config(cmd.config_path, overrides);
}

std::string yaml_text(const YAML::Emitter &out) { return std::string(out.c_str()) + "\n"; }

std::vector<std::pair<std::string, std::string>> fit_metadata(const AppConfig &cfg, const ReplicateFit &rf) {
  return {{"truth", cfg.truth_name},
          {"tuning", to_string(cfg.experiment.tuning.mode)},
          {"K", std::to_string(rf.fit.K)},
          {"epsilon", io::format_double(rf.fit.epsilon)},
          {"components", std::to_string(rf.fit.component_count)},
          {"mse", io::format_double(rf.mse)}};
}

SampleSet fit_samples(const AppConfig &cfg) {
  if (!cfg.fit.data.empty())
    return io::read_samples(cfg.fit.data);
  return generate(cfg.experiment, cfg.fit.n, cfg.fit.rep);
}

void run_fit(const AppConfig &cfg, const fs::path &out) {
  const SampleSet samples = fit_samples(cfg);
  if (!samples.has_responses())
    throw InvalidInput("fit data needs a y column");
  const Eigen::VectorXd truth = truth_values(cfg.experiment, samples);
  const auto rf = fit_replicate(cfg.experiment, samples, truth);
  io::write_fit(out / "fit.csv", samples, rf.fit, fit_metadata(cfg, rf));
}

void run_gridsearch(const AppConfig &cfg, const fs::path &out) {
  const SampleSet samples = fit_samples(cfg);
  if (!samples.has_responses())
    throw InvalidInput("grid search data needs a y column");
  const auto &t = cfg.experiment.tuning;
  std::vector<std::size_t> ks;
  for (std::size_t k : t.K_grid)
    if (k <= samples.size())
      ks.push_back(k);
  if (ks.empty())
    throw InvalidInput("no K grid value fits n=" + std::to_string(samples.size()));
  const Eigen::VectorXd truth = truth_values(cfg.experiment, samples);
  const auto result = grid_search(samples, ks, t.eps_grid, cfg.experiment.kernel, truth);
  io::write_grid(out / "grid.csv", result);

  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap << YAML::Key << "n" << YAML::Value << samples.size() << YAML::Key << "best_K"
    << YAML::Value << result.best_K << YAML::Key << "best_epsilon" << YAML::Value << result.best_epsilon
    << YAML::Key << "best_mse" << YAML::Value << result.best_mse << YAML::Key << "components" << YAML::Value
    << result.best_component_count << YAML::EndMap;
  io::write_text(out / "best.yaml", yaml_text(e));
}

void run_sweep_command(const AppConfig &cfg, const fs::path &out) {
  const auto report = run_sweep(cfg.experiment);
  io::write_records(out / "records.csv", report);
  io::write_summary(out / "summary.csv", report);

  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "truth" << YAML::Value << cfg.truth_name;
  e << YAML::Key << "fitted_slope" << YAML::Value << report.fitted_slope;
  e << YAML::Key << "slope_stderr" << YAML::Value << report.slope_stderr;
  e << YAML::Key << "theoretical_slope" << YAML::Value << report.theoretical_slope;
  e << YAML::Key << "failures" << YAML::Value << report.failures;
  e << YAML::Key << "per_n" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < report.n_values.size(); ++i) {
    e << YAML::BeginMap << YAML::Key << "n" << YAML::Value << report.n_values[i] << YAML::Key << "mean_mse"
      << YAML::Value << report.mean_mse_per_n[i] << YAML::Key << "disconnected_fraction" << YAML::Value
      << report.disconnected_fraction[i] << YAML::Key << "used_in_slope" << YAML::Value
      << static_cast<bool>(report.used_in_slope[i]) << YAML::EndMap;
  }
  e << YAML::EndSeq;
  if (!report.failure_messages.empty())
    e << YAML::Key << "failure_messages" << YAML::Value << report.failure_messages;
  e << YAML::EndMap;
  io::write_text(out / "report.yaml", yaml_text(e));

  if (cfg.curve.n > 0) {
    const auto &d = cfg.experiment.design;
    std::vector<double> grid(cfg.curve.points);
    const double step = (d.high - d.low) / static_cast<double>(cfg.curve.points - 1);
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid[i] = i + 1 == grid.size() ? d.high : d.low + step * static_cast<double>(i);
    io::write_curve(out / "curve.csv", mean_fit_curve(cfg.experiment, cfg.curve.n, grid));
  }
}

void run_seminorm(const AppConfig &cfg, const fs::path &out) {
  const auto zoo = cfg.zoo();
  const std::string name = cfg.seminorm.function.empty() ? cfg.truth_name : cfg.seminorm.function;
  const auto &fn = find_function(zoo, name);
  const auto result = continuum_seminorm(fn, cfg.seminorm.s, cfg.seminorm.quadrature);
  io::write_refinements(out / "seminorm.csv", result);

  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "function" << YAML::Value << name;
  e << YAML::Key << "s" << YAML::Value << result.s;
  e << YAML::Key << "converged" << YAML::Value << result.converged;
  e << YAML::Key << "divergent" << YAML::Value << result.divergent;
  e << YAML::Key << "squared" << YAML::Value << io::format_double(result.squared);
  e << YAML::Key << "seminorm" << YAML::Value << io::format_double(result.seminorm());
  e << YAML::Key << "estimated_error" << YAML::Value << io::format_double(result.estimated_error);
  e << YAML::Key << "quadrature_cells" << YAML::Value << result.quadrature_cells;
  e << YAML::EndMap;
  io::write_text(out / "seminorm.yaml", yaml_text(e));
}

void run_eigen(const AppConfig &cfg, const fs::path &out) {
  const auto &ex = cfg.experiment;
  const auto growth = eigenvalue_growth_diagnostic(ex, cfg.eigen.n, cfg.eigen.m);
  const SampleSet design = draw_design(ex, cfg.eigen.n, 0);
  const auto eig = eigensolve(laplacian(build_graph(design, growth.epsilon, ex.kernel)), cfg.eigen.m);
  io::write_eigensystem(out / "eigen.csv", eig);

  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "n" << YAML::Value << cfg.eigen.n;
  e << YAML::Key << "m" << YAML::Value << eig.count();
  e << YAML::Key << "epsilon" << YAML::Value << growth.epsilon;
  e << YAML::Key << "method" << YAML::Value << (eig.method == EigenMethod::dense ? "dense" : "iterative");
  e << YAML::Key << "max_residual" << YAML::Value << eig.max_residual;
  e << YAML::Key << "insufficient_range" << YAML::Value << growth.insufficient_range;
  e << YAML::Key << "exponent" << YAML::Value << io::format_double(growth.exponent);
  e << YAML::Key << "pre_cap_points" << YAML::Value << growth.pre_cap_points;
  e << YAML::Key << "post_cap_exponent" << YAML::Value << io::format_double(growth.post_cap_exponent);
  e << YAML::Key << "plateau" << YAML::Value << growth.plateau;
  e << YAML::Key << "cap_constant" << YAML::Value << growth.cap_constant;
  e << YAML::Key << "window_violations" << YAML::Value << growth.window_violations;
  e << YAML::EndMap;
  io::write_text(out / "growth.yaml", yaml_text(e));
}

void run_zoo(const AppConfig &cfg, const fs::path &out) {
  const auto zoo = cfg.zoo();
  io::write_text(out / "zoo.yaml", zoo_to_yaml(zoo));
  const std::size_t points = cfg.curve.points;
  for (const auto &fn : zoo) {
    std::ofstream csv(out / (fn.name() + ".csv"));
    if (!csv)
      throw IoError("cannot write " + (out / (fn.name() + ".csv")).string());
    csv << "x,value\n";
    const double step = (fn.upper() - fn.lower()) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
      const double x = i + 1 == points ? fn.upper() : fn.lower() + step * static_cast<double>(i);
      csv << io::format_double(x) << ',' << io::format_double(fn(x)) << '\n';
    }
    if (!csv)
      throw IoError("write failed: " + (out / (fn.name() + ".csv")).string());
  }
}

void report_error(const fs::path &out, std::ostream &err, const std::string &kind, int code,
                  const std::string &message, std::optional<double> worst_residual = std::nullopt) {
  nlohmann::json record = {{"status", "error"}, {"kind", kind}, {"exit_code", code}, {"message", message}};
  if (worst_residual)
    record["worst_residual"] = *worst_residual;
  err << record.dump() << '\n';
  if (out.empty())
    return;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec)
    return;
  std::ofstream file(out / "error.json");
  file << record.dump(2) << '\n';
}

fs::path default_output_dir() {
  if (const char *env = std::getenv(output_dir_env); env && *env)
    return env;
  return "pcrfle_out";
}

} // namespace

CliCommand parse_command_line(const std::vector<std::string> &args) {
  CLI::App app{"PCR-FLE regression experiments", "pcrfle"};
  CliCommand cmd;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("subcommand", cmd.subcommand, "fit | sweep | seminorm | eigen | gridsearch | zoo")->required();
  app.add_option("--config", cmd.config_path, "YAML configuration file");
  auto *out_opt = app.add_option("--out", out, "output directory");
  auto *seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  auto *threads_opt = app.add_option("--threads", threads, "worker threads (default: all cores)");
  app.add_option("--set", cmd.overrides, "key=value override, repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    throw;
  } catch (const CLI::ParseError &e) {
    throw InvalidInput(std::string("command line: ") + e.what());
  }
  if (std::find(subcommands.begin(), subcommands.end(), cmd.subcommand) == subcommands.end())
    throw InvalidInput("unknown subcommand '" + cmd.subcommand + "'");
  for (const auto &o : cmd.overrides)
    check_override(o);
  cmd.output_dir = out_opt->count() ? fs::path(out) : default_output_dir();
  if (seed_opt->count())
    cmd.seed = seed;
  if (threads_opt->count()) {
    if (threads < 1)
      throw InvalidInput("--threads must be >= 1");
    cmd.threads = threads;
  }
  return cmd;
}

int run(const CliCommand &cmd, std::ostream &err) {
  try {
    if (std::find(subcommands.begin(), subcommands.end(), cmd.subcommand) == subcommands.end())
      throw InvalidInput("unknown subcommand '" + cmd.subcommand + "'");
    for (const auto &o : cmd.overrides)
      check_override(o);
    const int threads = cmd.threads.value_or(omp_get_num_procs());
    omp_set_num_threads(threads);
    kernels::omp::set_thread_count(threads);

    // zoo works without a config; the rest need at least a truth.
    AppConfig cfg;
    if (cmd.subcommand != "zoo" || !cmd.config_path.empty() || !cmd.overrides.empty())
      cfg = load_config(cmd);

    std::error_code ec;
    fs::create_directories(cmd.output_dir, ec);
    if (ec)
      throw IoError("cannot create output directory " + cmd.output_dir.string() + ": " + ec.message());
    fs::remove(cmd.output_dir / "error.json", ec);
    io::write_text(cmd.output_dir / "effective_config.yaml", to_yaml(cfg));

    const auto &sub = cmd.subcommand;
    if (sub == "fit")
      run_fit(cfg, cmd.output_dir);
    else if (sub == "gridsearch")
      run_gridsearch(cfg, cmd.output_dir);
    else if (sub == "sweep")
      run_sweep_command(cfg, cmd.output_dir);
    else if (sub == "seminorm")
      run_seminorm(cfg, cmd.output_dir);
    else if (sub == "eigen")
      run_eigen(cfg, cmd.output_dir);
    else
      run_zoo(cfg, cmd.output_dir);
    return 0;
  } catch (const SolverError &e) {
    report_error(cmd.output_dir, err, to_string(e.kind()), exit_code(e.kind()), e.what(), e.worst_residual());
    return exit_code(e.kind());
  } catch (const Error &e) {
    report_error(cmd.output_dir, err, to_string(e.kind()), exit_code(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const YAML::Exception &e) {
    report_error(cmd.output_dir, err, "io", exit_code(ErrorKind::io), e.what());
    return exit_code(ErrorKind::io);
  } catch (const std::exception &e) {
    report_error(cmd.output_dir, err, "internal", 1, e.what());
    return 1;
  }
}

int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  CliCommand cmd;
  try {
    cmd = parse_command_line(args);
  } catch (const CLI::CallForHelp &) {
    CLI::App help{"PCR-FLE regression experiments", "pcrfle"};
    out << "usage: pcrfle {fit|sweep|seminorm|eigen|gridsearch|zoo} [--config PATH] [--out DIR]\n"
           "              [--seed U64] [--threads N] [--set key=value ...]\n"
           "default output directory: $"
        << output_dir_env << " or ./pcrfle_out\n";
    return 0;
  } catch (const Error &e) {
    report_error(default_output_dir(), err, to_string(e.kind()), exit_code(e.kind()), e.what());
    return exit_code(e.kind());
  }
  return run(cmd, err);
}

} // namespace pcrfle
