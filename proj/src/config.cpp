#include "pcrfle/config.hpp"

#include "pcrfle/csv_io.hpp"
#include "pcrfle/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <set>
#include <sstream>

namespace pcrfle {

std::string to_string(TuningMode mode) {
  switch (mode) {
  case TuningMode::grid: return "grid";
  case TuningMode::rule: return "rule";
  case TuningMode::fixed: return "fixed";
  }
  return "unknown";
}

std::vector<TestFunction> AppConfig::zoo() const {
  std::vector<TestFunction> all;
  for (auto &f : builtin_zoo()) {
    const bool shadowed = std::any_of(extra_functions.begin(), extra_functions.end(),
                                      [&](const TestFunction &e) { return e.name() == f.name(); });
    if (!shadowed)
      all.push_back(f);
  }
  all.insert(all.end(), extra_functions.begin(), extra_functions.end());
  return all;
}

bool AppConfig::operator==(const AppConfig &o) const {
  const auto &a = experiment;
  const auto &b = o.experiment;
  const auto &ta = a.tuning;
  const auto &tb = b.tuning;
  return truth_name == o.truth_name && extra_functions == o.extra_functions && a.truth == b.truth &&
         a.design == b.design && a.noise_sd == b.noise_sd && a.n_grid == b.n_grid &&
         a.repetitions == b.repetitions && a.kernel == b.kernel && a.seed == b.seed && ta.mode == tb.mode &&
         ta.rule.s == tb.rule.s && ta.rule.M == tb.rule.M && ta.rule.dim == tb.rule.dim &&
         ta.rule.c0 == tb.rule.c0 && ta.rule.C0 == tb.rule.C0 && ta.K_grid == tb.K_grid &&
         ta.eps_grid == tb.eps_grid && ta.K == tb.K && ta.epsilon == tb.epsilon && fit == o.fit &&
         eigen == o.eigen && seminorm == o.seminorm && curve == o.curve;
}

namespace {

int line_of(const YAML::Node &node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node &node, const std::string &key, const std::string &what) {
  const int line = line_of(node);
  throw ConfigError((line > 0 ? "line " + std::to_string(line) + ": " : std::string("override: ")) + key +
                    ": " + what);
}

std::string join(const std::string &prefix, const std::string &key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_map(const YAML::Node &node, const std::string &path) {
  if (!node.IsMap())
    fail(node, path.empty() ? "<root>" : path, "expected a mapping");
}

void check_keys(const YAML::Node &node, const std::string &path, std::initializer_list<const char *> allowed) {
  for (const auto &kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
      fail(kv.first, join(path, key), "unknown key");
  }
}

template <class T> T scalar(const YAML::Node &node, const std::string &path) {
  if (!node.IsScalar())
    fail(node, path, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(node, path, "cannot convert '" + node.Scalar() + "'");
  }
}

template <class T> void read(const YAML::Node &map, const std::string &prefix, const char *key, T &target) {
  if (const auto node = map[key])
    target = scalar<T>(node, join(prefix, key));
}

template <class T>
void read_list(const YAML::Node &map, const std::string &prefix, const char *key, std::vector<T> &target) {
  const auto node = map[key];
  if (!node)
    return;
  const auto path = join(prefix, key);
  if (!node.IsSequence())
    fail(node, path, "expected a list");
  target.clear();
  for (std::size_t i = 0; i < node.size(); ++i)
    target.push_back(scalar<T>(node[i], path + "[" + std::to_string(i) + "]"));
}

std::size_t read_size(const YAML::Node &node, const std::string &path) {
  const auto v = scalar<long long>(node, path);
  if (v < 0)
    fail(node, path, "must be non-negative");
  return static_cast<std::size_t>(v);
}

TestFunction parse_function(const YAML::Node &node, const std::string &path) {
  require_map(node, path);
  check_keys(node, path,
             {"name", "family", "domain", "alpha", "breakpoints", "values", "coefficients", "locations",
              "heights", "widths"});
  if (!node["name"])
    fail(node, path + ".name", "missing required key");
  if (!node["family"])
    fail(node, path + ".family", "missing required key");
  if (!node["domain"] || !node["domain"].IsSequence() || node["domain"].size() != 2)
    fail(node, path + ".domain", "expected [lower, upper]");
  const auto name = scalar<std::string>(node["name"], path + ".name");
  const auto family = scalar<std::string>(node["family"], path + ".family");
  const double lo = scalar<double>(node["domain"][0], path + ".domain");
  const double hi = scalar<double>(node["domain"][1], path + ".domain");

  try {
    if (family == "power") {
      PowerFamily f;
      read(node, path, "alpha", f.alpha);
      return TestFunction(name, f, lo, hi);
    }
    if (family == "piecewise_constant") {
      PiecewiseConstantFamily f;
      read_list(node, path, "breakpoints", f.breakpoints);
      read_list(node, path, "values", f.values);
      return TestFunction(name, f, lo, hi);
    }
    if (family == "piecewise_polynomial") {
      PiecewisePolynomialFamily f;
      read_list(node, path, "breakpoints", f.breakpoints);
      const auto coef = node["coefficients"];
      if (!coef || !coef.IsSequence())
        fail(node, path + ".coefficients", "expected a list of coefficient lists");
      for (std::size_t i = 0; i < coef.size(); ++i) {
        if (!coef[i].IsSequence())
          fail(coef[i], path + ".coefficients", "expected a list of coefficient lists");
        std::vector<double> c;
        for (std::size_t k = 0; k < coef[i].size(); ++k)
          c.push_back(scalar<double>(coef[i][k], path + ".coefficients"));
        f.coefficients.push_back(std::move(c));
      }
      return TestFunction(name, f, lo, hi);
    }
    if (family == "bumps") {
      BumpsFamily f;
      read_list(node, path, "locations", f.locations);
      read_list(node, path, "heights", f.heights);
      read_list(node, path, "widths", f.widths);
      return TestFunction(name, f, lo, hi);
    }
  } catch (const ConfigError &) {
    throw;
  } catch (const InvalidInput &e) {
    fail(node, path, e.what());
  }
  fail(node["family"], path + ".family",
       "unknown family '" + family + "' (expected power, piecewise_constant, piecewise_polynomial, bumps)");
}

void set_path(YAML::Node node, const std::vector<std::string> &segments, std::size_t i, const YAML::Node &value) {
  const auto &seg = segments[i];
  if (i + 1 == segments.size()) {
    node[seg] = value;
    return;
  }
  if (!node[seg] || !node[seg].IsMap())
    node[seg] = YAML::Node(YAML::NodeType::Map);
  set_path(node[seg], segments, i + 1, value);
}

void apply_override(YAML::Node &root, const std::string &spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("malformed override '" + spec + "' (expected key=value)");
  const std::string key = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  std::vector<std::string> segments;
  std::stringstream ss(key);
  std::string seg;
  while (std::getline(ss, seg, '.')) {
    if (seg.empty())
      throw ConfigError("malformed override key '" + key + "'");
    segments.push_back(seg);
  }
  if (key.back() == '.')
    throw ConfigError("malformed override key '" + key + "'");
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception &e) {
    throw ConfigError("malformed override value for '" + key + "': " + e.what());
  }
  if (!root.IsMap())
    root = YAML::Node(YAML::NodeType::Map);
  set_path(root, segments, 0, parsed);
}

AppConfig build(const YAML::Node &root) {
  AppConfig cfg;
  require_map(root, "");
  check_keys(root, "",
             {"truth", "functions", "design", "noise_sd", "n_grid", "repetitions", "seed", "kernel", "tuning",
              "fit", "eigen", "seminorm", "curve"});
  if (!root["truth"])
    fail(root, "truth", "missing required key");
  cfg.truth_name = scalar<std::string>(root["truth"], "truth");

  if (const auto fns = root["functions"]) {
    if (!fns.IsSequence())
      fail(fns, "functions", "expected a list");
    for (std::size_t i = 0; i < fns.size(); ++i)
      cfg.extra_functions.push_back(parse_function(fns[i], "functions[" + std::to_string(i) + "]"));
  }
  const auto zoo = cfg.zoo();
  try {
    cfg.experiment.truth = find_function(zoo, cfg.truth_name);
  } catch (const InvalidInput &e) {
    fail(root["truth"], "truth", e.what());
  }

  auto &ex = cfg.experiment;
  if (const auto d = root["design"]) {
    require_map(d, "design");
    check_keys(d, "design", {"low", "high", "dim"});
    read(d, "design", "low", ex.design.low);
    read(d, "design", "high", ex.design.high);
    if (d["dim"])
      ex.design.dim = read_size(d["dim"], "design.dim");
    if (!(ex.design.low < ex.design.high))
      fail(d, "design", "low must be below high");
    if (ex.design.dim < 1)
      fail(d["dim"], "design.dim", "must be >= 1");
  }
  read(root, "", "noise_sd", ex.noise_sd);
  if (root["noise_sd"] && !(ex.noise_sd >= 0.0))
    fail(root["noise_sd"], "noise_sd", "must be non-negative");
  if (const auto ng = root["n_grid"]) {
    if (!ng.IsSequence())
      fail(ng, "n_grid", "expected a list");
    ex.n_grid.clear();
    for (std::size_t i = 0; i < ng.size(); ++i) {
      const auto n = read_size(ng[i], "n_grid");
      if (n < 2)
        fail(ng[i], "n_grid", "entries must be >= 2");
      if (!ex.n_grid.empty() && n <= ex.n_grid.back())
        fail(ng[i], "n_grid", "must be strictly increasing");
      ex.n_grid.push_back(n);
    }
    if (ex.n_grid.empty())
      fail(ng, "n_grid", "must not be empty");
  }
  if (const auto r = root["repetitions"]) {
    ex.repetitions = read_size(r, "repetitions");
    if (ex.repetitions < 1)
      fail(r, "repetitions", "must be >= 1");
  }
  read(root, "", "seed", ex.seed);

  if (const auto k = root["kernel"]) {
    require_map(k, "kernel");
    check_keys(k, "kernel", {"family", "h"});
    std::string family = ex.kernel.name();
    double h = ex.kernel.shape();
    read(k, "kernel", "family", family);
    read(k, "kernel", "h", h);
    try {
      ex.kernel = KernelSpec::from_name(family, h);
    } catch (const InvalidInput &e) {
      fail(k, "kernel", e.what());
    }
  }

  auto &t = ex.tuning;
  t.rule.dim = ex.design.dim;
  if (const auto tn = root["tuning"]) {
    require_map(tn, "tuning");
    check_keys(tn, "tuning", {"mode", "s", "M", "c0", "C0", "K_grid", "eps_grid", "K", "epsilon"});
    if (const auto m = tn["mode"]) {
      const auto mode = scalar<std::string>(m, "tuning.mode");
      if (mode == "grid")
        t.mode = TuningMode::grid;
      else if (mode == "rule")
        t.mode = TuningMode::rule;
      else if (mode == "fixed")
        t.mode = TuningMode::fixed;
      else
        fail(m, "tuning.mode", "expected grid, rule or fixed");
    }
    read(tn, "tuning", "s", t.rule.s);
    if (tn["s"] && !(t.rule.s > 0.0 && t.rule.s < 1.0))
      fail(tn["s"], "tuning.s", "s must lie in (0,1)");
    read(tn, "tuning", "M", t.rule.M);
    if (tn["M"] && !(t.rule.M > 0.0))
      fail(tn["M"], "tuning.M", "M must be positive");
    read(tn, "tuning", "c0", t.rule.c0);
    if (tn["c0"] && !(t.rule.c0 > 0.0))
      fail(tn["c0"], "tuning.c0", "c0 must be positive");
    read(tn, "tuning", "C0", t.rule.C0);
    if (tn["C0"] && !(t.rule.C0 > 0.0))
      fail(tn["C0"], "tuning.C0", "C0 must be positive");
    if (const auto kg = tn["K_grid"]) {
      t.K_grid.clear();
      if (kg.IsMap()) {
        check_keys(kg, "tuning.K_grid", {"from", "to"});
        if (!kg["from"] || !kg["to"])
          fail(kg, "tuning.K_grid", "range needs from and to");
        const auto from = read_size(kg["from"], "tuning.K_grid.from");
        const auto to = read_size(kg["to"], "tuning.K_grid.to");
        for (std::size_t k = from; k <= to; ++k)
          t.K_grid.push_back(k);
      } else if (kg.IsSequence()) {
        for (std::size_t i = 0; i < kg.size(); ++i)
          t.K_grid.push_back(read_size(kg[i], "tuning.K_grid"));
      } else {
        fail(kg, "tuning.K_grid", "expected a list or {from, to}");
      }
      if (t.K_grid.empty())
        fail(kg, "tuning.K_grid", "must not be empty");
    }
    read_list(tn, "tuning", "eps_grid", t.eps_grid);
    if (tn["eps_grid"]) {
      if (t.eps_grid.empty())
        fail(tn["eps_grid"], "tuning.eps_grid", "must not be empty");
      for (double e : t.eps_grid)
        if (!(e > 0.0))
          fail(tn["eps_grid"], "tuning.eps_grid", "entries must be positive");
    }
    if (const auto kn = tn["K"]) {
      if (kn.IsScalar() && kn.Scalar() == "n")
        t.K = K_all;
      else
        t.K = read_size(kn, "tuning.K");
    }
    read(tn, "tuning", "epsilon", t.epsilon);
    if (tn["epsilon"] && !(t.epsilon > 0.0))
      fail(tn["epsilon"], "tuning.epsilon", "epsilon must be positive");
  }

  if (const auto f = root["fit"]) {
    require_map(f, "fit");
    check_keys(f, "fit", {"data", "n", "rep"});
    read(f, "fit", "data", cfg.fit.data);
    if (f["n"])
      cfg.fit.n = read_size(f["n"], "fit.n");
    if (f["rep"])
      cfg.fit.rep = read_size(f["rep"], "fit.rep");
    if (cfg.fit.n < 2)
      fail(f, "fit.n", "must be >= 2");
  }
  if (const auto e = root["eigen"]) {
    require_map(e, "eigen");
    check_keys(e, "eigen", {"n", "m"});
    if (e["n"])
      cfg.eigen.n = read_size(e["n"], "eigen.n");
    if (e["m"])
      cfg.eigen.m = read_size(e["m"], "eigen.m");
    if (cfg.eigen.n < 2)
      fail(e, "eigen.n", "must be >= 2");
    if (cfg.eigen.m < 1 || cfg.eigen.m > cfg.eigen.n)
      fail(e, "eigen.m", "must lie in [1, eigen.n]");
  }
  if (const auto s = root["seminorm"]) {
    require_map(s, "seminorm");
    check_keys(s, "seminorm", {"function", "s", "min_level", "max_level", "tolerance", "divergence_run"});
    read(s, "seminorm", "function", cfg.seminorm.function);
    read(s, "seminorm", "s", cfg.seminorm.s);
    if (s["s"] && !(cfg.seminorm.s > 0.0 && cfg.seminorm.s < 1.0))
      fail(s["s"], "seminorm.s", "s must lie in (0,1)");
    read(s, "seminorm", "min_level", cfg.seminorm.quadrature.min_level);
    read(s, "seminorm", "max_level", cfg.seminorm.quadrature.max_level);
    read(s, "seminorm", "tolerance", cfg.seminorm.quadrature.relative_tolerance);
    read(s, "seminorm", "divergence_run", cfg.seminorm.quadrature.divergence_run);
    const auto &q = cfg.seminorm.quadrature;
    if (q.min_level < 1 || q.max_level > 16 || q.max_level < q.min_level + 2)
      fail(s, "seminorm", "levels need 1 <= min_level and min_level + 2 <= max_level <= 16");
    if (!cfg.seminorm.function.empty()) {
      try {
        find_function(zoo, cfg.seminorm.function);
      } catch (const InvalidInput &e) {
        fail(s["function"], "seminorm.function", e.what());
      }
    }
  }
  if (const auto c = root["curve"]) {
    require_map(c, "curve");
    check_keys(c, "curve", {"n", "points"});
    if (c["n"])
      cfg.curve.n = read_size(c["n"], "curve.n");
    if (c["points"])
      cfg.curve.points = read_size(c["points"], "curve.points");
    if (cfg.curve.points < 2)
      fail(c, "curve.points", "must be >= 2");
  }

  try {
    ex.validate();
  } catch (const InvalidInput &e) {
    fail(root, "<config>", e.what());
  }
  return cfg;
}

void emit_function(YAML::Emitter &out, const TestFunction &f) {
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << f.name();
  out << YAML::Key << "family" << YAML::Value << f.family_name();
  out << YAML::Key << "domain" << YAML::Value << YAML::Flow << std::vector<double>{f.lower(), f.upper()};
  std::visit(
      [&](const auto &fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          out << YAML::Key << "alpha" << YAML::Value << fam.alpha;
        } else if constexpr (std::is_same_v<T, PiecewiseConstantFamily>) {
          out << YAML::Key << "breakpoints" << YAML::Value << YAML::Flow << fam.breakpoints;
          out << YAML::Key << "values" << YAML::Value << YAML::Flow << fam.values;
        } else if constexpr (std::is_same_v<T, PiecewisePolynomialFamily>) {
          out << YAML::Key << "breakpoints" << YAML::Value << YAML::Flow << fam.breakpoints;
          out << YAML::Key << "coefficients" << YAML::Value << YAML::Flow << YAML::BeginSeq;
          for (const auto &c : fam.coefficients)
            out << YAML::Flow << c;
          out << YAML::EndSeq;
        } else {
          out << YAML::Key << "locations" << YAML::Value << YAML::Flow << fam.locations;
          out << YAML::Key << "heights" << YAML::Value << YAML::Flow << fam.heights;
          out << YAML::Key << "widths" << YAML::Value << YAML::Flow << fam.widths;
        }
      },
      f.family());
  out << YAML::EndMap;
}

YAML::Node load(const std::string &text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (root.IsNull())
      root = YAML::Node(YAML::NodeType::Map);
    return root;
  } catch (const YAML::ParserException &e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": syntax error: " + e.msg);
  }
}

} // namespace

AppConfig parse_config_text(const std::string &text, const std::vector<std::string> &overrides) {
  YAML::Node root = load(text);
  for (const auto &o : overrides)
    apply_override(root, o);
  return build(root);
}

AppConfig parse_config(const std::filesystem::path &path, const std::vector<std::string> &overrides) {
  return parse_config_text(io::read_text(path), overrides);
}

std::string to_yaml(const AppConfig &cfg) {
  const auto &ex = cfg.experiment;
  const auto &t = ex.tuning;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "truth" << YAML::Value << cfg.truth_name;
  if (!cfg.extra_functions.empty()) {
    out << YAML::Key << "functions" << YAML::Value << YAML::BeginSeq;
    for (const auto &f : cfg.extra_functions)
      emit_function(out, f);
    out << YAML::EndSeq;
  }
  out << YAML::Key << "design" << YAML::Value << YAML::BeginMap << YAML::Key << "low" << YAML::Value
      << ex.design.low << YAML::Key << "high" << YAML::Value << ex.design.high << YAML::Key << "dim"
      << YAML::Value << ex.design.dim << YAML::EndMap;
  out << YAML::Key << "noise_sd" << YAML::Value << ex.noise_sd;
  out << YAML::Key << "n_grid" << YAML::Value << YAML::Flow << ex.n_grid;
  out << YAML::Key << "repetitions" << YAML::Value << ex.repetitions;
  out << YAML::Key << "seed" << YAML::Value << ex.seed;
  out << YAML::Key << "kernel" << YAML::Value << YAML::BeginMap << YAML::Key << "family" << YAML::Value
      << ex.kernel.name() << YAML::Key << "h" << YAML::Value << ex.kernel.shape() << YAML::EndMap;
  out << YAML::Key << "tuning" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(t.mode);
  out << YAML::Key << "s" << YAML::Value << t.rule.s;
  out << YAML::Key << "M" << YAML::Value << t.rule.M;
  out << YAML::Key << "c0" << YAML::Value << t.rule.c0;
  out << YAML::Key << "C0" << YAML::Value << t.rule.C0;
  out << YAML::Key << "K_grid" << YAML::Value << YAML::Flow << t.K_grid;
  out << YAML::Key << "eps_grid" << YAML::Value << YAML::Flow << t.eps_grid;
  if (t.K == K_all)
    out << YAML::Key << "K" << YAML::Value << "n";
  else
    out << YAML::Key << "K" << YAML::Value << t.K;
  out << YAML::Key << "epsilon" << YAML::Value << t.epsilon;
  out << YAML::EndMap;
  out << YAML::Key << "fit" << YAML::Value << YAML::BeginMap << YAML::Key << "data" << YAML::Value
      << YAML::DoubleQuoted << cfg.fit.data << YAML::Key << "n" << YAML::Value << cfg.fit.n << YAML::Key << "rep"
      << YAML::Value << cfg.fit.rep << YAML::EndMap;
  out << YAML::Key << "eigen" << YAML::Value << YAML::BeginMap << YAML::Key << "n" << YAML::Value << cfg.eigen.n
      << YAML::Key << "m" << YAML::Value << cfg.eigen.m << YAML::EndMap;
  const auto &q = cfg.seminorm.quadrature;
  out << YAML::Key << "seminorm" << YAML::Value << YAML::BeginMap << YAML::Key << "function" << YAML::Value
      << YAML::DoubleQuoted << cfg.seminorm.function << YAML::Key << "s" << YAML::Value << cfg.seminorm.s
      << YAML::Key << "min_level" << YAML::Value << q.min_level << YAML::Key << "max_level" << YAML::Value
      << q.max_level << YAML::Key << "tolerance" << YAML::Value << q.relative_tolerance << YAML::Key
      << "divergence_run" << YAML::Value << q.divergence_run << YAML::EndMap;
  out << YAML::Key << "curve" << YAML::Value << YAML::BeginMap << YAML::Key << "n" << YAML::Value << cfg.curve.n
      << YAML::Key << "points" << YAML::Value << cfg.curve.points << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string zoo_to_yaml(const std::vector<TestFunction> &functions) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap << YAML::Key << "functions" << YAML::Value << YAML::BeginSeq;
  for (const auto &f : functions)
    emit_function(out, f);
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<TestFunction> zoo_from_yaml(const std::string &text) {
  const YAML::Node root = load(text);
  require_map(root, "");
  check_keys(root, "", {"functions"});
  const auto fns = root["functions"];
  if (!fns || !fns.IsSequence())
    fail(root, "functions", "expected a list");
  std::vector<TestFunction> out;
  for (std::size_t i = 0; i < fns.size(); ++i)
    out.push_back(parse_function(fns[i], "functions[" + std::to_string(i) + "]"));
  return out;
}

} // namespace pcrfle
